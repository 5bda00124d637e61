use astro_float::BigFloat;

use super::bigreal::{bigfloat_to_f64, with_consts, BigReal, RM};

/// A complex number with astro-float parts at a fixed precision.
#[derive(Clone, Debug)]
pub struct BigComplex {
    pub re: BigFloat,
    pub im: BigFloat,
    pub prec: usize,
}

impl BigComplex {
    pub fn new(re: BigFloat, im: BigFloat, prec: usize) -> Self {
        BigComplex { re, im, prec }
    }

    pub fn from_f64(re: f64, im: f64, prec: usize) -> Self {
        BigComplex::new(BigFloat::from_f64(re, prec), BigFloat::from_f64(im, prec), prec)
    }

    pub fn from_parts(re: &BigReal, im: &BigReal) -> Self {
        let p = re.prec().min(im.prec());
        BigComplex::new(re.value().clone(), im.value().clone(), p)
    }

    pub fn one(prec: usize) -> Self {
        BigComplex::from_f64(1.0, 0.0, prec)
    }

    pub fn with_prec(&self, prec: usize) -> Self {
        let mut re = self.re.clone();
        let mut im = self.im.clone();
        // Widening never loses information; narrowing rounds.
        let _ = re.set_precision(prec, RM);
        let _ = im.set_precision(prec, RM);
        BigComplex::new(re, im, prec)
    }

    pub fn re_f64(&self) -> f64 {
        bigfloat_to_f64(&self.re)
    }

    pub fn im_f64(&self) -> f64 {
        bigfloat_to_f64(&self.im)
    }

    pub fn re_big(&self) -> BigReal {
        BigReal::from_bigfloat(self.re.clone(), self.prec, 0.0)
    }

    pub fn im_big(&self) -> BigReal {
        BigReal::from_bigfloat(self.im.clone(), self.prec, 0.0)
    }

    pub fn add(&self, o: &Self) -> Self {
        let p = self.prec;
        BigComplex::new(self.re.add(&o.re, p, RM), self.im.add(&o.im, p, RM), p)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let p = self.prec;
        BigComplex::new(self.re.sub(&o.re, p, RM), self.im.sub(&o.im, p, RM), p)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.prec;
        let re = self.re.mul(&o.re, p, RM).sub(&self.im.mul(&o.im, p, RM), p, RM);
        let im = self.re.mul(&o.im, p, RM).add(&self.im.mul(&o.re, p, RM), p, RM);
        BigComplex::new(re, im, p)
    }

    pub fn scale(&self, s: &BigFloat) -> Self {
        let p = self.prec;
        BigComplex::new(self.re.mul(s, p, RM), self.im.mul(s, p, RM), p)
    }

    pub fn norm_sqr(&self) -> BigFloat {
        let p = self.prec;
        self.re.mul(&self.re, p, RM).add(&self.im.mul(&self.im, p, RM), p, RM)
    }

    pub fn abs_f64(&self) -> f64 {
        bigfloat_to_f64(&self.norm_sqr()).sqrt()
    }

    pub fn inv(&self) -> Self {
        let p = self.prec;
        let n = self.norm_sqr();
        BigComplex::new(self.re.div(&n, p, RM), -self.im.clone().div(&n, p, RM), p)
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = BigComplex::one(self.prec);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// e^z.
    pub fn exp(&self) -> Self {
        let p = self.prec;
        with_consts(|cc| {
            let r = self.re.exp(p, RM, cc);
            let c = self.im.cos(p, RM, cc);
            let s = self.im.sin(p, RM, cc);
            BigComplex::new(r.mul(&c, p, RM), r.mul(&s, p, RM), p)
        })
    }

    /// Multiplication by i.
    pub fn mul_i(&self) -> Self {
        BigComplex::new(-self.im.clone(), self.re.clone(), self.prec)
    }

    /// Largest absolute difference of the real and imaginary parts.
    pub fn dist_f64(&self, o: &Self) -> f64 {
        let d = self.sub(o);
        d.re_f64().abs().max(d.im_f64().abs())
    }
}
