use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::poly::Poly;
use super::quad::QuadElem;
use crate::error::{Error, Result};

/// A rational function in σ over Q(√−3), kept in canonical form:
/// coprime numerator and denominator, denominator monic.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFunc::zero());
        }
        let g = Poly::gcd(&num, &den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g)?, den.exact_div(&g)?)
        };
        if !den.is_monic() {
            let inv = den.leading().expect("nonzero").inv()?;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Ok(RatFunc { num, den })
    }

    /// From a coprime pair, scaling the denominator to be monic.
    fn monic_den(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatFunc::zero();
        }
        if den.is_monic() {
            return RatFunc { num, den };
        }
        let inv = den.leading().expect("nonzero").inv().expect("nonzero");
        RatFunc { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn zero() -> Self {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        RatFunc::constant(QuadElem::one())
    }

    pub fn constant(a: QuadElem) -> Self {
        RatFunc { num: Poly::constant(a), den: Poly::one() }
    }

    pub fn from_int(n: i64) -> Self {
        RatFunc::constant(QuadElem::from_int(n))
    }

    pub fn var() -> Self {
        RatFunc::from(Poly::var())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<QuadElem> {
        (self.den.is_one() && self.num.is_constant()).then(|| self.num.coeff(0))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, o: &RatFunc) -> Result<Self> {
        Ok(self * &o.inv()?)
    }

    pub fn scale(&self, a: &QuadElem) -> Self {
        if a.is_zero() {
            return RatFunc::zero();
        }
        RatFunc { num: self.num.scale(a), den: self.den.clone() }
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let e = e.unsigned_abs();
        Ok(RatFunc { num: base.num.pow(e), den: base.den.pow(e) })
    }

    pub fn eval(&self, x: &QuadElem) -> Result<QuadElem> {
        self.num.eval(x).checked_div(&self.den.eval(x))
    }

    /// deg(num) − deg(den); the order of the pole at ∞.
    pub fn degree(&self) -> i64 {
        self.num.deg() as i64 - self.den.deg() as i64
    }

    /// The change of chart f(σ) ↦ s^w·f(1/s).
    pub fn reciprocal_chart(&self, w: i64) -> Self {
        if self.is_zero() {
            return RatFunc::zero();
        }
        let dn = self.num.deg();
        let dd = self.den.deg();
        let num = self.num.reversed(dn);
        let den = self.den.reversed(dd);
        // s^w · s^{dd - dn}
        let e = w + dd as i64 - dn as i64;
        let (num, den) = if e >= 0 {
            (num.shift(e as usize), den)
        } else {
            (num, den.shift((-e) as usize))
        };
        // Reversal keeps a coprime pair coprime, and neither side gains a factor s.
        RatFunc::monic_den(num, den)
    }

    /// Coefficient-wise Galois conjugation √−3 ↦ −√−3.
    pub fn conj(&self) -> Self {
        RatFunc { num: self.num.conj(), den: self.den.conj() }
    }
}

impl From<Poly> for RatFunc {
    fn from(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }
}

impl From<i64> for RatFunc {
    fn from(n: i64) -> Self {
        RatFunc::from_int(n)
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, o: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return RatFunc::new(&self.num + &o.num, self.den.clone()).expect("nonzero");
        }
        // a/b + c/d with g = gcd(b, d): only g can share factors with the new numerator.
        let g = Poly::gcd(&self.den, &o.den);
        if g.is_one() {
            let num = &self.num * &o.den + &o.num * &self.den;
            return RatFunc::monic_den(num, &self.den * &o.den);
        }
        let b1 = self.den.exact_div(&g).expect("divisor");
        let d1 = o.den.exact_div(&g).expect("divisor");
        let t = &self.num * &d1 + &o.num * &b1;
        if t.is_zero() {
            return RatFunc::zero();
        }
        let g2 = Poly::gcd(&t, &g);
        let num = t.exact_div(&g2).expect("divisor");
        let den = &(&b1 * &d1) * &g.exact_div(&g2).expect("divisor");
        RatFunc::monic_den(num, den)
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, o: &RatFunc) -> RatFunc {
        self + &(-o)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        // Cross-cancel first to keep the gcds small.
        let g1 = Poly::gcd(&self.num, &o.den);
        let g2 = Poly::gcd(&o.num, &self.den);
        let n1 = self.num.exact_div(&g1).expect("divisor");
        let d2 = o.den.exact_div(&g1).expect("divisor");
        let n2 = o.num.exact_div(&g2).expect("divisor");
        let d1 = self.den.exact_div(&g2).expect("divisor");
        RatFunc::monic_den(&n1 * &n2, &d1 * &d2)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RatFunc {
            type Output = RatFunc;
            fn $m(self, o: RatFunc) -> RatFunc {
                (&self).$m(&o)
            }
        }
        impl $tr<&RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $m(self, o: &RatFunc) -> RatFunc {
                (&self).$m(o)
            }
        }
        impl $tr<RatFunc> for &RatFunc {
            type Output = RatFunc;
            fn $m(self, o: RatFunc) -> RatFunc {
                self.$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "[{}] / [{}]", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    #[test]
    fn canonical_form() {
        let f = RatFunc::new(p(&[-2, 2]) * p(&[3, 1]), p(&[6, 2]) * p(&[5, 1])).unwrap();
        assert_eq!(f.num(), &p(&[-1, 1]));
        assert_eq!(f.den(), &p(&[5, 1]));
        assert!(RatFunc::new(p(&[1]), Poly::zero()).is_err());
        assert_eq!(RatFunc::new(Poly::zero(), p(&[7, 3])).unwrap(), RatFunc::zero());
    }

    #[test]
    fn arithmetic() {
        let x = RatFunc::var();
        let one = RatFunc::one();
        let f = (&x + &one).inv().unwrap();
        let g = (&x - &one).inv().unwrap();
        let h = &f + &g;
        let want = RatFunc::new(p(&[0, 2]), p(&[-1, 0, 1])).unwrap();
        assert_eq!(h, want);
        assert_eq!(&h * &h.inv().unwrap(), one);
        assert_eq!(&h - &h, RatFunc::zero());
        assert_eq!(h.pow(-2).unwrap(), h.pow(2).unwrap().inv().unwrap());
    }

    #[test]
    fn chart_change() {
        // x(σ) = σ² + 1, weight 4: s⁴(1/s² + 1) = s² + s⁴.
        let f = RatFunc::from(p(&[1, 0, 1]));
        assert_eq!(f.reciprocal_chart(4), RatFunc::from(p(&[0, 0, 1, 0, 1])));
        let g = RatFunc::new(p(&[1]), p(&[0, 0, 0, 1])).unwrap();
        assert_eq!(g.reciprocal_chart(0), RatFunc::from(p(&[0, 0, 0, 1])));
        assert_eq!(g.reciprocal_chart(2).reciprocal_chart(2), g);
    }
}
