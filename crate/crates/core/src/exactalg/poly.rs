use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::quad::QuadElem;
use crate::error::{Error, Result};

/// Dense univariate polynomial over Q(√−3), lowest degree first.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    c: Vec<QuadElem>,
}

impl Poly {
    pub fn new(mut c: Vec<QuadElem>) -> Self {
        while c.last().is_some_and(QuadElem::is_zero) {
            c.pop();
        }
        Poly { c }
    }

    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(QuadElem::one())
    }

    pub fn constant(a: QuadElem) -> Self {
        Poly::new(vec![a])
    }

    /// The variable σ.
    pub fn var() -> Self {
        Poly::monomial(QuadElem::one(), 1)
    }

    pub fn monomial(a: QuadElem, n: usize) -> Self {
        let mut c = vec![QuadElem::zero(); n + 1];
        c[n] = a;
        Poly::new(c)
    }

    /// Integer coefficients, lowest degree first.
    pub fn from_ints(c: &[i64]) -> Self {
        Poly::new(c.iter().map(|&n| QuadElem::from_int(n)).collect())
    }

    /// The linear polynomial σ − r.
    pub fn linear(root: &QuadElem) -> Self {
        Poly::new(vec![-root, QuadElem::one()])
    }

    pub fn coeffs(&self) -> &[QuadElem] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> QuadElem {
        self.c.get(i).cloned().unwrap_or_else(QuadElem::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree with the zero polynomial counted as 0.
    pub fn deg(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Option<&QuadElem> {
        self.c.last()
    }

    pub fn eval(&self, x: &QuadElem) -> QuadElem {
        let mut acc = QuadElem::zero();
        for a in self.c.iter().rev() {
            acc = &(&acc * x) + a;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * &QuadElem::from_int(i as i64))
                .collect(),
        )
    }

    pub fn scale(&self, a: &QuadElem) -> Poly {
        Poly::new(self.c.iter().map(|c| c * a).collect())
    }

    pub fn monic(&self) -> Result<Poly> {
        let lc = self.leading().ok_or(Error::ZeroPolynomial("monic"))?;
        Ok(self.scale(&lc.inv()?))
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(QuadElem::is_one)
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// σⁿ·f(1/σ); requires n ≥ deg f.
    pub fn reversed(&self, n: usize) -> Poly {
        let mut c = vec![QuadElem::zero(); n + 1];
        for (i, a) in self.c.iter().enumerate() {
            c[n - i] = a.clone();
        }
        Poly::new(c)
    }

    /// Multiplication by σⁿ.
    pub fn shift(&self, n: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![QuadElem::zero(); n];
        c.extend(self.c.iter().cloned());
        Poly::new(c)
    }

    pub fn conj(&self) -> Poly {
        Poly::new(self.c.iter().map(QuadElem::conj).collect())
    }

    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let inv_lc = d.c[dd].inv()?;
        let mut r = self.c.clone();
        if r.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut q = vec![QuadElem::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let t = &r[i + dd] * &inv_lc;
            if !t.is_zero() {
                for (j, dc) in d.c.iter().enumerate() {
                    r[i + j] = &r[i + j] - &(&t * dc);
                }
            }
            q[i] = t;
        }
        r.truncate(dd);
        Ok((Poly::new(q), Poly::new(r)))
    }

    /// Division that must be exact.
    pub fn exact_div(&self, d: &Poly) -> Result<Poly> {
        let (q, r) = self.div_rem(d)?;
        if !r.is_zero() {
            return Err(Error::Inconsistent("polynomial division is not exact".into()));
        }
        Ok(q)
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            let g = if a.is_zero() { b } else { a };
            return if g.is_zero() { Poly::zero() } else { g.monic().expect("nonzero") };
        }
        if a.is_constant() || b.is_constant() {
            return Poly::one();
        }
        super::modgcd::gcd(a, b).unwrap_or_else(|| Poly::euclid_gcd(a, b))
    }

    /// Euclid's algorithm over Q(√−3), monic at every step.
    fn euclid_gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let b_monic = b.monic().expect("nonzero");
            let (_, r) = a.div_rem(&b_monic).expect("nonzero divisor");
            a = b_monic;
            b = r;
        }
        a.monic().expect("nonzero")
    }

    /// Product of the distinct irreducible factors, made monic.
    pub fn squarefree_part(&self) -> Result<Poly> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial("squarefree_part"));
        }
        let g = Poly::gcd(self, &self.derivative());
        self.exact_div(&g)?.monic()
    }

    /// Yun's square-free decomposition f = lc · Π fᵢ^i with fᵢ monic, square-free and pairwise coprime.
    /// Returns the leading coefficient and the nonconstant factors with their multiplicities.
    pub fn squarefree_decomposition(&self) -> Result<(QuadElem, Vec<(Poly, u32)>)> {
        let lc = self.leading().ok_or(Error::ZeroPolynomial("squarefree_decomposition"))?.clone();
        let f = self.monic()?;
        let mut out = Vec::new();
        if f.is_constant() {
            return Ok((lc, out));
        }
        let fp = f.derivative();
        let a0 = Poly::gcd(&f, &fp);
        let mut b = f.exact_div(&a0)?;
        let mut c = fp.exact_div(&a0)?;
        let mut d = &c - &b.derivative();
        let mut i = 1;
        while !b.is_constant() {
            let a = Poly::gcd(&b, &d);
            if !a.is_constant() {
                out.push((a.clone(), i));
            }
            b = b.exact_div(&a)?;
            c = d.exact_div(&a)?;
            d = &c - &b.derivative();
            i += 1;
        }
        Ok((lc, out))
    }

    /// Multiplicity of the nonconstant polynomial p as a factor of self (self ≠ 0).
    pub fn multiplicity(&self, p: &Poly) -> Result<u32> {
        if self.is_zero() {
            return Err(Error::ZeroValuation);
        }
        if p.is_constant() {
            return Err(Error::InvalidPlace("constant polynomial".into()));
        }
        let mut f = self.clone();
        let mut n = 0;
        loop {
            let (q, r) = f.div_rem(p)?;
            if !r.is_zero() {
                return Ok(n);
            }
            f = q;
            n += 1;
        }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|i| &self.coeff(i) + &o.coeff(i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|i| &self.coeff(i) - &o.coeff(i)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![QuadElem::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = &c[i + j] + &(a * b);
            }
        }
        Poly::new(c)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.c.iter().map(|a| -a).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, o: Poly) -> Poly {
                (&self).$m(&o)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $m(self, o: &Poly) -> Poly {
                (&self).$m(o)
            }
        }
        impl $tr<Poly> for &Poly {
            type Output = Poly;
            fn $m(self, o: Poly) -> Poly {
                self.$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({a})")?,
                1 => write!(f, "({a})*t")?,
                _ => write!(f, "({a})*t^{i}")?,
            }
        }
        Ok(())
    }
}
