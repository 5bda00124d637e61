use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The radicand d of the coefficient field Q(√d).
pub const RADICAND: i64 = -3;

/// An element a + b√−3 of Q(√−3).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QuadElem {
    a: BigRational,
    b: BigRational,
}

fn radicand() -> BigRational {
    BigRational::from_integer(BigInt::from(RADICAND))
}

/// Square root of a rational, if it is the square of a rational.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

impl QuadElem {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        QuadElem { a, b }
    }

    pub fn zero() -> Self {
        QuadElem::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        QuadElem::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        QuadElem::rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        QuadElem::rational(BigRational::from_integer(n))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        QuadElem::rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn rational(a: BigRational) -> Self {
        QuadElem::new(a, BigRational::zero())
    }

    /// a + b√−3 with integer parts.
    pub fn from_ints(a: i64, b: i64) -> Self {
        QuadElem::new(
            BigRational::from_integer(BigInt::from(a)),
            BigRational::from_integer(BigInt::from(b)),
        )
    }

    /// √−3 itself.
    pub fn sqrt_radicand() -> Self {
        QuadElem::from_ints(0, 1)
    }

    pub fn re(&self) -> &BigRational {
        &self.a
    }

    /// The coefficient of √−3.
    pub fn im(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conj(&self) -> Self {
        QuadElem::new(self.a.clone(), -&self.b)
    }

    /// a² − d·b², which is x·conj(x).
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - radicand() * &self.b * &self.b
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        Ok(QuadElem::new(&self.a / &n, -(&self.b / &n)))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        QuadElem::new(&self.a * r, &self.b * r)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = QuadElem::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// A square root in Q(√−3), if one exists.
    ///
    /// Writing the root as u + v√−3 gives u² − 3v² = a and 2uv = b, so u² is
    /// a root of 4t² − 4at − 3b² = 0.
    pub fn sqrt(&self) -> Option<Self> {
        if self.b.is_zero() {
            if let Some(u) = rational_sqrt(&self.a) {
                return Some(QuadElem::rational(u));
            }
            // v² = a/d
            return rational_sqrt(&(&self.a / radicand()))
                .map(|v| QuadElem::new(BigRational::zero(), v));
        }
        let disc = rational_sqrt(&self.norm())?;
        let two = BigRational::from_integer(BigInt::from(2));
        for t in [(&self.a + &disc) / &two, (&self.a - &disc) / &two] {
            if let Some(u) = rational_sqrt(&t) {
                if u.is_zero() {
                    continue;
                }
                let v = &self.b / (&two * &u);
                let w = QuadElem::new(u, v);
                if &(&w * &w) == self {
                    return Some(w);
                }
            }
        }
        None
    }

    /// Approximate value as (real, imaginary) doubles.
    pub fn to_f64_pair(&self) -> (f64, f64) {
        let f = |r: &BigRational| -> f64 {
            use num_traits::ToPrimitive;
            r.to_f64().unwrap_or(f64::NAN)
        };
        (f(&self.a), f(&self.b) * (-(RADICAND as f64)).sqrt())
    }
}

/// Squareness test in Q(√−3), returning a witness w with w² = c.
pub fn is_square_quad(c: &QuadElem) -> Option<QuadElem> {
    c.sqrt()
}

impl Default for QuadElem {
    fn default() -> Self {
        QuadElem::zero()
    }
}

impl From<i64> for QuadElem {
    fn from(n: i64) -> Self {
        QuadElem::from_int(n)
    }
}

impl From<BigRational> for QuadElem {
    fn from(r: BigRational) -> Self {
        QuadElem::rational(r)
    }
}

impl Add for &QuadElem {
    type Output = QuadElem;
    fn add(self, o: &QuadElem) -> QuadElem {
        QuadElem::new(&self.a + &o.a, &self.b + &o.b)
    }
}

impl Sub for &QuadElem {
    type Output = QuadElem;
    fn sub(self, o: &QuadElem) -> QuadElem {
        QuadElem::new(&self.a - &o.a, &self.b - &o.b)
    }
}

impl Mul for &QuadElem {
    type Output = QuadElem;
    fn mul(self, o: &QuadElem) -> QuadElem {
        if self.b.is_zero() && o.b.is_zero() {
            return QuadElem::rational(&self.a * &o.a);
        }
        QuadElem::new(
            &self.a * &o.a + radicand() * &self.b * &o.b,
            &self.a * &o.b + &self.b * &o.a,
        )
    }
}

impl Neg for &QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        QuadElem::new(-&self.a, -&self.b)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for QuadElem {
            type Output = QuadElem;
            fn $m(self, o: QuadElem) -> QuadElem {
                (&self).$m(&o)
            }
        }
        impl $tr<&QuadElem> for QuadElem {
            type Output = QuadElem;
            fn $m(self, o: &QuadElem) -> QuadElem {
                (&self).$m(o)
            }
        }
        impl $tr<QuadElem> for &QuadElem {
            type Output = QuadElem;
            fn $m(self, o: QuadElem) -> QuadElem {
                self.$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        -&self
    }
}

impl fmt::Display for QuadElem {
    /// Writes `a`, `b*s` or `a+b*s` where `s` stands for √−3.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}*s", self.b),
            (false, false) => {
                if self.b.is_negative() {
                    write!(f, "{}-{}*s", self.a, -&self.b)
                } else {
                    write!(f, "{}+{}*s", self.a, self.b)
                }
            }
        }
    }
}

/// Parses `a` or `a:b`, meaning a + b√−3, with each part an integer or `p/q`.
impl FromStr for QuadElem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = |_| Error::Domain(format!("cannot parse field element {s:?}"));
        let parse = |t: &str| BigRational::from_str(t.trim()).map_err(bad);
        match s.split_once(':') {
            Some((a, b)) => Ok(QuadElem::new(parse(a)?, parse(b)?)),
            None => Ok(QuadElem::rational(parse(s)?)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> QuadElem {
        QuadElem::from_ints(a, b)
    }

    #[test]
    fn norm_of_one_plus_root() {
        assert_eq!(q(1, 1).norm(), BigRational::from_integer(4.into()));
    }

    #[test]
    fn conj_is_involution() {
        let x = QuadElem::new(BigRational::new(3.into(), 7.into()), BigRational::new((-2).into(), 5.into()));
        assert_eq!(x.conj().conj(), x);
    }

    #[test]
    fn inverse_of_two() {
        assert_eq!(q(2, 0).inv().unwrap(), QuadElem::from_ratio(1, 2));
        assert_eq!(QuadElem::zero().inv(), Err(Error::DivisionByZero));
        let x = q(5, -3);
        assert!((&x * &x.inv().unwrap()).is_one());
    }

    #[test]
    fn square_roots() {
        let w = is_square_quad(&QuadElem::from_ratio(-1, 3)).unwrap();
        assert_eq!(&w * &w, QuadElem::from_ratio(-1, 3));
        assert_eq!(w.re(), &BigRational::zero());
        let w = is_square_quad(&q(-3, 0)).unwrap();
        assert_eq!(&w * &w, q(-3, 0));
        assert!(is_square_quad(&q(2, 0)).is_none());
        assert!(is_square_quad(&q(-1, 0)).is_none());
        let z = q(4, -7);
        let sq = &z * &z;
        let w = is_square_quad(&sq).unwrap();
        assert_eq!(&w * &w, sq);
        assert!(is_square_quad(&q(1, 1)).is_none());
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("7".parse::<QuadElem>().unwrap(), q(7, 0));
        assert_eq!("0:1".parse::<QuadElem>().unwrap(), QuadElem::sqrt_radicand());
        assert_eq!(
            "2:-5/3".parse::<QuadElem>().unwrap(),
            QuadElem::new(BigRational::from_integer(2.into()), BigRational::new((-5).into(), 3.into()))
        );
        assert!("x".parse::<QuadElem>().is_err());
        assert_eq!(q(1, -2).to_string(), "1-2*s");
        assert_eq!(q(0, 3).to_string(), "3*s");
    }
}
