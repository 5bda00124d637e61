use std::cell::RefCell;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;

use crate::error::{Error, Result};

pub const DEFAULT_PREC: usize = 128;
pub(crate) const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

/// Runs `f` with this thread's astro-float constant cache.
pub(crate) fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Converts to the nearest double through a decimal rendering.
pub(crate) fn bigfloat_to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let s = with_consts(|cc| x.format(Radix::Dec, RM, cc)).unwrap_or_else(|_| "NaN".into());
    s.parse().unwrap_or(f64::NAN)
}

/// 2^e as a double, saturating.
fn pow2(e: i64) -> f64 {
    2f64.powi(e.clamp(-1074, 1023) as i32)
}

/// A real number at a given binary precision with an absolute error bound.
#[derive(Clone, Debug)]
pub struct BigReal {
    value: BigFloat,
    prec: usize,
    error_bound: f64,
}

impl BigReal {
    pub fn from_bigfloat(value: BigFloat, prec: usize, error_bound: f64) -> Self {
        BigReal { value, prec, error_bound }
    }

    pub fn from_f64(x: f64, prec: usize) -> Self {
        BigReal::from_bigfloat(BigFloat::from_f64(x, prec), prec, 0.0)
    }

    /// A double-precision estimate carried at the given precision.
    pub fn estimate(x: f64, error_bound: f64, prec: usize) -> Self {
        BigReal::from_bigfloat(BigFloat::from_f64(x, prec), prec, error_bound)
    }

    pub fn from_i64(n: i64, prec: usize) -> Self {
        BigReal::from_bigfloat(BigFloat::from_i64(n, prec), prec, 0.0)
    }

    pub fn from_bigint(n: &BigInt, prec: usize) -> Result<Self> {
        BigReal::parse(&n.to_string(), prec)
    }

    pub fn from_ratio(n: i64, d: i64, prec: usize) -> Self {
        BigReal::from_i64(n, prec) / BigReal::from_i64(d, prec)
    }

    pub fn parse(s: &str, prec: usize) -> Result<Self> {
        let v = with_consts(|cc| BigFloat::parse(s, Radix::Dec, prec, RM, cc));
        if v.is_nan() {
            return Err(Error::Domain(format!("cannot parse {s:?} as a number")));
        }
        let ulp = pow2(v.exponent().map_or(0, i64::from) - prec as i64);
        Ok(BigReal::from_bigfloat(v, prec, ulp))
    }

    pub fn pi(prec: usize) -> Self {
        let v = with_consts(|cc| cc.pi(prec, RM));
        let ulp = pow2(2 - prec as i64);
        BigReal::from_bigfloat(v, prec, ulp)
    }

    pub fn value(&self) -> &BigFloat {
        &self.value
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn error_bound(&self) -> f64 {
        self.error_bound
    }

    pub fn with_error(mut self, e: f64) -> Self {
        self.error_bound = e;
        self
    }

    /// Adds `e` to the error bound.
    pub fn widen(mut self, e: f64) -> Self {
        self.error_bound += e;
        self
    }

    pub fn to_f64(&self) -> f64 {
        bigfloat_to_f64(&self.value)
    }

    fn ulp(&self) -> f64 {
        match self.value.exponent() {
            Some(e) if !self.value.is_zero() => pow2(i64::from(e) - self.prec as i64 + 1),
            _ => 0.0,
        }
    }

    pub fn abs(&self) -> Self {
        BigReal::from_bigfloat(self.value.abs(), self.prec, self.error_bound)
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.value.is_negative() {
            return Err(Error::Domain("square root of a negative number".into()));
        }
        let v = self.value.sqrt(self.prec, RM);
        let r = BigReal::from_bigfloat(v, self.prec, 0.0);
        let x = self.to_f64();
        let prop = if x > 0.0 { self.error_bound / (2.0 * x.sqrt()) } else { self.error_bound.sqrt() };
        let u = r.ulp();
        Ok(r.with_error(prop + u))
    }

    pub fn ln(&self) -> Result<Self> {
        if !self.value.is_positive() {
            return Err(Error::Domain("logarithm of a non-positive number".into()));
        }
        let v = with_consts(|cc| self.value.ln(self.prec, RM, cc));
        let r = BigReal::from_bigfloat(v, self.prec, 0.0);
        let u = r.ulp() + pow2(-(self.prec as i64));
        Ok(r.with_error(self.error_bound / self.to_f64() + u))
    }

    pub fn exp(&self) -> Self {
        let v = with_consts(|cc| self.value.exp(self.prec, RM, cc));
        let r = BigReal::from_bigfloat(v, self.prec, 0.0);
        let f = r.to_f64();
        let u = r.ulp();
        r.with_error(f * self.error_bound + u)
    }

    pub fn cos(&self) -> Self {
        let v = with_consts(|cc| self.value.cos(self.prec, RM, cc));
        let r = BigReal::from_bigfloat(v, self.prec, 0.0);
        r.with_error(self.error_bound + pow2(1 - self.prec as i64))
    }

    pub fn abs_diff(&self, o: &BigReal) -> f64 {
        (self - o).abs().to_f64()
    }

    pub fn powi(&self, n: usize) -> Self {
        let mut acc = BigReal::from_i64(1, self.prec);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = with_consts(|cc| self.value.format(Radix::Dec, RM, cc)).map_err(|_| fmt::Error)?;
        write!(f, "{s}")
    }
}

impl Add for &BigReal {
    type Output = BigReal;
    fn add(self, o: &BigReal) -> BigReal {
        let p = self.prec.min(o.prec);
        let r = BigReal::from_bigfloat(self.value.add(&o.value, p, RM), p, 0.0);
        let e = self.error_bound + o.error_bound + r.ulp();
        r.with_error(e)
    }
}

impl Sub for &BigReal {
    type Output = BigReal;
    fn sub(self, o: &BigReal) -> BigReal {
        let p = self.prec.min(o.prec);
        let r = BigReal::from_bigfloat(self.value.sub(&o.value, p, RM), p, 0.0);
        let e = self.error_bound + o.error_bound + r.ulp();
        r.with_error(e)
    }
}

impl Mul for &BigReal {
    type Output = BigReal;
    fn mul(self, o: &BigReal) -> BigReal {
        let p = self.prec.min(o.prec);
        let r = BigReal::from_bigfloat(self.value.mul(&o.value, p, RM), p, 0.0);
        let (a, b) = (self.to_f64().abs(), o.to_f64().abs());
        let e = a * o.error_bound + b * self.error_bound + self.error_bound * o.error_bound + r.ulp();
        r.with_error(e)
    }
}

impl Div for &BigReal {
    type Output = BigReal;
    /// Division by an exact zero yields NaN, as in the underlying float type.
    fn div(self, o: &BigReal) -> BigReal {
        let p = self.prec.min(o.prec);
        let r = BigReal::from_bigfloat(self.value.div(&o.value, p, RM), p, 0.0);
        let b = o.to_f64().abs();
        let q = r.to_f64().abs();
        let e = if b > o.error_bound {
            (self.error_bound + q * o.error_bound) / (b - o.error_bound) + r.ulp()
        } else {
            f64::INFINITY
        };
        r.with_error(e)
    }
}

impl Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal::from_bigfloat(-self.value.clone(), self.prec, self.error_bound)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for BigReal {
            type Output = BigReal;
            fn $m(self, o: BigReal) -> BigReal {
                (&self).$m(&o)
            }
        }
        impl $tr<&BigReal> for BigReal {
            type Output = BigReal;
            fn $m(self, o: &BigReal) -> BigReal {
                (&self).$m(o)
            }
        }
        impl $tr<BigReal> for &BigReal {
            type Output = BigReal;
            fn $m(self, o: BigReal) -> BigReal {
                self.$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_values() {
        let two = BigReal::from_i64(2, 128);
        let r = two.sqrt().unwrap();
        assert!((r.to_f64() - std::f64::consts::SQRT_2).abs() < 1e-16);
        assert!(r.error_bound() < 1e-36);
        assert!((&r * &r).abs_diff(&two) < 1e-36);
        let pi = BigReal::pi(128);
        assert_eq!(pi.to_f64(), std::f64::consts::PI);
        assert!((BigReal::from_ratio(1, 3, 96).to_f64() - 1.0 / 3.0).abs() < 1e-17);
    }

    #[test]
    fn error_propagation() {
        let a = BigReal::estimate(1.5, 1e-6, 128);
        let b = BigReal::estimate(2.0, 1e-6, 128);
        let s = &a + &b;
        assert!((s.error_bound() - 2e-6).abs() < 1e-12);
        let m = &a * &b;
        assert!(m.error_bound() > 3.4e-6 && m.error_bound() < 3.6e-6);
        assert!((-&a).to_f64() == -1.5);
        assert!(BigReal::from_i64(-1, 64).sqrt().is_err());
    }

    #[test]
    fn parse_round_trip() {
        let x = BigReal::parse("1.6733893029", 128).unwrap();
        assert!((x.to_f64() - 1.6733893029).abs() < 1e-15);
        assert!(x.to_string().starts_with("1.6733893029"));
        assert!(BigReal::parse("abc", 64).is_err());
    }
}
