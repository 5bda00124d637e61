//! L(χ₋₃, 2) and d₃ = (3√3/4π)·L(χ₋₃, 2).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numeric::BigReal;

/// B₀, B₁, …, B_n from Σ_{j<m+1} C(m+1, j) B_j = 0.
fn bernoulli(n: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = vec![BigRational::one()];
    for m in 1..=n {
        let mut binom = BigInt::one();
        let mut acc = BigRational::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += BigRational::from_integer(binom.clone()) * bj;
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

fn big_ratio(q: &BigRational, prec: usize) -> Result<BigReal> {
    Ok(BigReal::from_bigint(q.numer(), prec)? / BigReal::from_bigint(q.denom(), prec)?)
}

/// Σ_{j ≥ J} (3j + a)⁻² by Euler–Maclaurin: ∫ + f(J)/2 − Σ B_{2i}/(2i)! f^{(2i−1)}(J).
/// f^{(r)}(j) = (−1)^r (r+1)! 3^r (3j + a)^{−2−r}.
fn hurwitz_tail(a: i64, j0: i64, bern: &[BigRational], prec: usize) -> Result<BigReal> {
    let x = BigReal::from_i64(3 * j0 + a, prec);
    let three = BigReal::from_i64(3, prec);
    let inv = BigReal::from_i64(1, prec) / &x;
    let inv2 = &inv * &inv;
    let mut s = &inv / &three + &inv2 / BigReal::from_i64(2, prec);
    // r = 2i − 1: term = −B_{2i}/(2i)! · (−1)^r (r+1)! 3^r x^{−2−r} = B_{2i}·3^{2i−1}·x^{−2i−1}.
    let mut pw = &inv2 * &inv; // x^{-3}
    let mut three_pow = BigReal::from_i64(3, prec);
    let nine = BigReal::from_i64(9, prec);
    for i in 1..bern.len() / 2 {
        let b = big_ratio(&bern[2 * i], prec)?;
        let term = &(&b * &three_pow) * &pw;
        s = &s + &term;
        pw = &pw * &inv2;
        three_pow = &three_pow * &nine;
    }
    Ok(s)
}

/// L(χ, s) for the primitive character of conductor 3 at s = 2.
pub fn dirichlet_lvalue(modulus: u64, s: u32, prec: usize) -> Result<BigReal> {
    if modulus != 3 || s != 2 {
        return Err(Error::NotTabulated(format!("L(chi_{modulus}, {s}) is not implemented")));
    }
    let wp = prec + 32;
    // With J blocks summed directly the i-th remainder term is about
    // (2i)!/(2πJ)^{2i}; J = 4·prec and 2i ≤ prec/4 keep it below 2^{−prec}.
    let j0 = 4 * prec.max(32) as i64;
    let terms = (prec / 4).clamp(8, 60);
    let bern = bernoulli(2 * terms + 1);
    let mut head = BigReal::from_i64(0, wp);
    for j in (0..j0).rev() {
        let a = BigReal::from_i64(3 * j + 1, wp);
        let b = BigReal::from_i64(3 * j + 2, wp);
        head = &head + &(BigReal::from_i64(1, wp) / (&a * &a) - BigReal::from_i64(1, wp) / (&b * &b));
    }
    let tail = hurwitz_tail(1, j0, &bern, wp)? - hurwitz_tail(2, j0, &bern, wp)?;
    let v = head + tail;
    let err = v.error_bound() + 2f64.powi(-(prec as i32));
    Ok(rounded(v, prec).with_error(err))
}

fn rounded(v: BigReal, prec: usize) -> BigReal {
    let mut x = v.value().clone();
    let _ = x.set_precision(prec, crate::numeric::RM);
    BigReal::from_bigfloat(x, prec, v.error_bound())
}

/// d₃ = (3√3/4π)·L(χ₋₃, 2) = m(1 + x + y).
pub fn d3(prec: usize) -> Result<BigReal> {
    let wp = prec + 16;
    let l = dirichlet_lvalue(3, 2, wp)?;
    let three = BigReal::from_i64(3, wp);
    let f = &(&three * &three.sqrt()?) / &(BigReal::from_i64(4, wp) * BigReal::pi(wp));
    let v = &f * &l;
    let e = v.error_bound();
    Ok(rounded(v, prec).with_error(e + 2f64.powi(-(prec as i32))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_numbers() {
        let b = bernoulli(12);
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(b[1], q(-1, 2));
        assert_eq!(b[2], q(1, 6));
        assert_eq!(b[3], q(0, 1));
        assert_eq!(b[12], q(-691, 2730));
    }

    #[test]
    fn known_digits() {
        let l = dirichlet_lvalue(3, 2, 128).unwrap();
        assert!((l.to_f64() - 0.781_302_412_896_486_3).abs() < 1e-15);
        let d = d3(128).unwrap();
        assert!((d.to_f64() - 0.323_065_947_219_450_5).abs() < 1e-15);
        assert!(d.error_bound() < 1e-30);
    }

    #[test]
    fn precision_agreement() {
        let a = d3(128).unwrap();
        let b = d3(256).unwrap();
        assert!(a.abs_diff(&b) < 1e-36);
    }

    #[test]
    fn other_characters_unsupported() {
        assert!(dirichlet_lvalue(4, 2, 64).is_err());
        assert!(dirichlet_lvalue(3, 3, 64).is_err());
    }
}
