//! Torsion checks for sections, with the exponent bound 6 of these surfaces.

use super::curve::{ec_mul, FunctionFieldCurve, SectionPoint};
use super::fixtures::fixture;
use crate::error::{Error, Result};
use crate::exactalg::QuadElem;

/// Sections of these fibrations have torsion of order dividing 6.
pub const TORSION_BOUND: u32 = 6;

/// Integer specializations tried before falling back to exact arithmetic.
const SPECIALIZATIONS: std::ops::RangeInclusive<i64> = 1..=40;

/// The least n ≤ bound with [n]P = O, by exact arithmetic over K.
pub fn torsion_order(p: &SectionPoint, e: &FunctionFieldCurve, bound: u32) -> Result<Option<u32>> {
    if !e.contains(p) {
        return Err(Error::NotOnCurve);
    }
    let mut q = p.clone();
    for n in 1..=bound {
        if q.is_zero() {
            return Ok(Some(n));
        }
        q = super::curve::ec_add(&q, p, e)?;
    }
    Ok(None)
}

/// Whether [n]P ≠ O for n = 1..6.
///
/// Specializing at a σ0 where E stays smooth is a homomorphism, so
/// [n]P(σ0) ≠ O for every n already proves [n]P ≠ O. When no such σ0
/// turns up the multiples are computed exactly.
pub fn verify_nontorsion(p: &SectionPoint, e: &FunctionFieldCurve) -> Result<bool> {
    if !e.contains(p) {
        return Err(Error::NotOnCurve);
    }
    if p.is_zero() {
        return Ok(false);
    }
    let disc = e.discriminant();
    for s0 in SPECIALIZATIONS {
        let s0 = QuadElem::from_int(s0);
        let Ok(d0) = disc.eval(&s0) else { continue };
        if d0.is_zero() {
            continue;
        }
        let (Ok(e0), Ok(p0)) = (e.specialize(&s0), p.specialize(&s0)) else { continue };
        if torsion_order(&p0, &e0, TORSION_BOUND)?.is_none() {
            return Ok(true);
        }
    }
    Ok(torsion_order(p, e, TORSION_BOUND)?.is_none())
}

/// One recorded multiple [n]ρ of the order-6 section.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionIdentity {
    pub k: u32,
    pub n: u32,
    pub pass: bool,
}

/// Compares [n]ρ₆, n = 1..5, computed from p1 on the model of the given k,
/// with the recorded multiples, and checks [6]ρ₆ = O.
pub fn torsion_fixture_identities(k: u32) -> Result<(Vec<TorsionIdentity>, bool)> {
    let (model, torsion) = match k {
        3 => ("k3_model", "k3_torsion"),
        18 => ("y18_model", "y18_torsion"),
        _ => return Err(Error::Domain(format!("no torsion data for k = {k}"))),
    };
    let e = fixture(model)?.curve()?;
    let t = fixture(torsion)?;
    let rho = t.point("p1")?;
    let mut out = Vec::new();
    for n in 1..TORSION_BOUND {
        let q = ec_mul(i64::from(n), &rho, &e)?;
        out.push(TorsionIdentity { k, n, pass: q == t.point(&format!("p{n}"))? });
    }
    let order_six = ec_mul(i64::from(TORSION_BOUND), &rho, &e)?.is_zero();
    Ok((out, order_six))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{Poly, RatFunc};

    fn poly(c: &[i64]) -> RatFunc {
        RatFunc::from(Poly::from_ints(c))
    }

    #[test]
    fn rho6_has_order_six() {
        let e = FunctionFieldCurve::from_int_polys([&[1, -18, 1], &[-1, -18, 1], &[], &[0, 18, -1], &[]]).unwrap();
        let rho = SectionPoint::affine(poly(&[0, 18, -1]), &poly(&[0, -18, 1]) * &poly(&[1, -18, 1]));
        assert_eq!(torsion_order(&rho, &e, 6).unwrap(), Some(6));
        assert!(!verify_nontorsion(&rho, &e).unwrap());
        assert!(!verify_nontorsion(&SectionPoint::O, &e).unwrap());
    }

    #[test]
    fn k3_section_is_not_torsion() {
        // y² + (σ²−3σ+1)xy = x³ + (σ²−3σ−1)x² + (−σ²+3σ)x
        let e = FunctionFieldCurve::from_int_polys([&[1, -3, 1], &[-1, -3, 1], &[], &[0, 3, -1], &[]]).unwrap();
        let x = -(&poly(&[-3, 1]) * &poly(&[1, -2, 1]));
        let y = &(&(&poly(&[-3, 1]) * &poly(&[-2, 1])) * &poly(&[-1, 1])) * &poly(&[1, -3, 1]);
        let p = SectionPoint::affine(x, y);
        assert!(verify_nontorsion(&p, &e).unwrap());
        assert_eq!(torsion_order(&p, &e, 6).unwrap(), None);
        assert_eq!(p, fixture("k3_section").unwrap().point("").unwrap());
        assert_eq!(e, fixture("k3_model").unwrap().curve().unwrap());
    }

    #[test]
    fn recorded_torsion_multiples() {
        for k in [3, 18] {
            let (ids, six) = torsion_fixture_identities(k).unwrap();
            assert_eq!(ids.len(), 5);
            assert!(ids.iter().all(|t| t.pass), "k = {k}: {ids:?}");
            assert!(six);
        }
        assert!(torsion_fixture_identities(6).is_err());
    }
}
