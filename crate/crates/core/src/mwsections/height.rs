//! Intersection with the zero section, fiber contributions and the height
//! pairing h(P) = 2χ + 2(P·O) − Σ contr_ν(P).

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::curve::{CoordinateChange, FunctionFieldCurve, SectionPoint};
use crate::error::{Error, Result};
use crate::exactalg::{valuation, Place, RatFunc};

/// P·O: half the pole order of x(P) at each place, times the residue degree.
/// The place at infinity is read off the chart s = 1/σ with x ↦ s⁴x(1/s).
pub fn zero_intersection(p: &SectionPoint) -> Result<u64> {
    let Some(x) = p.x() else {
        return Err(Error::Domain("P = O has no finite intersection with O".into()));
    };
    let mut total = 0u64;
    let mut add = |order: u64, deg: u64, at: &dyn std::fmt::Display| -> Result<()> {
        if order % 2 == 1 {
            return Err(Error::Inconsistent(format!("x has a pole of odd order {order} at {at}")));
        }
        total += order / 2 * deg;
        Ok(())
    };
    if !x.is_zero() {
        let (_, parts) = x.den().squarefree_decomposition()?;
        for (f, e) in &parts {
            add(u64::from(*e), f.deg() as u64, f)?;
        }
        let xs = x.reciprocal_chart(4);
        let v = valuation(&xs, &Place::at(&crate::exactalg::QuadElem::zero()))?;
        if v < 0 {
            add(v.unsigned_abs(), 1, &"s = 0")?;
        }
    }
    Ok(total)
}

/// j(m − j)/m for a section meeting component j of an I_m fiber.
pub fn contribution(m: u32, j: u32) -> Result<BigRational> {
    if m == 0 || j >= m {
        return Err(Error::Domain(format!("component {j} of an I_{m} fiber")));
    }
    Ok(BigRational::new(BigInt::from(j) * BigInt::from(m - j), BigInt::from(m)))
}

/// The substitution used to read off a component, when one is recorded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiberTransform {
    /// A Weierstrass substitution, applied in the chart s = 1/σ when `reciprocal`.
    Weierstrass { reciprocal: bool, change: CoordinateChange },
    /// The projective change (X, Y, Z) = M·(x, y, z), rows of M listed.
    PlaneCubic { rows: [[RatFunc; 3]; 3] },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeronFiberData {
    /// The place in the σ chart; infinity is s = 0.
    pub place: Place,
    pub kodaira_m: u32,
    pub component: u32,
    pub transform: Option<FiberTransform>,
}

impl NeronFiberData {
    pub fn new(place: Place, kodaira_m: u32, component: u32, transform: Option<FiberTransform>) -> Result<Self> {
        contribution(kodaira_m, component)?;
        Ok(NeronFiberData { place, kodaira_m, component, transform })
    }

    /// Residue degree times j(m − j)/m.
    pub fn weighted_contribution(&self) -> Result<BigRational> {
        Ok(contribution(self.kodaira_m, self.component)? * BigInt::from(self.place.degree()))
    }
}

/// Terms of the height formula, kept for reporting.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeightBreakdown {
    pub chi: u32,
    pub zero_intersection: u64,
    /// (place, m, j, deg · contr) per fiber, as strings for exact rationals.
    pub fibers: Vec<(String, u32, u32, String)>,
    pub height: String,
}

/// h(P) = 2χ + 2(P·O) − Σ deg(ν)·contr_ν(P). Every reducible fiber must be
/// listed: the fibers are assumed of type I_m, whose Euler numbers must add
/// up to 12χ.
pub fn height(p: &SectionPoint, chi: u32, fibers: &[NeronFiberData]) -> Result<BigRational> {
    Ok(height_breakdown(p, chi, fibers)?.0)
}

pub fn height_breakdown(
    p: &SectionPoint,
    chi: u32,
    fibers: &[NeronFiberData],
) -> Result<(BigRational, HeightBreakdown)> {
    let euler: u64 = fibers.iter().map(|f| u64::from(f.kodaira_m) * f.place.degree() as u64).sum();
    if euler != 12 * u64::from(chi) {
        return Err(Error::Domain(format!(
            "fiber data cover Euler number {euler}, expected {}; component data missing",
            12 * chi
        )));
    }
    let pair = zero_intersection(p)?;
    let mut h = BigRational::from_integer(BigInt::from(2 * u64::from(chi) + 2 * pair));
    let mut rows = Vec::new();
    for f in fibers {
        let c = f.weighted_contribution()?;
        rows.push((f.place.to_string(), f.kodaira_m, f.component, c.to_string()));
        h -= c;
    }
    let breakdown = HeightBreakdown { chi, zero_intersection: pair, fibers: rows, height: h.to_string() };
    Ok((h, breakdown))
}

/// Reduction type of a model at a finite place.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FiberType {
    Good,
    /// Multiplicative reduction I_m.
    I(u32),
    /// Additive or non-minimal; valuations of c4 and Δ.
    Other { v_c4: i64, v_disc: i64 },
}

pub fn fiber_type(e: &FunctionFieldCurve, place: &Place) -> Result<FiberType> {
    let vd = valuation(&e.discriminant(), place)?;
    let c4 = e.c4();
    let vc = if c4.is_zero() { i64::MAX } else { valuation(&c4, place)? };
    Ok(if vd == 0 && vc >= 0 {
        FiberType::Good
    } else if vc == 0 && vd > 0 {
        FiberType::I(vd as u32)
    } else {
        FiberType::Other { v_c4: vc, v_disc: vd }
    })
}

/// Σ deg(ν)·v_ν(Δ) over the finite places, for a model with polynomial coefficients.
pub fn finite_euler_number(e: &FunctionFieldCurve) -> Result<u64> {
    let d = e.discriminant();
    if !d.is_polynomial() {
        return Err(Error::Domain("discriminant is not a polynomial".into()));
    }
    let (_, parts) = d.num().squarefree_decomposition()?;
    Ok(parts.iter().map(|(f, m)| f.deg() as u64 * u64::from(*m)).sum())
}

/// Σ_ν deg(ν)·contr_ν(P).
pub fn total_contribution(fibers: &[NeronFiberData]) -> Result<BigRational> {
    fibers.iter().try_fold(BigRational::from_integer(0.into()), |acc, f| Ok(acc + f.weighted_contribution()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{Poly, QuadElem};

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn contributions() {
        assert_eq!(contribution(12, 6).unwrap(), r(3, 1));
        assert_eq!(contribution(2, 1).unwrap(), r(1, 2));
        assert_eq!(contribution(5, 0).unwrap(), r(0, 1));
        assert_eq!(contribution(3, 1).unwrap(), r(2, 3));
        assert!(contribution(2, 2).is_err());
        assert!(contribution(0, 0).is_err());
    }

    #[test]
    fn polynomial_sections_miss_zero() {
        let x = RatFunc::from(Poly::from_ints(&[0, 18, -1]));
        assert_eq!(zero_intersection(&SectionPoint::affine(x, RatFunc::one())).unwrap(), 0);
        // degree 6 > 4: x has a double pole at s = 0
        let x = RatFunc::from(Poly::from_ints(&[0, 0, 0, 0, 0, 0, 1]));
        assert_eq!(zero_intersection(&SectionPoint::affine(x, RatFunc::one())).unwrap(), 1);
        // an odd pole is rejected
        let x = RatFunc::new(Poly::one(), Poly::from_ints(&[-9, 1])).unwrap();
        assert!(zero_intersection(&SectionPoint::affine(x, RatFunc::one())).is_err());
        assert!(zero_intersection(&SectionPoint::O).is_err());
    }

    #[test]
    fn fiber_types() {
        let e = FunctionFieldCurve::from_int_polys([&[1, -18, 1], &[-1, -18, 1], &[], &[0, 18, -1], &[]]).unwrap();
        let at = |n| Place::at(&QuadElem::from_int(n));
        assert_eq!(fiber_type(&e, &at(0)).unwrap(), FiberType::I(2));
        assert_eq!(fiber_type(&e, &at(18)).unwrap(), FiberType::I(2));
        assert_eq!(fiber_type(&e, &at(1)).unwrap(), FiberType::Good);
        assert_eq!(fiber_type(&e, &Place::finite(Poly::from_ints(&[1, -18, 1])).unwrap()).unwrap(), FiberType::I(3));
        assert_eq!(fiber_type(&e, &Place::finite(Poly::from_ints(&[9, -18, 1])).unwrap()).unwrap(), FiberType::I(1));
        assert_eq!(fiber_type(&e, &Place::finite(Poly::from_ints(&[1, -18, 9])).unwrap()).unwrap(), FiberType::Good);
        assert_eq!(finite_euler_number(&e).unwrap(), 12);
        let es = e.reciprocal_chart();
        assert_eq!(fiber_type(&es, &at(0)).unwrap(), FiberType::I(12));
    }

    #[test]
    fn height_needs_all_fibers() {
        let p = SectionPoint::affine(RatFunc::from(Poly::from_ints(&[0, 18, -1])), RatFunc::one());
        let f = NeronFiberData::new(Place::Infinity, 12, 2, None).unwrap();
        assert!(height(&p, 2, &[f]).is_err());
        assert!(NeronFiberData::new(Place::Infinity, 2, 3, None).is_err());
    }
}
