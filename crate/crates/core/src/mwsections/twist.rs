//! Quadratic twists, the even model y² = x(x² + ax + b), and the
//! 2-divisibility criterion for points on it.

use serde::Serialize;

use super::curve::{CoordinateChange, FunctionFieldCurve, SectionPoint};
use crate::error::{Error, Result};
use crate::exactalg::{is_square_ratfunc, sqrt_ratfunc, QuadElem, RatFunc};

fn rf(n: i64) -> RatFunc {
    RatFunc::from_int(n)
}

fn half(f: &RatFunc) -> RatFunc {
    f.scale(&QuadElem::from_ratio(1, 2))
}

fn quarter(f: &RatFunc) -> RatFunc {
    f.scale(&QuadElem::from_ratio(1, 4))
}

fn is_squarefree(d: i64) -> bool {
    let n = d.unsigned_abs();
    let mut q = 2u64;
    while q * q <= n {
        if n % (q * q) == 0 {
            return false;
        }
        q += 1;
    }
    true
}

/// The twist E_d of a curve E by Q(√d), with the maps between them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticTwist {
    pub base: FunctionFieldCurve,
    pub d: i64,
    pub curve: FunctionFieldCurve,
    /// A fixed √d in Q(√−3), when one exists; the maps need it.
    root: Option<QuadElem>,
}

/// The twist keeps a1 and a3 and replaces
/// a2 + a1²/4, a4 + a1a3/2, a6 + a3²/4 by d, d² and d³ times themselves.
pub fn quadratic_twist(e: &FunctionFieldCurve, d: i64) -> Result<QuadraticTwist> {
    if d == 0 || !is_squarefree(d) {
        return Err(Error::Domain(format!("twist parameter {d} is not a nonzero square-free integer")));
    }
    let dd = QuadElem::from_int(d);
    let a1sq4 = quarter(&(&e.a1 * &e.a1));
    let a1a32 = half(&(&e.a1 * &e.a3));
    let a3sq4 = quarter(&(&e.a3 * &e.a3));
    let a2 = &(&e.a2 + &a1sq4).scale(&dd) - &a1sq4;
    let a4 = &(&e.a4 + &a1a32).scale(&dd.pow(2)) - &a1a32;
    let a6 = &(&e.a6 + &a3sq4).scale(&dd.pow(3)) - &a3sq4;
    let curve = FunctionFieldCurve::new([e.a1.clone(), a2, e.a3.clone(), a4, a6])?;
    Ok(QuadraticTwist { base: e.clone(), d, curve, root: dd.sqrt() })
}

impl QuadraticTwist {
    /// Replace the chosen √d (for instance by its negative).
    pub fn with_root(mut self, root: QuadElem) -> Result<Self> {
        if &root * &root != QuadElem::from_int(self.d) {
            return Err(Error::Domain(format!("{root} is not a square root of {}", self.d)));
        }
        self.root = Some(root);
        Ok(self)
    }

    pub fn root(&self) -> Option<&QuadElem> {
        self.root.as_ref()
    }

    fn root_or_err(&self) -> Result<&QuadElem> {
        self.root.as_ref().ok_or_else(|| Error::Domain(format!("sqrt({}) is not in Q(sqrt(-3))", self.d)))
    }

    /// E_d → E: x = x′/d and Y = Y′/(d√d), where Y = y + (a1x + a3)/2 on
    /// either curve.
    pub fn to_base(&self, p: &SectionPoint) -> Result<SectionPoint> {
        let SectionPoint::Affine { x, y } = p else { return Ok(SectionPoint::O) };
        let root = self.root_or_err()?;
        let d = QuadElem::from_int(self.d);
        let yb = completed_y(&self.curve, x, y);
        let xb = x.scale(&d.inv()?);
        let ybb = yb.scale(&(&d * root).inv()?);
        Ok(SectionPoint::affine(xb.clone(), uncompleted_y(&self.base, &xb, &ybb)))
    }

    /// E → E_d, the inverse of `to_base`.
    pub fn from_base(&self, p: &SectionPoint) -> Result<SectionPoint> {
        let SectionPoint::Affine { x, y } = p else { return Ok(SectionPoint::O) };
        let root = self.root_or_err()?;
        let d = QuadElem::from_int(self.d);
        let yb = completed_y(&self.base, x, y);
        let xt = x.scale(&d);
        let yt = yb.scale(&(&d * root));
        Ok(SectionPoint::affine(xt.clone(), uncompleted_y(&self.curve, &xt, &yt)))
    }

    /// Twisting E_d by d again gives a curve isomorphic to E over K itself:
    /// x″ = d²x and Y″ = d³Y. Returned as a substitution from E.
    pub fn twice_isomorphism(&self) -> CoordinateChange {
        let u = RatFunc::constant(QuadElem::from_ratio(1, self.d));
        let e = &self.base;
        let s = half(&(&e.a1 * &(&u - &rf(1))));
        let t = half(&(&e.a3 * &(&(&(&u * &u) * &u) - &rf(1))));
        CoordinateChange::new(u, RatFunc::zero(), s, t)
    }
}

fn completed_y(e: &FunctionFieldCurve, x: &RatFunc, y: &RatFunc) -> RatFunc {
    y + &half(&(&(&e.a1 * x) + &e.a3))
}

fn uncompleted_y(e: &FunctionFieldCurve, x: &RatFunc, yb: &RatFunc) -> RatFunc {
    yb - &half(&(&(&e.a1 * x) + &e.a3))
}

/// y² = x(x² + a·x + b).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BForm {
    pub a: RatFunc,
    pub b: RatFunc,
}

impl BForm {
    pub fn curve(&self) -> Result<FunctionFieldCurve> {
        FunctionFieldCurve::new([RatFunc::zero(), self.a.clone(), RatFunc::zero(), self.b.clone(), RatFunc::zero()])
    }

    /// a² − 4b; (0, 0) is the only rational 2-torsion point when this is not a square.
    pub fn two_torsion_discriminant(&self) -> RatFunc {
        &(&self.a * &self.a) - &(&rf(4) * &self.b)
    }

    /// P + (0, 0) = (b/x, −bY/x²).
    pub fn add_two_torsion(&self, p: &SectionPoint) -> Result<SectionPoint> {
        match p {
            SectionPoint::O => Ok(SectionPoint::affine(RatFunc::zero(), RatFunc::zero())),
            SectionPoint::Affine { x, .. } if x.is_zero() => Ok(SectionPoint::O),
            SectionPoint::Affine { x, y } => {
                Ok(SectionPoint::affine(self.b.checked_div(x)?, (-(&self.b * y)).checked_div(&(x * x))?))
            }
        }
    }
}

/// Y = y + (a1x + a3)/2 puts E in the form Y² = x³ + (a2 + a1²/4)x² + (a4 + a1a3/2)x + (a6 + a3²/4);
/// this is a b-form when the constant term vanishes.
pub fn complete_square(e: &FunctionFieldCurve) -> Result<BForm> {
    let c = &e.a6 + &quarter(&(&e.a3 * &e.a3));
    if !c.is_zero() {
        return Err(Error::Domain("(0, 0) does not lie on the completed-square model".into()));
    }
    let a = &e.a2 + &quarter(&(&e.a1 * &e.a1));
    let b = &e.a4 + &half(&(&e.a1 * &e.a3));
    Ok(BForm { a, b })
}

/// The image of P on the completed-square model of E.
pub fn to_b_form_point(e: &FunctionFieldCurve, p: &SectionPoint) -> SectionPoint {
    match p {
        SectionPoint::O => SectionPoint::O,
        SectionPoint::Affine { x, y } => SectionPoint::affine(x.clone(), completed_y(e, x, y)),
    }
}

/// Squareness verdicts for Q = (x, y) on y² = x(x² + ax + b): Q ∈ 2E(K) iff
/// x = r² and one of q± = 2x + a ± 2y/r is a square.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HalvingCertificate {
    pub x_square: bool,
    #[serde(skip)]
    pub r: Option<RatFunc>,
    #[serde(skip)]
    pub q_plus: Option<RatFunc>,
    #[serde(skip)]
    pub q_minus: Option<RatFunc>,
    pub q_plus_square: Option<bool>,
    pub q_minus_square: Option<bool>,
    pub halvable: bool,
}

fn check_hypotheses(q: &SectionPoint, e: &BForm) -> Result<(RatFunc, RatFunc)> {
    let SectionPoint::Affine { x, y } = q else {
        return Err(Error::Hypothesis("the criterion needs an affine point".into()));
    };
    if x.is_zero() {
        return Err(Error::Hypothesis("x(Q) = 0".into()));
    }
    if !e.curve()?.contains(q) {
        return Err(Error::NotOnCurve);
    }
    if is_square_ratfunc(&e.two_torsion_discriminant())? {
        return Err(Error::Hypothesis("a^2 - 4b is a square".into()));
    }
    Ok((x.clone(), y.clone()))
}

pub fn can_halve(q: &SectionPoint, e: &BForm) -> Result<HalvingCertificate> {
    let (x, _) = check_hypotheses(q, e)?;
    match sqrt_ratfunc(&x)? {
        Some(r) => can_halve_with_root(q, e, &r),
        None => Ok(HalvingCertificate {
            x_square: false,
            r: None,
            q_plus: None,
            q_minus: None,
            q_plus_square: None,
            q_minus_square: None,
            halvable: false,
        }),
    }
}

/// As `can_halve`, with a given r, r² = x. Swapping r for −r swaps q₊ and q₋.
pub fn can_halve_with_root(q: &SectionPoint, e: &BForm, r: &RatFunc) -> Result<HalvingCertificate> {
    let (x, y) = check_hypotheses(q, e)?;
    if r * r != x {
        return Err(Error::Domain("r^2 != x".into()));
    }
    let base = &(&rf(2) * &x) + &e.a;
    let shift = (&rf(2) * &y).checked_div(r)?;
    let q_plus = &base + &shift;
    let q_minus = &base - &shift;
    let sq = |f: &RatFunc| -> Result<bool> { if f.is_zero() { Ok(true) } else { is_square_ratfunc(f) } };
    let (ps, ms) = (sq(&q_plus)?, sq(&q_minus)?);
    Ok(HalvingCertificate {
        x_square: true,
        r: Some(r.clone()),
        q_plus: Some(q_plus),
        q_minus: Some(q_minus),
        q_plus_square: Some(ps),
        q_minus_square: Some(ms),
        halvable: ps || ms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Poly;
    use crate::mwsections::curve::ec_mul;

    fn poly(c: &[i64]) -> RatFunc {
        RatFunc::from(Poly::from_ints(c))
    }

    fn y18() -> FunctionFieldCurve {
        FunctionFieldCurve::from_int_polys([&[1, -18, 1], &[-1, -18, 1], &[], &[0, 18, -1], &[]]).unwrap()
    }

    fn rho6() -> SectionPoint {
        SectionPoint::affine(poly(&[0, 18, -1]), &poly(&[0, -18, 1]) * &poly(&[1, -18, 1]))
    }

    #[test]
    fn twist_by_minus_three_is_printed_model() {
        let t = quadratic_twist(&y18(), -3).unwrap();
        let want =
            FunctionFieldCurve::from_int_polys([&[1, -18, 1], &[2, 90, -329, 36, -1], &[], &[0, 162, -9], &[]]).unwrap();
        assert_eq!(t.curve, want);
    }

    #[test]
    fn twist_by_one_and_maps() {
        let e = y18();
        let t = quadratic_twist(&e, 1).unwrap();
        assert_eq!(t.curve, e);
        let p = rho6();
        assert_eq!(t.to_base(&t.from_base(&p).unwrap()).unwrap(), p);
        let m3 = quadratic_twist(&e, -3).unwrap();
        let q = m3.from_base(&p).unwrap();
        assert!(m3.curve.contains(&q));
        assert_eq!(m3.to_base(&q).unwrap(), p);
    }

    #[test]
    fn twice_is_isomorphic() {
        let e = FunctionFieldCurve::from_int_polys([&[1, 2], &[0, 1], &[3], &[-1, 0, 1], &[2, 1]]).unwrap();
        for d in [-3, 2, 5, -1] {
            let t1 = quadratic_twist(&e, d).unwrap();
            let t2 = quadratic_twist(&t1.curve, d).unwrap();
            assert_eq!(e.change_coordinates(&t1.twice_isomorphism()).unwrap(), t2.curve, "d = {d}");
        }
        assert!(quadratic_twist(&e, 2).unwrap().from_base(&SectionPoint::affine(rf(0), rf(0))).is_err());
        assert!(quadratic_twist(&e, 12).is_err());
        assert!(quadratic_twist(&e, 0).is_err());
    }

    #[test]
    fn b_form_of_y18() {
        let e = y18();
        let bf = complete_square(&e).unwrap();
        assert_eq!(bf.a, poly(&[-3, -108, 330, -36, 1]).scale(&QuadElem::from_ratio(1, 4)));
        assert_eq!(bf.b, poly(&[0, 18, -1]));
        assert_eq!(bf.curve().unwrap().discriminant(), e.discriminant());
        assert_eq!(complete_square(&bf.curve().unwrap()).unwrap(), bf);
        let p = to_b_form_point(&e, &rho6());
        assert!(bf.curve().unwrap().contains(&p));
    }

    #[test]
    fn two_rho6_is_halvable() {
        let e = y18();
        let bf = complete_square(&e).unwrap();
        let q = to_b_form_point(&e, &ec_mul(2, &rho6(), &e).unwrap());
        let cert = can_halve(&q, &bf).unwrap();
        assert!(cert.x_square && cert.halvable);
        // ρ₆ itself is not twice a point: its x = −σ(σ − 18) is no square
        let cert = can_halve(&to_b_form_point(&e, &rho6()), &bf).unwrap();
        assert!(!cert.x_square && !cert.halvable);
        let zero = SectionPoint::affine(RatFunc::zero(), RatFunc::zero());
        assert!(matches!(can_halve(&zero, &bf), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn adding_two_torsion_in_b_form() {
        let e = y18();
        let bf = complete_square(&e).unwrap();
        let c = bf.curve().unwrap();
        let p = to_b_form_point(&e, &rho6());
        let t = SectionPoint::affine(RatFunc::zero(), RatFunc::zero());
        assert_eq!(bf.add_two_torsion(&p).unwrap(), super::super::curve::ec_add(&p, &t, &c).unwrap());
    }
}
