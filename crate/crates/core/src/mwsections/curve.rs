//! Long Weierstrass curves over Q(√−3)(σ) and their group law.

use std::fmt;

use crate::error::{Error, Result};
use crate::exactalg::{Poly, QuadElem, RatFunc};

/// y² + a1·xy + a3·y = x³ + a2·x² + a4·x + a6 with coefficients in Q(√−3)(σ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionFieldCurve {
    pub a1: RatFunc,
    pub a2: RatFunc,
    pub a3: RatFunc,
    pub a4: RatFunc,
    pub a6: RatFunc,
}

/// A section: the zero section O or an affine point over K = Q(√−3)(σ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SectionPoint {
    O,
    Affine { x: RatFunc, y: RatFunc },
}

/// x = u²x′ + r, y = u³y′ + s·u²x′ + t, taking the old model to the new one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateChange {
    pub u: RatFunc,
    pub r: RatFunc,
    pub s: RatFunc,
    pub t: RatFunc,
}

fn rf(n: i64) -> RatFunc {
    RatFunc::from_int(n)
}

impl FunctionFieldCurve {
    /// Rejects curves whose discriminant vanishes identically.
    pub fn new(a: [RatFunc; 5]) -> Result<Self> {
        let [a1, a2, a3, a4, a6] = a;
        let e = FunctionFieldCurve { a1, a2, a3, a4, a6 };
        if e.discriminant().is_zero() {
            return Err(Error::Singular("discriminant vanishes identically".into()));
        }
        Ok(e)
    }

    /// Coefficients given as integer polynomials in σ, lowest degree first.
    pub fn from_int_polys(a: [&[i64]; 5]) -> Result<Self> {
        FunctionFieldCurve::new(a.map(|c| RatFunc::from(Poly::from_ints(c))))
    }

    pub fn coeffs(&self) -> [&RatFunc; 5] {
        [&self.a1, &self.a2, &self.a3, &self.a4, &self.a6]
    }

    pub fn b2(&self) -> RatFunc {
        &(&self.a1 * &self.a1) + &(&rf(4) * &self.a2)
    }

    pub fn b4(&self) -> RatFunc {
        &(&self.a1 * &self.a3) + &(&rf(2) * &self.a4)
    }

    pub fn b6(&self) -> RatFunc {
        &(&self.a3 * &self.a3) + &(&rf(4) * &self.a6)
    }

    pub fn b8(&self) -> RatFunc {
        let (a1, a2, a3, a4, a6) = (&self.a1, &self.a2, &self.a3, &self.a4, &self.a6);
        &(&(&(&(a1 * a1) * a6) + &(&(&rf(4) * a2) * a6)) - &(&(a1 * a3) * a4)) + &(&(&(a2 * a3) * a3) - &(a4 * a4))
    }

    pub fn c4(&self) -> RatFunc {
        let b2 = self.b2();
        &(&b2 * &b2) - &(&rf(24) * &self.b4())
    }

    pub fn c6(&self) -> RatFunc {
        let (b2, b4, b6) = (self.b2(), self.b4(), self.b6());
        &(&(-(&(&b2 * &b2) * &b2)) + &(&(&rf(36) * &b2) * &b4)) - &(&rf(216) * &b6)
    }

    pub fn discriminant(&self) -> RatFunc {
        let (b2, b4, b6, b8) = (self.b2(), self.b4(), self.b6(), self.b8());
        let t1 = &(&b2 * &b2) * &b8;
        let t2 = &(&rf(8) * &b4) * &(&b4 * &b4);
        let t3 = &(&rf(27) * &b6) * &b6;
        let t4 = &(&(&rf(9) * &b2) * &b4) * &b6;
        &(&(&(-t1) - &t2) - &t3) + &t4
    }

    pub fn j_invariant(&self) -> Result<RatFunc> {
        let c4 = self.c4();
        (&(&c4 * &c4) * &c4).checked_div(&self.discriminant())
    }

    /// Left side minus right side of the equation at (x, y).
    fn defect(&self, x: &RatFunc, y: &RatFunc) -> RatFunc {
        let lhs = &(y * y) + &(&(&(&self.a1 * x) + &self.a3) * y);
        let rhs = &(&(&(&(x + &self.a2) * x) + &self.a4) * x) + &self.a6;
        &lhs - &rhs
    }

    pub fn contains(&self, p: &SectionPoint) -> bool {
        match p {
            SectionPoint::O => true,
            SectionPoint::Affine { x, y } => self.defect(x, y).is_zero(),
        }
    }

    /// −(x, y) = (x, −y − a1·x − a3).
    pub fn neg(&self, p: &SectionPoint) -> SectionPoint {
        match p {
            SectionPoint::O => SectionPoint::O,
            SectionPoint::Affine { x, y } => {
                SectionPoint::Affine { x: x.clone(), y: &(&(-y) - &(&self.a1 * x)) - &self.a3 }
            }
        }
    }

    /// Chord and tangent addition without the on-curve check.
    fn add_unchecked(&self, p: &SectionPoint, q: &SectionPoint) -> Result<SectionPoint> {
        let (x1, y1, x2, y2) = match (p, q) {
            (SectionPoint::O, _) => return Ok(q.clone()),
            (_, SectionPoint::O) => return Ok(p.clone()),
            (SectionPoint::Affine { x: x1, y: y1 }, SectionPoint::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let lambda = if x1 != x2 {
            (y2 - y1).checked_div(&(x2 - x1))?
        } else {
            let den = &(&(&rf(2) * y1) + &(&self.a1 * x1)) + &self.a3;
            if y1 != y2 || den.is_zero() {
                return Ok(SectionPoint::O);
            }
            let num = &(&(&(&(&rf(3) * x1) * x1) + &(&(&rf(2) * &self.a2) * x1)) + &self.a4) - &(&self.a1 * y1);
            num.checked_div(&den)?
        };
        let nu = y1 - &(&lambda * x1);
        let x3 = &(&(&(&(&lambda * &lambda) + &(&self.a1 * &lambda)) - &self.a2) - x1) - x2;
        let y3 = &(&(-(&(&lambda + &self.a1) * &x3)) - &nu) - &self.a3;
        Ok(SectionPoint::Affine { x: x3, y: y3 })
    }

    fn mul_unchecked(&self, n: i64, p: &SectionPoint) -> Result<SectionPoint> {
        let mut base = if n < 0 { self.neg(p) } else { p.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = SectionPoint::O;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.add_unchecked(&acc, &base)?;
            }
            e >>= 1;
            if e > 0 {
                base = self.add_unchecked(&base, &base)?;
            }
        }
        Ok(acc)
    }

    /// The new model after the substitution `c`.
    pub fn change_coordinates(&self, c: &CoordinateChange) -> Result<FunctionFieldCurve> {
        let (a1, a2, a3, a4, a6) = (&self.a1, &self.a2, &self.a3, &self.a4, &self.a6);
        let (u, r, s, t) = (&c.u, &c.r, &c.s, &c.t);
        if u.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n1 = a1 + &(&rf(2) * s);
        let n2 = &(&(a2 - &(s * a1)) + &(&rf(3) * r)) - &(s * s);
        let n3 = &(a3 + &(r * a1)) + &(&rf(2) * t);
        let n4 = &(&(&(&(a4 - &(s * a3)) + &(&(&rf(2) * r) * a2)) - &(&(t + &(r * s)) * a1)) + &(&(&rf(3) * r) * r))
            - &(&(&rf(2) * s) * t);
        let n6 = &(&(&(&(&(a6 + &(r * a4)) + &(&(r * r) * a2)) + &(&(r * r) * r)) - &(t * a3)) - &(t * t))
            - &(&(r * t) * a1);
        let u2 = u * u;
        let u3 = &u2 * u;
        let u4 = &u2 * &u2;
        let u6 = &u3 * &u3;
        FunctionFieldCurve::new([
            n1.checked_div(u)?,
            n2.checked_div(&u2)?,
            n3.checked_div(&u3)?,
            n4.checked_div(&u4)?,
            n6.checked_div(&u6)?,
        ])
    }

    /// The model in the chart s = 1/σ: a_i ↦ s^{2i}·a_i(1/s), the
    /// normalization of a surface with χ = 2.
    pub fn reciprocal_chart(&self) -> FunctionFieldCurve {
        FunctionFieldCurve {
            a1: self.a1.reciprocal_chart(2),
            a2: self.a2.reciprocal_chart(4),
            a3: self.a3.reciprocal_chart(6),
            a4: self.a4.reciprocal_chart(8),
            a6: self.a6.reciprocal_chart(12),
        }
    }

    /// The curve over Q(√−3) at σ = σ0, if every coefficient is defined there.
    pub fn specialize(&self, s0: &QuadElem) -> Result<FunctionFieldCurve> {
        let a = self.coeffs().map(|c| c.eval(s0).map(RatFunc::constant));
        let [a1, a2, a3, a4, a6] = a;
        Ok(FunctionFieldCurve { a1: a1?, a2: a2?, a3: a3?, a4: a4?, a6: a6? })
    }
}

impl fmt::Display for FunctionFieldCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "y^2 + ({})xy + ({})y = x^3 + ({})x^2 + ({})x + ({})",
            self.a1, self.a3, self.a2, self.a4, self.a6
        )
    }
}

impl SectionPoint {
    pub fn affine(x: RatFunc, y: RatFunc) -> Self {
        SectionPoint::Affine { x, y }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, SectionPoint::O)
    }

    pub fn x(&self) -> Option<&RatFunc> {
        match self {
            SectionPoint::O => None,
            SectionPoint::Affine { x, .. } => Some(x),
        }
    }

    pub fn y(&self) -> Option<&RatFunc> {
        match self {
            SectionPoint::O => None,
            SectionPoint::Affine { y, .. } => Some(y),
        }
    }

    /// Coordinates in the chart s = 1/σ: x ↦ s⁴x(1/s), y ↦ s⁶y(1/s).
    pub fn reciprocal_chart(&self) -> SectionPoint {
        match self {
            SectionPoint::O => SectionPoint::O,
            SectionPoint::Affine { x, y } => SectionPoint::Affine { x: x.reciprocal_chart(4), y: y.reciprocal_chart(6) },
        }
    }

    /// The point at σ = σ0; a pole of x there means the section meets O.
    pub fn specialize(&self, s0: &QuadElem) -> Result<SectionPoint> {
        match self {
            SectionPoint::O => Ok(SectionPoint::O),
            SectionPoint::Affine { x, y } => {
                if x.den().eval(s0).is_zero() {
                    return Ok(SectionPoint::O);
                }
                Ok(SectionPoint::Affine { x: RatFunc::constant(x.eval(s0)?), y: RatFunc::constant(y.eval(s0)?) })
            }
        }
    }

    pub fn conj(&self) -> SectionPoint {
        match self {
            SectionPoint::O => SectionPoint::O,
            SectionPoint::Affine { x, y } => SectionPoint::Affine { x: x.conj(), y: y.conj() },
        }
    }
}

impl fmt::Display for SectionPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SectionPoint::O => write!(f, "O"),
            SectionPoint::Affine { x, y } => write!(f, "({x}, {y})"),
        }
    }
}

impl CoordinateChange {
    pub fn new(u: RatFunc, r: RatFunc, s: RatFunc, t: RatFunc) -> Self {
        CoordinateChange { u, r, s, t }
    }

    pub fn identity() -> Self {
        CoordinateChange::new(RatFunc::one(), RatFunc::zero(), RatFunc::zero(), RatFunc::zero())
    }

    /// Old coordinates to new: x′ = (x − r)/u², y′ = (y − s(x − r) − t)/u³.
    pub fn apply(&self, p: &SectionPoint) -> Result<SectionPoint> {
        match p {
            SectionPoint::O => Ok(SectionPoint::O),
            SectionPoint::Affine { x, y } => {
                let u2 = &self.u * &self.u;
                let u3 = &u2 * &self.u;
                let xr = x - &self.r;
                let yn = &(y - &(&self.s * &xr)) - &self.t;
                Ok(SectionPoint::Affine { x: xr.checked_div(&u2)?, y: yn.checked_div(&u3)? })
            }
        }
    }

    /// New coordinates back to old.
    pub fn invert(&self, p: &SectionPoint) -> SectionPoint {
        match p {
            SectionPoint::O => SectionPoint::O,
            SectionPoint::Affine { x, y } => {
                let u2 = &self.u * &self.u;
                let u3 = &u2 * &self.u;
                let x_old = &(&u2 * x) + &self.r;
                let y_old = &(&(&u3 * y) + &(&(&self.s * &u2) * x)) + &self.t;
                SectionPoint::Affine { x: x_old, y: y_old }
            }
        }
    }
}

/// P + Q on E; both inputs must lie on E.
pub fn ec_add(p: &SectionPoint, q: &SectionPoint, e: &FunctionFieldCurve) -> Result<SectionPoint> {
    if !e.contains(p) || !e.contains(q) {
        return Err(Error::NotOnCurve);
    }
    e.add_unchecked(p, q)
}

/// [n]P on E, for any integer n.
pub fn ec_mul(n: i64, p: &SectionPoint, e: &FunctionFieldCurve) -> Result<SectionPoint> {
    if !e.contains(p) {
        return Err(Error::NotOnCurve);
    }
    e.mul_unchecked(n, p)
}

pub fn ec_neg(p: &SectionPoint, e: &FunctionFieldCurve) -> Result<SectionPoint> {
    if !e.contains(p) {
        return Err(Error::NotOnCurve);
    }
    Ok(e.neg(p))
}

/// Exact check of the Weierstrass equation.
pub fn verify_on_curve(p: &SectionPoint, e: &FunctionFieldCurve) -> bool {
    e.contains(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> RatFunc {
        RatFunc::from(Poly::from_ints(c))
    }

    fn y18() -> FunctionFieldCurve {
        FunctionFieldCurve::from_int_polys([&[1, -18, 1], &[-1, -18, 1], &[], &[0, 18, -1], &[]]).unwrap()
    }

    fn rho6() -> SectionPoint {
        // (−σ(σ−18), σ(σ−18)(σ²−18σ+1))
        SectionPoint::affine(poly(&[0, 18, -1]), &poly(&[0, -18, 1]) * &poly(&[1, -18, 1]))
    }

    #[test]
    fn constant_curve_point() {
        let e = FunctionFieldCurve::from_int_polys([&[], &[], &[], &[], &[1]]).unwrap();
        let p = SectionPoint::affine(rf(0), rf(1));
        assert!(verify_on_curve(&p, &e));
        assert!(!verify_on_curve(&SectionPoint::affine(rf(1), rf(1)), &e));
        // (0, 1) has order 3 on y² = x³ + 1
        assert_eq!(ec_mul(3, &p, &e).unwrap(), SectionPoint::O);
        assert_ne!(ec_mul(2, &p, &e).unwrap(), SectionPoint::O);
    }

    #[test]
    fn rho6_multiples() {
        let e = y18();
        let p = rho6();
        assert!(e.contains(&p));
        assert_eq!(ec_mul(3, &p, &e).unwrap(), SectionPoint::affine(rf(0), rf(0)));
        assert_eq!(ec_mul(2, &p, &e).unwrap(), SectionPoint::affine(rf(1), poly(&[-1, 18, -1])));
        assert_eq!(ec_mul(6, &p, &e).unwrap(), SectionPoint::O);
        assert_eq!(ec_mul(-1, &p, &e).unwrap(), ec_mul(5, &p, &e).unwrap());
    }

    #[test]
    fn off_curve_rejected() {
        let e = y18();
        let bad = SectionPoint::affine(rf(2), rf(3));
        assert_eq!(ec_add(&bad, &rho6(), &e), Err(Error::NotOnCurve));
        assert_eq!(ec_mul(2, &bad, &e), Err(Error::NotOnCurve));
    }

    #[test]
    fn singular_model_rejected() {
        assert!(FunctionFieldCurve::from_int_polys([&[], &[], &[], &[], &[]]).is_err());
    }

    #[test]
    fn coordinate_change_round_trip() {
        let e = y18();
        let c = CoordinateChange::new(rf(3), poly(&[1, 2]), poly(&[0, 1]), poly(&[5, 0, 1]));
        let e2 = e.change_coordinates(&c).unwrap();
        let p = rho6();
        let q = c.apply(&p).unwrap();
        assert!(e2.contains(&q));
        assert_eq!(c.invert(&q), p);
        // j is invariant and Δ scales by u^{-12}
        assert_eq!(e2.j_invariant().unwrap(), e.j_invariant().unwrap());
        assert_eq!(e2.discriminant(), e.discriminant().scale(&QuadElem::from_int(3).pow(12).inv().unwrap()));
        // the group law commutes with the change
        let two = ec_mul(2, &p, &e).unwrap();
        assert_eq!(ec_mul(2, &q, &e2).unwrap(), c.apply(&two).unwrap());
    }

    #[test]
    fn reciprocal_chart_is_involution() {
        let e = y18();
        assert_eq!(e.reciprocal_chart().reciprocal_chart(), e);
        assert!(e.reciprocal_chart().contains(&rho6().reciprocal_chart()));
    }
}
