//! Components met by a section in the reducible fibers of the k = 18
//! fibration. Each check replays an explicit change of model and verifies
//! the valuations and memberships it relies on.
//!
//! Singular fibers of y² + (σ²−18σ+1)xy = x³ + (σ²−18σ−1)x² + (−σ²+18σ)x:
//! I₁₂ at σ = ∞, I₂ at σ = 0 and σ = 18, I₃ at the roots of σ²−18σ+1 and
//! I₁ at the roots of σ²−18σ+9.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use serde::Serialize;

use super::curve::{CoordinateChange, FunctionFieldCurve, SectionPoint};
use super::fixtures::fixture;
use super::height::{fiber_type, height, FiberTransform, FiberType, NeronFiberData};
use crate::error::{Error, Result};
use crate::exactalg::{valuation, Place, Poly, QuadElem, RatFunc};

/// Euler characteristic of the K3 surface's structure sheaf.
pub const CHI: u32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Y18Fiber {
    /// σ = ∞, that is s = 0: I₁₂.
    SZero,
    /// σ = 0: I₂.
    SigmaZero,
    /// σ = 18: I₂.
    Sigma18,
    /// The two roots of σ² − 18σ + 1: I₃.
    I3,
    /// The two roots of σ² − 18σ + 9: I₁.
    I1,
}

impl Y18Fiber {
    pub const ALL: [Y18Fiber; 5] = [Y18Fiber::SZero, Y18Fiber::SigmaZero, Y18Fiber::Sigma18, Y18Fiber::I3, Y18Fiber::I1];

    pub fn place(&self) -> Place {
        match self {
            Y18Fiber::SZero => Place::Infinity,
            Y18Fiber::SigmaZero => Place::at(&QuadElem::zero()),
            Y18Fiber::Sigma18 => Place::at(&QuadElem::from_int(18)),
            Y18Fiber::I3 => Place::finite(Poly::from_ints(&[1, -18, 1])).expect("irreducible"),
            Y18Fiber::I1 => Place::finite(Poly::from_ints(&[9, -18, 1])).expect("irreducible"),
        }
    }

    pub fn kodaira_m(&self) -> u32 {
        match self {
            Y18Fiber::SZero => 12,
            Y18Fiber::SigmaZero | Y18Fiber::Sigma18 => 2,
            Y18Fiber::I3 => 3,
            Y18Fiber::I1 => 1,
        }
    }
}

impl fmt::Display for Y18Fiber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Y18Fiber::SZero => "s = 0 (I12)",
            Y18Fiber::SigmaZero => "sigma = 0 (I2)",
            Y18Fiber::Sigma18 => "sigma = 18 (I2)",
            Y18Fiber::I3 => "sigma^2 - 18 sigma + 1 = 0 (I3)",
            Y18Fiber::I1 => "sigma^2 - 18 sigma + 9 = 0 (I1)",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub what: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NeronTranscript {
    pub fiber: Y18Fiber,
    pub kodaira_m: u32,
    pub component: u32,
    /// The reduced point on the special fiber, when it is read off directly.
    #[serde(skip)]
    pub reduction: Option<Vec<QuadElem>>,
    pub checks: Vec<Check>,
    #[serde(skip)]
    pub transform: Option<FiberTransform>,
}

impl NeronTranscript {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn fiber_data(&self) -> Result<NeronFiberData> {
        NeronFiberData::new(self.fiber.place(), self.kodaira_m, self.component, self.transform.clone())
    }
}

struct Log(Vec<Check>);

impl Log {
    fn require(&mut self, pass: bool, what: impl Into<String>) -> Result<()> {
        let what = what.into();
        self.0.push(Check { what: what.clone(), pass });
        if pass {
            Ok(())
        } else {
            Err(Error::CheckFailed(what))
        }
    }
}

fn rf(n: i64) -> RatFunc {
    RatFunc::from_int(n)
}

fn poly(c: &[i64]) -> RatFunc {
    RatFunc::from(Poly::from_ints(c))
}

fn at0() -> Place {
    Place::at(&QuadElem::zero())
}

/// (f/σ^e)(0) for e = v₀(f).
fn leading_at_zero(f: &RatFunc) -> Result<(i64, QuadElem)> {
    let e = valuation(f, &at0())?;
    let g = f * &RatFunc::var().pow(-e as i32)?;
    Ok((e, g.eval(&QuadElem::zero())?))
}

fn val_or_inf(f: &RatFunc, place: &Place) -> Result<i64> {
    if f.is_zero() {
        Ok(i64::MAX)
    } else {
        valuation(f, place)
    }
}

pub fn y18_model() -> Result<FunctionFieldCurve> {
    fixture("y18_model")?.curve()
}

/// The section (−σ(σ−18), σ(σ−18)(σ²−18σ+1)) of order 6.
pub fn y18_rho6() -> Result<SectionPoint> {
    fixture("y18_torsion")?.point("p1")
}

/// The section of infinite order, defined over Q(√−3).
pub fn p_sigma() -> Result<SectionPoint> {
    fixture("p_sigma")?.point("")
}

fn require_fiber(log: &mut Log, e: &FunctionFieldCurve, place: &Place, m: u32, label: &str) -> Result<()> {
    let t = fiber_type(e, place)?;
    log.require(t == FiberType::I(m), format!("{label}: v(c4) = 0 and v(disc) = {m}, found {t:?}"))
}

/// Component of an I_{2h} fiber at σ = 0 of a transformed model with
/// v(a1² + 4a2) = 0, v(a3), v(a4) ≥ h + 1 and v(a6) = 2h. A section
/// (X, Y) = (σ^t f, σ^t g) meets component min(t, h) for t ≥ 0; when
/// t = h, [f(0) : g(0) : 1] lies on the conic Y² + λXY − αX² − γZ² = 0,
/// where λ = a1(0), α = a2(0), γ = (a6/σ^{2h})(0).
fn weierstrass_component(
    log: &mut Log,
    e: &FunctionFieldCurve,
    m: u32,
    conic: [i64; 3],
    point: &SectionPoint,
) -> Result<(u32, Option<Vec<QuadElem>>)> {
    let h = i64::from(m / 2);
    let v = |f: &RatFunc| val_or_inf(f, &at0());
    log.require(v(&(&(&e.a1 * &e.a1) + &(&rf(4) * &e.a2)))? == 0, "v(a1^2 + 4 a2) = 0")?;
    log.require(v(&e.a3)? > h, format!("v(a3) >= {}", h + 1))?;
    log.require(v(&e.a4)? > h, format!("v(a4) >= {}", h + 1))?;
    log.require(v(&e.a6)? == 2 * h, format!("v(a6) = {}", 2 * h))?;
    let j = e.j_invariant()?;
    log.require(v(&j)? == -2 * h, format!("v(j) = -{}", 2 * h))?;
    let lam = e.a1.eval(&QuadElem::zero())?;
    let alpha = e.a2.eval(&QuadElem::zero())?;
    let (_, gamma) = leading_at_zero(&e.a6)?;
    let printed = conic.map(QuadElem::from_int);
    log.require(
        lam == printed[0] && -&alpha == printed[1] && -&gamma == printed[2],
        format!("special conic Y^2 + {}XY + {}X^2 + {}Z^2", printed[0], printed[1], printed[2]),
    )?;
    let SectionPoint::Affine { x, y } = point else { return Ok((0, None)) };
    let t = v(x)?.min(v(y)?);
    if t <= 0 {
        return Ok((0, None));
    }
    if t < h {
        return Ok((t as u32, None));
    }
    log.require(t == h, format!("section valuation {t} = {h}"))?;
    let scale = RatFunc::var().pow(-h as i32)?;
    let f0 = (x * &scale).eval(&QuadElem::zero())?;
    let g0 = (y * &scale).eval(&QuadElem::zero())?;
    let on = &(&(&g0 * &g0) + &(&(&lam * &f0) * &g0)) - &(&(&alpha * &f0) * &f0);
    log.require((&on - &gamma).is_zero(), format!("[{f0} : {g0} : 1] on the special conic"))?;
    Ok((h as u32, Some(vec![f0, g0])))
}

/// Polynomials in x, y, z over K, for checking projective changes of model.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
struct Tri(BTreeMap<[u32; 3], RatFunc>);

impl Tri {
    fn linear(c: &[RatFunc; 3]) -> Tri {
        let mut t = Tri::default();
        for (i, ci) in c.iter().enumerate() {
            let mut e = [0; 3];
            e[i] = 1;
            t.add_term(e, ci.clone());
        }
        t
    }

    fn monomial(e: [u32; 3], c: RatFunc) -> Tri {
        let mut t = Tri::default();
        t.add_term(e, c);
        t
    }

    fn add_term(&mut self, e: [u32; 3], c: RatFunc) {
        let v = self.0.remove(&e).map_or(c.clone(), |old| &old + &c);
        if !v.is_zero() {
            self.0.insert(e, v);
        }
    }

    fn add(&self, o: &Tri) -> Tri {
        let mut t = self.clone();
        for (e, c) in &o.0 {
            t.add_term(*e, c.clone());
        }
        t
    }

    fn mul(&self, o: &Tri) -> Tri {
        let mut t = Tri::default();
        for (e1, c1) in &self.0 {
            for (e2, c2) in &o.0 {
                t.add_term([e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]], c1 * c2);
            }
        }
        t
    }

    fn scale(&self, c: &RatFunc) -> Tri {
        Tri(self.0.iter().map(|(e, v)| (*e, v * c)).filter(|(_, v)| !v.is_zero()).collect())
    }
}

/// (X : Y : Z) = (−y − Ax : y : x + bz), b = σ² − 18σ.
fn cubic_rows() -> [[RatFunc; 3]; 3] {
    let a = poly(&[1, -18, 1]);
    let b = poly(&[0, -18, 1]);
    [[-a, rf(-1), rf(0)], [rf(0), rf(1), rf(0)], [rf(1), rf(0), b]]
}

fn to_cubic(p: &SectionPoint) -> [RatFunc; 3] {
    let rows = cubic_rows();
    let v = match p {
        SectionPoint::O => [rf(0), rf(1), rf(0)],
        SectionPoint::Affine { x, y } => [x.clone(), y.clone(), rf(1)],
    };
    rows.map(|r| &(&(&r[0] * &v[0]) + &(&r[1] * &v[1])) + &(&r[2] * &v[2]))
}

/// Checks that the change of model takes the Weierstrass cubic to a
/// K*-multiple of the plane cubic; returns the multiplier.
fn verify_cubic_change(log: &mut Log, e: &FunctionFieldCurve) -> Result<RatFunc> {
    let rows = cubic_rows();
    let [xl, yl, zl] = rows.each_ref().map(Tri::linear);
    let a = poly(&[1, -18, 1]);
    let c = xl.add(&yl).mul(&xl.add(&zl)).mul(&yl.add(&zl)).add(&xl.mul(&yl).mul(&zl).scale(&a));
    // y²z + a1xyz + a3yz² − x³ − a2x²z − a4xz² − a6z³
    let w = [
        ([0, 2, 1], rf(1)),
        ([1, 1, 1], e.a1.clone()),
        ([0, 1, 2], e.a3.clone()),
        ([3, 0, 0], rf(-1)),
        ([2, 0, 1], -&e.a2),
        ([1, 0, 2], -&e.a4),
        ([0, 0, 3], -&e.a6),
    ]
    .into_iter()
    .fold(Tri::default(), |acc, (m, c)| acc.add(&Tri::monomial(m, c)));
    let lambda = c.0.get(&[0, 2, 1]).cloned().unwrap_or_else(RatFunc::zero);
    log.require(!lambda.is_zero() && c == w.scale(&lambda), "cubic change maps the model onto (X+Y)(X+Z)(Y+Z) + A XYZ")?;
    Ok(lambda)
}

/// Coordinates divided by the uniformizer power making them integral and not all divisible.
fn normalize(coords: &[RatFunc; 3], place: &Place) -> Result<[RatFunc; 3]> {
    let e = coords.iter().map(|c| val_or_inf(c, place)).collect::<Result<Vec<_>>>()?;
    let m = *e.iter().min().expect("three coordinates");
    let Place::Finite { poly: pi, .. } = place else {
        return Err(Error::InvalidPlace("normalization needs a finite place".into()));
    };
    let s = RatFunc::from(pi.clone()).pow(-(m as i32))?;
    Ok(coords.clone().map(|c| &c * &s))
}

fn check_s_zero(p: &SectionPoint) -> Result<NeronTranscript> {
    let mut log = Log(Vec::new());
    let e = y18_model()?;
    let es = e.reciprocal_chart();
    log.require(es == fixture("y18_model_s")?.curve()?, "model around s = 0 from x(s) = s^4 x(1/s), y(s) = s^6 y(1/s)")?;
    require_fiber(&mut log, &es, &at0(), 12, "s = 0")?;
    let s = poly(&[0, 1]);
    let change = CoordinateChange::new(rf(1), poly(&[0, 0, 0, 0, 0, 0, 2]), -&s, poly(&[0, 0, 0, 0, 0, 0, -1, -2]));
    let et = es.change_coordinates(&change)?;
    log.require(et == fixture("neron_s0")?.curve()?, "x = X + 2s^6, y = Y - sX - 2s^7 - s^6 gives the recorded model")?;
    let q = change.apply(&p.reciprocal_chart())?;
    let (j, reduction) = weierstrass_component(&mut log, &et, 12, [1, 0, 1], &q)?;
    Ok(NeronTranscript {
        fiber: Y18Fiber::SZero,
        kodaira_m: 12,
        component: j,
        reduction,
        checks: log.0,
        transform: Some(FiberTransform::Weierstrass { reciprocal: true, change }),
    })
}

fn check_sigma_zero(p: &SectionPoint) -> Result<NeronTranscript> {
    let mut log = Log(Vec::new());
    let e = y18_model()?;
    require_fiber(&mut log, &e, &at0(), 2, "sigma = 0")?;
    let change = CoordinateChange::new(
        RatFunc::constant(QuadElem::from_ratio(1, 3)),
        poly(&[0, 12]),
        rf(1),
        poly(&[0, -6]),
    );
    let et = e.change_coordinates(&change)?;
    log.require(et == fixture("neron_sigma0")?.curve()?, "x = X/9 + 12 sigma, y = Y/27 + X/9 - 6 sigma gives the recorded model")?;
    let q = change.apply(p)?;
    let (j, reduction) = weierstrass_component(&mut log, &et, 2, [9, 27, -78732], &q)?;
    Ok(NeronTranscript {
        fiber: Y18Fiber::SigmaZero,
        kodaira_m: 2,
        component: j,
        reduction,
        checks: log.0,
        transform: Some(FiberTransform::Weierstrass { reciprocal: false, change }),
    })
}

fn check_sigma18(p: &SectionPoint) -> Result<NeronTranscript> {
    let mut log = Log(Vec::new());
    let e = y18_model()?;
    let place = Y18Fiber::Sigma18.place();
    require_fiber(&mut log, &e, &place, 2, "sigma = 18")?;
    verify_cubic_change(&mut log, &e)?;
    let r18 = QuadElem::from_int(18);
    // At σ = 18, A = 1 and the cubic is (X+Y+Z)(XY+XZ+YZ).
    let line = |v: &[QuadElem; 3]| &(&v[0] + &v[1]) + &v[2];
    let conic = |v: &[QuadElem; 3]| &(&(&v[0] * &v[1]) + &(&v[0] * &v[2])) + &(&v[1] * &v[2]);
    let reduce = |q: &SectionPoint| -> Result<[QuadElem; 3]> {
        let n = normalize(&to_cubic(q), &place)?;
        let [a, b, c] = n.each_ref().map(|f| f.eval(&r18));
        Ok([a?, b?, c?])
    };
    let o = reduce(&SectionPoint::O)?;
    log.require(line(&o).is_zero() && !conic(&o).is_zero(), "O reduces to [-1 : 1 : 0] on the line X+Y+Z = 0, which is Theta_0")?;
    let mut component = 0;
    let mut reduction = None;
    if let SectionPoint::Affine { x, .. } = p {
        let [cx, cy, cz] = to_cubic(p);
        // XY + XZ + YZ = −x(x + b)² identically, so in the chart Z = 1 it is −x.
        if !cz.is_zero() {
            let form = (&(&(&cx * &cy) + &(&cx * &cz)) + &(&cy * &cz)).checked_div(&(&cz * &cz))?;
            log.require(form == -x, "(XY + XZ + YZ)/Z^2 = -x on the section")?;
        }
        let v = reduce(p)?;
        let (on_line, on_conic) = (line(&v).is_zero(), conic(&v).is_zero());
        log.require(on_line != on_conic, format!("[{} : {} : {}] avoids the singular points", v[0], v[1], v[2]))?;
        component = u32::from(on_conic);
        reduction = Some(v.to_vec());
    }
    Ok(NeronTranscript {
        fiber: Y18Fiber::Sigma18,
        kodaira_m: 2,
        component,
        reduction,
        checks: log.0,
        transform: Some(FiberTransform::PlaneCubic { rows: cubic_rows() }),
    })
}

fn check_i3(p: &SectionPoint) -> Result<NeronTranscript> {
    let mut log = Log(Vec::new());
    let e = y18_model()?;
    let place = Y18Fiber::I3.place();
    require_fiber(&mut log, &e, &place, 3, "sigma^2 - 18 sigma + 1")?;
    verify_cubic_change(&mut log, &e)?;
    // Where A = 0 the cubic is the triangle (X+Y)(X+Z)(Y+Z).
    let lines = |v: &[RatFunc; 3]| -> Result<[bool; 3]> {
        let l = [&v[0] + &v[1], &v[0] + &v[2], &v[1] + &v[2]];
        let [a, b, c] = l.each_ref().map(|f| val_or_inf(f, &place).map(|e| e > 0));
        Ok([a?, b?, c?])
    };
    let o = lines(&normalize(&to_cubic(&SectionPoint::O), &place)?)?;
    log.require(o == [true, false, false], "O lies on X+Y = 0 only, which is Theta_0")?;
    let mut component = 0;
    if !p.is_zero() {
        let on = lines(&normalize(&to_cubic(p), &place)?)?;
        log.require(on.iter().filter(|b| **b).count() == 1, "section avoids the vertices of the triangle")?;
        // The two other lines are labeled 1 and 2; both contribute 2/3.
        component = on.iter().position(|b| *b).expect("one line") as u32;
    }
    Ok(NeronTranscript {
        fiber: Y18Fiber::I3,
        kodaira_m: 3,
        component,
        reduction: None,
        checks: log.0,
        transform: Some(FiberTransform::PlaneCubic { rows: cubic_rows() }),
    })
}

fn check_i1() -> Result<NeronTranscript> {
    let mut log = Log(Vec::new());
    let e = y18_model()?;
    require_fiber(&mut log, &e, &Y18Fiber::I1.place(), 1, "sigma^2 - 18 sigma + 9")?;
    Ok(NeronTranscript { fiber: Y18Fiber::I1, kodaira_m: 1, component: 0, reduction: None, checks: log.0, transform: None })
}

/// The component of `fiber` met by P, with the checks that certify it.
/// Any failed check is returned as an error.
pub fn neron_component_check(fiber: Y18Fiber, p: &SectionPoint) -> Result<NeronTranscript> {
    if !y18_model()?.contains(p) {
        return Err(Error::NotOnCurve);
    }
    match fiber {
        Y18Fiber::SZero => check_s_zero(p),
        Y18Fiber::SigmaZero => check_sigma_zero(p),
        Y18Fiber::Sigma18 => check_sigma18(p),
        Y18Fiber::I3 => check_i3(p),
        Y18Fiber::I1 => check_i1(),
    }
}

pub fn y18_transcripts(p: &SectionPoint) -> Result<Vec<NeronTranscript>> {
    Y18Fiber::ALL.iter().map(|f| neron_component_check(*f, p)).collect()
}

/// h(P) on the k = 18 surface from the five transcripts.
pub fn y18_height(p: &SectionPoint) -> Result<BigRational> {
    let fibers = y18_transcripts(p)?.iter().map(NeronTranscript::fiber_data).collect::<Result<Vec<_>>>()?;
    height(p, CHI, &fibers)
}
