//! Strategies and property checks shared by the `properties` and
//! `acceptance` targets.

#![allow(dead_code)]

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use k3mahler::exactalg::{is_square_ratfunc, valuation, Place, Poly, QuadElem, RatFunc};
use k3mahler::mahler::{mahler_mc, mahler_quadrature};
use k3mahler::mwsections::{
    can_halve, complete_square, ec_add, ec_mul, p_sigma, to_b_form_point, y18_model, y18_rho6, BForm,
    FunctionFieldCurve, SectionPoint,
};

pub fn quad() -> impl Strategy<Value = QuadElem> {
    (-20i64..=20, -20i64..=20, 1i64..=6).prop_map(|(a, b, d)| {
        let r = |n: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        QuadElem::new(r(a), r(b))
    })
}

pub fn nonzero_quad() -> impl Strategy<Value = QuadElem> {
    quad().prop_filter("nonzero", |a| !a.is_zero())
}

pub fn poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(quad(), 1..=max_deg + 1).prop_map(Poly::new)
}

pub fn nonzero_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    poly(max_deg).prop_filter("nonzero", |p| !p.is_zero())
}

pub fn ratfunc() -> impl Strategy<Value = RatFunc> {
    (poly(3), nonzero_poly(2)).prop_map(|(n, d)| RatFunc::new(n, d).expect("nonzero denominator"))
}

/// Irreducible factors available to factored rational functions: σ − r for
/// small integers r, and σ² + 1, which stays irreducible over Q(√−3).
pub fn factor_places() -> Vec<Poly> {
    let mut v: Vec<Poly> = (-3..=3).map(|r| Poly::linear(&QuadElem::from_int(r))).collect();
    v.push(Poly::from_ints(&[1, 0, 1]));
    v
}

/// c · Π fᵢ^eᵢ over `factor_places`, with exponents in −2..=2.
#[derive(Clone, Debug)]
pub struct Factored {
    pub unit: QuadElem,
    pub exps: Vec<i32>,
}

impl Factored {
    pub fn to_ratfunc(&self) -> RatFunc {
        let mut num = Poly::constant(self.unit.clone());
        let mut den = Poly::one();
        for (f, &e) in factor_places().iter().zip(&self.exps) {
            if e > 0 {
                num = &num * &f.pow(e as u32);
            } else if e < 0 {
                den = &den * &f.pow((-e) as u32);
            }
        }
        RatFunc::new(num, den).expect("nonzero denominator")
    }
}

pub fn factored() -> impl Strategy<Value = Factored> {
    (nonzero_quad(), prop::collection::vec(-2i32..=2, factor_places().len()))
        .prop_map(|(unit, exps)| Factored { unit, exps })
}

fn places() -> Vec<Place> {
    let mut v: Vec<Place> = factor_places().into_iter().map(|f| Place::finite(f).unwrap()).collect();
    v.push(Place::Infinity);
    v
}

pub fn field_laws(a: &QuadElem, b: &QuadElem, c: &QuadElem) -> Result<(), TestCaseError> {
    prop_assert_eq!(&(&(a + b) + c), &(a + &(b + c)));
    prop_assert_eq!(&(&(a * b) * c), &(a * &(b * c)));
    prop_assert_eq!(&(a * &(b + c)), &(&(a * b) + &(a * c)));
    prop_assert_eq!(&(a * b), &(b * a));
    prop_assert_eq!((a * b).conj(), &a.conj() * &b.conj());
    prop_assert_eq!((a * b).norm(), a.norm() * b.norm());
    prop_assert_eq!(a.norm() < BigRational::from_integer(0.into()), false);
    prop_assert_eq!(a.norm() == BigRational::from_integer(0.into()), a.is_zero());
    if !a.is_zero() {
        prop_assert!((a * &a.inv().unwrap()).is_one());
    }
    Ok(())
}

pub fn canonical_form(f: &RatFunc, h: &Poly) -> Result<(), TestCaseError> {
    let g = RatFunc::new(f.num() * h, f.den() * h).unwrap();
    prop_assert_eq!(&g, f);
    prop_assert!(f.den().is_monic());
    Ok(())
}

pub fn valuation_additive(f: &Factored, g: &Factored) -> Result<(), TestCaseError> {
    let (rf, rg) = (f.to_ratfunc(), g.to_ratfunc());
    let prod = &rf * &rg;
    for v in places() {
        let lhs = valuation(&prod, &v).unwrap();
        prop_assert_eq!(lhs, valuation(&rf, &v).unwrap() + valuation(&rg, &v).unwrap(), "at {}", v);
    }
    Ok(())
}

pub fn degree_formula(f: &Factored) -> Result<(), TestCaseError> {
    let r = f.to_ratfunc();
    let total: i64 = places().iter().map(|v| valuation(&r, v).unwrap() * v.degree() as i64).sum();
    prop_assert_eq!(total, 0);
    for (v, &e) in places().iter().zip(&f.exps) {
        prop_assert_eq!(valuation(&r, v).unwrap(), i64::from(e));
    }
    Ok(())
}

pub fn square_verdicts(f: &RatFunc) -> Result<(), TestCaseError> {
    if f.is_zero() {
        return Ok(());
    }
    let sq = f * f;
    prop_assert!(is_square_ratfunc(&sq).unwrap());
    prop_assert!(!is_square_ratfunc(&(&RatFunc::var() * &sq)).unwrap());
    Ok(())
}

/// [i]ρ₆ + [j]p_σ on the k = 18 model for i ∈ 0..6, j ∈ −1..=1.
pub struct Sections {
    pub curve: FunctionFieldCurve,
    pub points: Vec<(i64, i64, SectionPoint)>,
    pub bform: BForm,
}

pub fn sections() -> &'static Sections {
    static S: OnceLock<Sections> = OnceLock::new();
    S.get_or_init(|| {
        let e = y18_model().unwrap();
        let rho = y18_rho6().unwrap();
        let ps = p_sigma().unwrap();
        let mut points = Vec::new();
        for j in -1..=1 {
            let base = ec_mul(j, &ps, &e).unwrap();
            for i in 0..6 {
                points.push((i, j, ec_add(&base, &ec_mul(i, &rho, &e).unwrap(), &e).unwrap()));
            }
        }
        let bform = complete_square(&e).unwrap();
        Sections { curve: e, points, bform }
    })
}

pub fn group_law(a: usize, b: usize, c: usize) -> Result<(), TestCaseError> {
    let s = sections();
    let e = &s.curve;
    let (p, q, r) = (&s.points[a].2, &s.points[b].2, &s.points[c].2);
    let pq = ec_add(p, q, e).unwrap();
    prop_assert_eq!(&pq, &ec_add(q, p, e).unwrap());
    let left = ec_add(&pq, r, e).unwrap();
    let right = ec_add(p, &ec_add(q, r, e).unwrap(), e).unwrap();
    prop_assert!(e.contains(&left));
    prop_assert_eq!(left, right);
    Ok(())
}

/// can_halve(Q) = can_halve(Q + [2]R) for Q = [i]ρ₆ ± p_σ and R from `sections`.
pub fn halving_invariance(q: usize, r: usize) -> Result<(), TestCaseError> {
    let s = sections();
    let nontorsion: Vec<&SectionPoint> = s.points.iter().filter(|(_, j, _)| *j != 0).map(|(_, _, p)| p).collect();
    let q = to_b_form_point(&s.curve, nontorsion[q % nontorsion.len()]);
    let r = to_b_form_point(&s.curve, &s.points[r].2);
    let b = s.bform.curve().unwrap();
    let shifted = ec_add(&q, &ec_mul(2, &r, &b).unwrap(), &b).unwrap();
    let before = can_halve(&q, &s.bform).unwrap();
    let after = can_halve(&shifted, &s.bform).unwrap();
    prop_assert_eq!(before.halvable, after.halvable);
    Ok(())
}

pub fn mc_deterministic(k: f64, seed: u64) -> Result<(), TestCaseError> {
    let a = mahler_mc(k, 20_000, seed).unwrap();
    let b = mahler_mc(k, 20_000, seed).unwrap();
    prop_assert_eq!(a, b);
    Ok(())
}

pub const MC_K: [f64; 5] = [0.0, 3.0, 6.0, 18.0, 100.0];

/// |quadrature − MC| in units of the MC standard error.
pub fn mc_vs_quadrature(k: f64, samples: u64, seed: u64) -> f64 {
    let q = mahler_quadrature(k, 1e-10).unwrap().to_f64();
    let mc = mahler_mc(k, samples, seed).unwrap();
    (q - mc.estimate).abs() / mc.stderr
}

/// Runs `f` on `cases` draws of `strategy` with a fixed seed.
pub fn run<S: Strategy>(
    cases: u32,
    strategy: S,
    f: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    let rng = TestRng::deterministic_rng(RngAlgorithm::ChaCha);
    TestRunner::new_with_rng(config, rng).run(&strategy, f).map_err(|e| e.to_string())
}
