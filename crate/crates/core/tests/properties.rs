mod common;

use common::*;
use proptest::prelude::*;

use k3mahler::arith::{kronecker, primes_up_to};
use k3mahler::exactalg::Poly;
use k3mahler::lattices::{fiber_table, orthocomplement, shioda_rank, tau_table, GramLattice};
use k3mahler::lfunctions::{form_coefficients, hecke_lvalue, QuadFormSeries};
use k3mahler::mahler::eta::{eta, eta_truncated};
use k3mahler::mahler::mahler_quadrature;
use k3mahler::numeric::BigComplex;
use k3mahler::pointcount::{a_p_default, bad_primes, count_fiber_points_with, surface_data, Chart, CountMode, P1};

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(cfg(64))]

    #[test]
    fn quad_field_axioms(a in quad(), b in quad(), c in quad()) {
        field_laws(&a, &b, &c)?;
    }

    #[test]
    fn ratfunc_canonical_form(f in ratfunc(), h in nonzero_poly(2)) {
        canonical_form(&f, &h)?;
    }

    #[test]
    fn valuation_is_additive(f in factored(), g in factored()) {
        valuation_additive(&f, &g)?;
    }

    #[test]
    fn degree_formula_holds(f in factored()) {
        degree_formula(&f)?;
    }

    #[test]
    fn gcd_recovers_common_factor(a in nonzero_poly(2), b in nonzero_poly(2), c in nonzero_poly(2)) {
        let g = Poly::gcd(&(&a * &c), &(&b * &c));
        prop_assert!(g.is_monic());
        prop_assert!((&a * &c).div_rem(&g).unwrap().1.is_zero());
        prop_assert!((&b * &c).div_rem(&g).unwrap().1.is_zero());
        prop_assert!(g.div_rem(&c).unwrap().1.is_zero());
    }
}

proptest! {
    #![proptest_config(cfg(24))]

    #[test]
    fn squares_and_non_squares(f in ratfunc()) {
        square_verdicts(&f)?;
    }

    #[test]
    fn mc_same_seed_same_estimate(k in -20i32..=20, seed in any::<u64>()) {
        mc_deterministic(f64::from(k), seed)?;
    }

    #[test]
    fn mahler_measure_is_even(k in 0u32..=400) {
        let k = f64::from(k) / 10.0;
        let a = mahler_quadrature(k, 1e-9).unwrap();
        let b = mahler_quadrature(-k, 1e-9).unwrap();
        prop_assert!(a.abs_diff(&b) <= a.error_bound() + b.error_bound() + 1e-12);
    }
}

// Sums reach [3]p_σ; each case takes seconds.
proptest! {
    #![proptest_config(cfg(10))]

    #[test]
    fn group_law_on_small_sections(a in 0usize..18, b in 0usize..18, c in 0usize..18) {
        group_law(a, b, c)?;
    }

    #[test]
    fn halving_ignores_doubles(q in 0usize..12, r in 0usize..18) {
        halving_invariance(q, r)?;
    }
}

#[test]
fn quadrature_agrees_with_mc() {
    for k in MC_K {
        let z = mc_vs_quadrature(k, 1 << 20, 7);
        assert!(z < 4.0, "k = {k}: {z:.2} standard errors");
    }
}

#[test]
fn mahler_measure_increases_past_six() {
    let values: Vec<f64> = (0..=30).map(|i| mahler_quadrature(6.0 + f64::from(i), 1e-10).unwrap().to_f64()).collect();
    assert!(values.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn eta_truncation_converges() {
    let prec = 128;
    for (re, im) in [(0.0, 0.41), (-0.25, 0.32), (0.3, 1.2)] {
        let tau = BigComplex::from_f64(re, im, prec);
        let full = eta(&tau, prec).unwrap();
        let n = (prec as f64 / (2.0 * std::f64::consts::PI * im * std::f64::consts::LOG2_E)).ceil() as usize + 8;
        let doubled = eta_truncated(&tau, prec, 2 * n).unwrap();
        assert!(full.dist_f64(&doubled) < 2f64.powi(-(prec as i32) + 4), "tau = {re} + {im}i");
    }
}

#[test]
fn tau_relation_and_orthocomplement() {
    for k in [3, 6, 18] {
        let rec = tau_table(k).unwrap();
        assert!(rec.relation_value().is_zero());
        let v = rec.algebraic_vector();
        let amb = GramLattice::ambient();
        let o = orthocomplement(&amb, &v).unwrap();
        for w in &o.basis {
            assert_eq!(amb.inner(w, &v), 0);
        }
        // Saturation: every short vector orthogonal to v lies in the span.
        for a in -4i64..=4 {
            for b in -4i64..=4 {
                for c in -4i64..=4 {
                    let w = [a, b, c];
                    if amb.inner(&w, &v) == 0 {
                        assert!(k3mahler::lattices::lattice_contains(&o.basis, &w), "k = {k}, {w:?}");
                    }
                }
            }
        }
        let fibers = fiber_table(k).unwrap();
        let euler: i64 = fibers.components().iter().map(|&m| i64::from(m) - 1).sum();
        assert_eq!(shioda_rank(20, &fibers).unwrap() + 2 + euler, 20);
    }
}

const DISCS: [i64; 3] = [-15, -24, -120];

#[test]
fn inert_primes_vanish_in_form_series() {
    for d in DISCS {
        let c = form_coefficients(&QuadFormSeries::for_discriminant(d).unwrap(), 200).unwrap();
        for p in primes_up_to(200) {
            if kronecker(d, p as i64) == -1 {
                assert_eq!(c.get(p as usize), Some(0), "d = {d}, p = {p}");
            }
        }
    }
}

#[test]
fn hecke_multiplicativity() {
    for d in DISCS {
        let c = form_coefficients(&QuadFormSeries::for_discriminant(d).unwrap(), 2500).unwrap();
        let split: Vec<u64> = primes_up_to(50).into_iter().filter(|&p| kronecker(d, p as i64) == 1).collect();
        for (i, &p) in split.iter().enumerate() {
            for &q in &split[i + 1..] {
                let (ap, aq) = (c.get(p as usize).unwrap(), c.get(q as usize).unwrap());
                assert_eq!(ap * aq, c.get((p * q) as usize).unwrap(), "d = {d}, p = {p}, q = {q}");
            }
        }
    }
}

#[test]
fn lvalues_stable_under_doubling() {
    for d in DISCS {
        let s = QuadFormSeries::for_discriminant(d).unwrap();
        let a = hecke_lvalue(&s, 3, 50_000, 128).unwrap();
        let b = hecke_lvalue(&s, 3, 100_000, 128).unwrap();
        assert!(a.abs_diff(&b) <= a.error_bound() + b.error_bound(), "d = {d}");
    }
}

#[test]
fn legendre_counts_match_enumeration() {
    for k in [3, 6, 18] {
        for p in primes_up_to(13).into_iter().filter(|p| *p > 3) {
            for s in P1::all(p) {
                for chart in [Chart::Z, Chart::Y] {
                    let fast = count_fiber_points_with(k, s, p, CountMode::Legendre, chart);
                    let slow = count_fiber_points_with(k, s, p, CountMode::Enumerate, chart);
                    assert_eq!(fast.ok(), slow.ok(), "k = {k}, p = {p}, s = {s:?}");
                }
            }
        }
    }
}

#[test]
fn a_p_weight_bound_and_inert_vanishing() {
    for k in [3, 6, 18] {
        let level = surface_data(k).unwrap().level;
        let disc = -(level as i64);
        let bad = bad_primes(level);
        for p in primes_up_to(200).into_iter().filter(|p| !bad.contains(p)) {
            let a = a_p_default(k, p).unwrap().a_p;
            assert!(a.abs() <= 2 * p as i64, "k = {k}, p = {p}, A_p = {a}");
            if kronecker(disc, p as i64) == -1 {
                assert_eq!(a, 0, "k = {k}, inert p = {p}");
            }
        }
    }
}
