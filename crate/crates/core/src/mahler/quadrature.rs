use std::f64::consts::PI;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numeric::quadrature::{integrate, Integral};
use crate::numeric::{BigReal, DEFAULT_PREC};

/// arcosh⁺(|c|/2): the Jensen integral of log|z + 1/z − c| over |z| = 1.
#[inline]
pub fn jensen_integrand(c: f64) -> f64 {
    let d = 0.5 * c.abs() - 1.0;
    if d <= 0.0 {
        0.0
    } else {
        // arcosh(1 + d) without cancellation near the kink
        (d + (d * (2.0 + d)).sqrt()).ln_1p()
    }
}

/// ∫₀^π arcosh⁺(|a + 2cos t|/2) dt, split where |a + 2cos t| = 2.
fn inner(a: f64, tol: f64) -> Integral {
    let mut br = vec![0.0, PI];
    for target in [2.0, -2.0] {
        let c = 0.5 * (target - a);
        if c > -1.0 && c < 1.0 {
            br.push(c.acos());
        }
    }
    br.sort_by(f64::total_cmp);
    let f = |t: f64| jensen_integrand(a + 2.0 * t.cos());
    let mut out = Integral::zero();
    for w in br.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi <= lo || f(0.5 * (lo + hi)) == 0.0 {
            continue;
        }
        let r = integrate(&f, lo, hi, tol / 3.0);
        out.value += r.value;
        out.error += r.error;
        out.evals += r.evals;
        out.converged &= r.converged;
    }
    out
}

/// Outer breakpoints in θ₁ where 2cos θ₁ − k ∈ {−4, 0, 4}, the values of a at
/// which the inner breakpoints reach the ends of [0, π].
fn outer_breaks(k: f64) -> Vec<f64> {
    let mut br = vec![0.0, PI];
    for v in [-4.0, 0.0, 4.0] {
        let c = 0.5 * (k + v);
        if c > -1.0 && c < 1.0 {
            br.push(c.acos());
        }
    }
    br.sort_by(f64::total_cmp);
    br.dedup();
    br
}

/// m(P_k) = π⁻² ∫₀^π∫₀^π arcosh⁺(|2cos θ₁ + 2cos θ₂ − k|/2) dθ₂ dθ₁, the
/// z-integral having been taken by Jensen's formula and the torus folded by
/// θ ↦ −θ onto [0, π]². Half of the tolerance goes to the outer integral and
/// half to the inner ones.
pub fn mahler_quadrature(k: f64, tol: f64) -> Result<BigReal> {
    mahler_quadrature_prec(k, tol, DEFAULT_PREC)
}

pub fn mahler_quadrature_prec(k: f64, tol: f64, prec: usize) -> Result<BigReal> {
    if !(tol > 0.0) || !k.is_finite() {
        return Err(Error::Domain("need finite k and tol > 0".into()));
    }
    let pi2 = PI * PI;
    let outer_tol = 0.5 * tol * pi2;
    let inner_tol = 0.5 * tol * PI;
    let worst_inner = AtomicU64::new(0);
    let inner_ok = AtomicBool::new(true);
    let f = |t1: f64| {
        let r = inner(2.0 * t1.cos() - k, inner_tol);
        worst_inner.fetch_max(r.error.to_bits(), Ordering::Relaxed);
        if !r.converged {
            inner_ok.store(false, Ordering::Relaxed);
        }
        r.value
    };
    let br = outer_breaks(k);
    let n = (br.len() - 1) as f64;
    let pieces: Vec<Integral> = br.par_windows(2).map(|w| integrate(&f, w[0], w[1], outer_tol / n)).collect();
    let mut total = Integral::zero();
    for p in pieces {
        total.value += p.value;
        total.error += p.error;
        total.converged &= p.converged;
    }
    let inner_err = f64::from_bits(worst_inner.load(Ordering::Relaxed));
    let value = total.value / pi2;
    let bound = (total.error + PI * inner_err) / pi2;
    if !total.converged || !inner_ok.load(Ordering::Relaxed) || bound > tol {
        return Err(Error::NotConverged { what: format!("mahler_quadrature(k = {k})"), estimate: value, bound });
    }
    Ok(BigReal::estimate(value, bound, prec))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrand_shape() {
        assert_eq!(jensen_integrand(1.9), 0.0);
        assert_eq!(jensen_integrand(-2.0), 0.0);
        assert!((jensen_integrand(6.0) - 3f64.acosh()).abs() < 1e-15);
        assert!((jensen_integrand(-6.0) - 3f64.acosh()).abs() < 1e-15);
    }

    #[test]
    fn matches_d3_at_zero() {
        let m = mahler_quadrature(0.0, 1e-9).unwrap();
        assert!((m.to_f64() - 0.323_065_947_219_5).abs() < 1e-9, "{}", m.to_f64());
        assert!(m.error_bound() <= 1e-9);
    }

    #[test]
    fn even_in_k() {
        let a = mahler_quadrature(3.0, 1e-9).unwrap().to_f64();
        let b = mahler_quadrature(-3.0, 1e-9).unwrap().to_f64();
        assert!((a - b).abs() < 2e-9);
    }
}
