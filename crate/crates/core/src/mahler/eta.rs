//! The Dedekind eta function and the Hauptmodul w(τ) = (η(τ)η(6τ)/(η(2τ)η(3τ)))⁶
//! with k = w + 1/w.

use astro_float::BigFloat;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattices::{tau_table, TauRecord};
use crate::numeric::{BigComplex, BigReal, RM};

const GUARD_BITS: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TauSource {
    Table,
    NumericInversion,
}

/// A point of the upper half plane attached to a value of k.
#[derive(Clone, Debug)]
pub struct CMPoint {
    pub tau: BigComplex,
    pub source: TauSource,
}

fn check_upper(tau: &BigComplex) -> Result<()> {
    if !tau.im.is_positive() {
        return Err(Error::Domain("Im(tau) must be positive".into()));
    }
    Ok(())
}

/// e^{2πiτ}.
fn nome(tau: &BigComplex, prec: usize) -> BigComplex {
    let two_pi = BigReal::pi(prec) * BigReal::from_i64(2, prec);
    tau.with_prec(prec).scale(two_pi.value()).mul_i().exp()
}

/// Number of factors needed so that |q|^{jN} < 2^{-bits}.
fn terms_needed(tau_im: f64, j: usize, bits: usize) -> usize {
    let per = 2.0 * std::f64::consts::PI * tau_im * j as f64;
    ((bits as f64 * std::f64::consts::LN_2) / per).ceil().max(1.0) as usize
}

/// ∏_{n=1}^{N} (1 − q^{jn}).
fn euler_product(q: &BigComplex, j: usize, n_terms: usize, prec: usize) -> BigComplex {
    let qj = q.powi(j as u32);
    let one = BigComplex::one(prec);
    let mut pw = qj.clone();
    let mut acc = one.clone();
    for _ in 0..n_terms {
        acc = acc.mul(&one.sub(&pw));
        pw = pw.mul(&qj);
    }
    acc
}

/// η(τ) with an explicit number of product factors.
pub fn eta_truncated(tau: &BigComplex, prec: usize, n_terms: usize) -> Result<BigComplex> {
    check_upper(tau)?;
    let wp = prec + GUARD_BITS;
    let q = nome(tau, wp);
    // e^{πiτ/12}
    let pi12 = BigReal::pi(wp) / BigReal::from_i64(12, wp);
    let pre = tau.with_prec(wp).scale(pi12.value()).mul_i().exp();
    Ok(pre.mul(&euler_product(&q, 1, n_terms, wp)).with_prec(prec))
}

/// Dedekind eta, truncated once |q|^N drops below 2^{-(prec + guard)}.
pub fn eta(tau: &BigComplex, prec: usize) -> Result<BigComplex> {
    check_upper(tau)?;
    let n = terms_needed(tau.im_f64(), 1, prec + GUARD_BITS);
    eta_truncated(tau, prec, n)
}

/// w(τ) = q^{1/2} ∏ ((1 − qⁿ)(1 − q⁶ⁿ)/((1 − q²ⁿ)(1 − q³ⁿ)))⁶.
pub fn w_of_tau(tau: &BigComplex, prec: usize) -> Result<BigComplex> {
    check_upper(tau)?;
    let wp = prec + GUARD_BITS;
    let q = nome(tau, wp);
    let im = tau.im_f64();
    let p = |j| euler_product(&q, j, terms_needed(im, j, wp), wp);
    let ratio = p(1).mul(&p(6)).div(&p(2).mul(&p(3)));
    let pi = BigReal::pi(wp);
    let half = tau.with_prec(wp).scale(pi.value()).mul_i().exp();
    Ok(half.mul(&ratio.powi(6)).with_prec(prec))
}

pub fn k_of_tau(tau: &BigComplex, prec: usize) -> Result<BigComplex> {
    let w = w_of_tau(tau, prec + 16)?;
    Ok(w.add(&w.inv()).with_prec(prec))
}

/// τ = (A + √B)/C from a table record, in the upper half plane.
pub fn table_tau(rec: &TauRecord, prec: usize) -> BigComplex {
    let c = BigReal::from_i64(rec.c, prec);
    let re = BigReal::from_i64(rec.a, prec) / &c;
    let im = BigReal::from_i64(-rec.b, prec).sqrt().expect("B < 0") / &c;
    BigComplex::from_parts(&re, &im)
}

/// w(iy) and d/dy log w(iy) in double precision.
fn log_w_imag_axis(y: f64) -> (f64, f64) {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut lw = -std::f64::consts::PI * y;
    let mut dlw = -std::f64::consts::PI;
    for (j, sign) in [(1.0, 6.0), (6.0, 6.0), (2.0, -6.0), (3.0, -6.0)] {
        let mut n = 1.0;
        loop {
            let e = (-two_pi * j * n * y).exp();
            if e < 1e-18 {
                break;
            }
            lw += sign * (-e).ln_1p();
            dlw += sign * two_pi * j * n * e / (1.0 - e);
            n += 1.0;
        }
    }
    (lw, dlw)
}

/// A point τ with k(τ) = k.
///
/// Tabulated k return the exact table value. Otherwise τ = iy is found by
/// Newton iteration on the branch y > 1/√6, where w(iy) decreases from
/// 3 − 2√2 to 0 and k(iy) increases from 6; this needs k > 6. For k < −6 the
/// relation w(τ + 1) = −w(τ) gives τ = 1 + iy.
pub fn tau_of_k(k: f64, prec: usize) -> Result<CMPoint> {
    if k.fract() == 0.0 && k.abs() <= 18.0 {
        let ki = k.abs() as i64;
        if let Ok(rec) = tau_table(ki) {
            let mut tau = table_tau(&rec, prec);
            if k < 0.0 {
                tau = tau.add(&BigComplex::one(prec));
            }
            return Ok(CMPoint { tau, source: TauSource::Table });
        }
    }
    let ka = k.abs();
    if ka <= 6.0 || !ka.is_finite() {
        return Err(Error::Domain(format!(
            "numeric inversion of k(tau) needs |k| > 6 (got {k}); tabulated values are 0, 2, 3, 6, 10, 18"
        )));
    }
    let wp = prec + GUARD_BITS;
    // Target w₀ = (k − √(k² − 4))/2 at working precision.
    let kb = BigReal::from_f64(ka, wp);
    let w0 = (&kb - (&kb * &kb - BigReal::from_i64(4, wp)).sqrt()?) / BigReal::from_i64(2, wp);
    let lw0 = w0.ln()?.to_f64();
    // Double-precision Newton from the leading-order inversion w ≈ e^{-πy}.
    let mut y = (-lw0 / std::f64::consts::PI).max(1.0 / 6f64.sqrt() + 1e-3);
    for _ in 0..100 {
        let (lw, dlw) = log_w_imag_axis(y);
        let step = (lw - lw0) / dlw;
        y -= step;
        if step.abs() < 1e-15 * y {
            break;
        }
    }
    if !(y > 1.0 / 6f64.sqrt()) {
        return Err(Error::NotConverged { what: "tau_of_k".into(), estimate: y, bound: f64::INFINITY });
    }
    // Refine at full precision; the double-precision derivative suffices
    // because each step then gains ~50 bits.
    let (_, dlw) = log_w_imag_axis(y);
    let mut yb = BigFloat::from_f64(y, wp);
    let tol = 2f64.powi(-(prec as i32) - 16);
    let dlw_b = BigFloat::from_f64(dlw, wp);
    let mut converged = false;
    for _ in 0..12 {
        let tau = BigComplex::new(BigFloat::from_f64(0.0, wp), yb.clone(), wp);
        let w = w_of_tau(&tau, wp)?;
        let lw = BigReal::from_bigfloat(w.re.clone(), wp, 0.0).ln()?;
        let f = &lw - &w0.ln()?;
        let step = f.value().div(&dlw_b, wp, RM);
        yb = yb.sub(&step, wp, RM);
        if crate::numeric::bigfloat_to_f64(&step).abs() < tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NotConverged { what: "tau_of_k".into(), estimate: y, bound: f64::INFINITY });
    }
    let re = if k < 0.0 { 1.0 } else { 0.0 };
    let tau = BigComplex::new(BigFloat::from_f64(re, wp), yb, wp).with_prec(prec);
    Ok(CMPoint { tau, source: TauSource::NumericInversion })
}

/// Coefficients c₀..c_{n−1} of w = Σ cᵢ q^{i+1/2}, recovered by interpolating
/// w(iy)/q^{1/2} at n points high on the imaginary axis.
pub fn fit_w_expansion(n: usize, prec: usize) -> Result<Vec<f64>> {
    let wp = prec.max(256);
    // y_i = 3 + i/2, q_i = e^{-2π y_i}
    let mut rows: Vec<Vec<BigReal>> = Vec::with_capacity(n);
    for i in 0..n {
        let y = BigReal::from_ratio(6 + i as i64, 2, wp);
        let tau = BigComplex::new(BigFloat::from_f64(0.0, wp), y.value().clone(), wp);
        let w = w_of_tau(&tau, wp)?;
        let pi = BigReal::pi(wp);
        let q = (-(&(&pi * &BigReal::from_i64(2, wp)) * &y)).exp();
        let half = (-(&pi * &y)).exp();
        let rhs = BigReal::from_bigfloat(w.re.clone(), wp, 0.0) / half;
        let mut row: Vec<BigReal> = (0..n).map(|k| q.powi(k)).collect();
        row.push(rhs);
        rows.push(row);
    }
    // Gaussian elimination with partial pivoting.
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&a, &b| rows[a][col].to_f64().abs().total_cmp(&rows[b][col].to_f64().abs()))
            .expect("nonempty");
        rows.swap(col, piv);
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = &rows[r][col] / &rows[col][col];
            for c in col..=n {
                let t = &f * &rows[col][c];
                rows[r][c] = &rows[r][c] - &t;
            }
        }
    }
    Ok((0..n).map(|i| (&rows[i][n] / &rows[i][i]).to_f64()).collect())
}
