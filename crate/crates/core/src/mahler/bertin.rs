//! m(P_k) as a weighted sum of four Eisenstein–Kronecker lattice sums:
//!
//! m = Im τ/(8π³) · Σ_{j ∈ {1,2,3,6}} c_j Σ'_{m,n} [2 Re 1/((jmτ + n)³(jmτ̄ + n)) + 1/|jmτ + n|⁴]
//!
//! with (c₁, c₂, c₃, c₆) = (−4, 16, −36, 144) and k = k(τ).

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{BigComplex, CompensatedSum};

const WEIGHTS: [(u32, f64); 4] = [(1, -4.0), (2, 16.0), (3, -36.0), (6, 144.0)];

/// Box multipliers; the sums over |m| ≤ sM, |n| ≤ jsM feed the extrapolation.
const SCALES: [usize; 4] = [1, 2, 3, 4];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BertinEstimate {
    /// Extrapolated value.
    pub value: f64,
    /// Spread between extrapolations of different order.
    pub error: f64,
    /// (box size, unextrapolated box sum) pairs.
    pub boxes: Vec<(usize, f64)>,
}

/// 2Re(λ̄²)/|λ|⁶ + 1/|λ|⁴ for λ = u + iv.
#[inline]
fn term(u: f64, v: f64) -> f64 {
    let (u2, v2) = (u * u, v * v);
    let r2 = u2 + v2;
    (3.0 * u2 - v2) / (r2 * r2 * r2)
}

/// Σ over the (j-scaled) box for each scale, exploiting (m, n) ↦ (−m, −n).
fn box_sums(j: u32, re: f64, im: f64, m_box: usize) -> [f64; 4] {
    let jf = j as f64;
    let m_max = SCALES[3] * m_box;
    let rows: Vec<[CompensatedSum; 4]> = (0..=m_max)
        .into_par_iter()
        .map(|m| {
            let mut acc = [CompensatedSum::new(); 4];
            let v = jf * m as f64 * im;
            let shift = jf * m as f64 * re;
            let mut s = CompensatedSum::new();
            let mut done = 0usize;
            for (i, &sc) in SCALES.iter().enumerate() {
                let big_m = sc * m_box;
                let n_max = j as usize * big_m;
                if m > big_m {
                    continue;
                }
                // Row m contributes n ∈ [−n_max, n_max], n ≥ 1 only when m = 0.
                let (lo, hi): (i64, i64) = (if m == 0 { 1 } else { -(n_max as i64) }, n_max as i64);
                // Extend the running row sum from the previous scale's range.
                if done == 0 {
                    for n in lo..=hi {
                        s.add(term(shift + n as f64, v));
                    }
                } else {
                    let prev = done as i64;
                    for n in prev + 1..=hi {
                        s.add(term(shift + n as f64, v));
                    }
                    if m != 0 {
                        for n in lo..-prev {
                            s.add(term(shift + n as f64, v));
                        }
                    }
                }
                done = n_max;
                acc[i] = s;
            }
            acc
        })
        .collect();
    let mut out = [CompensatedSum::new(); 4];
    for (m, row) in rows.iter().enumerate() {
        for (i, &sc) in SCALES.iter().enumerate() {
            if m <= sc * m_box {
                out[i].merge(&row[i]);
            }
        }
    }
    out.map(|s| 2.0 * s.value())
}

/// Box sums T(M) = T∞ + a₂M⁻² + a₃M⁻³ + a₄M⁻⁴ + …; solve for T∞ using the
/// highest `order` correction terms with the largest boxes.
fn extrapolate(h: &[f64], t: &[f64], powers: &[i32]) -> f64 {
    let n = powers.len() + 1;
    let (h, t) = (&h[h.len() - n..], &t[t.len() - n..]);
    let mut a: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut row = vec![1.0];
            row.extend(powers.iter().map(|&p| h[i].powi(p)));
            row.push(t[i]);
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs())).expect("rows");
        a.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                for c in col..=n {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
    }
    a[0][n] / a[0][0]
}

/// Evaluates the series on nested boxes of size M, 2M, 3M, 4M and
/// extrapolates in 1/M.
pub fn bertin_series(tau: &BigComplex, m_box: usize) -> Result<BertinEstimate> {
    let (re, im) = (tau.re_f64(), tau.im_f64());
    if !(im > 0.0) {
        return Err(Error::Domain("Im(tau) must be positive".into()));
    }
    if m_box < 16 {
        return Err(Error::Domain("box size must be at least 16".into()));
    }
    let mut totals = [CompensatedSum::new(); 4];
    for (j, c) in WEIGHTS {
        let s = box_sums(j, re, im, m_box);
        for i in 0..4 {
            totals[i].add(c * s[i]);
        }
    }
    let pref = im / (8.0 * PI * PI * PI);
    let t: Vec<f64> = totals.iter().map(|s| pref * s.value()).collect();
    let h: Vec<f64> = SCALES.iter().map(|&s| 1.0 / (s * m_box) as f64).collect();
    let full = extrapolate(&h, &t, &[2, 3, 4]);
    let lower = extrapolate(&h, &t, &[2, 3]);
    let lowest = extrapolate(&h, &t, &[2]);
    let error = (full - lower).abs().max((lower - lowest).abs()) + 1e-12 * full.abs();
    Ok(BertinEstimate {
        value: full,
        error,
        boxes: SCALES.iter().zip(&t).map(|(&s, &v)| (s * m_box, v)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn term_matches_complex_form() {
        let (u, v) = (0.7, 1.3);
        let lam = num_complex::Complex64::new(u, v);
        let direct = 2.0 * (1.0 / (lam * lam * lam * lam.conj())).re + 1.0 / lam.norm_sqr().powi(2);
        assert!((term(u, v) - direct).abs() < 1e-15);
    }

    #[test]
    fn extrapolation_is_exact_on_polynomials() {
        let h = [1.0, 0.5, 1.0 / 3.0, 0.25];
        let t: Vec<f64> = h.iter().map(|x: &f64| 2.0 + 3.0 * x * x - x.powi(3) + 0.5 * x.powi(4)).collect();
        assert!((extrapolate(&h, &t, &[2, 3, 4]) - 2.0).abs() < 1e-12);
    }
}
