//! Hecke L-series written as sums over binary quadratic forms.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numeric::{BigReal, CompensatedSum};

/// a·m² + b·mk + c·k².
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl BinaryForm {
    pub const fn new(a: i64, b: i64, c: i64) -> Self {
        BinaryForm { a, b, c }
    }

    #[inline]
    pub fn eval(&self, m: i64, k: i64) -> i64 {
        self.a * m * m + self.b * m * k + self.c * k * k
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_positive_definite(&self) -> bool {
        self.a > 0 && self.discriminant() < 0
    }

    /// Largest |k| with some m giving Q(m, k) ≤ n.
    fn k_bound(&self, n: i64) -> i64 {
        let d = -self.discriminant() as f64;
        ((4.0 * self.a as f64 * n as f64 / d).sqrt().floor() as i64) + 1
    }

    /// The m-interval with Q(m, k) ≤ n for fixed k, possibly empty.
    fn m_range(&self, k: i64, n: i64) -> (i64, i64) {
        let (a, b, c) = (self.a as f64, self.b as f64, self.c as f64);
        let kf = k as f64;
        let disc = b * b * kf * kf - 4.0 * a * (c * kf * kf - n as f64);
        if disc < 0.0 {
            return (1, 0);
        }
        let r = disc.sqrt();
        let mut lo = ((-b * kf - r) / (2.0 * a)).floor() as i64 - 1;
        let mut hi = ((-b * kf + r) / (2.0 * a)).ceil() as i64 + 1;
        while lo <= hi && self.eval(lo, k) > n {
            lo += 1;
        }
        while hi >= lo && self.eval(hi, k) > n {
            hi -= 1;
        }
        (lo, hi)
    }

    /// Σ′_{Q(m,k) ≤ n} f(m, k, Q), parallel over k; rows are reduced in k order.
    fn lattice_sum<F>(&self, n: i64, f: F) -> CompensatedSum
    where
        F: Fn(i64, i64, i64) -> f64 + Sync,
    {
        let kb = self.k_bound(n);
        let rows: Vec<CompensatedSum> = (-kb..=kb)
            .into_par_iter()
            .map(|k| {
                let (lo, hi) = self.m_range(k, n);
                let mut s = CompensatedSum::new();
                for m in lo..=hi {
                    if m == 0 && k == 0 {
                        continue;
                    }
                    s.add(f(m, k, self.eval(m, k)));
                }
                s
            })
            .collect();
        let mut out = CompensatedSum::new();
        for r in &rows {
            out.merge(r);
        }
        out
    }
}

/// One summand: sign · N(m, k)/Q(m, k)^s with N = p·m² + q·mk + r·k².
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FormTerm {
    pub form: BinaryForm,
    pub numerator: [i64; 3],
    pub sign: i64,
}

impl FormTerm {
    #[inline]
    fn numerator_at(&self, m: i64, k: i64) -> i64 {
        let [p, q, r] = self.numerator;
        p * m * m + q * m * k + r * k * k
    }
}

/// L(s) = (1/prefactor_den) Σ_terms sign Σ′ N(m, k)/Q(m, k)^s.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadFormSeries {
    terms: Vec<FormTerm>,
    prefactor_den: i64,
    discriminant: i64,
}

impl QuadFormSeries {
    pub fn new(terms: Vec<FormTerm>, prefactor_den: i64) -> Result<Self> {
        let first = terms.first().ok_or_else(|| Error::Domain("empty form series".into()))?;
        let discriminant = first.form.discriminant();
        for t in &terms {
            if !t.form.is_positive_definite() {
                return Err(Error::Domain(format!("form {:?} is not positive definite", t.form)));
            }
            if t.form.discriminant() != discriminant {
                return Err(Error::Domain("forms of different discriminants".into()));
            }
            if t.sign.abs() != 1 {
                return Err(Error::Domain("term signs must be ±1".into()));
            }
        }
        if prefactor_den <= 0 {
            return Err(Error::Domain("prefactor denominator must be positive".into()));
        }
        Ok(QuadFormSeries { terms, prefactor_den, discriminant })
    }

    /// The series attached to the CM field of discriminant −24, −15 or −120.
    pub fn for_discriminant(d: i64) -> Result<Self> {
        let t = |a, b, c, numerator, sign| FormTerm { form: BinaryForm::new(a, b, c), numerator, sign };
        match d {
            -24 => QuadFormSeries::new(vec![t(1, 0, 6, [1, 0, -6], 1), t(2, 0, 3, [-2, 0, 3], 1)], 2),
            -15 => QuadFormSeries::new(vec![t(1, 1, 4, [2, 2, -7], 1), t(2, 1, 2, [1, 8, 1], -1)], 4),
            -120 => QuadFormSeries::new(
                vec![
                    t(5, 0, 6, [5, 0, -6], 1),
                    t(10, 0, 3, [10, 0, -3], -1),
                    t(15, 0, 2, [15, 0, -2], 1),
                    t(30, 0, 1, [30, 0, -1], -1),
                ],
                2,
            ),
            _ => Err(Error::NotTabulated(format!("no form series for discriminant {d}"))),
        }
    }

    pub fn terms(&self) -> &[FormTerm] {
        &self.terms
    }

    pub fn prefactor_den(&self) -> i64 {
        self.prefactor_den
    }

    pub fn discriminant(&self) -> i64 {
        self.discriminant
    }
}

/// A_1..A_N of a Dirichlet series; index 0 is unused and holds 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirichletCoeffs {
    a: Vec<i64>,
}

impl DirichletCoeffs {
    /// Coefficients A_1.. given in order.
    pub fn from_vec(mut v: Vec<i64>) -> Self {
        v.insert(0, 0);
        DirichletCoeffs { a: v }
    }

    pub fn max_n(&self) -> usize {
        self.a.len() - 1
    }

    /// A_n, or `None` past the end.
    pub fn get(&self, n: usize) -> Option<i64> {
        if n == 0 {
            None
        } else {
            self.a.get(n).copied()
        }
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.a[1..]
    }
}

/// A_n for n ≤ N by enumerating lattice points of each form.
pub fn form_coefficients(series: &QuadFormSeries, n: usize) -> Result<DirichletCoeffs> {
    if n < 2 {
        return Err(Error::Domain("need N ≥ 2".into()));
    }
    let mut raw = vec![0i64; n + 1];
    for t in &series.terms {
        let f = t.form;
        let kb = f.k_bound(n as i64);
        for k in -kb..=kb {
            let (lo, hi) = f.m_range(k, n as i64);
            for m in lo..=hi {
                if m == 0 && k == 0 {
                    continue;
                }
                raw[f.eval(m, k) as usize] += t.sign * t.numerator_at(m, k);
            }
        }
    }
    let den = series.prefactor_den;
    for (i, x) in raw.iter_mut().enumerate().skip(1) {
        if *x % den != 0 {
            return Err(Error::Inconsistent(format!("coefficient {i} is not integral")));
        }
        *x /= den;
    }
    raw.remove(0);
    Ok(DirichletCoeffs::from_vec(raw))
}

/// Σ_{n > N} n·d(n)/n³ ≤ (ln N + 3)/N, the tail allowed by |A_n| ≤ n·d(n).
pub fn weight3_tail_bound(n: u64) -> f64 {
    let nf = n as f64;
    (nf.ln() + 3.0) / nf
}

/// Σ_{n ≤ N} A_n/n^s with a tail bound, for s = 3.
pub fn hecke_lvalue(series: &QuadFormSeries, s: u32, n: u64, prec: usize) -> Result<BigReal> {
    if s != 3 {
        return Err(Error::Domain(format!("form sums carry weight-2 numerators; need s = 3, got {s}")));
    }
    if n < 1000 {
        return Err(Error::Domain("need N ≥ 1000".into()));
    }
    let mut total = CompensatedSum::new();
    for t in &series.terms {
        let part = t.form.lattice_sum(n as i64, |m, k, q| {
            let qf = q as f64;
            t.numerator_at(m, k) as f64 / (qf * qf * qf)
        });
        total.add(t.sign as f64 * part.value());
    }
    let value = total.value() / series.prefactor_den as f64;
    // Compensated summation leaves only a few ulps of rounding.
    Ok(BigReal::estimate(value, weight3_tail_bound(n) + 64.0 * f64::EPSILON * (1.0 + value.abs()), prec))
}

/// A signed combination of weight-0 Epstein zeta values Σ′ 1/Q(m, k)².
#[derive(Clone, Debug, PartialEq)]
pub struct EpsteinSeries {
    pub terms: Vec<(BinaryForm, i64)>,
    pub prefactor: f64,
}

impl EpsteinSeries {
    /// (3√30/π³)·Σ′ [−1/(5m²+6k²)² + 1/(10m²+3k²)² − 1/(15m²+2k²)² + 1/(30m²+k²)²].
    pub fn disc120() -> Self {
        EpsteinSeries {
            terms: vec![
                (BinaryForm::new(5, 0, 6), -1),
                (BinaryForm::new(10, 0, 3), 1),
                (BinaryForm::new(15, 0, 2), -1),
                (BinaryForm::new(30, 0, 1), 1),
            ],
            prefactor: 3.0 * 30f64.sqrt() / (PI * PI * PI),
        }
    }

    pub fn negated(&self) -> Self {
        EpsteinSeries { terms: self.terms.iter().map(|&(f, s)| (f, -s)).collect(), prefactor: self.prefactor }
    }
}

/// Evaluates the combination over Q ≤ N, adding the tail ∫ counted by the
/// area law, π/(√(ac − b²/4)·N) per form. The error bound covers the
/// lattice-point discrepancy |#{Q ≤ x} − πx/√(ac − b²/4)| ≤ 4(L(x) + 1),
/// L(x) the perimeter of the ellipse, integrated against x⁻² by parts.
pub fn epstein_sum(series: &EpsteinSeries, n: u64, prec: usize) -> Result<BigReal> {
    if n < 1000 {
        return Err(Error::Domain("need N ≥ 1000".into()));
    }
    let nf = n as f64;
    let mut total = CompensatedSum::new();
    let mut err = 0.0;
    for &(f, sign) in &series.terms {
        if !f.is_positive_definite() {
            return Err(Error::Domain(format!("form {f:?} is not positive definite")));
        }
        let part = f.lattice_sum(n as i64, |_, _, q| {
            let qf = q as f64;
            1.0 / (qf * qf)
        });
        let root = (-f.discriminant() as f64).sqrt() / 2.0;
        total.add(sign as f64 * (part.value() + PI / (root * nf)));
        // Semi-axes at level x are √(x/λ) for the eigenvalues λ of the form;
        // L(x) ≤ 2π√(x/λ_min).
        let (a, b, c) = (f.a as f64, f.b as f64, f.c as f64);
        let lmin = 0.5 * (a + c - ((a - c).powi(2) + b * b).sqrt());
        let cst = 4.0 * (2.0 * PI / lmin.sqrt() + 1.0);
        err += (7.0 / 3.0) * cst * nf.powf(-1.5);
    }
    let value = series.prefactor * total.value();
    let bound = series.prefactor * err + 64.0 * f64::EPSILON * (1.0 + value.abs());
    Ok(BigReal::estimate(value, bound, prec))
}

pub fn epstein_combo(n: u64, prec: usize) -> Result<BigReal> {
    epstein_sum(&EpsteinSeries::disc120(), n, prec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_counts_match_brute_force() {
        let f = BinaryForm::new(2, 1, 2);
        let n = 200;
        let mut brute = 0;
        for m in -30i64..=30 {
            for k in -30i64..=30 {
                if (m, k) != (0, 0) && f.eval(m, k) <= n {
                    brute += 1;
                }
            }
        }
        let fast = f.lattice_sum(n, |_, _, _| 1.0).value();
        assert_eq!(fast as i64, brute);
    }

    #[test]
    fn low_coefficients() {
        let a24 = form_coefficients(&QuadFormSeries::for_discriminant(-24).unwrap(), 40).unwrap();
        assert_eq!(a24.get(1), Some(1));
        assert_eq!(a24.get(5), Some(2));
        let a15 = form_coefficients(&QuadFormSeries::for_discriminant(-15).unwrap(), 40).unwrap();
        assert_eq!(a15.get(2), Some(-1));
        let a120 = form_coefficients(&QuadFormSeries::for_discriminant(-120).unwrap(), 40).unwrap();
        assert_eq!(a120.get(2), Some(-2));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(QuadFormSeries::for_discriminant(-7).is_err());
        let s = QuadFormSeries::for_discriminant(-24).unwrap();
        assert!(form_coefficients(&s, 1).is_err());
        assert!(hecke_lvalue(&s, 2, 5000, 64).is_err());
        assert!(hecke_lvalue(&s, 3, 10, 64).is_err());
        let bad = FormTerm { form: BinaryForm::new(1, 3, 1), numerator: [1, 0, 0], sign: 1 };
        assert!(QuadFormSeries::new(vec![bad], 2).is_err());
    }
}
