//! Embedded coefficients of the weight-3 CM newforms of levels 15, 24 and 120,
//! and the quadratic twists relating them to the form series.

use std::sync::OnceLock;

use sha2::{Digest, Sha256};

use super::forms::{form_coefficients, weight3_tail_bound, DirichletCoeffs, QuadFormSeries};
use crate::arith::{is_prime, kronecker};
use crate::error::{Error, Result};
use crate::numeric::{BigReal, CompensatedSum};

const NEWFORMS_CSV: &str = include_str!("../../data/newforms.csv");
const NEWFORMS_SHA256: &str = "63e13097f112afd2db8b360da5efa3ac98662ef82fdf639eeedcd4cf8beb70ce";

pub const TABLE_PRIMES: [u64; 11] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewformEntry {
    pub level: u64,
    pub weight: u32,
    /// Discriminant of the CM field.
    pub cm_discriminant: i64,
    /// (p, a_p) in increasing p.
    pub coeffs: Vec<(u64, i64)>,
}

impl NewformEntry {
    pub fn a_p(&self, p: u64) -> Option<i64> {
        self.coeffs.iter().find(|&&(q, _)| q == p).map(|&(_, a)| a)
    }
}

fn cm_discriminant(level: u64) -> Option<i64> {
    match level {
        15 => Some(-15),
        24 => Some(-24),
        120 => Some(-120),
        _ => None,
    }
}

/// The character d with f ⊗ (d/·) matching the form series: −3 for levels
/// 24 and 120, the trivial character (d = 1) for level 15.
pub fn twist_character(level: u64) -> Result<i64> {
    match level {
        15 => Ok(1),
        24 | 120 => Ok(-3),
        _ => Err(Error::NotTabulated(format!("no newform of level {level}"))),
    }
}

fn parse_table() -> Result<Vec<NewformEntry>> {
    let digest = hex::encode(Sha256::digest(NEWFORMS_CSV.as_bytes()));
    if digest != NEWFORMS_SHA256 {
        return Err(Error::Fixture { name: "newforms.csv".into(), reason: format!("checksum {digest}") });
    }
    let mut out: Vec<NewformEntry> = Vec::new();
    for (i, line) in NEWFORMS_CSV.lines().enumerate().skip(1) {
        let bad = || Error::Fixture { name: "newforms.csv".into(), reason: format!("line {}", i + 1) };
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        let [level, p, a] = f.as_slice() else { return Err(bad()) };
        let level: u64 = level.parse().map_err(|_| bad())?;
        let p: u64 = p.parse().map_err(|_| bad())?;
        let a: i64 = a.parse().map_err(|_| bad())?;
        let cm = cm_discriminant(level).ok_or_else(bad)?;
        match out.iter_mut().find(|e| e.level == level) {
            Some(e) => e.coeffs.push((p, a)),
            None => out.push(NewformEntry { level, weight: 3, cm_discriminant: cm, coeffs: vec![(p, a)] }),
        }
    }
    Ok(out)
}

fn table() -> &'static Result<Vec<NewformEntry>> {
    static T: OnceLock<Result<Vec<NewformEntry>>> = OnceLock::new();
    T.get_or_init(parse_table)
}

pub fn newform_table(level: u64) -> Result<NewformEntry> {
    let t = table().as_ref().map_err(Clone::clone)?;
    t.iter()
        .find(|e| e.level == level)
        .cloned()
        .ok_or_else(|| Error::NotTabulated(format!("no newform of level {level}")))
}

/// (d/p)·a_p.
pub fn twist_coeff(a_p: i64, d: i64, p: u64) -> Result<i64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if d % p as i64 == 0 {
        return Err(Error::BadPrime { p, excluded: vec![p] });
    }
    Ok(kronecker(d, p as i64) * a_p)
}

/// The series whose coefficients are those of f ⊗ (d/·) for the tabulated newform.
fn series_for_level(level: u64) -> Result<QuadFormSeries> {
    let d = cm_discriminant(level).ok_or_else(|| Error::NotTabulated(format!("no newform of level {level}")))?;
    QuadFormSeries::for_discriminant(d)
}

/// Coefficients of f_level ⊗ (d/·) up to N, generated from the form series.
/// Tabulated primes not dividing d are checked against the twisted table
/// entries; at p | d the twist is taken to be the newform it matches, whose
/// coefficient is the form-series one.
pub fn twisted_newform_coefficients(level: u64, n: usize) -> Result<DirichletCoeffs> {
    let entry = newform_table(level)?;
    let d = twist_character(level)?;
    let coeffs = form_coefficients(&series_for_level(level)?, n.max(TABLE_PRIMES[10] as usize))?;
    for &(p, a) in &entry.coeffs {
        if d % p as i64 == 0 {
            continue;
        }
        let want = twist_coeff(a, d, p)?;
        if coeffs.get(p as usize) != Some(want) {
            return Err(Error::Inconsistent(format!(
                "level {level}: twisted a_{p} = {want} but the form series gives {:?}",
                coeffs.get(p as usize)
            )));
        }
    }
    Ok(DirichletCoeffs::from_vec(coeffs.as_slice()[..n].to_vec()))
}

/// Coefficients of the newform itself up to N: a_n = (d/n)·A_n for n prime to
/// d, and a_{p^e m} = a_p^e·a_m for p | d, a_p from the table.
pub fn newform_coefficients(level: u64, n: usize) -> Result<DirichletCoeffs> {
    let entry = newform_table(level)?;
    let d = twist_character(level)?;
    let phi = form_coefficients(&series_for_level(level)?, n.max(2))?;
    let bad: Vec<(u64, i64)> = entry.coeffs.iter().copied().filter(|&(p, _)| d % p as i64 == 0).collect();
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        let mut m = i as u64;
        let mut factor = 1i64;
        for &(p, a) in &bad {
            while m % p == 0 {
                m /= p;
                factor *= a;
            }
        }
        let core = phi.get(m as usize).expect("m ≤ n");
        out.push(factor * kronecker(d, m as i64) * core);
    }
    Ok(DirichletCoeffs::from_vec(out))
}

/// Σ_{n ≤ N} A_n/n^s for weight-3 coefficients, with the tail bound from
/// |A_n| ≤ n·d(n).
pub fn lvalue_from_coeffs(coeffs: &DirichletCoeffs, s: u32, n: usize, prec: usize) -> Result<BigReal> {
    if s != 3 {
        return Err(Error::Domain(format!("weight-3 coefficients need s = 3, got {s}")));
    }
    if coeffs.max_n() < n {
        return Err(Error::InsufficientCoefficients { need: n, have: coeffs.max_n() });
    }
    if n < 2 {
        return Err(Error::Domain("need N ≥ 2".into()));
    }
    let mut acc = CompensatedSum::new();
    for (i, &a) in coeffs.as_slice()[..n].iter().enumerate() {
        let x = (i + 1) as f64;
        acc.add(a as f64 / (x * x * x));
    }
    let v = acc.value();
    Ok(BigReal::estimate(v, weight3_tail_bound(n as u64) + 64.0 * f64::EPSILON * (1.0 + v.abs()), prec))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_lookups() {
        assert_eq!(newform_table(24).unwrap().a_p(7), Some(-10));
        assert_eq!(newform_table(15).unwrap().a_p(17), Some(14));
        assert_eq!(newform_table(120).unwrap().a_p(31), Some(-58));
        assert!(newform_table(7).is_err());
        assert_eq!(newform_table(24).unwrap().coeffs.len(), 11);
    }

    #[test]
    fn twisting() {
        assert_eq!(twist_coeff(-2, -3, 5).unwrap(), 2);
        assert_eq!(twist_coeff(10, -3, 11).unwrap(), -10);
        assert_eq!(twist_coeff(0, -3, 13).unwrap(), 0);
        assert!(twist_coeff(5, -3, 3).is_err());
        assert!(twist_coeff(5, -3, 9).is_err());
    }

    #[test]
    fn generated_coefficients_hit_table() {
        for level in [15, 24, 120] {
            let e = newform_table(level).unwrap();
            let a = newform_coefficients(level, 100).unwrap();
            for &(p, ap) in &e.coeffs {
                assert_eq!(a.get(p as usize), Some(ap), "level {level}, p = {p}");
            }
            assert!(twisted_newform_coefficients(level, 100).is_ok());
        }
    }

    #[test]
    fn insufficient_coefficients() {
        let c = DirichletCoeffs::from_vec(vec![1, 2, 3]);
        assert!(matches!(
            lvalue_from_coeffs(&c, 3, 10, 64),
            Err(Error::InsufficientCoefficients { need: 10, have: 3 })
        ));
    }
}
