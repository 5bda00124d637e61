//! Fibers of the elliptic fibration s²(x+y)(x+z)(y+z) + (s² − ks + 1)xyz = 0
//! of Y_k and the transcendental coefficients A_p.

use rayon::prelude::*;
use serde::Serialize;

use super::field::PrimeField;
use super::weierstrass::WeierstrassModP;
use crate::error::{Error, Result};

/// A point of P¹(F_p).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum P1 {
    Finite(u64),
    Infinity,
}

impl P1 {
    /// All p + 1 points, finite ones first.
    pub fn all(p: u64) -> impl Iterator<Item = P1> {
        (0..p).map(P1::Finite).chain(std::iter::once(P1::Infinity))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CountMode {
    /// O(p): one quadratic per line, solved by the Legendre symbol.
    #[default]
    Legendre,
    /// O(p²) enumeration of P²(F_p).
    Enumerate,
}

/// Affine chart of P² used when counting the plane cubic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Chart {
    /// (x:y:1) plus the line z = 0.
    #[default]
    Z,
    /// (x:1:z) plus the line y = 0.
    Y,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FiberCount {
    pub s: P1,
    pub count: u64,
    pub a_p_s: i64,
    /// Counted on the Weierstrass model because that model is singular here.
    pub singular: bool,
}

/// (A, B) with fiber A(x+y)(x+z)(y+z) + Bxyz; at s = ∞ both are 1.
fn cubic_coeffs(f: &PrimeField, k: i64, s: P1) -> (u64, u64) {
    match s {
        P1::Finite(s) => {
            let s2 = f.mul(s, s);
            (s2, f.add(f.sub(s2, f.mul(f.elem(k), s)), 1))
        }
        P1::Infinity => (1, 1),
    }
}

fn cubic(f: &PrimeField, a: u64, b: u64, x: u64, y: u64, z: u64) -> u64 {
    let t = f.mul(f.mul(f.add(x, y), f.add(x, z)), f.add(y, z));
    f.add(f.mul(a, t), f.mul(b, f.mul(x, f.mul(y, z))))
}

fn check_prime(p: u64) -> Result<PrimeField> {
    if p == 3 {
        return Err(Error::BadPrime { p, excluded: vec![2, 3] });
    }
    PrimeField::new(p).map_err(|e| match e {
        Error::NotPrime(2) => Error::BadPrime { p: 2, excluded: vec![2, 3] },
        e => e,
    })
}

/// Number of F_p-points of the plane cubic fiber over s.
pub fn count_fiber_points(k: i64, s: P1, p: u64) -> Result<u64> {
    count_fiber_points_with(k, s, p, CountMode::Legendre, Chart::Z)
}

pub fn count_fiber_points_with(k: i64, s: P1, p: u64, mode: CountMode, chart: Chart) -> Result<u64> {
    let f = check_prime(p)?;
    if let P1::Finite(v) = s {
        if v >= p {
            return Err(Error::Domain(format!("s = {v} is not a residue mod {p}")));
        }
    }
    let (a, b) = cubic_coeffs(&f, k, s);
    // Points written as (x, t) in the chart, with the chart's fixed coordinate 1.
    let pt = |x: u64, t: u64, w: u64| match chart {
        Chart::Z => (x, t, w),
        Chart::Y => (x, w, t),
    };
    let on = |(x, y, z): (u64, u64, u64)| cubic(&f, a, b, x, y, z) == 0;
    // Points on the line where the chart coordinate vanishes: (x:1:0) and (1:0:0).
    let line = (0..p).filter(|&x| on(pt(x, 1, 0))).count() as u64 + u64::from(on(pt(1, 0, 0)));
    let affine: u64 = match mode {
        CountMode::Enumerate => (0..p).map(|x| (0..p).filter(|&t| on(pt(x, t, 1))).count() as u64).sum(),
        CountMode::Legendre => (0..p)
            .map(|x| {
                // The cubic has degree ≤ 2 in each variable: recover the quadratic in t.
                let g = |t| cubic(&f, a, b, pt(x, t, 1).0, pt(x, t, 1).1, pt(x, t, 1).2);
                let (g0, g1, gm) = (g(0), g(1), g(p - 1));
                let inv2 = (p + 1) / 2;
                let c2 = f.mul(f.sub(f.add(g1, gm), f.mul(2, g0)), inv2);
                let c1 = f.mul(f.sub(g1, gm), inv2);
                f.quadratic_roots(c2, c1, g0)
            })
            .sum(),
    };
    Ok(line + affine)
}

/// The long Weierstrass model of the fiber over s:
/// y² + (s² − ks + 1)xy = x³ + (s² − ks³ − s⁴)x² + (ks⁷ − s⁶)x, and
/// y² + xy = x³ − x² over s = ∞.
pub fn fiber_weierstrass(k: i64, s: P1, field: PrimeField) -> WeierstrassModP {
    match s {
        P1::Finite(s) => {
            let s = s as i128;
            let p = field.p() as i128;
            let k = k as i128;
            let r = |v: i128| v.rem_euclid(p) as i64;
            let s2 = s * s % p;
            let s3 = s2 * s % p;
            let s4 = s3 * s % p;
            let s6 = s4 * s2 % p;
            let s7 = s6 * s % p;
            WeierstrassModP::new(field, [r(s2 - k * s + 1), r(s2 - k * s3 - s4), 0, r(k * s7 - s6), 0])
        }
        P1::Infinity => WeierstrassModP::new(field, [1, -1, 0, 0, 0]),
    }
}

/// Fiber count and a_p(s) = p + 1 − #Y_s(F_p). Smooth fibers are counted on
/// the plane cubic; where the Weierstrass model degenerates, the singular
/// Weierstrass curve is counted instead, since the plane cubic there is a
/// different (non-minimal) degeneration of the same fiber.
pub fn fiber_count(k: i64, s: P1, p: u64) -> Result<FiberCount> {
    let f = check_prime(p)?;
    let w = fiber_weierstrass(k, s, f);
    let (count, singular) =
        if w.is_singular() { (w.count_points_any(), true) } else { (count_fiber_points(k, s, p)?, false) };
    Ok(FiberCount { s, count, a_p_s: p as i64 + 1 - count as i64, singular })
}

/// All p + 1 fibers, counted in parallel and returned in P¹ order.
pub fn fiber_counts(k: i64, p: u64) -> Result<Vec<FiberCount>> {
    check_prime(p)?;
    let pts: Vec<P1> = P1::all(p).collect();
    pts.par_iter().map(|&s| fiber_count(k, s, p)).collect()
}

/// Mordell–Weil data of Y_k used in A_p: rank and the field Q(√d) of an
/// infinite section, plus the level of the matching newform.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceData {
    pub k: i64,
    pub rank: u32,
    pub d: i64,
    pub level: u64,
}

pub fn surface_data(k: i64) -> Result<SurfaceData> {
    match k {
        3 => Ok(SurfaceData { k, rank: 1, d: 1, level: 15 }),
        6 => Ok(SurfaceData { k, rank: 0, d: 1, level: 24 }),
        18 => Ok(SurfaceData { k, rank: 1, d: -3, level: 120 }),
        _ => Err(Error::NotTabulated(format!("no Mordell-Weil data for k = {k}"))),
    }
}

/// {2, 3} together with the primes dividing `level`.
pub fn bad_primes(level: u64) -> Vec<u64> {
    let mut out = vec![2, 3];
    let mut n = level;
    let mut q = 2;
    while q * q <= n {
        while n % q == 0 {
            if !out.contains(&q) {
                out.push(q);
            }
            n /= q;
        }
        q += 1;
    }
    if n > 1 && !out.contains(&n) {
        out.push(n);
    }
    out.sort_unstable();
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ApValue {
    pub k: i64,
    pub p: u64,
    pub rank: u32,
    pub d: i64,
    pub a_p: i64,
    /// Σ_s a_p(s).
    pub fiber_sum: i64,
}

/// A_p = −Σ_s a_p(s) − rank·(d/p)·p, for good p.
pub fn a_p(k: i64, p: u64, rank: u32, d: Option<i64>) -> Result<ApValue> {
    let data = surface_data(k)?;
    let excluded = bad_primes(data.level);
    if excluded.contains(&p) {
        return Err(Error::BadPrime { p, excluded });
    }
    let field = PrimeField::new(p)?;
    let d = match (rank, d) {
        (0, d) => d.unwrap_or(1),
        (1, Some(d)) => d,
        (1, None) => return Err(Error::Domain("rank 1 needs the field Q(sqrt d) of the section".into())),
        _ => return Err(Error::Domain(format!("rank {rank} is not supported"))),
    };
    let fiber_sum: i64 = fiber_counts(k, p)?.iter().map(|c| c.a_p_s).sum();
    let correction = if rank == 1 { field.legendre(field.elem(d)) * p as i64 } else { 0 };
    Ok(ApValue { k, p, rank, d, a_p: -fiber_sum - correction, fiber_sum })
}

/// A_p with the rank and section field of Y_k.
pub fn a_p_default(k: i64, p: u64) -> Result<ApValue> {
    let data = surface_data(k)?;
    a_p(k, p, data.rank, Some(data.d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_matches_enumeration() {
        for p in [5u64, 7, 11] {
            for k in [3, 6, 18] {
                for s in P1::all(p) {
                    let fast = count_fiber_points_with(k, s, p, CountMode::Legendre, Chart::Z).unwrap();
                    let slow = count_fiber_points_with(k, s, p, CountMode::Enumerate, Chart::Z).unwrap();
                    let other = count_fiber_points_with(k, s, p, CountMode::Legendre, Chart::Y).unwrap();
                    assert_eq!(fast, slow, "k={k} p={p} s={s:?}");
                    assert_eq!(fast, other);
                }
            }
        }
    }

    #[test]
    fn tabled_values() {
        assert_eq!(a_p_default(6, 7).unwrap().a_p, -10);
        assert_eq!(a_p_default(6, 29).unwrap().a_p, 50);
        assert_eq!(a_p(18, 31, 1, Some(-3)).unwrap().a_p, -58);
    }

    #[test]
    fn bad_primes_rejected() {
        assert_eq!(bad_primes(120), vec![2, 3, 5]);
        match a_p_default(18, 5) {
            Err(Error::BadPrime { p: 5, excluded }) => assert_eq!(excluded, vec![2, 3, 5]),
            other => panic!("{other:?}"),
        }
        assert!(a_p_default(6, 3).is_err());
        assert!(a_p(18, 7, 1, None).is_err());
        assert!(count_fiber_points(6, P1::Finite(1), 3).is_err());
    }
}
