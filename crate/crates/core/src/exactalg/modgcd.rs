//! Polynomial gcd over Q(√−3) by reduction modulo primes p ≡ 7 (mod 12).
//! For such p, −3 is a square mod p, so both embeddings √−3 ↦ ±r are
//! available and a coefficient a + b√−3 is recovered from its two images.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::Poly;
use super::quad::{QuadElem, RADICAND};
use crate::arith::{is_prime, mul_mod, pow_mod};

const PRIME_COUNT: usize = 64;

type Zw = (BigInt, BigInt);

/// (p, r) with r² ≡ −3 (mod p), descending from 2⁶².
fn primes() -> &'static [(u64, u64)] {
    static PRIMES: OnceLock<Vec<(u64, u64)>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut out = Vec::with_capacity(PRIME_COUNT);
        // largest value ≡ 7 (mod 12) below 2^62
        let mut p = (1u64 << 62) - ((1u64 << 62) % 12) - 5;
        while out.len() < PRIME_COUNT {
            if is_prime(p) {
                let m3 = p - (-RADICAND) as u64;
                let r = pow_mod(m3, (p + 1) / 4, p);
                debug_assert_eq!(mul_mod(r, r, p), m3);
                out.push((p, r));
            }
            p -= 12;
        }
        out
    })
}

/// Coefficients times a common denominator, with the integer content removed.
fn integral(p: &Poly) -> Vec<Zw> {
    let mut l = BigInt::one();
    for c in p.coeffs() {
        l = l.lcm(c.re().denom()).lcm(c.im().denom());
    }
    let lr = BigRational::from_integer(l);
    let mut v: Vec<Zw> =
        p.coeffs().iter().map(|c| ((c.re() * &lr).to_integer(), (c.im() * &lr).to_integer())).collect();
    let g = v.iter().fold(BigInt::zero(), |g, (a, b)| g.gcd(a).gcd(b));
    if !g.is_zero() && !g.is_one() {
        for (a, b) in v.iter_mut() {
            *a = &*a / &g;
            *b = &*b / &g;
        }
    }
    v
}

fn residue(a: &BigInt, p: u64) -> u64 {
    a.mod_floor(&BigInt::from(p)).to_u64().expect("reduced")
}

fn image(v: &[Zw], p: u64, r: u64) -> Vec<u64> {
    v.iter().map(|(a, b)| (residue(a, p) + mul_mod(residue(b, p), r, p)) % p).collect()
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// a mod b over F_p, b nonzero with trimmed leading coefficient.
fn rem_mod(mut a: Vec<u64>, b: &[u64], p: u64) -> Vec<u64> {
    let db = b.len() - 1;
    let inv = inv_mod(b[db], p);
    while a.len() > db {
        let top = a.len() - 1;
        let t = mul_mod(a[top], inv, p);
        if t != 0 {
            let shift = top - db;
            for (i, bc) in b.iter().enumerate() {
                let s = mul_mod(t, *bc, p);
                a[shift + i] = (a[shift + i] + p - s) % p;
            }
        }
        a.pop();
        trim(&mut a);
    }
    a
}

fn gcd_mod(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem_mod(a, &b, p);
        a = b;
        b = r;
    }
    let inv = inv_mod(*a.last().expect("nonzero input"), p);
    a.iter().map(|c| mul_mod(*c, inv, p)).collect()
}

/// n/d ≡ u (mod m) with |n|, |d| ≤ √(m/2), if one exists.
fn rational_reconstruction(u: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), u.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(BigRational::new(r1, t1))
}

/// Running CRT images of the two coordinate parts of each coefficient.
struct Crt {
    modulus: BigInt,
    re: Vec<BigInt>,
    im: Vec<BigInt>,
}

impl Crt {
    fn combine(x: &BigInt, m: &BigInt, y: u64, p: u64) -> BigInt {
        let mp = residue(m, p);
        let xp = residue(x, p);
        let k = mul_mod((y + p - xp) % p, inv_mod(mp, p), p);
        x + m * BigInt::from(k)
    }

    fn add(&mut self, re: &[u64], im: &[u64], p: u64) {
        for (x, y) in self.re.iter_mut().zip(re) {
            *x = Crt::combine(x, &self.modulus, *y, p);
        }
        for (x, y) in self.im.iter_mut().zip(im) {
            *x = Crt::combine(x, &self.modulus, *y, p);
        }
        self.modulus *= BigInt::from(p);
    }

    fn reconstruct(&self) -> Option<Poly> {
        let mut c = Vec::with_capacity(self.re.len());
        for (a, b) in self.re.iter().zip(&self.im) {
            let a = rational_reconstruction(a, &self.modulus)?;
            let b = rational_reconstruction(b, &self.modulus)?;
            c.push(QuadElem::new(a, b));
        }
        Some(Poly::new(c))
    }
}

fn divides(d: &Poly, f: &Poly) -> bool {
    f.div_rem(d).is_ok_and(|(_, r)| r.is_zero())
}

/// Monic gcd of two nonzero polynomials, or `None` when the primes run out.
pub(super) fn gcd(a: &Poly, b: &Poly) -> Option<Poly> {
    let (ia, ib) = (integral(a), integral(b));
    let (la, lb) = (ia.last().expect("nonzero"), ib.last().expect("nonzero"));
    let mut best: Option<usize> = None;
    let mut crt: Option<Crt> = None;
    let mut last: Option<Poly> = None;
    for &(p, r) in primes() {
        let roots = [r, p - r];
        // Leading coefficients must survive under both embeddings.
        if roots.iter().any(|&s| image(std::slice::from_ref(la), p, s)[0] == 0 || image(std::slice::from_ref(lb), p, s)[0] == 0)
        {
            continue;
        }
        let g = roots.map(|s| gcd_mod(image(&ia, p, s), image(&ib, p, s), p));
        if g[0].len() != g[1].len() {
            continue;
        }
        let d = g[0].len() - 1;
        if d == 0 {
            return Some(Poly::one());
        }
        match best {
            Some(bd) if d > bd => continue,
            Some(bd) if d == bd => {}
            _ => {
                best = Some(d);
                crt = None;
                last = None;
            }
        }
        // a + b·r and a − b·r give a = (g₀ + g₁)/2 and b = (g₀ − g₁)/(2r).
        let inv2 = inv_mod(2, p);
        let inv2r = inv_mod(mul_mod(2, r, p), p);
        let re: Vec<u64> = g[0].iter().zip(&g[1]).map(|(x, y)| mul_mod((x + y) % p, inv2, p)).collect();
        let im: Vec<u64> = g[0].iter().zip(&g[1]).map(|(x, y)| mul_mod((x + p - y) % p, inv2r, p)).collect();
        let state = crt.get_or_insert_with(|| Crt {
            modulus: BigInt::one(),
            re: vec![BigInt::zero(); d + 1],
            im: vec![BigInt::zero(); d + 1],
        });
        state.add(&re, &im, p);
        let Some(cand) = state.reconstruct() else { continue };
        if last.as_ref() == Some(&cand) && divides(&cand, a) && divides(&cand, b) {
            return Some(cand);
        }
        last = Some(cand);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    #[test]
    fn reconstruction() {
        let m = BigInt::from(1_000_003u64) * BigInt::from(999_983u64);
        let e = BigInt::from(29).extended_gcd(&m);
        assert!(e.gcd.is_one());
        // u = −17·29⁻¹ mod m
        let u = (BigInt::from(-17) * e.x).mod_floor(&m);
        assert_eq!(rational_reconstruction(&u, &m), Some(BigRational::new(BigInt::from(-17), BigInt::from(29))));
    }

    #[test]
    fn nontrivial_gcd_with_root_coefficients() {
        let w = QuadElem::from_ints(0, 1);
        let half = QuadElem::from_ratio(1, 2);
        // (σ − √−3/2) and (σ² + 7σ − 1) (3σ + 1)
        let common = &Poly::new(vec![-&(&w * &half), QuadElem::one()]) * &p(&[-1, 7, 1]);
        let a = &common * &p(&[1, 3]);
        let b = &common * &p(&[5, 0, 2]).pow(2);
        assert_eq!(gcd(&a, &b), Some(common.monic().unwrap()));
        assert_eq!(gcd(&p(&[1, 1]), &p(&[2, 1])), Some(Poly::one()));
    }
}
