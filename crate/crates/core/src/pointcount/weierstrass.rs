use super::field::PrimeField;
use crate::error::{Error, Result};

/// y² + a1·xy + a3·y = x³ + a2·x² + a4·x + a6 over F_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeierstrassModP {
    pub field: PrimeField,
    pub a: [u64; 5],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointModP {
    Infinity,
    Affine(u64, u64),
}

impl WeierstrassModP {
    pub fn new(field: PrimeField, a: [i64; 5]) -> Self {
        WeierstrassModP { field, a: a.map(|c| field.elem(c)) }
    }

    pub fn discriminant(&self) -> u64 {
        let f = &self.field;
        let [a1, a2, a3, a4, a6] = self.a;
        let b2 = f.add(f.mul(a1, a1), f.mul(4, a2));
        let b4 = f.add(f.mul(a1, a3), f.mul(2, a4));
        let b6 = f.add(f.mul(a3, a3), f.mul(4, a6));
        let b8 = {
            let t = f.add(f.mul(f.mul(a1, a1), a6), f.mul(4, f.mul(a2, a6)));
            let t = f.sub(t, f.mul(a1, f.mul(a3, a4)));
            let t = f.add(t, f.mul(a2, f.mul(a3, a3)));
            f.sub(t, f.mul(a4, a4))
        };
        let t1 = f.mul(f.mul(b2, b2), b8);
        let t2 = f.mul(8, f.mul(b4, f.mul(b4, b4)));
        let t3 = f.mul(27, f.mul(b6, b6));
        let t4 = f.mul(9, f.mul(b2, f.mul(b4, b6)));
        f.add(f.sub(f.sub(f.neg(t1), t2), t3), t4)
    }

    pub fn is_singular(&self) -> bool {
        self.discriminant() == 0
    }

    /// x³ + a2x² + a4x + a6 and a1x + a3 at x.
    fn sides(&self, x: u64) -> (u64, u64) {
        let f = &self.field;
        let [a1, a2, a3, a4, a6] = self.a;
        let rhs = f.add(f.mul(f.add(f.mul(f.add(x, a2), x), a4), x), a6);
        (rhs, f.add(f.mul(a1, x), a3))
    }

    /// Points in P²(F_p), singular or not: for each x, y² + b·y − rhs = 0.
    pub fn count_points_any(&self) -> u64 {
        let f = &self.field;
        1 + (0..f.p())
            .map(|x| {
                let (rhs, b) = self.sides(x);
                f.quadratic_roots(1, b, f.neg(rhs))
            })
            .sum::<u64>()
    }

    /// Brute-force count over F_p², for cross-checks.
    pub fn count_points_enumerate(&self) -> u64 {
        let f = &self.field;
        let mut n = 1;
        for x in 0..f.p() {
            let (rhs, b) = self.sides(x);
            for y in 0..f.p() {
                if f.add(f.mul(y, y), f.mul(b, y)) == rhs {
                    n += 1;
                }
            }
        }
        n
    }

    pub fn contains(&self, p: PointModP) -> bool {
        match p {
            PointModP::Infinity => true,
            PointModP::Affine(x, y) => {
                let f = &self.field;
                let (rhs, b) = self.sides(x);
                f.add(f.mul(y, y), f.mul(b, y)) == rhs
            }
        }
    }

    pub fn neg(&self, p: PointModP) -> PointModP {
        match p {
            PointModP::Infinity => p,
            PointModP::Affine(x, y) => {
                let f = &self.field;
                let (_, b) = self.sides(x);
                PointModP::Affine(x, f.sub(f.neg(y), b))
            }
        }
    }

    pub fn add(&self, p: PointModP, q: PointModP) -> Result<PointModP> {
        use PointModP::*;
        let f = &self.field;
        let [a1, a2, a3, a4, _] = self.a;
        let (x1, y1, x2, y2) = match (p, q) {
            (Infinity, _) => return Ok(q),
            (_, Infinity) => return Ok(p),
            (Affine(x1, y1), Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let lambda = if x1 != x2 {
            f.mul(f.sub(y2, y1), f.inv(f.sub(x2, x1))?)
        } else {
            if self.neg(p) == q {
                return Ok(Infinity);
            }
            // tangent: (3x² + 2a2x + a4 − a1y)/(2y + a1x + a3)
            let num = f.sub(f.add(f.add(f.mul(3, f.mul(x1, x1)), f.mul(2, f.mul(a2, x1))), a4), f.mul(a1, y1));
            let den = f.add(f.add(f.mul(2, y1), f.mul(a1, x1)), a3);
            f.mul(num, f.inv(den).map_err(|_| Error::Singular("tangent at a singular point".into()))?)
        };
        let nu = f.sub(y1, f.mul(lambda, x1));
        let x3 = f.sub(f.sub(f.sub(f.add(f.mul(lambda, lambda), f.mul(a1, lambda)), a2), x1), x2);
        let y3 = f.sub(f.sub(f.neg(f.mul(f.add(lambda, a1), x3)), nu), a3);
        Ok(Affine(x3, y3))
    }

    pub fn mul(&self, n: u64, p: PointModP) -> Result<PointModP> {
        let mut acc = PointModP::Infinity;
        let mut base = p;
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.add(acc, base)?;
            }
            base = self.add(base, base)?;
            n >>= 1;
        }
        Ok(acc)
    }

    /// Smallest n ≥ 1 with nP = O, searching up to the Hasse bound.
    pub fn order(&self, p: PointModP) -> Result<u64> {
        if !self.contains(p) {
            return Err(Error::NotOnCurve);
        }
        let bound = self.field.p() + 1 + 2 * (self.field.p() as f64).sqrt().ceil() as u64;
        let mut q = p;
        for n in 1..=bound {
            if q == PointModP::Infinity {
                return Ok(n);
            }
            q = self.add(q, p)?;
        }
        Err(Error::Inconsistent("point order exceeds the Hasse bound".into()))
    }
}

/// #E(F_p) for a nonsingular long Weierstrass curve.
pub fn count_weierstrass(curve: &WeierstrassModP) -> Result<u64> {
    if curve.is_singular() {
        return Err(Error::Singular(format!("discriminant vanishes mod {}", curve.field.p())));
    }
    Ok(curve.count_points_any())
}
