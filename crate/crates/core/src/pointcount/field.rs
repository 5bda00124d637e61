use crate::arith::{is_prime, mul_mod, pow_mod};
use crate::error::{Error, Result};

/// The prime field F_p for an odd prime p; elements are residues in [0, p).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p == 2 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p >= 1 << 31 {
            return Err(Error::Domain(format!("p = {p} is too large for fiber counting")));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn elem(&self, a: i64) -> u64 {
        a.rem_euclid(self.p as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.p)
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        pow_mod(a, e, self.p)
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        if a % self.p == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.p - 2))
    }

    /// Legendre symbol of a residue.
    #[inline]
    pub fn legendre(&self, a: u64) -> i64 {
        if a == 0 {
            return 0;
        }
        if self.pow(a, (self.p - 1) / 2) == 1 {
            1
        } else {
            -1
        }
    }

    /// Number of t ∈ F_p with a·t² + b·t + c = 0.
    pub fn quadratic_roots(&self, a: u64, b: u64, c: u64) -> u64 {
        if a != 0 {
            let disc = self.sub(self.mul(b, b), self.mul(4 % self.p, self.mul(a, c)));
            (1 + self.legendre(disc)) as u64
        } else if b != 0 {
            1
        } else if c == 0 {
            self.p
        } else {
            0
        }
    }
}

/// (a/p) for an odd prime p by Euler's criterion.
pub fn legendre(a: i64, p: u64) -> Result<i64> {
    let f = PrimeField::new(p)?;
    Ok(f.legendre(f.elem(a)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(-3, 7).unwrap(), 1);
        assert_eq!(legendre(-3, 5).unwrap(), -1);
        assert_eq!(legendre(35, 7).unwrap(), 0);
        assert!(legendre(1, 2).is_err());
        assert!(legendre(1, 9).is_err());
    }

    #[test]
    fn field_ops() {
        let f = PrimeField::new(13).unwrap();
        assert_eq!(f.mul(f.inv(5).unwrap(), 5), 1);
        assert_eq!(f.elem(-1), 12);
        assert_eq!(f.add(7, 9), 3);
        assert_eq!(f.sub(3, 9), 7);
        assert!(f.inv(0).is_err());
    }

    #[test]
    fn quadratic_root_counts() {
        let f = PrimeField::new(7).unwrap();
        for a in 0..7 {
            for b in 0..7 {
                for c in 0..7 {
                    let brute = (0..7).filter(|&t| (a * t * t + b * t + c) % 7 == 0).count() as u64;
                    assert_eq!(f.quadratic_roots(a, b, c), brute);
                }
            }
        }
    }
}
