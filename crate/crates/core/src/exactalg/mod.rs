//! Exact arithmetic over Q(√−3): field elements, polynomials and rational
//! functions in one variable, valuations at places, and squareness tests.

mod modgcd;
mod poly;
mod quad;
mod ratfunc;

pub use poly::Poly;
pub use quad::{is_square_quad, rational_sqrt, QuadElem, RADICAND};
pub use ratfunc::RatFunc;

use crate::error::{Error, Result};

/// Whether a finite place's polynomial was proven irreducible.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Irreducibility {
    Proven,
    /// Degree above 2; accepted as given.
    Assumed,
}

#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub enum Place {
    Finite { poly: Poly, irreducibility: Irreducibility },
    Infinity,
}

impl Place {
    /// A finite place from a nonconstant polynomial, made monic.
    /// Degree 2 polynomials with a root in Q(√−3) are rejected.
    pub fn finite(p: Poly) -> Result<Place> {
        let deg = p.degree().ok_or(Error::InvalidPlace("zero polynomial".into()))?;
        if deg == 0 {
            return Err(Error::InvalidPlace("constant polynomial".into()));
        }
        let p = p.monic()?;
        let irreducibility = match deg {
            1 => Irreducibility::Proven,
            2 => {
                let (c, b) = (p.coeff(0), p.coeff(1));
                let disc = &(&b * &b) - &(&QuadElem::from_int(4) * &c);
                if is_square_quad(&disc).is_some() {
                    return Err(Error::InvalidPlace(format!("{p} splits over Q(sqrt(-3))")));
                }
                Irreducibility::Proven
            }
            _ => Irreducibility::Assumed,
        };
        Ok(Place::Finite { poly: p, irreducibility })
    }

    /// The place σ = r.
    pub fn at(r: &QuadElem) -> Place {
        Place::Finite { poly: Poly::linear(r), irreducibility: Irreducibility::Proven }
    }

    /// Residue degree over Q(√−3).
    pub fn degree(&self) -> usize {
        match self {
            Place::Finite { poly, .. } => poly.deg(),
            Place::Infinity => 1,
        }
    }
}

impl std::fmt::Display for Place {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Place::Finite { poly, .. } => write!(f, "{poly}"),
            Place::Infinity => write!(f, "infinity"),
        }
    }
}

/// Order of vanishing of f at v, negative for poles.
pub fn valuation(f: &RatFunc, v: &Place) -> Result<i64> {
    if f.is_zero() {
        return Err(Error::ZeroValuation);
    }
    match v {
        Place::Infinity => Ok(-f.degree()),
        Place::Finite { poly, .. } => {
            Ok(f.num().multiplicity(poly)? as i64 - f.den().multiplicity(poly)? as i64)
        }
    }
}

/// Square root of a monic-times-constant polynomial, if it is a square in Q(√−3)[σ].
fn poly_sqrt(p: &Poly) -> Result<Option<Poly>> {
    let (lc, parts) = p.squarefree_decomposition()?;
    let Some(c) = is_square_quad(&lc) else {
        return Ok(None);
    };
    let mut root = Poly::constant(c);
    for (f, m) in parts {
        if m % 2 == 1 {
            return Ok(None);
        }
        root = &root * &f.pow(m / 2);
    }
    Ok(Some(root))
}

/// A square root of f in Q(√−3)(σ), if one exists.
pub fn sqrt_ratfunc(f: &RatFunc) -> Result<Option<RatFunc>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("sqrt_ratfunc"));
    }
    let Some(n) = poly_sqrt(f.num())? else { return Ok(None) };
    let Some(d) = poly_sqrt(f.den())? else { return Ok(None) };
    Ok(Some(RatFunc::new(n, d)?))
}

/// Whether f is a nonzero square in Q(√−3)(σ).
pub fn is_square_ratfunc(f: &RatFunc) -> Result<bool> {
    Ok(sqrt_ratfunc(f)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    #[test]
    fn valuations() {
        let f = RatFunc::new(p(&[0, 0, 5]), (p(&[-9, 1]) * p(&[1, 1])).pow(2)).unwrap();
        assert_eq!(valuation(&f, &Place::finite(p(&[-9, 1])).unwrap()).unwrap(), -2);
        assert_eq!(valuation(&f, &Place::at(&QuadElem::zero())).unwrap(), 2);
        assert_eq!(valuation(&f, &Place::Infinity).unwrap(), 2);
        assert_eq!(valuation(&RatFunc::one(), &Place::Infinity).unwrap(), 0);
        assert!(valuation(&RatFunc::zero(), &Place::Infinity).is_err());
    }

    #[test]
    fn places_reject_split_quadratics() {
        // σ² + 3 = (σ − √−3)(σ + √−3)
        assert!(Place::finite(p(&[3, 0, 1])).is_err());
        assert!(Place::finite(p(&[1, -18, 1])).is_ok());
        assert!(Place::finite(p(&[5])).is_err());
        match Place::finite(p(&[1, 0, 0, 1, 1])).unwrap() {
            Place::Finite { irreducibility, .. } => assert_eq!(irreducibility, Irreducibility::Assumed),
            Place::Infinity => unreachable!(),
        }
    }

    #[test]
    fn squareness() {
        let g = RatFunc::new(p(&[3, 1]), p(&[-9, 1])).unwrap();
        let sq = &g * &g;
        assert!(is_square_ratfunc(&sq).unwrap());
        assert!(is_square_ratfunc(&sq.scale(&QuadElem::from_int(-3))).unwrap());
        assert!(!is_square_ratfunc(&sq.scale(&QuadElem::from_int(2))).unwrap());
        assert!(!is_square_ratfunc(&(&sq * &RatFunc::var())).unwrap());
        let r = sqrt_ratfunc(&sq).unwrap().unwrap();
        assert_eq!(&r * &r, sq);
    }
}
