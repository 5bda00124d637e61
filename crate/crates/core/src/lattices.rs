//! Integer lattices attached to Y_k: the transcendental Gram form, the
//! singular-value table of τ, orthogonal complements, and the Shioda
//! bookkeeping that ties fiber types to the Mordell–Weil rank.

use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// A symmetric integer Gram matrix on a labelled basis.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct GramLattice {
    gram: Vec<Vec<i64>>,
    labels: Vec<String>,
}

impl GramLattice {
    pub fn new(gram: Vec<Vec<i64>>, labels: Vec<String>) -> Result<Self> {
        let n = gram.len();
        if !(2..=3).contains(&n) || gram.iter().any(|r| r.len() != n) || labels.len() != n {
            return Err(Error::Domain("Gram matrix must be 2x2 or 3x3 with one label per row".into()));
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::Domain("Gram matrix is not symmetric".into()));
                }
            }
        }
        Ok(GramLattice { gram, labels })
    }

    /// The form on ⟨γ₁, γ₂, γ₃⟩ shared by every member of the family.
    pub fn ambient() -> Self {
        GramLattice::new(
            vec![vec![0, 0, 1], vec![0, 12, 0], vec![1, 0, 0]],
            vec!["g1".into(), "g2".into(), "g3".into()],
        )
        .expect("valid")
    }

    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn inner(&self, u: &[i64], w: &[i64]) -> i64 {
        let n = self.dim();
        (0..n).map(|i| (0..n).map(|j| u[i] * self.gram[i][j] * w[j]).sum::<i64>()).sum()
    }

    pub fn det(&self) -> i64 {
        let g = &self.gram;
        match self.dim() {
            2 => g[0][0] * g[1][1] - g[0][1] * g[1][0],
            _ => {
                g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
                    + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0])
            }
        }
    }
}

/// x + y√d with rational x, y.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct QuadIrrational {
    pub x: Rational64,
    pub y: Rational64,
    pub d: i64,
}

impl QuadIrrational {
    fn rational(x: Rational64, d: i64) -> Self {
        QuadIrrational { x, y: Rational64::zero(), d }
    }

    fn add(self, o: Self) -> Self {
        QuadIrrational { x: self.x + o.x, y: self.y + o.y, d: self.d }
    }

    fn mul(self, o: Self) -> Self {
        QuadIrrational { x: self.x * o.x + self.y * o.y * self.d, y: self.x * o.y + self.y * o.x, d: self.d }
    }

    fn scale(self, c: i64) -> Self {
        QuadIrrational { x: self.x * c, y: self.y * c, d: self.d }
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }
}

/// A tabulated CM point τ = (A + √B)/C with its primitive relation −6pτ² + 12qτ + r = 0.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct TauRecord {
    pub k: i64,
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub p: i64,
    pub q: i64,
    pub r: i64,
}

impl TauRecord {
    pub fn tau(&self) -> QuadIrrational {
        QuadIrrational { x: Rational64::new(self.a, self.c), y: Rational64::new(1, self.c), d: self.b }
    }

    /// −6pτ² + 12qτ + r, exactly.
    pub fn relation_value(&self) -> QuadIrrational {
        let t = self.tau();
        let d = self.b;
        t.mul(t).scale(-6 * self.p).add(t.scale(12 * self.q)).add(QuadIrrational::rational(Rational64::from(self.r), d))
    }

    /// τ as (Re, Im) doubles.
    pub fn tau_f64(&self) -> (f64, f64) {
        (self.a as f64 / self.c as f64, (-self.b as f64).sqrt() / self.c as f64)
    }

    /// The algebraic class v = pγ₁ + qγ₂ + rγ₃.
    pub fn algebraic_vector(&self) -> [i64; 3] {
        [self.p, self.q, self.r]
    }
}

/// τ for the tabulated singular values, each in the upper half plane.
pub fn tau_table(k: i64) -> Result<TauRecord> {
    let (a, b, c) = match k {
        0 => (-3, -3, 6),
        2 => (-2, -2, 6),
        3 => (-3, -15, 12),
        6 => (0, -6, 6),
        10 => (0, -2, 2),
        18 => (0, -30, 6),
        _ => return Err(Error::NotTabulated(format!("k = {k}"))),
    };
    // Minimal relation C²τ² − 2ACτ + (A² − B) = 0 rescaled to the −6p, 12q, r shape.
    let (mut p, mut q, mut r) = (c * c, a * c, -6 * (a * a - b));
    let g = p.gcd(&q).gcd(&r);
    p /= g;
    q /= g;
    r /= g;
    if p < 0 {
        (p, q, r) = (-p, -q, -r);
    }
    let rec = TauRecord { k, a, b, c, p, q, r };
    if !rec.relation_value().is_zero() {
        return Err(Error::Inconsistent(format!("tau relation fails for k = {k}")));
    }
    Ok(rec)
}

/// Row-style Hermite normal form: positive pivots, entries above each pivot reduced modulo it, zero rows dropped.
pub fn hermite_normal_form(mut a: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    let rows = a.len();
    if rows == 0 {
        return a;
    }
    let cols = a[0].len();
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let Some(piv) = (r..rows).filter(|&i| a[i][col] != 0).min_by_key(|&i| a[i][col].abs()) else {
                break;
            };
            a.swap(r, piv);
            let mut clean = true;
            for i in r + 1..rows {
                let f = a[i][col] / a[r][col];
                if f != 0 {
                    for j in 0..cols {
                        a[i][j] -= f * a[r][j];
                    }
                }
                clean &= a[i][col] == 0;
            }
            if clean {
                break;
            }
        }
        if a[r][col] == 0 {
            continue;
        }
        if a[r][col] < 0 {
            a[r].iter_mut().for_each(|x| *x = -*x);
        }
        for i in 0..r {
            let f = a[i][col].div_euclid(a[r][col]);
            if f != 0 {
                for j in 0..cols {
                    a[i][j] -= f * a[r][j];
                }
            }
        }
        r += 1;
    }
    a.truncate(r);
    a
}

/// Whether w lies in the Z-span of the given rows.
pub fn lattice_contains(basis: &[Vec<i64>], w: &[i64]) -> bool {
    let h = hermite_normal_form(basis.to_vec());
    let mut ext = basis.to_vec();
    ext.push(w.to_vec());
    hermite_normal_form(ext) == h
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Orthocomplement {
    /// A Hermite-normal-form basis of {w : ⟨w, v⟩ = 0}.
    pub basis: Vec<Vec<i64>>,
    pub subgram: GramLattice,
    pub det: i64,
}

/// The saturated sublattice {w ∈ Z³ : ⟨w, v⟩ = 0}.
pub fn orthocomplement(ambient: &GramLattice, v: &[i64; 3]) -> Result<Orthocomplement> {
    if ambient.dim() != 3 {
        return Err(Error::Domain("ambient lattice must have rank 3".into()));
    }
    if v.iter().all(|&x| x == 0) {
        return Err(Error::Domain("v must be nonzero".into()));
    }
    // Row i of [Gv | I] tracks the unimodular row operations; after reduction
    // the rows with vanishing first entry span the integer kernel.
    let g = ambient.gram();
    let c: Vec<i64> = (0..3).map(|i| (0..3).map(|j| g[i][j] * v[j]).sum()).collect();
    let m: Vec<Vec<i64>> = (0..3)
        .map(|i| {
            let mut row = vec![c[i]];
            row.extend((0..3).map(|j| i64::from(i == j)));
            row
        })
        .collect();
    let h = hermite_normal_form(m);
    let kernel: Vec<Vec<i64>> = h.iter().filter(|row| row[0] == 0).map(|row| row[1..].to_vec()).collect();
    let basis = hermite_normal_form(kernel);
    if basis.len() != 2 {
        return Err(Error::Inconsistent("orthogonal complement does not have rank 2".into()));
    }
    let sub: Vec<Vec<i64>> =
        (0..2).map(|i| (0..2).map(|j| ambient.inner(&basis[i], &basis[j])).collect()).collect();
    let subgram = GramLattice::new(sub, vec!["t1".into(), "t2".into()])?;
    let det = subgram.det();
    Ok(Orthocomplement { basis, subgram, det })
}

/// One singular fiber of type I_m.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct FiberEntry {
    pub place: String,
    pub m: u32,
    pub note: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Default)]
pub struct FiberConfiguration {
    pub entries: Vec<FiberEntry>,
}

impl FiberConfiguration {
    pub fn from_components(ms: &[u32]) -> Result<Self> {
        if ms.contains(&0) {
            return Err(Error::Domain("I_m fibers need m >= 1".into()));
        }
        Ok(FiberConfiguration {
            entries: ms.iter().enumerate().map(|(i, &m)| FiberEntry { place: format!("v{i}"), m, note: String::new() }).collect(),
        })
    }

    pub fn components(&self) -> Vec<u32> {
        self.entries.iter().map(|e| e.m).collect()
    }
}

/// Singular fibers of Y_k over the s-line, for k ∈ {3, 6, 18}.
pub fn fiber_table(k: i64) -> Result<FiberConfiguration> {
    let e = |place: &str, m: u32, note: &str| FiberEntry { place: place.into(), m, note: note.into() };
    let entries = match k {
        6 => vec![
            e("s=0", 12, "double over u=inf"),
            e("s=alpha", 3, "over u=0; s^2-6s+1=0"),
            e("s=beta", 3, "over u=0; s^2-6s+1=0"),
            e("s=1/6", 2, "over u=1"),
            e("s=inf", 2, "over u=1"),
            e("s=1/3", 2, "double over u=-8"),
        ],
        3 | 18 => {
            let kk = k.to_string();
            vec![
                e("s=0", 12, "double over u=inf"),
                e("s=alpha1", 3, &format!("over u=0; s^2-{kk}s+1=0")),
                e("s=beta1", 3, &format!("over u=0; s^2-{kk}s+1=0")),
                e(&format!("s=1/{kk}"), 2, "over u=1"),
                e("s=inf", 2, "over u=1"),
                e("s=alpha2", 1, &format!("over u=-8; 9s^2-{kk}s+1=0")),
                e("s=beta2", 1, &format!("over u=-8; 9s^2-{kk}s+1=0")),
            ]
        }
        _ => return Err(Error::NotTabulated(format!("no fiber table for k = {k}"))),
    };
    Ok(FiberConfiguration { entries })
}

/// Mordell–Weil rank from ρ = r + 2 + Σ(m − 1).
pub fn shioda_rank(rho: i64, fibers: &FiberConfiguration) -> Result<i64> {
    if !(1..=20).contains(&rho) {
        return Err(Error::Domain(format!("Picard number {rho} outside [1, 20]")));
    }
    let r = rho - 2 - fibers.entries.iter().map(|e| e.m as i64 - 1).sum::<i64>();
    if r < 0 {
        return Err(Error::Inconsistent(format!("fiber components exceed Picard number {rho}")));
    }
    Ok(r)
}

/// Product of the component counts of the I_m fibers.
pub fn trivial_lattice_det(fibers: &FiberConfiguration) -> i64 {
    fibers.entries.iter().map(|e| e.m as i64).product()
}

/// det NS = (−1)^rank · trivial_det · det MWL / |torsion|².
pub fn ns_determinant(rank: i64, trivial_det: i64, mwl_det: &BigRational, torsion_order: i64) -> Result<BigRational> {
    if torsion_order < 1 {
        return Err(Error::Domain("torsion order must be positive".into()));
    }
    let sign = if rank % 2 == 0 { BigRational::one() } else { -BigRational::one() };
    let t = BigRational::from_integer(torsion_order.into());
    Ok(sign * BigRational::from_integer(trivial_det.into()) * mwl_det / (&t * &t))
}

/// |ns_determinant|, convenient for comparisons with |det T|.
pub fn ns_determinant_abs(rank: i64, trivial_det: i64, mwl_det: &BigRational, torsion_order: i64) -> Result<BigRational> {
    ns_determinant(rank, trivial_det, mwl_det, torsion_order).map(|d| d.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_relations() {
        assert_eq!(tau_table(6).map(|t| (t.p, t.q, t.r)).unwrap(), (1, 0, -1));
        assert_eq!(tau_table(3).map(|t| (t.p, t.q, t.r)).unwrap(), (4, -1, -4));
        assert_eq!(tau_table(18).map(|t| (t.p, t.q, t.r)).unwrap(), (1, 0, -5));
        assert!(matches!(tau_table(7), Err(Error::NotTabulated(_))));
    }

    #[test]
    fn orthocomplements() {
        let g = GramLattice::ambient();
        let o = orthocomplement(&g, &[1, 0, -1]).unwrap();
        assert_eq!(o.det, 24);
        assert!(lattice_contains(&o.basis, &[0, 1, 0]) && lattice_contains(&o.basis, &[1, 0, 1]));
        let o = orthocomplement(&g, &[4, -1, -4]).unwrap();
        assert_eq!(o.basis, vec![vec![1, 0, 1], vec![0, 1, 3]]);
        assert_eq!(o.subgram.gram(), &[vec![2, 3], vec![3, 12]]);
        assert_eq!(orthocomplement(&g, &[1, 0, -5]).unwrap().det, 120);
    }

    #[test]
    fn hnf_basic() {
        assert_eq!(hermite_normal_form(vec![vec![0, 1, 0], vec![1, 0, 1]]), vec![vec![1, 0, 1], vec![0, 1, 0]]);
        assert_eq!(hermite_normal_form(vec![vec![2, 4], vec![3, 5]]), vec![vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn shioda_examples() {
        let f = |ms: &[u32]| FiberConfiguration::from_components(ms).unwrap();
        assert_eq!(shioda_rank(20, &f(&[12, 3, 3, 2, 2, 2])).unwrap(), 0);
        assert_eq!(shioda_rank(20, &f(&[12, 3, 3, 2, 2, 1, 1])).unwrap(), 1);
        assert_eq!(shioda_rank(2, &f(&[])).unwrap(), 0);
        assert!(shioda_rank(10, &f(&[12])).is_err());
        assert_eq!(trivial_lattice_det(&f(&[12, 3, 3, 2, 2, 2])), 864);
        assert_eq!(trivial_lattice_det(&f(&[12, 3, 3, 2, 2, 1, 1])), 432);
        assert_eq!(trivial_lattice_det(&f(&[])), 1);
    }

    #[test]
    fn ns_chain() {
        let one = BigRational::one();
        assert_eq!(ns_determinant(0, 864, &one, 6).unwrap(), BigRational::from_integer(24.into()));
        assert_eq!(ns_determinant(0, 1, &one, 1).unwrap(), one);
        let h = BigRational::from_integer(10.into());
        assert_eq!(ns_determinant(1, 432, &h, 6).unwrap(), BigRational::from_integer((-120).into()));
    }
}
