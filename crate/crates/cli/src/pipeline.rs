//! End-to-end runs behind each subcommand.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use k3mahler::lattices::{
    fiber_table, ns_determinant_abs, orthocomplement, shioda_rank, tau_table, trivial_lattice_det, GramLattice,
};
use k3mahler::lfunctions::{
    d3, dirichlet_lvalue, epstein_combo, form_coefficients, hecke_lvalue, newform_table, twist_character, twisted_newform_coefficients,
    weight3_tail_bound, QuadFormSeries, TABLE_PRIMES,
};
use k3mahler::mahler::eta::fit_w_expansion;
use k3mahler::mahler::{bertin_series, mahler_mc, mahler_quadrature_prec, tau_of_k};
use k3mahler::mwsections::{height_breakdown, p_sigma, section_suite, y18_transcripts, NeronTranscript, CHI};
use k3mahler::arith::{kronecker, primes_up_to};
use k3mahler::numeric::BigReal;
use k3mahler::pointcount::{a_p_range, surface_data, ApCache};
use k3mahler::{Error, Result};

use crate::report::{Document, Side, SubCheck, VerificationReport};

/// Left-hand side method for `m(P_k)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[default]
    Quadrature,
    Bertin,
    Mc,
}

/// What `coeffs` prints.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CoeffSeries {
    /// A_p of the binary-form series at primes p ≤ pmax.
    #[default]
    Form,
    /// Leading coefficients of w(τ) in powers of q.
    W,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Options {
    pub k: i64,
    pub prec: usize,
    pub pmax: u64,
    pub tol: Option<f64>,
    pub method: Method,
    pub seed: u64,
    pub cache: Option<ApCache>,
}

impl Default for Options {
    fn default() -> Self {
        Options { k: 6, prec: 128, pmax: 31, tol: None, method: Method::Quadrature, seed: 1, cache: None }
    }
}

/// The echoed input. The cache directory is left out so that cold and warm
/// runs print identical documents.
#[derive(Serialize)]
struct Input<'a> {
    command: &'a str,
    k: i64,
    prec: usize,
    pmax: u64,
    tol: f64,
    method: Method,
    seed: u64,
}

fn input<'a>(command: &'a str, o: &Options, tol: f64) -> Input<'a> {
    Input { command, k: o.k, prec: o.prec, pmax: o.pmax, tol, method: o.method, seed: o.seed }
}

pub const DEFAULT_TOL: f64 = 1e-5;

/// The k for which `verify` has an identity.
pub const VERIFY_K: [i64; 4] = [0, 3, 6, 18];

/// Comparison tolerance of `verify` when none is given.
pub fn default_tolerance(k: i64) -> f64 {
    match k {
        0 => 1e-6,
        18 => 1e-4,
        _ => 1e-5,
    }
}

/// |det| of the transcendental lattice claimed for Y_k.
fn expected_det(k: i64) -> Option<i64> {
    match k {
        3 => Some(15),
        6 => Some(24),
        18 => Some(120),
        _ => None,
    }
}

fn discriminant(k: i64) -> Result<i64> {
    expected_det(k).map(|d| -d).ok_or_else(|| Error::NotTabulated(format!("no form series for k = {k}")))
}

const MC_MAX_SAMPLES: u64 = 1 << 28;

/// Samples for a standard error near `tol`; the integrand has variance below 1.
fn mc_samples(tol: f64) -> u64 {
    ((1.0 / (tol * tol)).ceil() as u64).clamp(10_000, MC_MAX_SAMPLES)
}

/// m(P_k) by the chosen method, with its error bound and a description.
pub fn mahler_value(k: i64, method: Method, tol: f64, prec: usize, seed: u64) -> Result<(BigReal, String)> {
    let kf = k as f64;
    match method {
        Method::Quadrature => Ok((
            mahler_quadrature_prec(kf, tol, prec)?,
            format!("tanh-sinh quadrature of the Jensen-reduced 2-torus integral, tol {tol:.0e}"),
        )),
        Method::Bertin => {
            let tau = tau_of_k(kf, prec)?;
            let m_box = if tol < 1e-8 { 200 } else { 64 };
            let b = bertin_series(&tau.tau, m_box)?;
            Ok((
                BigReal::estimate(b.value, b.error, prec),
                format!("Eisenstein-Kronecker series at tau({k}), boxes {m_box}..{} extrapolated", 4 * m_box),
            ))
        }
        Method::Mc => {
            let n = mc_samples(tol);
            let e = mahler_mc(kf, n, seed)?;
            Ok((
                BigReal::estimate(e.estimate, e.stderr, prec),
                format!("Monte Carlo, {n} samples, seed {seed}; error bound is one standard error"),
            ))
        }
    }
}

/// Smallest power-of-ten cutoff whose tail bound is below `target`.
fn cutoff_for(target: f64) -> u64 {
    let mut n = 1000u64;
    while weight3_tail_bound(n) > target && n < 100_000_000 {
        n *= 10;
    }
    n
}

fn real(n: i64, prec: usize) -> BigReal {
    BigReal::from_i64(n, prec)
}

/// Right-hand side of the identity for k, its description and a label.
pub fn identity_rhs(k: i64, tol: f64, prec: usize) -> Result<(BigReal, String, String)> {
    let pi3 = BigReal::pi(prec).powi(3);
    let lval = |d: i64, pref: &BigReal| -> Result<(BigReal, u64)> {
        let n = cutoff_for(tol / (4.0 * pref.to_f64()));
        Ok((hecke_lvalue(&QuadFormSeries::for_discriminant(d)?, 3, n, prec)?, n))
    };
    match k {
        0 => Ok((d3(prec)?, "d3 = (3 sqrt 3/4 pi) L(chi_-3, 2)".into(), "m(P_0) = d_3".into())),
        3 => {
            let pref = &(&real(15, prec) * &real(15, prec).sqrt()?) / &(&real(2, prec) * &pi3);
            let (l, n) = lval(-15, &pref)?;
            Ok((&pref * &l, format!("(15 sqrt 15/2 pi^3) L(g_15, 3), form sum over Q <= {n}"), "m(P_3) = (15 sqrt 15/2 pi^3) L(g_15, 3)".into()))
        }
        6 => {
            let pref = &(&real(24, prec) * &real(6, prec).sqrt()?) / &pi3;
            let (l, n) = lval(-24, &pref)?;
            Ok((&pref * &l, format!("(24 sqrt 6/pi^3) L(g_24, 3), form sum over Q <= {n}"), "m(P_6) = (24 sqrt 6/pi^3) L(g_24, 3)".into()))
        }
        18 => {
            let pref = &(&real(6, prec) * &real(120, prec).sqrt()?) / &pi3;
            let (l, n) = lval(-120, &pref)?;
            let e = &(&real(14, prec) / &real(5, prec)) * &d3(prec)?;
            Ok((
                &(&pref * &l) + &e,
                format!("(6 sqrt 120/pi^3) L(g_120, 3) + (14/5) d3, form sum over Q <= {n}"),
                "m(P_18) = (6 sqrt 120/pi^3) L(g_120, 3) + (14/5) d_3".into(),
            ))
        }
        _ => Err(Error::Domain(format!("no identity for k = {k}"))),
    }
}

/// A_p from point counts against the twisted newform coefficients, p ≤ pmax.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ApRow {
    pub p: u64,
    pub a_p: i64,
    pub newform: i64,
    pub matches: bool,
}

pub fn ap_rows(k: i64, pmax: u64, cache: Option<&ApCache>) -> Result<Vec<ApRow>> {
    let level = surface_data(k)?.level;
    let want = twisted_newform_coefficients(level, pmax.max(2) as usize)?;
    a_p_range(k, pmax, cache)?
        .into_iter()
        .map(|v| {
            let newform = want.get(v.p as usize).ok_or(Error::InsufficientCoefficients { need: v.p as usize, have: want.max_n() })?;
            Ok(ApRow { p: v.p, a_p: v.a_p, newform, matches: v.a_p == newform })
        })
        .collect()
}

fn lattice_checks(k: i64, out: &mut Vec<SubCheck>) -> Result<()> {
    let rec = tau_table(k)?;
    out.push(SubCheck::new(
        "tau_relation",
        rec.relation_value().is_zero(),
        format!("-6p tau^2 + 12q tau + r = 0 with (p, q, r) = ({}, {}, {})", rec.p, rec.q, rec.r),
        "lattices::tau_table, exact in Q(tau)",
    ));
    let want = expected_det(k).expect("tabulated k");
    let o = orthocomplement(&GramLattice::ambient(), &rec.algebraic_vector())?;
    out.push(SubCheck::new(
        "transcendental_det",
        o.det.abs() == want,
        format!("|det| = {} (expected {want})", o.det.abs()),
        "orthogonal complement by Hermite normal form",
    ));
    let fibers = fiber_table(k)?;
    let rank = shioda_rank(20, &fibers)?;
    let expected_rank = i64::from(surface_data(k)?.rank);
    out.push(SubCheck::new(
        "shioda_rank",
        rank == expected_rank,
        format!("rank {rank} from fibers {:?} (expected {expected_rank})", fibers.components()),
        "Shioda-Tate formula with Picard number 20",
    ));
    let mwl = match k {
        6 => Some(BigRational::from_integer(BigInt::from(1))),
        18 => Some(height_of_p_sigma()?),
        _ => None,
    };
    if let Some(mwl) = mwl {
        let ns = ns_determinant_abs(rank, trivial_lattice_det(&fibers), &mwl, 6)?;
        out.push(SubCheck::new(
            "ns_determinant",
            ns == BigRational::from_integer(BigInt::from(want)),
            format!("|det NS| = {ns} from trivial lattice det {} and MWL det {mwl}", trivial_lattice_det(&fibers)),
            "|det NS| = |det Triv| det MWL / |torsion|^2, torsion of order 6",
        ));
    }
    Ok(())
}

fn height_of_p_sigma() -> Result<BigRational> {
    k3mahler::mwsections::y18_height(&p_sigma()?)
}

/// The complete chain for k ∈ {0, 3, 6, 18}.
pub fn verify_report(o: &Options) -> Result<VerificationReport> {
    let k = o.k;
    if !VERIFY_K.contains(&k) {
        return Err(Error::Domain(format!("verify supports k in {VERIFY_K:?}, got {k}")));
    }
    let tol = o.tol.unwrap_or(default_tolerance(k));
    let (rhs, rhs_method, identity) = identity_rhs(k, tol, o.prec)?;
    let (lhs, lhs_method) = mahler_value(k, o.method, tol / 100.0, o.prec, o.seed)?;
    let mut subs = Vec::new();
    if k != 0 {
        lattice_checks(k, &mut subs)?;
        let level = surface_data(k)?.level;
        let table = twisted_newform_coefficients(level, TABLE_PRIMES[10] as usize);
        subs.push(SubCheck::new(
            "form_coefficients",
            table.is_ok(),
            match &table {
                Ok(_) => format!("form series reproduce the level {level} table at p <= 31"),
                Err(e) => e.to_string(),
            },
            "binary-form enumeration against the embedded newform table",
        ));
        let rows = ap_rows(k, o.pmax, o.cache.as_ref())?;
        let bad: Vec<u64> = rows.iter().filter(|r| !r.matches).map(|r| r.p).collect();
        subs.push(SubCheck::new(
            "a_p",
            bad.is_empty(),
            format!("{} good primes p <= {}, mismatches at {bad:?}", rows.len(), o.pmax),
            "fiber point counts over F_p",
        ));
        let quad = if o.method == Method::Quadrature { lhs.clone() } else { mahler_value(k, Method::Quadrature, 1e-9, o.prec, 0)?.0 };
        let (bert, _) = mahler_value(k, Method::Bertin, 1e-6, o.prec, 0)?;
        let diff = bert.abs_diff(&quad);
        subs.push(SubCheck::new(
            "bertin_consistency",
            diff < 1e-4,
            format!("|series - quadrature| = {diff:.2e}"),
            "Eisenstein-Kronecker series at the tabulated tau",
        ));
    }
    if k == 18 {
        let ep = epstein_combo(1_000_000, o.prec)?;
        let target = &(&real(14, o.prec) / &real(5, o.prec)) * &d3(o.prec)?;
        let diff = ep.abs_diff(&target);
        subs.push(SubCheck::new(
            "epstein",
            diff < 1e-5,
            format!("|Epstein combination - (14/5) d3| = {diff:.2e}"),
            "weight-0 Epstein sums over Q <= 10^6 with area-law tail",
        ));
        for c in section_suite()?.checks {
            subs.push(SubCheck::new(&format!("section:{}", c.name), c.pass, c.detail, "exact arithmetic over Q(sqrt -3)(sigma)"));
        }
    }
    let diff = lhs.abs_diff(&rhs);
    Ok(VerificationReport::new(identity, k, Side::new(&lhs, lhs_method), Side::new(&rhs, rhs_method), diff, tol, subs))
}

pub fn verify(o: &Options) -> Result<(Document, VerificationReport)> {
    let r = verify_report(o)?;
    let tol = r.tolerance;
    let doc = Document::new(
        &input("verify", o, tol),
        &r,
        Some(r.lhs.error_bound + r.rhs.error_bound),
        format!("lhs: {}; rhs: {}", r.lhs.method, r.rhs.method),
    );
    Ok((doc, r))
}

pub fn mahler(o: &Options) -> Result<Document> {
    let tol = o.tol.unwrap_or(DEFAULT_TOL);
    let (v, method) = mahler_value(o.k, o.method, tol, o.prec, o.seed)?;
    Ok(Document::new(&input("mahler", o, tol), &v.to_f64(), Some(v.error_bound()), method))
}

pub fn lvalue(o: &Options) -> Result<Document> {
    let tol = o.tol.unwrap_or(DEFAULT_TOL);
    if o.k == 0 {
        let v = dirichlet_lvalue(3, 2, o.prec)?;
        return Ok(Document::new(&input("lvalue", o, tol), &v.to_f64(), Some(v.error_bound()), "L(chi_-3, 2)".into()));
    }
    let d = discriminant(o.k)?;
    let n = cutoff_for(tol);
    let v = hecke_lvalue(&QuadFormSeries::for_discriminant(d)?, 3, n, o.prec)?;
    Ok(Document::new(
        &input("lvalue", o, tol),
        &v.to_f64(),
        Some(v.error_bound()),
        format!("L(g_{}, 3) as a binary-form sum over Q <= {n}", -d),
    ))
}

pub fn ap(o: &Options) -> Result<Document> {
    let rows = ap_rows(o.k, o.pmax, o.cache.as_ref())?;
    Ok(Document::new(
        &input("ap", o, o.tol.unwrap_or(DEFAULT_TOL)),
        &rows,
        None,
        format!("A_p = -sum_s a_p(s) - rank (d/p) p from fiber counts; newform level {}", surface_data(o.k)?.level),
    ))
}

#[derive(Serialize)]
struct LatticeValue {
    tau: (i64, i64, i64),
    relation: (i64, i64, i64),
    basis: Vec<Vec<i64>>,
    gram: Vec<Vec<i64>>,
    det: i64,
    fibers: Option<Vec<u32>>,
    trivial_det: Option<i64>,
    rank: Option<i64>,
    ns_det: Option<String>,
}

pub fn lattice(o: &Options) -> Result<Document> {
    let rec = tau_table(o.k)?;
    let oc = orthocomplement(&GramLattice::ambient(), &rec.algebraic_vector())?;
    let fibers = fiber_table(o.k).ok();
    let rank = fibers.as_ref().map(|f| shioda_rank(20, f)).transpose()?;
    let mwl = match o.k {
        6 => Some(BigRational::from_integer(BigInt::from(1))),
        18 => Some(height_of_p_sigma()?),
        _ => None,
    };
    let ns_det = match (&fibers, rank, mwl) {
        (Some(f), Some(r), Some(m)) => Some(ns_determinant_abs(r, trivial_lattice_det(f), &m, 6)?.to_string()),
        _ => None,
    };
    let v = LatticeValue {
        tau: (rec.a, rec.b, rec.c),
        relation: (rec.p, rec.q, rec.r),
        basis: oc.basis.clone(),
        gram: oc.subgram.gram().to_vec(),
        det: oc.det,
        fibers: fibers.as_ref().map(|f| f.components()),
        trivial_det: fibers.as_ref().map(trivial_lattice_det),
        rank,
        ns_det,
    };
    Ok(Document::new(
        &input("lattice", o, o.tol.unwrap_or(DEFAULT_TOL)),
        &v,
        None,
        "tau = (A + sqrt B)/C; orthogonal complement of p g1 + q g2 + r g3 in the rank-3 lattice".into(),
    ))
}

#[derive(Serialize)]
struct HeightValue {
    height: String,
    chi: u32,
    zero_intersection: u64,
    fibers: Vec<(String, u32, u32, String)>,
    transcripts: Vec<NeronTranscript>,
}

pub fn height(o: &Options) -> Result<Document> {
    if o.k != 18 {
        return Err(Error::Domain(format!("section heights are available for k = 18 only, got {}", o.k)));
    }
    let p = p_sigma()?;
    let transcripts = y18_transcripts(&p)?;
    let fibers = transcripts.iter().map(NeronTranscript::fiber_data).collect::<Result<Vec<_>>>()?;
    let (_, b) = height_breakdown(&p, CHI, &fibers)?;
    let v = HeightValue {
        height: b.height.clone(),
        chi: b.chi,
        zero_intersection: b.zero_intersection,
        fibers: b.fibers,
        transcripts,
    };
    Ok(Document::new(
        &input("height", o, o.tol.unwrap_or(DEFAULT_TOL)),
        &v,
        None,
        "h(P) = 2 chi + 2 (P.O) - sum contr_v(P), components from explicit Weierstrass and cubic models".into(),
    ))
}

#[derive(Serialize)]
struct FormCoeffRow {
    p: u64,
    a_p: i64,
    newform: Option<i64>,
    /// (d/p) for the twist relating the two columns.
    twist: i64,
}

pub fn coeffs(o: &Options, series: CoeffSeries) -> Result<Document> {
    let inp = input("coeffs", o, o.tol.unwrap_or(DEFAULT_TOL));
    match series {
        CoeffSeries::W => {
            let c = fit_w_expansion(6, o.prec)?;
            let dev = c.iter().map(|x| (x - x.round()).abs()).fold(0.0, f64::max);
            Ok(Document::new(&inp, &c, Some(dev), "w(tau) sampled on the imaginary axis and interpolated in q".into()))
        }
        CoeffSeries::Form => {
            let disc = discriminant(o.k)?;
            let level = surface_data(o.k)?.level;
            let a = form_coefficients(&QuadFormSeries::for_discriminant(disc)?, o.pmax.max(2) as usize)?;
            let table = newform_table(level)?;
            let d = twist_character(level)?;
            let rows: Vec<FormCoeffRow> = primes_up_to(o.pmax)
                .into_iter()
                .map(|p| FormCoeffRow {
                    p,
                    a_p: a.get(p as usize).expect("p <= pmax"),
                    newform: table.a_p(p),
                    twist: kronecker(d, p as i64),
                })
                .collect();
            Ok(Document::new(
                &inp,
                &rows,
                None,
                format!("coefficients of the binary-form series; newform column is the level {level} table, twisted by ({d}/p)"),
            ))
        }
    }
}
