use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use k3mahler_cli::config::Config;
use k3mahler_cli::pipeline::{self, CoeffSeries, Method, Options};
use k3mahler_cli::report::Document;

#[derive(Parser)]
#[command(name = "k3mahler", version, about = "Mahler measures of x+1/x+y+1/y+z+1/z-k and their L-value identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full identity check for k in {0, 3, 6, 18}.
    Verify(Common),
    /// m(P_k) by quadrature, the Eisenstein-Kronecker series or Monte Carlo.
    Mahler(Common),
    /// The L-value on the right-hand side (L(chi_-3, 2) for k = 0).
    Lvalue(Common),
    /// A_p from point counts next to the twisted newform coefficients.
    Ap(Common),
    /// Transcendental lattice, fibers and Shioda rank.
    Lattice(Common),
    /// Height of the infinite section for k = 18.
    Height(Common),
    /// Form-series coefficients, or the q-expansion of w with --series w.
    Coeffs {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "form")]
        series: SeriesArg,
    },
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, default_value_t = 6, allow_negative_numbers = true)]
    k: i64,
    /// Working precision in bits [default: 128, or `prec` from the config file].
    #[arg(long)]
    prec: Option<usize>,
    #[arg(long, default_value_t = 31)]
    pmax: u64,
    /// Tolerance; verify defaults to 1e-6 (k = 0), 1e-5 (k = 3, 6) or 1e-4 (k = 18), others to 1e-5.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value = "quadrature")]
    method: MethodArg,
    /// Print the JSON document instead of text.
    #[arg(long)]
    json: bool,
    /// Directory of cached A_p values (overrides K3MAHLER_CACHE_DIR and the config file).
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Worker threads [default: all cores].
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// key = value file with `cache_dir` and `prec`.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Quadrature,
    Bertin,
    Mc,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeriesArg {
    Form,
    W,
}

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn options(c: &Common) -> Result<Options, String> {
    let cfg = match &c.config {
        Some(p) => Config::load(p).map_err(|e| e.to_string())?,
        None => Config::default(),
    };
    if let Some(t) = c.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(format!("--tol must be positive, got {t}"));
        }
    }
    let prec = cfg.prec(c.prec);
    if !(32..=4096).contains(&prec) {
        return Err(format!("--prec must lie in 32..=4096, got {prec}"));
    }
    Ok(Options {
        k: c.k,
        prec,
        pmax: c.pmax,
        tol: c.tol,
        method: match c.method {
            MethodArg::Quadrature => Method::Quadrature,
            MethodArg::Bertin => Method::Bertin,
            MethodArg::Mc => Method::Mc,
        },
        seed: c.seed,
        cache: cfg.cache(c.cache_dir.as_deref()),
    })
}

fn text(doc: &Document) -> String {
    let mut s = format!("{}\n", serde_json::to_string_pretty(&doc.value).expect("json value"));
    if let Some(e) = doc.error_bound {
        s.push_str(&format!("error bound: {e:.3e}\n"));
    }
    s.push_str(&format!("method: {}\n", doc.provenance));
    s
}

fn run(cmd: &Command) -> ExitCode {
    let (common, series) = match cmd {
        Command::Coeffs { common, series } => (common, Some(*series)),
        Command::Verify(c)
        | Command::Mahler(c)
        | Command::Lvalue(c)
        | Command::Ap(c)
        | Command::Lattice(c)
        | Command::Height(c) => (c, None),
    };
    if matches!(cmd, Command::Verify(_)) && !pipeline::VERIFY_K.contains(&common.k) {
        eprintln!("error: verify supports --k in {:?}, got {}", pipeline::VERIFY_K, common.k);
        return ExitCode::from(EXIT_USAGE);
    }
    let o = match options(common) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let work = || -> k3mahler::Result<(Document, Option<String>, bool)> {
        Ok(match cmd {
            Command::Verify(_) => {
                let (d, r) = pipeline::verify(&o)?;
                (d, Some(r.to_text()), r.pass)
            }
            Command::Mahler(_) => (pipeline::mahler(&o)?, None, true),
            Command::Lvalue(_) => (pipeline::lvalue(&o)?, None, true),
            Command::Ap(_) => {
                let d = pipeline::ap(&o)?;
                let ok = d.value.as_array().is_some_and(|rows| rows.iter().all(|r| r["matches"] == true));
                (d, None, ok)
            }
            Command::Lattice(_) => (pipeline::lattice(&o)?, None, true),
            Command::Height(_) => (pipeline::height(&o)?, None, true),
            Command::Coeffs { .. } => {
                let s = match series.expect("coeffs") {
                    SeriesArg::Form => CoeffSeries::Form,
                    SeriesArg::W => CoeffSeries::W,
                };
                (pipeline::coeffs(&o, s)?, None, true)
            }
        })
    };
    let result = match common.workers {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(work),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_USAGE);
            }
        },
        None => work(),
    };
    match result {
        Ok((doc, report, ok)) => {
            if common.json {
                println!("{}", doc.to_json());
            } else {
                print!("{}", report.unwrap_or_else(|| text(&doc)));
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAIL)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_FAIL)
        }
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors.
    let cli = Cli::parse();
    run(&cli.command)
}
