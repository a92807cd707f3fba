//! Command-line front end behind the `dashsvd` binary.
//!
//! Exit codes: 0 success, 2 usage, configuration, parse or I/O error,
//! 3 numerical failure (rank deficiency, non-convergence).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::analysis::{all_metrics, Metrics, ReferenceSpectrum};
use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::factors::TruncatedSvd;
use crate::operator::LinearOperator;
use crate::rsvd::{solve_timed, Algorithm, Orthonormalizer, SolverConfig};
use crate::sparse::{load_any, load_dense_array, save_dense_array, SparseMatrix};
use crate::synth;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "dashsvd", version, about = "Truncated SVD of large sparse matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute a truncated SVD and optionally write the factors.
    Run(RunArgs),
    /// Score stored factors against a reference spectrum.
    Metrics(MetricsArgs),
    /// Sweep algorithms and iteration settings, one CSV row per run.
    Bench(BenchArgs),
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
struct InputArgs {
    /// Matrix Market coordinate file or DSH1 cache.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Built-in matrix: dense1:N[:SEED], dense2:N[:SEED] or
    /// sparse:MxN:DENSITY[:SEED].
    #[arg(long)]
    synthetic: Option<String>,
}

#[derive(Args, Debug, Clone)]
struct ExecArgs {
    /// Worker threads (defaults to all cores).
    #[arg(long, env = "DASHSVD_THREADS")]
    threads: Option<usize>,
    /// Fixed-order reductions, bitwise reproducible across thread counts.
    #[arg(long, default_value_t = true, num_args = 0..=1, default_missing_value = "true",
          action = clap::ArgAction::Set)]
    deterministic: bool,
    #[arg(long, default_value = "eigsvd")]
    orth: Orthonormalizer,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    s: Option<usize>,
    /// Power iterations (basic, shifted).
    #[arg(long, conflicts_with_all = ["tol", "pmax"])]
    p: Option<usize>,
    /// Per-vector-error tolerance (dash).
    #[arg(long)]
    tol: Option<f64>,
    /// Iteration cap (dash).
    #[arg(long)]
    pmax: Option<usize>,
    #[arg(long, default_value = "dash")]
    alg: Algorithm,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Writes PREFIX.S.txt, PREFIX.U.mtx and PREFIX.V.mtx.
    #[arg(long)]
    out_prefix: Option<PathBuf>,
    /// Also report metrics against `oracle` or a spectrum file.
    #[arg(long)]
    reference: Option<String>,
    #[command(flatten)]
    exec: ExecArgs,
}

#[derive(Args, Debug)]
struct MetricsArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Prefix given to `run --out-prefix`.
    #[arg(long)]
    factors: PathBuf,
    /// `oracle` or a file with one singular value per line.
    #[arg(long)]
    reference: String,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    s: Option<usize>,
    /// Comma-separated algorithms.
    #[arg(long, value_delimiter = ',', default_value = "basic,shifted")]
    alg: Vec<Algorithm>,
    /// Fixed power counts for basic and shifted.
    #[arg(long, value_delimiter = ',')]
    p_list: Vec<usize>,
    /// Tolerances for dash.
    #[arg(long, value_delimiter = ',')]
    tol_list: Vec<f64>,
    #[arg(long, default_value_t = 1000)]
    pmax: usize,
    /// Runs per setting, with seeds seed, seed+1, ...
    #[arg(long, default_value_t = 1)]
    repeats: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `oracle`, `none`, or a spectrum file. Dense2 inputs default to their
    /// known spectrum, everything else to `oracle`.
    #[arg(long)]
    reference: Option<String>,
    #[command(flatten)]
    exec: ExecArgs,
}

/// Built-in test matrix description.
#[derive(Debug, Clone, PartialEq)]
pub enum Synthetic {
    Dense1 { n: usize, seed: u64 },
    Dense2 { n: usize, seed: u64 },
    Sparse { rows: usize, cols: usize, density: f64, seed: u64 },
}

impl Synthetic {
    pub fn parse(spec: &str) -> Result<Self> {
        let bad = || Error::Config(format!("bad synthetic spec '{spec}'"));
        let parts: Vec<&str> = spec.split(':').collect();
        let seed = |i: usize| -> Result<u64> {
            parts.get(i).map_or(Ok(0), |s| s.parse().map_err(|_| bad()))
        };
        match parts.as_slice() {
            ["dense1", n, ..] | ["dense2", n, ..] if parts.len() <= 3 => {
                let n = n.parse().map_err(|_| bad())?;
                let seed = seed(2)?;
                Ok(if parts[0] == "dense1" {
                    Synthetic::Dense1 { n, seed }
                } else {
                    Synthetic::Dense2 { n, seed }
                })
            }
            ["sparse", dims, density, ..] if parts.len() <= 4 => {
                let (r, c) = dims.split_once('x').ok_or_else(bad)?;
                let density: f64 = density.parse().map_err(|_| bad())?;
                if !(0.0..=1.0).contains(&density) {
                    return Err(bad());
                }
                Ok(Synthetic::Sparse {
                    rows: r.parse().map_err(|_| bad())?,
                    cols: c.parse().map_err(|_| bad())?,
                    density,
                    seed: seed(3)?,
                })
            }
            _ => Err(bad()),
        }
    }

    fn build(&self) -> Input {
        match *self {
            Synthetic::Dense1 { n, seed } => Input::Dense(synth::dense1(n, seed)),
            Synthetic::Dense2 { n, seed } => Input::Dense(synth::dense2(n, seed)),
            Synthetic::Sparse { rows, cols, density, seed } => {
                Input::Sparse(synth::random_sparse(rows, cols, density, seed).with_transpose())
            }
        }
    }

    /// Exact spectrum when known by construction.
    pub fn known_spectrum(&self) -> Option<Vec<f64>> {
        match *self {
            Synthetic::Dense2 { n, .. } => Some(synth::dense2_spectrum(n)),
            _ => None,
        }
    }
}

enum Input {
    Sparse(SparseMatrix),
    Dense(DenseMatrix),
}

impl Input {
    fn op(&self) -> &dyn LinearOperator {
        match self {
            Input::Sparse(a) => a,
            Input::Dense(a) => a,
        }
    }
}

struct Loaded {
    input: Input,
    id: String,
    synthetic: Option<Synthetic>,
}

fn load_input(args: &InputArgs) -> Result<Loaded> {
    if let Some(path) = &args.input {
        return Ok(Loaded {
            input: Input::Sparse(load_any(path)?),
            id: path.display().to_string(),
            synthetic: None,
        });
    }
    let spec = args.synthetic.as_deref().expect("clap enforces one input");
    let syn = Synthetic::parse(spec)?;
    Ok(Loaded {
        input: syn.build(),
        id: spec.to_string(),
        synthetic: Some(syn),
    })
}

fn reference_for(which: &str, a: &dyn LinearOperator) -> Result<ReferenceSpectrum> {
    if which == "oracle" {
        ReferenceSpectrum::from_oracle(a)
    } else {
        ReferenceSpectrum::load(which)
    }
}

fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_USAGE
    }
}

fn factor_paths(prefix: &Path) -> (PathBuf, PathBuf, PathBuf) {
    let with = |suffix: &str| {
        let mut s = prefix.as_os_str().to_owned();
        s.push(suffix);
        PathBuf::from(s)
    };
    (with(".S.txt"), with(".U.mtx"), with(".V.mtx"))
}

/// Writes `S` (one value per line), `U` and `V` next to `prefix`.
pub fn save_factors(f: &TruncatedSvd, prefix: &Path) -> Result<[PathBuf; 3]> {
    let (sp, up, vp) = factor_paths(prefix);
    let mut text = String::new();
    for s in &f.s {
        writeln!(text, "{s:.15e}").expect("writing to a String");
    }
    std::fs::write(&sp, text).map_err(|e| Error::io(&sp, e))?;
    save_dense_array(&f.u, &up)?;
    save_dense_array(&f.v, &vp)?;
    Ok([sp, up, vp])
}

pub fn load_factors(prefix: &Path) -> Result<TruncatedSvd> {
    let (sp, up, vp) = factor_paths(prefix);
    let text = std::fs::read_to_string(&sp).map_err(|e| Error::io(&sp, e))?;
    let mut s = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        s.push(t.parse().map_err(|_| Error::parse(i + 1, format!("bad singular value '{t}'")))?);
    }
    TruncatedSvd::new(load_dense_array(&up)?, s, load_dense_array(&vp)?)
}

fn fmt_list(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:e}")).collect::<Vec<_>>().join(",")
}

fn cmd_run(a: RunArgs, out: &mut dyn Write) -> Result<()> {
    let total = Instant::now();
    let t = Instant::now();
    let loaded = load_input(&a.input)?;
    let load_time = t.elapsed();
    let op = loaded.input.op();

    match a.alg {
        Algorithm::Dash if a.p.is_some() => {
            return Err(Error::Config("--p applies to basic and shifted; dash takes --tol/--pmax".into()))
        }
        Algorithm::Basic | Algorithm::Shifted if a.tol.is_some() || a.pmax.is_some() => {
            return Err(Error::Config(format!("--tol/--pmax apply to dash, not {}", a.alg)))
        }
        _ => {}
    }
    let mut cfg = SolverConfig::new(a.k, a.alg);
    cfg.s = a.s;
    cfg.p = a.p.unwrap_or(cfg.p);
    cfg.tol = a.tol.unwrap_or(cfg.tol);
    cfg.p_max = a.pmax.unwrap_or(cfg.p_max);
    cfg.seed = a.seed;
    cfg.threads = a.exec.threads;
    cfg.deterministic = a.exec.deterministic;
    cfg.orthonormalizer = a.exec.orth;

    let (f, trace, times) = solve_timed(op, &cfg)?;
    let outputs = match &a.out_prefix {
        Some(prefix) => Some(save_factors(&f, prefix)?),
        None => None,
    };
    let metrics = match &a.reference {
        Some(r) => Some(all_metrics(op, &f, &reference_for(r, op)?)?),
        None => None,
    };
    let total_time = total.elapsed();

    let mut r = String::new();
    let w = &mut r;
    let _ = writeln!(w, "matrix: {}", loaded.id);
    let _ = writeln!(w, "rows: {}", op.rows());
    let _ = writeln!(w, "cols: {}", op.cols());
    let _ = writeln!(w, "nnz: {}", op.nnz());
    let _ = writeln!(w, "algorithm: {}", cfg.algorithm);
    let _ = writeln!(w, "k: {}", cfg.k);
    let _ = writeln!(w, "s: {}", cfg.oversampling());
    match cfg.algorithm {
        Algorithm::Dash => {
            let _ = writeln!(w, "tol: {:e}", cfg.tol);
            let _ = writeln!(w, "p_max: {}", cfg.p_max);
        }
        _ => {
            let _ = writeln!(w, "p: {}", cfg.p);
        }
    }
    let _ = writeln!(w, "seed: {}", cfg.seed);
    let threads = cfg.threads.unwrap_or_else(rayon::current_num_threads);
    let _ = writeln!(w, "threads: {threads}");
    let _ = writeln!(w, "deterministic: {}", cfg.deterministic);
    let _ = writeln!(w, "orthonormalizer: {}", cfg.orthonormalizer);
    let _ = writeln!(w, "time_load_s: {:.6}", load_time.as_secs_f64());
    let _ = writeln!(w, "time_iterate_s: {:.6}", times.iterate.as_secs_f64());
    let _ = writeln!(w, "time_finalize_s: {:.6}", times.finalize.as_secs_f64());
    let _ = writeln!(w, "time_total_s: {:.6}", total_time.as_secs_f64());
    let _ = writeln!(w, "n_p: {}", trace.stopped_at);
    let _ = writeln!(w, "stop_reason: {}", trace.stop_reason);
    let _ = writeln!(w, "shifts: {}", fmt_list(&trace.alphas));
    let _ = writeln!(w, "singular_values: {}", fmt_list(&f.s));
    if let Some([s, u, v]) = &outputs {
        let _ = writeln!(w, "out_s: {}", s.display());
        let _ = writeln!(w, "out_u: {}", u.display());
        let _ = writeln!(w, "out_v: {}", v.display());
    }
    if let Some(m) = metrics {
        let _ = writeln!(w, "eps_pve: {:e}", m.pve);
        let _ = writeln!(w, "eps_res: {:e}", m.res);
        let _ = writeln!(w, "eps_spec: {:e}", m.spec);
        let _ = writeln!(w, "eps_sigma: {:e}", m.sigma);
    }
    out.write_all(r.as_bytes()).map_err(|e| Error::io("<stdout>", e))
}

fn cmd_metrics(a: MetricsArgs, out: &mut dyn Write) -> Result<()> {
    let loaded = load_input(&a.input)?;
    let op = loaded.input.op();
    let reference = reference_for(&a.reference, op)?;
    let f = load_factors(&a.factors)?;
    let m = all_metrics(op, &f, &reference)?;
    writeln!(out, "{}\n{}", Metrics::CSV_HEADER, m.to_csv()).map_err(|e| Error::io("<stdout>", e))
}

fn cmd_bench(a: BenchArgs, out: &mut dyn Write) -> Result<()> {
    let loaded = load_input(&a.input)?;
    let op = loaded.input.op();
    for alg in &a.alg {
        match alg {
            Algorithm::Dash if a.tol_list.is_empty() => {
                return Err(Error::Config("dash in --alg needs --tol-list".into()))
            }
            Algorithm::Basic | Algorithm::Shifted if a.p_list.is_empty() => {
                return Err(Error::Config(format!("{alg} in --alg needs --p-list")))
            }
            _ => {}
        }
    }
    let reference = match a.reference.as_deref() {
        Some("none") => None,
        Some(r) => Some(reference_for(r, op)?),
        None => match loaded.synthetic.as_ref().and_then(Synthetic::known_spectrum) {
            Some(s) => Some(ReferenceSpectrum::new(s)?),
            None => Some(ReferenceSpectrum::from_oracle(op)?),
        },
    };

    let mut csv = String::from("alg,p,tol,seed,time_s,n_p,");
    csv.push_str(Metrics::CSV_HEADER);
    csv.push('\n');
    out.write_all(csv.as_bytes()).map_err(|e| Error::io("<stdout>", e))?;
    for &alg in &a.alg {
        let settings: Vec<(Option<usize>, Option<f64>)> = match alg {
            Algorithm::Dash => a.tol_list.iter().map(|&t| (None, Some(t))).collect(),
            _ => a.p_list.iter().map(|&p| (Some(p), None)).collect(),
        };
        for (p, tol) in settings {
            for r in 0..a.repeats {
                let mut cfg = SolverConfig::new(a.k, alg);
                cfg.s = a.s;
                cfg.p = p.unwrap_or(0);
                cfg.tol = tol.unwrap_or(cfg.tol);
                cfg.p_max = a.pmax;
                cfg.seed = a.seed + r;
                cfg.threads = a.exec.threads;
                cfg.deterministic = a.exec.deterministic;
                cfg.orthonormalizer = a.exec.orth;
                let t = Instant::now();
                let (f, trace, _) = solve_timed(op, &cfg)?;
                let elapsed = t.elapsed().as_secs_f64();
                let metrics = match &reference {
                    Some(rf) => all_metrics(op, &f, rf)?.to_csv(),
                    None => ",,,".to_string(),
                };
                let line = format!(
                    "{alg},{},{},{},{elapsed:.6},{},{metrics}\n",
                    p.map(|v| v.to_string()).unwrap_or_default(),
                    tol.map(|v| format!("{v:e}")).unwrap_or_default(),
                    cfg.seed,
                    trace.stopped_at,
                );
                out.write_all(line.as_bytes()).map_err(|e| Error::io("<stdout>", e))?;
            }
        }
    }
    Ok(())
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = out.write_all(text.as_bytes());
            } else {
                let _ = err.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let result = match cli.command {
        Command::Run(a) => cmd_run(a, out),
        Command::Metrics(a) => cmd_metrics(a, out),
        Command::Bench(a) => cmd_bench(a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthetic_specs() {
        assert_eq!(Synthetic::parse("dense2:300").unwrap(), Synthetic::Dense2 { n: 300, seed: 0 });
        assert_eq!(Synthetic::parse("dense1:5:9").unwrap(), Synthetic::Dense1 { n: 5, seed: 9 });
        assert_eq!(
            Synthetic::parse("sparse:500x300:0.02:4").unwrap(),
            Synthetic::Sparse { rows: 500, cols: 300, density: 0.02, seed: 4 }
        );
        for bad in ["dense3:4", "dense2", "dense2:x", "sparse:5:0.1", "sparse:5x5:2"] {
            assert!(Synthetic::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn clap_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
