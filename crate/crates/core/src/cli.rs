//! Command-line front end: `gen`, `run`, `ratio` and `verify`.
//!
//! Reports go to `--out` (or stdout) and depend only on the arguments, never
//! on the thread count. Timing and other human-oriented summaries go to
//! stderr. Exit codes: 0 success, 1 check failure, 2 usage or I/O error.
//!
//! Frozen CSV columns:
//!
//! | command  | columns |
//! |----------|---------|
//! | `run`    | `trial,seed,alg_weight,opt_weight,probes` |
//! | `ratio`  | `algorithm,n_trials,alg_mean,opt_mean,ratio,ci_half_width,lower_bound,target,slack,pass` |
//! | `verify` | `check,subject,observed,threshold,pass` |
//!
//! `--probe-log` on `run` writes `trial,step,u,v,outcome`.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analysis::{
    run_trials, suite::run_suite, suite::SuiteConfig, summarize, Algorithm, ONE_MINUS_INV_E,
};
use crate::error::{Error, Result};
use crate::instance::{generate_random, generate_upper_triangular, Realization, WeightDist};
use crate::io::{read_instance, to_json_string, write_instance};
use crate::oracle::max_weight_matching;
use crate::probe::{write_probe_log_csv, ProbeEnv};
use crate::ranking::{draw_ranks, run_greedy, run_ranking};
use crate::seed::{trial_seed, Stream};

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "OBLIV_MATCH_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "obliv-match",
    version,
    about = "Weighted Ranking for oblivious bipartite matching"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Random,
    UpperTriangular,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AlgoArg {
    Ranking,
    Greedy,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Ranking => Algorithm::Ranking,
            AlgoArg::Greedy => Algorithm::Greedy,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, clap::Args)]
pub struct Common {
    /// Instance file (JSON)
    #[arg(long)]
    pub instance: PathBuf,
    /// Number of trials
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    /// Master seed
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Report file (stdout when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate an instance file
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        /// Side length for the upper-triangular family
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 10)]
        nl: usize,
        #[arg(long, default_value_t = 10)]
        nr: usize,
        /// Edge probability for the random family
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        /// Weight distribution: uniform:LOW,HIGH | constant:C | exp:RATE
        #[arg(long, default_value = "uniform:0,1")]
        weights: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Instance file (stdout when absent)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run trials and emit one row per trial
    Run {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = AlgoArg::Ranking)]
        algo: AlgoArg,
        /// Also write every probe as CSV
        #[arg(long)]
        probe_log: Option<PathBuf>,
    },
    /// Estimate E[ALG]/E[W*] and test it against 1 - 1/e
    Ratio {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = AlgoArg::Ranking)]
        algo: AlgoArg,
        /// Allowed shortfall below 1 - 1/e
        #[arg(long, default_value_t = 0.0)]
        slack: f64,
    },
    /// Run every lemma check on an instance
    Verify {
        #[command(flatten)]
        common: Common,
        /// Monotonicity grid size
        #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(2..))]
        grid: u64,
    },
}

/// Reads the thread cap from [`THREADS_ENV`].
pub fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(threads_from_env().unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return 2;
        }
    };
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let result = pool.install(|| execute(&cli.command, &mut out, &mut err));
    let _ = stdout.write_all(&out);
    let _ = stderr.write_all(&err);
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_owned(),
        source,
    }
}

fn emit(out: Option<&Path>, stdout: &mut dyn Write, body: &[u8]) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, body).map_err(io_err(path)),
        None => stdout
            .write_all(body)
            .map_err(io_err(Path::new("<stdout>"))),
    }
}

fn csv_bytes<R: Serialize>(rows: impl IntoIterator<Item = R>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    w.into_inner()
        .map_err(|e| Error::Csv(csv::Error::from(e.into_error())))
}

fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut body = serde_json::to_vec_pretty(value)?;
    body.push(b'\n');
    Ok(body)
}

/// Executes a parsed command. `Ok(false)` signals a failed check.
pub fn execute(command: &Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<bool> {
    match command {
        Command::Gen {
            family,
            n,
            nl,
            nr,
            p,
            weights,
            seed,
            out,
        } => cmd_gen(
            *family,
            *n,
            *nl,
            *nr,
            *p,
            weights,
            *seed,
            out.as_deref(),
            stdout,
            stderr,
        ),
        Command::Run {
            common,
            algo,
            probe_log,
        } => cmd_run(common, (*algo).into(), probe_log.as_deref(), stdout, stderr),
        Command::Ratio {
            common,
            algo,
            slack,
        } => cmd_ratio(common, (*algo).into(), *slack, stdout, stderr),
        Command::Verify { common, grid } => cmd_verify(common, *grid as usize, stdout, stderr),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_gen(
    family: Family,
    n: Option<usize>,
    nl: usize,
    nr: usize,
    p: f64,
    weights: &str,
    seed: u64,
    out: Option<&Path>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<bool> {
    let (instance, realization) = match family {
        Family::UpperTriangular => {
            let n = n.ok_or_else(|| Error::InvalidArgument("--n is required".into()))?;
            generate_upper_triangular(n)?
        }
        Family::Random => {
            let dist: WeightDist = weights.parse()?;
            generate_random(nl, nr, &dist, p, seed)?
        }
    };
    let Realization::Adversarial(bits) = &realization else {
        unreachable!("generators produce adversarial realizations")
    };
    let opt = max_weight_matching(&instance, bits)?;
    let summary = format!(
        "{}x{} instance, {} present edges, W*={}\n",
        instance.n_left(),
        instance.n_right(),
        bits.count_present(),
        opt.value
    );
    match out {
        Some(path) => {
            write_instance(path, &instance, &realization)?;
            stdout
                .write_all(summary.as_bytes())
                .map_err(io_err(Path::new("<stdout>")))?;
        }
        None => {
            let body = to_json_string(&instance, &realization)?;
            emit(None, stdout, body.as_bytes())?;
            let _ = stderr.write_all(summary.as_bytes());
        }
    }
    Ok(true)
}

#[derive(Serialize)]
struct RunRow {
    trial: u64,
    seed: u64,
    alg_weight: f64,
    opt_weight: f64,
    probes: usize,
}

#[derive(Serialize)]
struct RunReport<'a> {
    algorithm: Algorithm,
    trials: &'a [RunRow],
    summary: RatioRow,
}

#[derive(Serialize)]
struct RatioRow {
    algorithm: Algorithm,
    n_trials: u64,
    alg_mean: f64,
    opt_mean: f64,
    ratio: f64,
    ci_half_width: f64,
    lower_bound: f64,
    target: f64,
    slack: f64,
    pass: bool,
}

fn ratio_row(algorithm: Algorithm, est: &crate::analysis::RatioEstimate, slack: f64) -> RatioRow {
    RatioRow {
        algorithm,
        n_trials: est.n_trials,
        alg_mean: est.alg_mean,
        opt_mean: est.opt_mean,
        ratio: est.ratio,
        ci_half_width: est.ci_half_width,
        lower_bound: est.lower_bound(),
        target: ONE_MINUS_INV_E,
        slack,
        pass: est.meets_target(slack),
    }
}

fn cmd_run(
    common: &Common,
    algorithm: Algorithm,
    probe_log: Option<&Path>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<bool> {
    let (instance, realization) = read_instance(&common.instance)?;
    let records = run_trials(
        &instance,
        &realization,
        algorithm,
        common.trials,
        common.seed,
    )?;
    let est = summarize(&records);
    let rows: Vec<RunRow> = records
        .iter()
        .map(|r| RunRow {
            trial: r.trial,
            seed: r.seed,
            alg_weight: r.alg_weight,
            opt_weight: r.opt_weight,
            probes: r.probes,
        })
        .collect();
    let body = match common.format {
        Format::Csv => csv_bytes(&rows)?,
        Format::Json => json_bytes(&RunReport {
            algorithm,
            trials: &rows,
            summary: ratio_row(algorithm, &est, 0.0),
        })?,
    };
    emit(common.out.as_deref(), stdout, &body)?;

    if let Some(path) = probe_log {
        let file = File::create(path).map_err(io_err(path))?;
        let mut w = BufWriter::new(file);
        // replay each trial with the same seeds to capture its probes
        for t in 0..common.trials {
            let bits = realization.sample_bits(trial_seed(common.seed, Stream::Edges, t));
            let mut env = ProbeEnv::from_bits(&instance, &bits)?;
            match algorithm {
                Algorithm::Ranking => {
                    let ranks =
                        draw_ranks(instance.n_left(), trial_seed(common.seed, Stream::Ranks, t));
                    run_ranking(&mut env, &ranks)?;
                }
                Algorithm::Greedy => {
                    run_greedy(&mut env)?;
                }
            }
            write_probe_log_csv(&mut w, t, env.log(), t == 0)?;
        }
        w.flush().map_err(io_err(path))?;
    }

    let _ = writeln!(
        stderr,
        "{} trials: mean ALG {:.6}, mean W* {:.6}",
        est.n_trials, est.alg_mean, est.opt_mean
    );
    Ok(true)
}

fn cmd_ratio(
    common: &Common,
    algorithm: Algorithm,
    slack: f64,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<bool> {
    let start = Instant::now();
    let (instance, realization) = read_instance(&common.instance)?;
    let records = run_trials(
        &instance,
        &realization,
        algorithm,
        common.trials,
        common.seed,
    )?;
    let est = summarize(&records);
    let row = ratio_row(algorithm, &est, slack);
    let pass = row.pass;
    let body = match common.format {
        Format::Csv => csv_bytes([&row])?,
        Format::Json => json_bytes(&row)?,
    };
    emit(common.out.as_deref(), stdout, &body)?;
    let _ = writeln!(
        stderr,
        "ratio {:.6} +/- {:.6} over {} trials ({:.2?}); lower bound {:.6} vs target {:.6}: {}",
        est.ratio,
        est.ci_half_width,
        est.n_trials,
        start.elapsed(),
        est.lower_bound(),
        ONE_MINUS_INV_E - slack,
        if pass { "pass" } else { "FAIL" }
    );
    Ok(pass)
}

fn cmd_verify(
    common: &Common,
    grid: usize,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<bool> {
    let (instance, realization) = read_instance(&common.instance)?;
    let config = SuiteConfig {
        trials: usize::try_from(common.trials).unwrap_or(usize::MAX),
        grid,
        seed: common.seed,
        ..SuiteConfig::default()
    };
    let report = run_suite(&instance, &realization, &config)?;
    let body = match common.format {
        Format::Csv => csv_bytes(&report.rows)?,
        Format::Json => json_bytes(&serde_json::json!({
            "pass": report.pass(),
            "rows": report.rows,
        }))?,
    };
    emit(common.out.as_deref(), stdout, &body)?;
    let failed = report.rows.iter().filter(|r| !r.pass).count();
    let _ = writeln!(stderr, "{} checks, {} failed", report.rows.len(), failed);
    Ok(report.pass())
}
