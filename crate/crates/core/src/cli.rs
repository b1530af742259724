//! The `apx` command line front end.
//!
//! Exit codes: 0 success, 2 hypothesis refused, 3 verdict failed, 64 usage,
//! 65 bad configuration, 70 numerical failure. `APX_THREADS` caps the worker
//! pool.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::ap_model::{make_test_corpus, APPolynomial};
use crate::error::{ApxError, Result};
use crate::norms::{besicovitch_norm, omega_profile, stepanov_norm, sup_norm, wx_profile};
use crate::osc_kernel::{partial_sum_via_kernel, trapezoid_sum, KernelParams};
use crate::suite::{run_suite, KERNEL_POINTS};
use crate::summability::{classify, strong_mean_with, GammaSpec, PartialSums, SummabilityMatrix};
use crate::verify::model::ModulusModel;
use crate::verify::theorems::{
    run_norm_experiment, run_pointwise_experiment, Experiment, TheoremKind,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUSED: i32 = 2;
pub const EXIT_VERDICT: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_CONFIG: i32 = 65;
pub const EXIT_NUMERIC: i32 = 70;

#[derive(Debug, Parser)]
#[command(
    name = "apx",
    version,
    about = "Strong approximation of almost periodic functions"
)]
pub struct Cli {
    /// Worker threads (further capped by APX_THREADS).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum NormChoice {
    Stepanov,
    Sup,
    Besicovitch,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModulusChoice {
    Wx,
    Omega,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stepanov, sup or Besicovitch norm of a function.
    Norms {
        /// Function JSON file, or `corpus:<name>`.
        #[arg(long = "fn")]
        function: String,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, value_enum, default_value = "stepanov")]
        which: NormChoice,
    },
    /// Modulus of continuity profile as CSV `delta,value,raw`.
    Modulus {
        #[arg(long = "fn")]
        function: String,
        #[arg(long, value_enum, default_value = "wx")]
        kind: ModulusChoice,
        #[arg(long, default_value_t = 0.0)]
        x: f64,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        /// `lo:hi:N` (linear) or `lo:hi:Nlog`.
        #[arg(long, default_value = "0.01:3.1415926:32log")]
        deltas: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Kernel integral against the truncated sum as CSV.
    KernelCheck {
        #[arg(long = "fn")]
        function: String,
        #[arg(long, default_value_t = 16)]
        k_max: usize,
        /// Comma separated points; defaults to eight fixed points.
        #[arg(long, value_delimiter = ',')]
        x: Vec<f64>,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Variation constants and class of a matrix as JSON.
    Classify {
        /// Builtin name (cesaro, riesz, riesz:<s>, one_hot, increasing) or a
        /// JSON rows file.
        #[arg(long)]
        matrix: String,
        #[arg(long, default_value_t = 64)]
        n_max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Strong mean at one point.
    StrongMean {
        #[arg(long = "fn")]
        function: String,
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2.0)]
        q: f64,
        #[arg(long, default_value_t = 0.0)]
        x: f64,
        /// Use the kernel integral with this tolerance for partial sums.
        #[arg(long)]
        kernel_tol: Option<f64>,
    },
    /// Run a rate-bound experiment from a JSON file.
    Verify {
        #[arg(long)]
        exp: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also write the full report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run every regression check and write `summary.json`.
    All {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

/// Experiment file. Paths inside are relative to the file.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: TheoremKind,
    /// Function JSON file or `corpus:<name>`.
    pub function: String,
    /// Builtin matrix name or rows file.
    pub matrix: String,
    #[serde(default = "two")]
    pub p: f64,
    #[serde(default = "two")]
    pub q: f64,
    pub q_prime: Option<f64>,
    pub p_tilde: Option<f64>,
    pub beta: f64,
    #[serde(default = "one")]
    pub c: f64,
    pub n_list: Option<Vec<usize>>,
    pub x: Option<f64>,
    pub x_points: Option<usize>,
    pub gamma: Option<GammaSpec>,
    #[serde(default)]
    pub seed: u64,
}

fn two() -> f64 {
    2.0
}

fn one() -> f64 {
    1.0
}

/// Exit code for an error.
pub fn exit_code(e: &ApxError) -> i32 {
    match e {
        ApxError::Hypothesis { .. } => EXIT_REFUSED,
        ApxError::InvalidFunction { .. }
        | ApxError::InvalidParameter(_)
        | ApxError::IndexOutOfRange { .. }
        | ApxError::ModulusValidation(_)
        | ApxError::UnknownMatrix(_)
        | ApxError::Config(_)
        | ApxError::Io(_)
        | ApxError::Json(_)
        | ApxError::NonFinite(_) => EXIT_CONFIG,
        ApxError::ImaginaryResidue(_)
        | ApxError::QuadratureFailure { .. }
        | ApxError::Capacity { .. }
        | ApxError::NumericInstability(_)
        | ApxError::DegenerateModulus(_)
        | ApxError::DegenerateRate(_)
        | ApxError::Divergent(_) => EXIT_NUMERIC,
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| ApxError::Config(format!("{}: {e}", path.display())))
}

/// `corpus:<name>` or a function JSON file.
pub fn load_function(spec: &str, base: &Path, seed: u64) -> Result<APPolynomial> {
    if let Some(name) = spec.strip_prefix("corpus:") {
        return make_test_corpus(seed)
            .into_iter()
            .find(|m| m.name == name)
            .map(|m| m.f)
            .ok_or_else(|| ApxError::Config(format!("no corpus member `{name}`")));
    }
    APPolynomial::from_json(&read(&base.join(spec))?)
}

/// Builtin name or rows file.
pub fn load_matrix(spec: &str, base: &Path) -> Result<SummabilityMatrix> {
    match SummabilityMatrix::builtin(spec) {
        Ok(a) => Ok(a),
        Err(ApxError::UnknownMatrix(_)) if spec.ends_with(".json") => {
            SummabilityMatrix::from_json(spec, &read(&base.join(spec))?)
        }
        Err(e) => Err(e),
    }
}

/// `lo:hi:N` or `lo:hi:Nlog`.
pub fn parse_deltas(spec: &str) -> Result<Vec<f64>> {
    let bad = || {
        ApxError::Config(format!(
            "bad delta range `{spec}`, expected lo:hi:N or lo:hi:Nlog"
        ))
    };
    let parts: Vec<&str> = spec.split(':').collect();
    let [lo, hi, n] = parts[..] else {
        return Err(bad());
    };
    let lo: f64 = lo.parse().map_err(|_| bad())?;
    let hi: f64 = hi.parse().map_err(|_| bad())?;
    let (n, log) = match n.strip_suffix("log") {
        Some(n) => (n, true),
        None => (n, false),
    };
    let n: usize = n.parse().map_err(|_| bad())?;
    if !(lo > 0.0 && hi > lo && n >= 2) {
        return Err(bad());
    }
    Ok(if log {
        crate::quad::log_grid(lo, hi, n)
    } else {
        (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect()
    })
}

/// Six significant digits.
pub fn sig6(v: f64) -> String {
    format!("{v:.5e}")
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cwd() -> PathBuf {
    PathBuf::from(".")
}

fn run_verify(exp_path: &Path, out: &Path, json_out: Option<&Path>) -> Result<i32> {
    let cfg: ExperimentConfig = serde_json::from_str(&read(exp_path)?)
        .map_err(|e| ApxError::Config(format!("{}: {e}", exp_path.display())))?;
    let base = exp_path.parent().unwrap_or(Path::new("."));
    let f = load_function(&cfg.function, base, cfg.seed)?;
    let a = load_matrix(&cfg.matrix, base)?;
    if !(cfg.beta > 0.0 && cfg.beta < 1.0 && cfg.c > 0.0) {
        return Err(ApxError::Config(format!(
            "need 0 < beta < 1 and c > 0, got beta = {}, c = {}",
            cfg.beta, cfg.c
        )));
    }
    let mut exp = Experiment::new(&f, &a, cfg.beta);
    exp.p = cfg.p;
    exp.q = cfg.q;
    exp.model = ModulusModel::power_law(cfg.c, cfg.beta);
    if let Some(g) = cfg.gamma.clone() {
        exp.gamma = g;
    }
    if let Some(list) = cfg.n_list.clone() {
        exp.n_list = list;
    }
    let report = if cfg.kind.is_pointwise() {
        let x = cfg
            .x
            .ok_or_else(|| ApxError::Config("pointwise experiments need `x`".into()))?;
        run_pointwise_experiment(cfg.kind, &exp, x)?
    } else {
        let q_prime = cfg
            .q_prime
            .ok_or_else(|| ApxError::Config("norm experiments need `q_prime`".into()))?;
        let p_tilde = cfg
            .p_tilde
            .ok_or_else(|| ApxError::Config("norm experiments need `p_tilde`".into()))?;
        run_norm_experiment(cfg.kind, &exp, q_prime, p_tilde, cfg.x_points.unwrap_or(64))?
    };
    fs::write(out, report.to_csv())?;
    if let Some(path) = json_out {
        fs::write(path, serde_json::to_string_pretty(&report)? + "\n")?;
    }
    println!(
        "{:?}: ratio_sup {} ratio_first {} trend_up {} -> {}",
        report.kind,
        sig6(report.verdict.ratio_sup),
        sig6(report.verdict.ratio_first),
        report.verdict.trend_up,
        if report.verdict.pass { "PASS" } else { "FAIL" }
    );
    Ok(if report.verdict.pass {
        EXIT_OK
    } else {
        EXIT_VERDICT
    })
}

/// Runs a parsed command and returns the exit code.
pub fn execute(command: &Command) -> Result<i32> {
    match command {
        Command::Norms { function, p, which } => {
            let f = load_function(function, &cwd(), 0)?;
            let (name, v) = match which {
                NormChoice::Stepanov => ("stepanov", stepanov_norm(&f, *p)?),
                NormChoice::Sup => ("sup", sup_norm(&f)?),
                NormChoice::Besicovitch => ("besicovitch", besicovitch_norm(&f, *p)?),
            };
            println!("norm,p,value\n{name},{},{}", sig6(*p), sig6(v));
        }
        Command::Modulus {
            function,
            kind,
            x,
            p,
            deltas,
            out,
        } => {
            let f = load_function(function, &cwd(), 0)?;
            let ds = parse_deltas(deltas)?;
            let profile = match kind {
                ModulusChoice::Wx => wx_profile(&f, *x, *p, &ds)?,
                ModulusChoice::Omega => omega_profile(&f, *p, &ds)?,
            };
            let mut csv = String::from("delta,value,raw\n");
            for e in profile {
                csv.push_str(&format!(
                    "{},{},{}\n",
                    sig6(e.delta),
                    sig6(e.value),
                    sig6(e.raw)
                ));
            }
            emit(&csv, out.as_deref())?;
        }
        Command::KernelCheck {
            function,
            k_max,
            x,
            tol,
            out,
        } => {
            let f = load_function(function, &cwd(), 0)?;
            let xs: Vec<f64> = if x.is_empty() {
                KERNEL_POINTS.to_vec()
            } else {
                x.clone()
            };
            let mut csv = String::from("k,x,kernel_value,truncation_value,abs_err,tail_bound\n");
            for k in 0..=*k_max {
                for &xv in &xs {
                    let s = partial_sum_via_kernel(&f, k, xv, *tol)?;
                    let star = f.star_partial_sum(k, xv)?;
                    let reference = if star.interior_exponent {
                        trapezoid_sum(&f, &KernelParams::indexed(k, f.alpha())?, xv)
                    } else {
                        star.value
                    };
                    csv.push_str(&format!(
                        "{k},{},{},{},{},{}\n",
                        sig6(xv),
                        sig6(s.value),
                        sig6(reference),
                        sig6((s.value - reference).abs()),
                        sig6(s.tail_bound)
                    ));
                }
            }
            emit(&csv, out.as_deref())?;
        }
        Command::Classify { matrix, n_max, out } => {
            let a = load_matrix(matrix, &cwd())?;
            let report = classify(&a, *n_max)?;
            emit(
                &(serde_json::to_string_pretty(&report)? + "\n"),
                out.as_deref(),
            )?;
        }
        Command::StrongMean {
            function,
            matrix,
            n,
            q,
            x,
            kernel_tol,
        } => {
            let f = load_function(function, &cwd(), 0)?;
            let a = load_matrix(matrix, &cwd())?;
            let mode = match kernel_tol {
                Some(tol) => PartialSums::Kernel { tol: *tol },
                None => PartialSums::Direct,
            };
            let v = strong_mean_with(&f, &a, *n, *q, &GammaSpec::HalfGap, *x, mode)?;
            println!("{v}");
        }
        Command::Verify { exp, out, json } => return run_verify(exp, out, json.as_deref()),
        Command::All { seed, out_dir } => {
            let summary = run_suite(*seed);
            fs::create_dir_all(out_dir)?;
            fs::write(
                out_dir.join("summary.json"),
                serde_json::to_string_pretty(&summary)? + "\n",
            )?;
            for c in &summary.checks {
                println!("{:<26} {}", c.name, if c.pass { "PASS" } else { "FAIL" });
            }
            return Ok(if summary.pass { EXIT_OK } else { EXIT_VERDICT });
        }
    }
    Ok(EXIT_OK)
}

fn configure_threads(flag: Option<usize>) -> Result<()> {
    let env = match std::env::var("APX_THREADS") {
        Ok(v) => Some(v.parse::<usize>().ok().filter(|&n| n > 0).ok_or_else(|| {
            ApxError::Config(format!("APX_THREADS must be a positive integer, got `{v}`"))
        })?),
        Err(_) => None,
    };
    let threads = match (flag, env) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    if let Some(n) = threads {
        if n == 0 {
            return Err(ApxError::Config("--threads must be positive".into()));
        }
        // Fails only if a pool already exists, which keeps the first setting.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    Ok(())
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = configure_threads(cli.threads).and_then(|_| execute(&cli.command));
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("apx: {e}");
            exit_code(&e)
        }
    }
}
