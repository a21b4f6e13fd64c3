//! Command-line front end. Every subcommand reads a TOML config (see
//! [`crate::config`]), lets flags override it, and writes JSON reports and CSV
//! tables into the output directory. Without an output directory the JSON
//! report goes to stdout.
//!
//! Exit codes: 0 success, 1 domain error (invalid kernel, infeasible
//! parameters, failed self-check), 2 usage or configuration error.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::config::{experiment_config, ConfigError, KernelSection, OutputFormat, RunConfig};
use crate::kernels::{fit_decay_envelope, spectral_density, LaguerreGaussianSpec};
use crate::sampler::{empirical_pcf, theoretical_pcf_bin, DppSampler, TruncationSummary, Window};
use crate::stein::{symmetric_geom_sum, symmetric_geom_sum_direct, wasserstein_bound, weighted_geom_sum, weighted_geom_sum_direct, BoundInputs};
use crate::verify::run_experiment_detailed;

/// Column orders of every CSV table, also printed by `schema`.
pub const CSV_SCHEMA: &str = "\
CSV tables (floats in 17 significant digits, empty cell = not available):
  patterns.csv      replication_index,x_1,...,x_d
  pcf.csv           r_lo,r_hi,g_hat,stderr,g_theory,pairs
  bound.csv         n,term1,term2,term3,total,l_star
  verify.csv        n,sigma2_hat,M_hat,gamma_hat,w1,kolmogorov,bound_total,dominated
  standardized.csv  n,replication_index,w";

#[derive(Debug, Parser)]
#[command(name = "stein-dpp", version, about = "Explicit normal-approximation bounds and DPP simulation", after_help = CSV_SCHEMA)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed (overrides experiment.seed).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory (overrides output.directory).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Replications (overrides experiment.replications).
    #[arg(long, global = true)]
    replications: Option<usize>,
    /// Comma-separated window sizes (overrides experiment.n_list or bound.n).
    #[arg(long, global = true, value_delimiter = ',')]
    n: Option<Vec<u64>>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the existence condition of a Laguerre-Gaussian kernel.
    ValidateKernel(KernelFlags),
    /// Simulate patterns on [0, side]^d.
    Sample {
        #[command(flatten)]
        kernel: KernelFlags,
        #[arg(long)]
        side: Option<f64>,
    },
    /// Estimate the pair correlation function from simulations.
    Pcf {
        #[command(flatten)]
        kernel: KernelFlags,
        #[arg(long)]
        side: Option<f64>,
        #[arg(long)]
        r_max: Option<f64>,
        #[arg(long)]
        bins: Option<usize>,
    },
    /// Evaluate the explicit L1 bound.
    Bound(BoundFlags),
    /// Monte-Carlo check that empirical distances stay below the bound.
    VerifyClt,
    /// Self-test of the closed-form geometric sums.
    Identities,
    /// Print the CSV column orders.
    Schema,
}

#[derive(Debug, Args, Default)]
struct KernelFlags {
    #[arg(long, allow_negative_numbers = true)]
    m: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    rho: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    d: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    lambda_envelope: Option<f64>,
}

#[derive(Debug, Args)]
struct BoundFlags {
    #[arg(long, allow_negative_numbers = true)]
    d: Option<usize>,
    /// Third-moment bound.
    #[arg(long = "M", allow_negative_numbers = true)]
    m: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    kappa: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Usage(e.0)
    }
}

impl From<crate::Error> for Failure {
    fn from(e: crate::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

fn io_failure(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Domain(format!("cannot write {}: {e}", path.display()))
}

type Outcome = std::result::Result<(), Failure>;

/// Parses `argv` (including the program name), runs the subcommand and
/// returns the process exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let mut cfg = match &cli.common.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    apply_common(&mut cfg, &cli.common);
    let out = Output::new(&cfg);
    match cli.command {
        Command::ValidateKernel(k) => validate_kernel(&cfg, &k, &out),
        Command::Sample { kernel, side } => sample(&cfg, &kernel, side, &out),
        Command::Pcf { kernel, side, r_max, bins } => pcf(&cfg, &kernel, side, r_max, bins, &out),
        Command::Bound(b) => bound(&cfg, &b, &cli.common, &out),
        Command::VerifyClt => verify_clt(&cfg, &out),
        Command::Identities => identities(),
        Command::Schema => {
            println!("{CSV_SCHEMA}");
            Ok(())
        }
    }
}

fn apply_common(cfg: &mut RunConfig, c: &Common) {
    if c.seed.is_some() || c.replications.is_some() || c.n.is_some() {
        let e = cfg.experiment.get_or_insert(crate::config::ExperimentSection {
            n_list: None,
            replications: None,
            seed: None,
            side: None,
        });
        if let Some(s) = c.seed {
            e.seed = Some(s);
        }
        if let Some(r) = c.replications {
            e.replications = Some(r);
        }
        if let Some(n) = &c.n {
            e.n_list = Some(n.iter().map(|&v| v as usize).collect());
        }
    }
    if let Some(dir) = &c.out {
        let o = cfg.output.get_or_insert(crate::config::OutputSection {
            directory: None,
            formats: None,
            dump_standardized: None,
        });
        o.directory = Some(dir.clone());
    }
}

struct Output {
    dir: Option<PathBuf>,
    json: bool,
    csv: bool,
}

impl Output {
    fn new(cfg: &RunConfig) -> Self {
        let formats = cfg.formats();
        Self {
            dir: cfg.output_directory(),
            json: formats.contains(&OutputFormat::Json),
            csv: formats.contains(&OutputFormat::Csv),
        }
    }

    fn ensure_dir(&self) -> std::result::Result<Option<&Path>, Failure> {
        match &self.dir {
            Some(d) => {
                fs::create_dir_all(d).map_err(|e| io_failure(d, e))?;
                Ok(Some(d.as_path()))
            }
            None => Ok(None),
        }
    }

    /// Writes `name` into the output directory, or prints it when there is none.
    fn json<T: Serialize>(&self, name: &str, value: &T) -> Outcome {
        let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Domain(e.to_string()))?;
        match self.ensure_dir()? {
            Some(d) if self.json => {
                let p = d.join(name);
                fs::write(&p, text + "\n").map_err(|e| io_failure(&p, e))?;
                println!("wrote {}", p.display());
            }
            Some(_) => {}
            None => println!("{text}"),
        }
        Ok(())
    }

    fn csv(&self, name: &str, header: &[String], rows: &[Vec<String>]) -> Outcome {
        let Some(d) = self.ensure_dir()? else {
            return Ok(());
        };
        if !self.csv {
            return Ok(());
        }
        let p = d.join(name);
        let mut w = csv::Writer::from_path(&p).map_err(|e| io_failure(&p, e))?;
        w.write_record(header).map_err(|e| io_failure(&p, e))?;
        for r in rows {
            w.write_record(r).map_err(|e| io_failure(&p, e))?;
        }
        w.flush().map_err(|e| io_failure(&p, e))?;
        println!("wrote {}", p.display());
        Ok(())
    }
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn header(cols: &[&str]) -> Vec<String> {
    cols.iter().map(|s| s.to_string()).collect()
}

fn kernel_section(cfg: &RunConfig, flags: &KernelFlags) -> std::result::Result<KernelSection, Failure> {
    let base = cfg.kernel;
    let pick = |flag: Option<f64>, file: Option<f64>, key: &str| {
        flag.or(file).ok_or_else(|| Failure::Usage(format!("missing required config key or flag: kernel.{key}")))
    };
    let picku = |flag: Option<usize>, file: Option<usize>, key: &str| {
        flag.or(file).ok_or_else(|| Failure::Usage(format!("missing required config key or flag: kernel.{key}")))
    };
    Ok(KernelSection {
        m: picku(flags.m, base.map(|k| k.m), "m")?,
        alpha: pick(flags.alpha, base.map(|k| k.alpha), "alpha")?,
        rho: pick(flags.rho, base.map(|k| k.rho), "rho")?,
        d: picku(flags.d, base.map(|k| k.d), "d")?,
        lambda_envelope: flags.lambda_envelope.or(base.and_then(|k| k.lambda_envelope)),
    })
}

#[derive(Serialize)]
struct KernelValidation {
    kernel: LaguerreGaussianSpec,
    alpha_max: f64,
    margin: f64,
    spectral_sup: f64,
    kappa: Option<f64>,
    lambda: Option<f64>,
}

fn validate_kernel(cfg: &RunConfig, flags: &KernelFlags, out: &Output) -> Outcome {
    let k = kernel_section(cfg, flags)?;
    let spec = k.spec()?;
    let alpha_max = spec.alpha_max();
    println!("alpha = {}  alpha_max = {alpha_max:.6}  margin = {:.6}", spec.alpha, alpha_max - spec.alpha);
    spec.check_existence()?;
    let density = spectral_density(&spec)?;
    let envelope = k.lambda_envelope.map(|l| fit_decay_envelope(&spec, l)).transpose()?;
    println!("valid: spectral density sup = {:.12}", density.sup());
    if let Some(e) = envelope {
        println!("decay envelope: kappa = {:.12e}, lambda = {}", e.kappa, e.lambda);
    }
    let report = KernelValidation {
        kernel: spec,
        alpha_max,
        margin: alpha_max - spec.alpha,
        spectral_sup: density.sup(),
        kappa: envelope.map(|e| e.kappa),
        lambda: envelope.map(|e| e.lambda),
    };
    if out.dir.is_some() {
        out.json("kernel.json", &report)?;
    }
    Ok(())
}

fn window_side(cfg: &RunConfig, flag: Option<f64>) -> std::result::Result<f64, Failure> {
    flag.or(cfg.experiment.as_ref().and_then(|e| e.side))
        .ok_or_else(|| Failure::Usage("missing required config key or flag: experiment.side".into()))
}

fn replications_and_seed(cfg: &RunConfig) -> std::result::Result<(usize, u64), Failure> {
    let e = cfg.experiment_section()?;
    let r = e.replications.ok_or_else(|| Failure::Usage("missing required config key: experiment.replications".into()))?;
    let s = e.seed.ok_or_else(|| Failure::Usage("missing required config key: experiment.seed".into()))?;
    Ok((r, s))
}

#[derive(Serialize)]
struct SampleSidecar {
    kernel: LaguerreGaussianSpec,
    side: f64,
    replications: usize,
    seed: u64,
    truncation: TruncationSummary,
    counts: Vec<usize>,
}

fn sample(cfg: &RunConfig, flags: &KernelFlags, side: Option<f64>, out: &Output) -> Outcome {
    let spec = kernel_section(cfg, flags)?.spec()?;
    let side = window_side(cfg, side)?;
    let (reps, seed) = replications_and_seed(cfg)?;
    let sampler = DppSampler::new(&spec, Window::new(spec.d, side)?)?;
    let patterns = sampler.sample_many(seed, reps)?;
    let mut cols = vec!["replication_index".to_string()];
    cols.extend((1..=spec.d).map(|j| format!("x_{j}")));
    let rows: Vec<Vec<String>> = patterns
        .iter()
        .enumerate()
        .flat_map(|(i, p)| {
            p.iter()
                .map(move |x| std::iter::once(i.to_string()).chain(x.iter().map(|&v| num(v))).collect())
                .collect::<Vec<_>>()
        })
        .collect();
    out.csv("patterns.csv", &cols, &rows)?;
    let sidecar = SampleSidecar {
        kernel: spec,
        side,
        replications: reps,
        seed,
        truncation: sampler.summary(),
        counts: patterns.iter().map(|p| p.len()).collect(),
    };
    out.json("patterns.json", &sidecar)
}

#[derive(Serialize)]
struct PcfReport {
    kernel: LaguerreGaussianSpec,
    side: f64,
    replications: usize,
    seed: u64,
    bins: Vec<PcfRow>,
}

#[derive(Serialize)]
struct PcfRow {
    r_lo: f64,
    r_hi: f64,
    g_hat: Option<f64>,
    stderr: Option<f64>,
    g_theory: f64,
    pairs: u64,
}

fn pcf(cfg: &RunConfig, flags: &KernelFlags, side: Option<f64>, r_max: Option<f64>, bins: Option<usize>, out: &Output) -> Outcome {
    let spec = kernel_section(cfg, flags)?.spec()?;
    let side = window_side(cfg, side)?;
    let (reps, seed) = replications_and_seed(cfg)?;
    let r_max = r_max
        .or(cfg.pcf.map(|p| p.r_max))
        .ok_or_else(|| Failure::Usage("missing required config key or flag: pcf.r_max".into()))?;
    let bins = bins
        .or(cfg.pcf.map(|p| p.bins))
        .ok_or_else(|| Failure::Usage("missing required config key or flag: pcf.bins".into()))?;
    if bins < 2 {
        return Err(Failure::Usage("pcf.bins must be at least 2".into()));
    }
    let edges: Vec<f64> = (0..=bins).map(|k| r_max * k as f64 / bins as f64).collect();
    let sampler = DppSampler::new(&spec, Window::new(spec.d, side)?)?;
    let patterns = sampler.sample_many(seed, reps)?;
    let est = empirical_pcf(&patterns, &edges)?;
    let rows: Vec<PcfRow> = est
        .iter()
        .map(|b| PcfRow {
            r_lo: b.r_lo,
            r_hi: b.r_hi,
            g_hat: b.g_hat,
            stderr: b.stderr,
            g_theory: theoretical_pcf_bin(&spec, b.r_lo, b.r_hi),
            pairs: b.pairs,
        })
        .collect();
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| vec![num(r.r_lo), num(r.r_hi), opt(r.g_hat), opt(r.stderr), num(r.g_theory), r.pairs.to_string()])
        .collect();
    out.csv("pcf.csv", &header(&["r_lo", "r_hi", "g_hat", "stderr", "g_theory", "pairs"]), &table)?;
    out.json("pcf.json", &PcfReport { kernel: spec, side, replications: reps, seed, bins: rows })
}

fn bound(cfg: &RunConfig, flags: &BoundFlags, common: &Common, out: &Output) -> Outcome {
    let file = cfg.bound.as_ref();
    let need = |flag: Option<f64>, file: Option<f64>, key: &str| {
        flag.or(file).ok_or_else(|| Failure::Usage(format!("missing required config key or flag: bound.{key}")))
    };
    let d = flags
        .d
        .or(file.map(|b| b.d))
        .ok_or_else(|| Failure::Usage("missing required config key or flag: bound.d".into()))?;
    let m = need(flags.m, file.map(|b| b.m), "M")?;
    let kappa = need(flags.kappa, file.map(|b| b.kappa), "kappa")?;
    let lambda = need(flags.lambda, file.map(|b| b.lambda), "lambda")?;
    let gamma = need(flags.gamma, file.map(|b| b.gamma), "gamma")?;
    let ns = common
        .n
        .clone()
        .or(file.map(|b| b.n.clone()))
        .ok_or_else(|| Failure::Usage("missing required config key or flag: bound.n".into()))?;
    let reports = ns
        .iter()
        .map(|&n| wasserstein_bound(&BoundInputs { d, m, kappa, lambda, gamma, n }))
        .collect::<crate::Result<Vec<_>>>()?;
    for r in &reports {
        if !r.l_star_optimal {
            eprintln!("note: n = {} is too small for the optimal block length; l = 1 used", r.inputs.n);
        }
    }
    let table: Vec<Vec<String>> = reports
        .iter()
        .map(|r| vec![r.inputs.n.to_string(), num(r.term1), num(r.term2), num(r.term3), num(r.total), r.l_star.to_string()])
        .collect();
    out.csv("bound.csv", &header(&["n", "term1", "term2", "term3", "total", "l_star"]), &table)?;
    out.json("bound.json", &reports)
}

fn verify_clt(cfg: &RunConfig, out: &Output) -> Outcome {
    let exp = experiment_config(cfg)??;
    let output = run_experiment_detailed(&exp)?;
    let report = &output.report;
    let table: Vec<Vec<String>> = report
        .rows
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                opt(r.sigma2_hat),
                opt(r.m_hat),
                opt(report.gamma_hat),
                opt(r.w1_empirical),
                opt(r.kolmogorov_empirical),
                opt(r.bound.map(|b| b.total)),
                r.dominated.to_string(),
            ]
        })
        .collect();
    out.csv(
        "verify.csv",
        &header(&["n", "sigma2_hat", "M_hat", "gamma_hat", "w1", "kolmogorov", "bound_total", "dominated"]),
        &table,
    )?;
    if cfg.dump_standardized() {
        let rows: Vec<Vec<String>> = report
            .rows
            .iter()
            .zip(&output.standardized)
            .filter_map(|(r, w)| w.as_ref().map(|w| (r.n, w)))
            .flat_map(|(n, w)| w.iter().enumerate().map(move |(i, v)| vec![n.to_string(), i.to_string(), num(*v)]))
            .collect();
        out.csv("standardized.csv", &header(&["n", "replication_index", "w"]), &rows)?;
    }
    out.json("verify.json", report)?;
    for r in &report.rows {
        match (&r.error, r.w1_empirical, r.bound) {
            (Some(e), _, _) => eprintln!("n = {}: {e}", r.n),
            (None, Some(w1), Some(b)) => {
                eprintln!("n = {}: w1 = {w1:.5}, bound = {:.5e}, dominated = {}", r.n, b.total, r.dominated)
            }
            _ => {}
        }
    }
    Ok(())
}

/// Closed forms of the two geometric sums against direct summation.
fn identities() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut checked = 0usize;
    for n in 1..=50u64 {
        for k in 0..=60 {
            let w = 0.05 + 0.05 * k as f64;
            for (closed, direct) in [
                (weighted_geom_sum(n, w), weighted_geom_sum_direct(n, w)),
                (symmetric_geom_sum(n, w), symmetric_geom_sum_direct(n, w)),
            ] {
                worst = worst.max((closed - direct).abs() / direct.abs().max(f64::MIN_POSITIVE));
                checked += 1;
            }
        }
    }
    let unit_ok = (1..=50u64).all(|n| weighted_geom_sum(n, 1.0) == (n * (n - 1) / 2) as f64);
    println!("geometric sums: {checked} cases, worst relative error {worst:.3e}");
    println!("unit-ratio case returns n(n-1)/2 exactly: {unit_ok}");
    if worst <= 1e-10 && unit_ok {
        println!("identities: PASS");
        Ok(())
    } else {
        Err(Failure::Domain("identities: FAIL".into()))
    }
}
