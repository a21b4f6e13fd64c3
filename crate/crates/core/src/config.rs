//! TOML run configuration shared by the command-line subcommands.
//!
//! Lengths are in window units and intensities per unit volume. Unknown keys
//! are rejected; which sections are required depends on the subcommand.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::kernels::LaguerreGaussianSpec;
use crate::statistics::{LocalStatistic, StatKindTag};
use crate::stein::BoundInputs;
use crate::verify::ExperimentConfig;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub kernel: Option<KernelSection>,
    pub statistic: Option<StatisticSection>,
    pub experiment: Option<ExperimentSection>,
    pub pcf: Option<PcfSection>,
    pub bound: Option<BoundSection>,
    pub output: Option<OutputSection>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelSection {
    pub m: usize,
    pub alpha: f64,
    pub rho: f64,
    pub d: usize,
    pub lambda_envelope: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StatisticSection {
    pub kind: StatKindTag,
    pub tau: f64,
    /// Interaction range of `pair_indicator`, length scale of `pair_weight`.
    pub r: Option<f64>,
    pub p_max: Option<usize>,
    pub g_bound: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub n_list: Option<Vec<usize>>,
    pub replications: Option<usize>,
    pub seed: Option<u64>,
    /// Window side for `sample` and `pcf`.
    pub side: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PcfSection {
    pub r_max: f64,
    pub bins: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundSection {
    pub d: usize,
    #[serde(rename = "M")]
    pub m: f64,
    pub kappa: f64,
    pub lambda: f64,
    pub gamma: f64,
    pub n: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub directory: Option<PathBuf>,
    pub formats: Option<Vec<OutputFormat>>,
    /// Also write the per-replication standardized values of `verify-clt`.
    pub dump_standardized: Option<bool>,
}

/// Problems with the configuration itself, as opposed to infeasible values.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

fn missing(what: &str) -> ConfigError {
    ConfigError(format!("missing required config key or section: {what}"))
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError(format!("config parse error: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn kernel_section(&self) -> Result<KernelSection, ConfigError> {
        self.kernel.ok_or_else(|| missing("[kernel]"))
    }

    pub fn experiment_section(&self) -> Result<&ExperimentSection, ConfigError> {
        self.experiment.as_ref().ok_or_else(|| missing("[experiment]"))
    }

    pub fn formats(&self) -> Vec<OutputFormat> {
        self.output
            .as_ref()
            .and_then(|o| o.formats.clone())
            .unwrap_or_else(|| vec![OutputFormat::Json, OutputFormat::Csv])
    }

    pub fn output_directory(&self) -> Option<PathBuf> {
        self.output.as_ref().and_then(|o| o.directory.clone())
    }

    pub fn dump_standardized(&self) -> bool {
        self.output.as_ref().and_then(|o| o.dump_standardized).unwrap_or(false)
    }

    pub fn statistic_for(&self, d: usize) -> Result<crate::Result<LocalStatistic>, ConfigError> {
        let s = self.statistic.ok_or_else(|| missing("[statistic]"))?;
        let r = match s.kind {
            StatKindTag::Count => s.r.unwrap_or(0.0),
            _ => s.r.ok_or_else(|| missing("statistic.r"))?,
        };
        Ok(LocalStatistic::from_tag(d, s.kind, s.tau, r, s.p_max.unwrap_or(2), s.g_bound.unwrap_or(1.0)))
    }

    pub fn bound_inputs(&self) -> Result<Vec<BoundInputs>, ConfigError> {
        let b = self.bound.as_ref().ok_or_else(|| missing("[bound]"))?;
        Ok(b.n.iter().map(|&n| BoundInputs { d: b.d, m: b.m, kappa: b.kappa, lambda: b.lambda, gamma: b.gamma, n }).collect())
    }
}

impl KernelSection {
    pub fn spec(&self) -> crate::Result<LaguerreGaussianSpec> {
        LaguerreGaussianSpec::new(self.m, self.alpha, self.rho, self.d)
    }
}

/// Assembles an [`ExperimentConfig`]; the outer error is a configuration
/// problem, the inner one an infeasible value.
pub fn experiment_config(cfg: &RunConfig) -> Result<crate::Result<ExperimentConfig>, ConfigError> {
    let k = cfg.kernel_section()?;
    let e = cfg.experiment_section()?;
    let lambda_envelope = k.lambda_envelope.ok_or_else(|| missing("kernel.lambda_envelope"))?;
    let n_list = e.n_list.clone().ok_or_else(|| missing("experiment.n_list"))?;
    let replications = e.replications.ok_or_else(|| missing("experiment.replications"))?;
    let seed = e.seed.ok_or_else(|| missing("experiment.seed"))?;
    let statistic = cfg.statistic_for(k.d)?;
    Ok((|| {
        Ok(ExperimentConfig { kernel: k.spec()?, statistic: statistic?, n_list, replications, seed, lambda_envelope })
    })())
}

#[cfg(test)]
mod tests {
    use super::*;

    const FULL: &str = r#"
[kernel]
m = 1
alpha = 0.2
rho = 2.0
d = 1
lambda_envelope = 1.0

[statistic]
kind = "count"
tau = 0.25

[experiment]
n_list = [8, 16]
replications = 200
seed = 7

[output]
directory = "out"
formats = ["json"]
"#;

    #[test]
    fn parses_full_config() {
        let cfg = RunConfig::parse(FULL).unwrap();
        let exp = experiment_config(&cfg).unwrap().unwrap();
        assert_eq!(exp.n_list, vec![8, 16]);
        assert_eq!(cfg.formats(), vec![OutputFormat::Json]);
        assert_eq!(cfg.output_directory(), Some(PathBuf::from("out")));
    }

    #[test]
    fn unknown_keys_rejected() {
        let bad = FULL.replace("tau = 0.25", "tau = 0.25\nradius = 3");
        assert!(RunConfig::parse(&bad).is_err());
        assert!(RunConfig::parse("[nonsense]\nx = 1").is_err());
    }

    #[test]
    fn missing_keys_reported() {
        let cfg = RunConfig::parse(&FULL.replace("seed = 7", "")).unwrap();
        let err = experiment_config(&cfg).unwrap_err();
        assert!(err.0.contains("experiment.seed"));
        let cfg = RunConfig::parse("[statistic]\nkind = \"pair_indicator\"\ntau = 0.5").unwrap();
        assert!(cfg.statistic_for(1).is_err());
    }

    #[test]
    fn bound_section_uses_capital_m() {
        let cfg = RunConfig::parse("[bound]\nd = 1\nM = 1.5\nkappa = 1\nlambda = 3\ngamma = 0.5\nn = [10, 100]").unwrap();
        let inputs = cfg.bound_inputs().unwrap();
        assert_eq!(inputs.len(), 2);
        assert_eq!(inputs[1].m, 1.5);
        assert_eq!(inputs[1].n, 100);
    }
}
