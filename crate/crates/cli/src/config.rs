//! Run configuration: built-in defaults, then an optional `key = value`
//! config file, then command-line flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::CliError;

pub const DEFAULT_ALPHAS: [f64; 3] = [0.25, 0.5, 0.75];
pub const DEFAULT_K: usize = 100;
pub const DEFAULT_TAU: f64 = 0.6;
pub const DEFAULT_TRIALS: usize = 100;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_ALPHA: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum FilterMode {
    None,
    Affinity,
    Utility,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Affinity,
    Utility,
}

/// Keys accepted in a config file. Every key is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub graph: Option<PathBuf>,
    pub profiles: Option<PathBuf>,
    pub brand: Option<PathBuf>,
    pub stop_words: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub alpha: Option<f64>,
    pub alphas: Option<Vec<f64>>,
    pub k: Option<usize>,
    pub tau: Option<f64>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub filter: Option<FilterMode>,
    pub method: Option<MethodArg>,
    pub round: Option<u32>,
}

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
        let cfg: Self = toml::from_str(&text)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        for a in cfg.alpha.iter().chain(cfg.alphas.iter().flatten()) {
            unit_interval_value("alpha", *a)?;
        }
        if let Some(t) = cfg.tau {
            unit_interval_value("tau", t)?;
        }
        if cfg.k == Some(0) {
            return Err(CliError::Usage("k must be at least 1".into()));
        }
        if cfg.trials == Some(0) {
            return Err(CliError::Usage("trials must be at least 1".into()));
        }
        Ok(cfg)
    }
}

fn unit_interval_value(name: &str, v: f64) -> Result<f64, CliError> {
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(CliError::Usage(format!("{name} = {v} is outside [0, 1]")))
    }
}

/// clap value parser for probabilities and blend weights.
pub fn unit_interval(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} is outside [0, 1]"))
    }
}

pub fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(_) => Err(format!("{s:?} is not a positive integer")),
    }
}

/// Fully resolved settings shared by the pipeline commands.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub graph_path: PathBuf,
    pub profiles_path: PathBuf,
    pub brand_path: PathBuf,
    pub stop_words_path: Option<PathBuf>,
    pub alpha: f64,
    pub alphas: Vec<f64>,
    pub k: usize,
    pub tau: f64,
    pub trials: usize,
    pub rng_seed: u64,
    pub out: PathBuf,
    pub filter: FilterMode,
    pub method: MethodArg,
    pub round: Option<u32>,
}

/// Flag values as parsed; `None` means "not given".
#[derive(Debug, Default, Clone, clap::Args)]
pub struct CommonArgs {
    /// Config file with `key = value` lines; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Edge list (SNAP format).
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Profiles: JSON-lines file or directory of `<id>.txt`.
    #[arg(long)]
    pub profiles: Option<PathBuf>,
    /// Brand profile text file.
    #[arg(long)]
    pub brand: Option<PathBuf>,
    /// Stop-word list, one word per line.
    #[arg(long)]
    pub stop_words: Option<PathBuf>,
    /// Output directory [default: out].
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Affinity threshold for target nodes [default: 0.6].
    #[arg(long, value_parser = unit_interval)]
    pub tau: Option<f64>,
    /// Number of targets [default: 100].
    #[arg(long, value_parser = crate::config::positive)]
    pub k: Option<usize>,
    /// Master random seed [default: 42].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Print scores truncated to this many decimals (files keep full precision).
    #[arg(long)]
    pub round: Option<u32>,
}

impl CommonArgs {
    pub fn resolve(
        &self,
        alpha: Option<f64>,
        alphas: Option<Vec<f64>>,
        trials: Option<usize>,
        filter: Option<FilterMode>,
        method: Option<MethodArg>,
    ) -> Result<RunConfig, CliError> {
        let file = ConfigFile::load(self.config.as_deref())?;
        let required = |flag: &Option<PathBuf>, cfg: Option<PathBuf>, name: &str| {
            flag.clone()
                .or(cfg)
                .ok_or_else(|| CliError::Usage(format!("missing --{name} (flag or config key)")))
        };
        Ok(RunConfig {
            graph_path: required(&self.graph, file.graph, "graph")?,
            profiles_path: required(&self.profiles, file.profiles, "profiles")?,
            brand_path: required(&self.brand, file.brand, "brand")?,
            stop_words_path: self.stop_words.clone().or(file.stop_words),
            alpha: alpha.or(file.alpha).unwrap_or(DEFAULT_ALPHA),
            alphas: alphas.or(file.alphas).unwrap_or_else(|| DEFAULT_ALPHAS.to_vec()),
            k: self.k.or(file.k).unwrap_or(DEFAULT_K),
            tau: self.tau.or(file.tau).unwrap_or(DEFAULT_TAU),
            trials: trials.or(file.trials).unwrap_or(DEFAULT_TRIALS),
            rng_seed: self.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            out: self.out.clone().or(file.out).unwrap_or_else(|| PathBuf::from("out")),
            filter: filter.or(file.filter).unwrap_or(FilterMode::None),
            method: method.or(file.method).unwrap_or(MethodArg::Utility),
            round: self.round.or(file.round),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args() -> CommonArgs {
        CommonArgs {
            graph: Some("g.txt".into()),
            profiles: Some("p.jsonl".into()),
            brand: Some("b.txt".into()),
            ..Default::default()
        }
    }

    #[test]
    fn defaults_follow_the_experiment_setup() {
        let cfg = args().resolve(None, None, None, None, None).unwrap();
        assert_eq!(cfg.alphas, vec![0.25, 0.5, 0.75]);
        assert_eq!(cfg.k, 100);
        assert_eq!(cfg.tau, 0.6);
        assert_eq!(cfg.trials, 100);
        assert_eq!(cfg.filter, FilterMode::None);
    }

    #[test]
    fn flags_override_config_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(&path, "k = 50\ntau = 0.7\nalphas = [0.1]\ngraph = \"other.txt\"\n").unwrap();
        let mut a = args();
        a.config = Some(path);
        a.k = Some(7);
        let cfg = a.resolve(None, None, None, None, None).unwrap();
        assert_eq!(cfg.k, 7);
        assert_eq!(cfg.tau, 0.7);
        assert_eq!(cfg.alphas, vec![0.1]);
        assert_eq!(cfg.graph_path, PathBuf::from("g.txt"));
    }

    #[test]
    fn bad_config_values_are_usage_errors() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(&path, "alpha = 1.5\n").unwrap();
        let mut a = args();
        a.config = Some(path.clone());
        assert!(matches!(a.resolve(None, None, None, None, None), Err(CliError::Usage(_))));
        std::fs::write(&path, "colour = 3\n").unwrap();
        assert!(matches!(a.resolve(None, None, None, None, None), Err(CliError::Usage(_))));
    }

    #[test]
    fn unit_interval_parser() {
        assert_eq!(unit_interval("0.25"), Ok(0.25));
        assert!(unit_interval("1.5").is_err());
        assert!(unit_interval("x").is_err());
    }
}
