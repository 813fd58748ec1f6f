//! Experiment configuration, its JSON form, and the list parsers used by the CLI.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use qlin_core::dataprep::PreprocessOrder;
use qlin_core::hhl::{HHLConfig, SignMode, SpectrumEstimate};
use qlin_core::qsvm::{Reduction, DEFAULT_GAMMA_INV};

use crate::error::{BenchError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    HhlDiag,
    HhlDensity,
    QsvmShots,
    QsvmFinal,
}

impl Suite {
    pub fn as_str(self) -> &'static str {
        match self {
            Suite::HhlDiag => "hhl-diag",
            Suite::HhlDensity => "hhl-density",
            Suite::QsvmShots => "qsvm-shots",
            Suite::QsvmFinal => "qsvm-final",
        }
    }

    pub fn is_hhl(self) -> bool {
        matches!(self, Suite::HhlDiag | Suite::HhlDensity)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum DatasetName {
    Bcancer,
    Iris,
}

impl DatasetName {
    pub fn as_str(self) -> &'static str {
        match self {
            DatasetName::Bcancer => "bcancer",
            DatasetName::Iris => "iris",
        }
    }

    pub fn file_name(self) -> &'static str {
        match self {
            DatasetName::Bcancer => "breast_cancer.csv",
            DatasetName::Iris => "iris.csv",
        }
    }
}

/// HHL settings used by the benchmark suites: clock sized from a Gershgorin
/// condition estimate (at most 9 qubits) with two's-complement decoding.
pub fn default_hhl() -> HHLConfig {
    HHLConfig {
        n_clock: 4,
        max_clock: Some(9),
        estimate: SpectrumEstimate::Gershgorin,
        mode: SignMode::TwosComplement,
        shots: 1024,
        ..HHLConfig::default()
    }
}

fn hhl_overrides<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<HHLConfig, D::Error> {
    use serde::de::Error as _;
    let given = serde_json::Value::deserialize(d)?;
    let mut base = serde_json::to_value(default_hhl()).map_err(D::Error::custom)?;
    match (given, &mut base) {
        (serde_json::Value::Object(over), serde_json::Value::Object(b)) => b.extend(over),
        (other, _) => return Err(D::Error::custom(format!("hhl must be an object, got {other}"))),
    }
    serde_json::from_value(base).map_err(D::Error::custom)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub suites: Vec<Suite>,
    pub master_seed: u64,
    pub out_dir: PathBuf,
    /// Worker threads; `None` defers to `QLINBENCH_THREADS`, then to the core count.
    pub threads: Option<usize>,

    pub dims: Vec<usize>,
    pub densities: Vec<f64>,
    pub trials_per_cell: usize,
    /// Keys given here override [`default_hhl`] one by one.
    #[serde(deserialize_with = "hhl_overrides")]
    pub hhl: HHLConfig,

    pub datasets: Vec<DatasetName>,
    pub data_dir: PathBuf,
    pub shots_list: Vec<u64>,
    /// Replicates per dataset; each draws its own split and shot noise.
    pub seeds: usize,
    pub gamma_inv: f64,
    pub reduction: Reduction,
    pub preprocess: PreprocessOrder,
    pub feature_reps: usize,
    pub bcancer_train: usize,
    /// Size of the second, smaller Breast Cancer evaluation set drawn from the test split.
    pub bcancer_eval_subset: usize,
    pub iris_train_fraction: f64,
}

pub fn default_densities() -> Vec<f64> {
    (5..=10).map(|i| i as f64 / 10.0).collect()
}

pub fn default_shots() -> Vec<u64> {
    (0..=10).map(|k| 1u64 << k).collect()
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            suites: vec![Suite::HhlDiag, Suite::HhlDensity, Suite::QsvmShots, Suite::QsvmFinal],
            master_seed: 2021,
            out_dir: PathBuf::from("results"),
            threads: None,
            dims: vec![2, 4, 8],
            densities: default_densities(),
            trials_per_cell: 3,
            hhl: default_hhl(),
            datasets: vec![DatasetName::Bcancer, DatasetName::Iris],
            data_dir: PathBuf::from("data"),
            shots_list: default_shots(),
            seeds: 10,
            gamma_inv: DEFAULT_GAMMA_INV,
            reduction: Reduction::AllPairs,
            preprocess: PreprocessOrder::StandardizeThenPca,
            feature_reps: 2,
            bcancer_train: 69,
            bcancer_eval_subset: 198,
            iris_train_fraction: 0.8,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| BenchError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| BenchError::Config(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(BenchError::Config(m));
        if self.suites.is_empty() {
            return bad("no suites selected".into());
        }
        if let Some(d) = self.dims.iter().find(|d| ![2, 4, 8].contains(*d)) {
            return bad(format!("dimension {d} not in {{2, 4, 8}}"));
        }
        if let Some(d) = self.densities.iter().find(|d| !(0.0..=1.0).contains(*d)) {
            return bad(format!("density {d} outside [0, 1]"));
        }
        if self.trials_per_cell == 0 || self.seeds == 0 {
            return bad("trials and seeds must be at least 1".into());
        }
        if self.shots_list.is_empty() || self.shots_list.contains(&0) {
            return bad("shots must be a non-empty list of positive counts".into());
        }
        if !(self.gamma_inv >= 0.0 && self.gamma_inv.is_finite()) {
            return bad(format!("gamma_inv {} must be finite and non-negative", self.gamma_inv));
        }
        if !(self.iris_train_fraction > 0.0 && self.iris_train_fraction < 1.0) {
            return bad(format!("iris train fraction {} not in (0, 1)", self.iris_train_fraction));
        }
        if self.feature_reps == 0 {
            return bad("feature map needs at least one repetition".into());
        }
        if self.threads == Some(0) {
            return bad("threads must be at least 1".into());
        }
        Ok(())
    }

    pub fn has_hhl(&self) -> bool {
        self.suites.iter().any(|s| s.is_hhl())
    }

    pub fn has_qsvm(&self) -> bool {
        self.suites.iter().any(|s| !s.is_hhl())
    }

    pub fn thread_count(&self) -> Option<usize> {
        self.threads.or_else(|| {
            std::env::var("QLINBENCH_THREADS").ok().and_then(|v| v.trim().parse().ok()).filter(|&n| n > 0)
        })
    }
}

fn parse_items<T: std::str::FromStr>(s: &str) -> std::result::Result<Vec<T>, String>
where
    T::Err: std::fmt::Display,
{
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse::<T>().map_err(|e| format!("{t:?}: {e}")))
        .collect()
}

pub fn parse_dims(s: &str) -> std::result::Result<Vec<usize>, String> {
    parse_items(s)
}

/// `start:stop:step` (inclusive) or a comma-separated list.
pub fn parse_densities(s: &str) -> std::result::Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [a, b, step] => {
            let (a, b, step): (f64, f64, f64) = (
                a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?,
                b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?,
                step.trim().parse().map_err(|e| format!("{step:?}: {e}"))?,
            );
            if step <= 0.0 || b < a {
                return Err(format!("empty range {s}"));
            }
            let n = ((b - a) / step + 1e-9).floor() as usize;
            Ok((0..=n).map(|i| ((a + i as f64 * step) * 1e9).round() / 1e9).collect())
        }
        [_] => parse_items(s),
        _ => Err(format!("expected start:stop:step or a list, got {s:?}")),
    }
}

/// Comma-separated counts, or `lo:hi` for the powers of two in between.
pub fn parse_shots(s: &str) -> std::result::Result<Vec<u64>, String> {
    if let Some((lo, hi)) = s.split_once(':') {
        let lo: u64 = lo.trim().parse().map_err(|e| format!("{lo:?}: {e}"))?;
        let hi: u64 = hi.trim().parse().map_err(|e| format!("{hi:?}: {e}"))?;
        if lo == 0 || hi < lo {
            return Err(format!("empty range {s}"));
        }
        return Ok((0..64).map(|k| 1u64 << k).filter(|v| (lo..=hi).contains(v)).collect());
    }
    parse_items(s)
}
