//! HHL grid: diagonal against non-diagonal matrices per size, and a density sweep.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use qlin_core::hhl::{run_hhl, HHLConfig, HHLReport, CSV_HEADER};
use qlin_core::rng::{derive_seed, label_hash};
use qlin_core::spectral::{random_diagonal, random_sparse_hermitian, HermitianMatrix, SparsitySpec};

use crate::config::{ExperimentConfig, Suite};
use crate::report::{median, Timing};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatrixKind {
    /// Positive diagonal spectrum.
    Diagonal,
    /// Fully dense random Hermitian.
    NonDiagonal,
    /// Random Hermitian at the cell's requested density.
    Sparse,
}

impl MatrixKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MatrixKind::Diagonal => "diagonal",
            MatrixKind::NonDiagonal => "non-diagonal",
            MatrixKind::Sparse => "sparse",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HhlCell {
    pub suite: Suite,
    pub kind: MatrixKind,
    pub dim: usize,
    pub requested_density: f64,
    pub trial: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HhlRow {
    #[serde(flatten)]
    pub cell: HhlCell,
    /// `"ok"` or the error kind.
    pub status: String,
    pub error: Option<String>,
    pub report: Option<HHLReport>,
}

pub const HHL_PREFIX: [&str; 5] = ["suite", "kind", "trial", "requested_density", "status"];

pub fn hhl_csv_header() -> Vec<&'static str> {
    HHL_PREFIX.iter().chain(CSV_HEADER.iter()).copied().collect()
}

impl HhlRow {
    pub fn csv_record(&self) -> Vec<String> {
        let c = &self.cell;
        let mut rec = vec![
            c.suite.as_str().to_string(),
            c.kind.as_str().to_string(),
            c.trial.to_string(),
            c.requested_density.to_string(),
            self.status.clone(),
        ];
        match &self.report {
            Some(r) => rec.extend(r.csv_record()),
            None => {
                let mut blank = vec![String::new(); CSV_HEADER.len()];
                blank[0] = c.dim.to_string();
                blank[CSV_HEADER.len() - 1] = c.seed.to_string();
                rec.extend(blank);
            }
        }
        rec
    }

    pub fn is_ok(&self) -> bool {
        self.report.is_some()
    }
}

fn density_key(d: f64) -> u64 {
    (d * 1e6).round() as u64
}

/// Every cell of the configured HHL grid, in report order.
pub fn hhl_cells(cfg: &ExperimentConfig) -> Vec<HhlCell> {
    let mut cells = Vec::new();
    let seed = |suite: Suite, dim: usize, key: u64, trial: usize| {
        derive_seed(
            cfg.master_seed,
            &[label_hash(suite.as_str()), dim as u64, key, trial as u64, cfg.hhl.shots],
        )
    };
    if cfg.suites.contains(&Suite::HhlDiag) {
        for &dim in &cfg.dims {
            for kind in [MatrixKind::Diagonal, MatrixKind::NonDiagonal] {
                for trial in 0..cfg.trials_per_cell {
                    let requested_density = if kind == MatrixKind::Diagonal { 1.0 / dim as f64 } else { 1.0 };
                    cells.push(HhlCell {
                        suite: Suite::HhlDiag,
                        kind,
                        dim,
                        requested_density,
                        trial,
                        seed: seed(Suite::HhlDiag, dim, label_hash(kind.as_str()), trial),
                    });
                }
            }
        }
    }
    if cfg.suites.contains(&Suite::HhlDensity) {
        for &dim in &cfg.dims {
            for &density in &cfg.densities {
                for trial in 0..cfg.trials_per_cell {
                    cells.push(HhlCell {
                        suite: Suite::HhlDensity,
                        kind: MatrixKind::Sparse,
                        dim,
                        requested_density: density,
                        trial,
                        seed: seed(Suite::HhlDensity, dim, density_key(density), trial),
                    });
                }
            }
        }
    }
    cells
}

pub fn cell_matrix(cell: &HhlCell) -> qlin_core::Result<HermitianMatrix> {
    match cell.kind {
        MatrixKind::Diagonal => Ok(random_diagonal(cell.dim, cell.seed, false)),
        MatrixKind::NonDiagonal => random_sparse_hermitian(&SparsitySpec { density: 1.0, dim: cell.dim, seed: cell.seed }),
        MatrixKind::Sparse => random_sparse_hermitian(&SparsitySpec {
            density: cell.requested_density,
            dim: cell.dim,
            seed: cell.seed,
        }),
    }
}

pub fn run_cell(cell: &HhlCell, hhl: &HHLConfig) -> HhlRow {
    let cfg = HHLConfig { seed: cell.seed, ..hhl.clone() };
    let result = cell_matrix(cell).and_then(|m| run_hhl(&m, &cfg));
    match result {
        Ok(report) => HhlRow { cell: cell.clone(), status: "ok".into(), error: None, report: Some(report) },
        Err(e) => {
            log::warn!("{} dim {} trial {}: {e}", cell.suite.as_str(), cell.dim, cell.trial);
            HhlRow { cell: cell.clone(), status: e.kind().into(), error: Some(e.to_string()), report: None }
        }
    }
}

/// Runs every cell on the current rayon pool. Rows come back in grid order.
pub fn run_hhl_suite(cfg: &ExperimentConfig) -> (Vec<HhlRow>, Vec<Timing>) {
    hhl_cells(cfg)
        .par_iter()
        .map(|cell| {
            let start = Instant::now();
            let row = run_cell(cell, &cfg.hhl);
            let id = format!(
                "{}/{}/dim{}/density{}/trial{}",
                cell.suite.as_str(),
                cell.kind.as_str(),
                cell.dim,
                cell.requested_density,
                cell.trial
            );
            (row, Timing { cell: id, millis: start.elapsed().as_secs_f64() * 1e3 })
        })
        .unzip()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HhlSummary {
    pub suite: Suite,
    pub kind: MatrixKind,
    pub dim: usize,
    pub requested_density: f64,
    pub rows: usize,
    pub errors: usize,
    pub median_success_probability: Option<f64>,
    pub median_fidelity: Option<f64>,
    pub median_width: Option<f64>,
    pub median_depth_basis: Option<f64>,
    pub median_depth_raw: Option<f64>,
}

/// Per-cell medians over trials, in grid order.
pub fn summarize_hhl(rows: &[HhlRow]) -> Vec<HhlSummary> {
    let mut out: Vec<HhlSummary> = Vec::new();
    for row in rows {
        let c = &row.cell;
        let same = |s: &HhlSummary| {
            s.suite == c.suite && s.kind == c.kind && s.dim == c.dim && s.requested_density == c.requested_density
        };
        if out.iter().any(same) {
            continue;
        }
        let group: Vec<&HhlRow> = rows
            .iter()
            .filter(|r| {
                r.cell.suite == c.suite
                    && r.cell.kind == c.kind
                    && r.cell.dim == c.dim
                    && r.cell.requested_density == c.requested_density
            })
            .collect();
        let ok: Vec<&HHLReport> = group.iter().filter_map(|r| r.report.as_ref()).collect();
        let med = |f: &dyn Fn(&HHLReport) -> f64| median(ok.iter().map(|r| f(r)).collect());
        out.push(HhlSummary {
            suite: c.suite,
            kind: c.kind,
            dim: c.dim,
            requested_density: c.requested_density,
            rows: group.len(),
            errors: group.len() - ok.len(),
            median_success_probability: med(&|r| r.success_probability),
            median_fidelity: med(&|r| r.fidelity),
            median_width: med(&|r| r.width as f64),
            median_depth_basis: med(&|r| r.depth_basis as f64),
            median_depth_raw: med(&|r| r.depth_raw as f64),
        });
    }
    out
}
