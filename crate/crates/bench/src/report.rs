//! Report assembly and emission: CSV tables, the JSON report, and gnuplot data files.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::{DatasetName, ExperimentConfig};
use crate::error::{BenchError, Result};
use crate::hhl_suite::{hhl_csv_header, HhlRow, HhlSummary, MatrixKind};
use crate::qsvm_suite::{accuracy_by_shots, EvalSet, FinalRow, QsvmRow, QSVM_CSV_HEADER};

pub fn median(mut v: Vec<f64>) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 { v[n / 2] } else { (v[n / 2 - 1] + v[n / 2]) / 2.0 })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Timing {
    pub cell: String,
    pub millis: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Versions {
    pub qlinbench: String,
    pub qlin_core: String,
}

impl Default for Versions {
    fn default() -> Self {
        Versions { qlinbench: env!("CARGO_PKG_VERSION").into(), qlin_core: qlin_core::VERSION.into() }
    }
}

/// Everything one run produced. Wall-clock timings are kept out of the JSON
/// report and written to their own file.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchReport {
    pub config: ExperimentConfig,
    pub versions: Versions,
    pub hhl_rows: Vec<HhlRow>,
    pub hhl_summary: Vec<HhlSummary>,
    pub qsvm_rows: Vec<QsvmRow>,
    pub qsvm_final: Vec<FinalRow>,
    #[serde(skip)]
    pub timings: Vec<Timing>,
}

impl BenchReport {
    pub fn new(config: ExperimentConfig) -> Self {
        BenchReport {
            config,
            versions: Versions::default(),
            hhl_rows: Vec::new(),
            hhl_summary: Vec::new(),
            qsvm_rows: Vec::new(),
            qsvm_final: Vec::new(),
            timings: Vec::new(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Plots,
}

pub const ALL_FORMATS: [Format; 3] = [Format::Csv, Format::Json, Format::Plots];

fn write(path: PathBuf, content: &[u8]) -> Result<PathBuf> {
    fs::write(&path, content).map_err(|e| BenchError::io(&path, e))?;
    Ok(path)
}

fn csv_bytes<I: IntoIterator<Item = Vec<String>>>(header: &[&str], records: I) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let wrap = |e: csv::Error| BenchError::Config(format!("csv: {e}"));
    w.write_record(header).map_err(wrap)?;
    for r in records {
        w.write_record(&r).map_err(wrap)?;
    }
    w.into_inner().map_err(|e| BenchError::Config(format!("csv: {e}")))
}

pub fn hhl_csv(rows: &[HhlRow]) -> Result<Vec<u8>> {
    csv_bytes(&hhl_csv_header(), rows.iter().map(HhlRow::csv_record))
}

pub fn qsvm_csv(rows: &[QsvmRow]) -> Result<Vec<u8>> {
    csv_bytes(&QSVM_CSV_HEADER, rows.iter().map(QsvmRow::csv_record))
}

fn num(v: Option<f64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_else(|| "NA".into())
}

/// Plot data files keyed by file name, in a fixed order.
pub fn plot_files(r: &BenchReport) -> Vec<(String, String)> {
    let mut files = Vec::new();
    for kind in [MatrixKind::Diagonal, MatrixKind::NonDiagonal] {
        let cells: Vec<&HhlSummary> = r.hhl_summary.iter().filter(|s| s.kind == kind).collect();
        if cells.is_empty() {
            continue;
        }
        let mut text = String::from("# dim median_success_probability median_fidelity\n");
        for s in cells {
            text += &format!("{} {} {}\n", s.dim, num(s.median_success_probability), num(s.median_fidelity));
        }
        files.push((format!("success_{}.dat", kind.as_str().replace('-', "_")), text));
    }
    let mut dims: Vec<usize> =
        r.hhl_summary.iter().filter(|s| s.kind == MatrixKind::Sparse).map(|s| s.dim).collect();
    dims.dedup();
    for d in dims {
        let mut text = String::from("# density median_fidelity\n");
        for s in r.hhl_summary.iter().filter(|s| s.kind == MatrixKind::Sparse && s.dim == d) {
            text += &format!("{} {}\n", s.requested_density, num(s.median_fidelity));
        }
        files.push((format!("fidelity_vs_density_dim{d}.dat"), text));
    }
    for name in [DatasetName::Bcancer, DatasetName::Iris] {
        let series = accuracy_by_shots(&r.qsvm_rows, name, EvalSet::Test);
        if series.is_empty() {
            continue;
        }
        let mut text = String::from("# shots mean_accuracy\n");
        for (s, a) in series {
            text += &format!("{s} {a}\n");
        }
        files.push((format!("accuracy_vs_shots_{}.dat", name.as_str()), text));
    }
    files
}

/// Writes the requested formats into `dir` and returns the paths written.
pub fn emit_reports(r: &BenchReport, dir: &Path, formats: &[Format]) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| BenchError::io(dir, e))?;
    let mut written = Vec::new();
    if formats.contains(&Format::Csv) {
        if !r.hhl_rows.is_empty() {
            written.push(write(dir.join("hhl.csv"), &hhl_csv(&r.hhl_rows)?)?);
        }
        if !r.qsvm_rows.is_empty() {
            written.push(write(dir.join("qsvm.csv"), &qsvm_csv(&r.qsvm_rows)?)?);
        }
    }
    if formats.contains(&Format::Json) {
        let json = serde_json::to_vec_pretty(r).map_err(|e| BenchError::Config(format!("json: {e}")))?;
        written.push(write(dir.join("report.json"), &json)?);
        let timings =
            serde_json::to_vec_pretty(&r.timings).map_err(|e| BenchError::Config(format!("json: {e}")))?;
        written.push(write(dir.join("timings.json"), &timings)?);
    }
    if formats.contains(&Format::Plots) {
        let plots = dir.join("plots");
        fs::create_dir_all(&plots).map_err(|e| BenchError::io(&plots, e))?;
        for (name, text) in plot_files(r) {
            written.push(write(plots.join(name), text.as_bytes())?);
        }
    }
    Ok(written)
}
