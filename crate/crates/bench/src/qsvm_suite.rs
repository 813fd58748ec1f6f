//! QSVM suite: classical baselines, the exact-kernel limit, and the shots sweep.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use qlin_core::dataprep::{fit_transform, load_csv, split, split_counts, Dataset, Schema};
use qlin_core::qsvm::{
    cross_kernel, gram_exact, gram_sampled, ClassModel, FeatureMap, KernelMatrix, Provenance, Reduction, Solver,
};
use qlin_core::rng::{derive_seed, label_hash};

use crate::config::{DatasetName, ExperimentConfig};
use crate::error::{BenchError, Result};
use crate::metrics::{metrics, ConfusionMatrix, Metrics};
use crate::report::{median, Timing};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// LS-SVM on the linear kernel of the preprocessed features.
    ClassicalLinear,
    /// LS-SVM on the exact second-order kernel, bordered solve.
    QsvmExact,
    /// The same exact Gram matrix solved classically through Cholesky.
    ClassicalKernel,
    /// LS-SVM on a shot-sampled second-order kernel.
    QsvmSampled,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ClassicalLinear => "classical-linear",
            Method::QsvmExact => "qsvm-exact",
            Method::ClassicalKernel => "classical-kernel",
            Method::QsvmSampled => "qsvm-sampled",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvalSet {
    /// Everything not used for training.
    Test,
    /// Stratified 198-row subset of the Breast Cancer test split.
    Eval198,
}

impl EvalSet {
    pub fn as_str(self) -> &'static str {
        match self {
            EvalSet::Test => "test",
            EvalSet::Eval198 => "eval198",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QsvmRow {
    pub dataset: DatasetName,
    pub eval_set: EvalSet,
    pub seed_index: usize,
    pub split_seed: u64,
    pub method: Method,
    pub shots: Option<u64>,
    pub kernel_seed: Option<u64>,
    pub gamma_inv: f64,
    pub reduction: Reduction,
    pub n_train: usize,
    pub n_eval: usize,
    pub status: String,
    pub error: Option<String>,
    pub metrics: Option<Metrics>,
    pub confusion: Option<ConfusionMatrix>,
    /// Prediction disagreements with `qsvm-exact` (classical-kernel rows only).
    pub disagreements: Option<usize>,
}

pub const QSVM_CSV_HEADER: [&str; 18] = [
    "dataset",
    "eval_set",
    "seed_index",
    "split_seed",
    "method",
    "shots",
    "kernel_seed",
    "gamma_inv",
    "reduction",
    "n_train",
    "n_eval",
    "status",
    "accuracy",
    "sensitivity",
    "specificity",
    "f1",
    "disagreements",
    "confusion",
];

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn reduction_str(r: Reduction) -> &'static str {
    match r {
        Reduction::OneVsRest => "one-vs-rest",
        Reduction::AllPairs => "all-pairs",
    }
}

impl QsvmRow {
    pub fn csv_record(&self) -> Vec<String> {
        let m = self.metrics.as_ref();
        vec![
            self.dataset.as_str().into(),
            self.eval_set.as_str().into(),
            self.seed_index.to_string(),
            self.split_seed.to_string(),
            self.method.as_str().into(),
            opt(self.shots),
            opt(self.kernel_seed),
            self.gamma_inv.to_string(),
            reduction_str(self.reduction).into(),
            self.n_train.to_string(),
            self.n_eval.to_string(),
            self.status.clone(),
            opt(m.map(|m| m.accuracy)),
            opt(m.and_then(|m| m.sensitivity)),
            opt(m.and_then(|m| m.specificity)),
            opt(m.and_then(|m| m.f1)),
            opt(self.disagreements),
            self.confusion.as_ref().map(ConfusionMatrix::to_compact).unwrap_or_default(),
        ]
    }

    pub fn accuracy(&self) -> Option<f64> {
        self.metrics.map(|m| m.accuracy)
    }
}

/// Training and evaluation features after the train-fitted pipeline.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub dataset: DatasetName,
    pub seed_index: usize,
    pub split_seed: u64,
    pub n_classes: usize,
    pub train_x: Vec<Vec<f64>>,
    pub train_y: Vec<usize>,
    pub evals: Vec<(EvalSet, Vec<Vec<f64>>, Vec<usize>)>,
}

pub fn load_dataset(cfg: &ExperimentConfig, name: DatasetName) -> Result<Dataset> {
    let schema = match name {
        DatasetName::Bcancer => Schema::breast_cancer(),
        DatasetName::Iris => Schema::iris(),
    };
    let path = cfg.data_dir.join(name.file_name());
    load_csv(&path, &schema).map_err(|e| match e {
        qlin_core::Error::Io { message, .. } => BenchError::Io { path, message },
        other => other.into(),
    })
}

pub fn split_seed(cfg: &ExperimentConfig, name: DatasetName, seed_index: usize) -> u64 {
    derive_seed(cfg.master_seed, &[label_hash("split"), label_hash(name.as_str()), seed_index as u64])
}

pub fn kernel_seed(cfg: &ExperimentConfig, name: DatasetName, seed_index: usize, shots: u64) -> u64 {
    derive_seed(
        cfg.master_seed,
        &[label_hash("qsvm"), label_hash(name.as_str()), 0, seed_index as u64, shots],
    )
}

/// Split, fit the pipeline on the training half and transform every evaluation set.
pub fn prepare(cfg: &ExperimentConfig, name: DatasetName, data: &Dataset, seed_index: usize) -> qlin_core::Result<Prepared> {
    let seed = split_seed(cfg, name, seed_index);
    let (train, test) = match name {
        DatasetName::Bcancer => split_counts(data, cfg.bcancer_train, seed)?,
        DatasetName::Iris => split(data, cfg.iris_train_fraction, seed)?,
    };
    let (pipe, train_x) = fit_transform(&train.features, 2, cfg.preprocess)?;
    let mut evals = vec![(EvalSet::Test, pipe.transform(&test.features)?, test.labels.clone())];
    if name == DatasetName::Bcancer && cfg.bcancer_eval_subset > 0 && cfg.bcancer_eval_subset < test.len() {
        let (sub, _) = split_counts(&test, cfg.bcancer_eval_subset, derive_seed(seed, &[label_hash("eval198")]))?;
        evals.push((EvalSet::Eval198, pipe.transform(&sub.features)?, sub.labels));
    }
    Ok(Prepared {
        dataset: name,
        seed_index,
        split_seed: seed,
        n_classes: data.n_classes(),
        train_x,
        train_y: train.labels,
        evals,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Job {
    Baseline,
    Exact,
    Sampled(u64),
}

impl Job {
    fn label(self) -> String {
        match self {
            Job::Baseline => "baseline".into(),
            Job::Exact => "exact".into(),
            Job::Sampled(s) => format!("shots{s}"),
        }
    }
}

struct RowTemplate<'a> {
    cfg: &'a ExperimentConfig,
    prep: &'a Prepared,
}

impl RowTemplate<'_> {
    fn row(&self, eval_set: EvalSet, n_eval: usize, method: Method, shots: Option<u64>, kseed: Option<u64>) -> QsvmRow {
        QsvmRow {
            dataset: self.prep.dataset,
            eval_set,
            seed_index: self.prep.seed_index,
            split_seed: self.prep.split_seed,
            method,
            shots,
            kernel_seed: kseed,
            gamma_inv: self.cfg.gamma_inv,
            reduction: self.cfg.reduction,
            n_train: self.prep.train_x.len(),
            n_eval,
            status: "ok".into(),
            error: None,
            metrics: None,
            confusion: None,
            disagreements: None,
        }
    }
}

fn fill(mut row: QsvmRow, predicted: qlin_core::Result<Vec<usize>>, actual: &[usize], n_classes: usize) -> QsvmRow {
    let outcome = predicted.map_err(BenchError::from).and_then(|p| {
        let cm = ConfusionMatrix::from_predictions(actual, &p, n_classes);
        metrics(&cm).map(|m| (m, cm))
    });
    match outcome {
        Ok((m, cm)) => {
            row.metrics = Some(m);
            row.confusion = Some(cm);
        }
        Err(e) => {
            row.status = match &e {
                BenchError::Core(c) => c.kind().into(),
                BenchError::Empty => "EmptyError".into(),
                _ => "Error".into(),
            };
            log::warn!(
                "{} seed {} {}: {e}",
                row.dataset.as_str(),
                row.seed_index,
                row.method.as_str()
            );
            row.error = Some(e.to_string());
        }
    }
    row
}

fn fit_predict(
    prep: &Prepared,
    k: &KernelMatrix,
    map: &FeatureMap,
    cfg: &ExperimentConfig,
    solver: Solver,
    eval_x: &[Vec<f64>],
    provenance: Provenance,
) -> qlin_core::Result<Vec<usize>> {
    let model =
        ClassModel::train(k, &prep.train_x, &prep.train_y, prep.n_classes, cfg.gamma_inv, map, cfg.reduction, solver)?;
    let cross = cross_kernel(eval_x, &prep.train_x, map, provenance)?;
    Ok(model.predict(&cross))
}

/// Rows for one job on one prepared split, one per evaluation set
/// (two per set for the exact job).
pub fn run_job(cfg: &ExperimentConfig, prep: &Prepared, job: Job) -> Vec<QsvmRow> {
    let t = RowTemplate { cfg, prep };
    let zz = FeatureMap::second_order(2, cfg.feature_reps);
    let mut rows = Vec::new();
    match job {
        Job::Baseline => {
            let map = FeatureMap::linear(2);
            let k = gram_exact(&prep.train_x, &map);
            for (set, x, y) in &prep.evals {
                let pred = k.clone().and_then(|k| fit_predict(prep, &k, &map, cfg, Solver::Bordered, x, Provenance::Exact));
                rows.push(fill(t.row(*set, x.len(), Method::ClassicalLinear, None, None), pred, y, prep.n_classes));
            }
        }
        Job::Exact => {
            let k = gram_exact(&prep.train_x, &zz);
            for (set, x, y) in &prep.evals {
                let quantum =
                    k.clone().and_then(|k| fit_predict(prep, &k, &zz, cfg, Solver::Bordered, x, Provenance::Exact));
                let classical =
                    k.clone().and_then(|k| fit_predict(prep, &k, &zz, cfg, Solver::Cholesky, x, Provenance::Exact));
                let disagreements = match (&quantum, &classical) {
                    (Ok(q), Ok(c)) => Some(q.iter().zip(c).filter(|(a, b)| a != b).count()),
                    _ => None,
                };
                rows.push(fill(t.row(*set, x.len(), Method::QsvmExact, None, None), quantum, y, prep.n_classes));
                let mut row = fill(t.row(*set, x.len(), Method::ClassicalKernel, None, None), classical, y, prep.n_classes);
                row.disagreements = disagreements;
                rows.push(row);
            }
        }
        Job::Sampled(shots) => {
            let seed = kernel_seed(cfg, prep.dataset, prep.seed_index, shots);
            let provenance = Provenance::Sampled { shots, seed };
            let k = gram_sampled(&prep.train_x, &zz, shots, seed);
            for (set, x, y) in &prep.evals {
                let pred = k.clone().and_then(|k| fit_predict(prep, &k, &zz, cfg, Solver::Bordered, x, provenance));
                rows.push(fill(
                    t.row(*set, x.len(), Method::QsvmSampled, Some(shots), Some(seed)),
                    pred,
                    y,
                    prep.n_classes,
                ));
            }
        }
    }
    rows
}

fn failed_split_row(cfg: &ExperimentConfig, name: DatasetName, seed_index: usize, job: Job, e: &qlin_core::Error) -> QsvmRow {
    let (method, shots, kseed) = match job {
        Job::Baseline => (Method::ClassicalLinear, None, None),
        Job::Exact => (Method::QsvmExact, None, None),
        Job::Sampled(s) => (Method::QsvmSampled, Some(s), Some(kernel_seed(cfg, name, seed_index, s))),
    };
    QsvmRow {
        dataset: name,
        eval_set: EvalSet::Test,
        seed_index,
        split_seed: split_seed(cfg, name, seed_index),
        method,
        shots,
        kernel_seed: kseed,
        gamma_inv: cfg.gamma_inv,
        reduction: cfg.reduction,
        n_train: 0,
        n_eval: 0,
        status: e.kind().into(),
        error: Some(e.to_string()),
        metrics: None,
        confusion: None,
        disagreements: None,
    }
}

/// Runs every (dataset, seed, job) cell on the current rayon pool. Fails only
/// if a dataset file cannot be loaded.
pub fn run_qsvm_suite(cfg: &ExperimentConfig) -> Result<(Vec<QsvmRow>, Vec<Timing>)> {
    let data: Vec<(DatasetName, Dataset)> = cfg
        .datasets
        .iter()
        .map(|&n| load_dataset(cfg, n).map(|d| (n, d)))
        .collect::<Result<_>>()?;
    let mut jobs = Vec::new();
    for (di, (name, _)) in data.iter().enumerate() {
        for seed_index in 0..cfg.seeds {
            jobs.push((di, *name, seed_index, Job::Baseline));
            jobs.push((di, *name, seed_index, Job::Exact));
            for &s in &cfg.shots_list {
                jobs.push((di, *name, seed_index, Job::Sampled(s)));
            }
        }
    }
    let out: Vec<(Vec<QsvmRow>, Timing)> = jobs
        .par_iter()
        .map(|&(di, name, seed_index, job)| {
            let start = Instant::now();
            let rows = match prepare(cfg, name, &data[di].1, seed_index) {
                Ok(prep) => run_job(cfg, &prep, job),
                Err(e) => vec![failed_split_row(cfg, name, seed_index, job, &e)],
            };
            let cell = format!("qsvm/{}/seed{}/{}", name.as_str(), seed_index, job.label());
            (rows, Timing { cell, millis: start.elapsed().as_secs_f64() * 1e3 })
        })
        .collect();
    let (nested, timings): (Vec<_>, Vec<_>) = out.into_iter().unzip();
    let mut rows: Vec<QsvmRow> = nested.into_iter().flatten().collect();
    rows.sort_by(|a, b| {
        (a.dataset, a.eval_set, a.method, a.shots, a.seed_index).cmp(&(b.dataset, b.eval_set, b.method, b.shots, b.seed_index))
    });
    Ok((rows, timings))
}

/// One line of the final comparison: means over seeds.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FinalRow {
    pub dataset: DatasetName,
    pub eval_set: EvalSet,
    pub method: Method,
    pub shots: Option<u64>,
    pub n_seeds: usize,
    pub mean_accuracy: Option<f64>,
    pub mean_sensitivity: Option<f64>,
    pub mean_specificity: Option<f64>,
    pub mean_f1: Option<f64>,
    /// Median over seeds of baseline accuracy minus this method's accuracy.
    pub median_gap_to_baseline: Option<f64>,
}

fn mean(v: &[f64]) -> Option<f64> {
    (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
}

/// Mean accuracy per shots level; only successful rows count.
pub fn accuracy_by_shots(rows: &[QsvmRow], dataset: DatasetName, eval_set: EvalSet) -> Vec<(u64, f64)> {
    let mut by: BTreeMap<u64, Vec<f64>> = BTreeMap::new();
    for r in rows.iter().filter(|r| r.dataset == dataset && r.eval_set == eval_set && r.method == Method::QsvmSampled) {
        if let (Some(s), Some(a)) = (r.shots, r.accuracy()) {
            by.entry(s).or_default().push(a);
        }
    }
    by.into_iter().filter_map(|(s, v)| mean(&v).map(|m| (s, m))).collect()
}

/// Shots with the highest mean accuracy; ties go to fewer shots.
pub fn best_shots(rows: &[QsvmRow], dataset: DatasetName, eval_set: EvalSet) -> Option<u64> {
    accuracy_by_shots(rows, dataset, eval_set)
        .into_iter()
        .fold(None, |best: Option<(u64, f64)>, (s, a)| match best {
            Some((_, ba)) if ba >= a => best,
            _ => Some((s, a)),
        })
        .map(|(s, _)| s)
}

fn final_row(rows: &[QsvmRow], dataset: DatasetName, eval_set: EvalSet, method: Method, shots: Option<u64>) -> FinalRow {
    let pick = |m: Method, s: Option<u64>| -> BTreeMap<usize, Metrics> {
        rows.iter()
            .filter(|r| r.dataset == dataset && r.eval_set == eval_set && r.method == m && r.shots == s)
            .filter_map(|r| r.metrics.map(|x| (r.seed_index, x)))
            .collect()
    };
    let own = pick(method, shots);
    let base = pick(Method::ClassicalLinear, None);
    let ms: Vec<&Metrics> = own.values().collect();
    let gaps: Vec<f64> = own
        .iter()
        .filter_map(|(i, m)| base.get(i).map(|b| b.accuracy - m.accuracy))
        .collect();
    let field = |f: fn(&Metrics) -> Option<f64>| mean(&ms.iter().filter_map(|m| f(m)).collect::<Vec<_>>());
    FinalRow {
        dataset,
        eval_set,
        method,
        shots,
        n_seeds: ms.len(),
        mean_accuracy: field(|m| Some(m.accuracy)),
        mean_sensitivity: field(|m| m.sensitivity),
        mean_specificity: field(|m| m.specificity),
        mean_f1: field(|m| m.f1),
        median_gap_to_baseline: median(gaps),
    }
}

/// Baseline, exact kernel and best sampled setting per dataset and evaluation set.
pub fn final_comparison(rows: &[QsvmRow]) -> Vec<FinalRow> {
    let mut keys: Vec<(DatasetName, EvalSet)> = rows.iter().map(|r| (r.dataset, r.eval_set)).collect();
    keys.sort();
    keys.dedup();
    let mut out = Vec::new();
    for (d, e) in keys {
        out.push(final_row(rows, d, e, Method::ClassicalLinear, None));
        out.push(final_row(rows, d, e, Method::QsvmExact, None));
        if let Some(s) = best_shots(rows, d, e) {
            out.push(final_row(rows, d, e, Method::QsvmSampled, Some(s)));
        }
    }
    out
}
