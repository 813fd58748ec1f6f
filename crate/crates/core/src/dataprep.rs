//! Dataset loading, stratified splitting, and the preprocessing pipeline
//! (standardize, project onto leading principal components, scale to [-1, 1]).

use std::io::Read;
use std::path::Path;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{derive_seed, rng_from_seed};
use crate::spectral::{eigendecompose, HermitianMatrix};

/// How to read a CSV file: which column holds the label and which label
/// strings are allowed, in class-index order. An empty class list accepts
/// any label and numbers classes by first appearance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Schema {
    pub name: String,
    pub label_column: String,
    pub classes: Vec<String>,
    pub n_features: Option<usize>,
}

impl Schema {
    pub fn iris() -> Self {
        Schema {
            name: "iris".into(),
            label_column: "label".into(),
            classes: vec!["setosa".into(), "versicolor".into(), "virginica".into()],
            n_features: Some(4),
        }
    }

    /// Benign is class 0, the positive class of the binary task.
    pub fn breast_cancer() -> Self {
        Schema {
            name: "breast_cancer".into(),
            label_column: "label".into(),
            classes: vec!["benign".into(), "malignant".into()],
            n_features: Some(30),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub name: String,
    pub features: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
    pub feature_names: Vec<String>,
    pub class_names: Vec<String>,
    /// Rows skipped at load time because of missing values.
    pub rejected_rows: usize,
}

fn is_missing(field: &str) -> bool {
    let f = field.trim();
    f.is_empty() || f == "?" || f.eq_ignore_ascii_case("na") || f.eq_ignore_ascii_case("nan")
}

fn format_err(line: usize, message: impl Into<String>) -> Error {
    Error::Format { line, message: message.into() }
}

pub fn load_csv(path: impl AsRef<Path>, schema: &Schema) -> Result<Dataset> {
    let path = path.as_ref();
    let file = std::fs::File::open(path)
        .map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })?;
    read_csv(file, schema)
}

pub fn read_csv<R: Read>(reader: R, schema: &Schema) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).flexible(true).from_reader(reader);
    let header = rdr.headers().map_err(|e| format_err(1, e.to_string()))?.clone();
    if header.is_empty() || header.iter().all(|h| h.trim().is_empty()) {
        return Err(format_err(1, "empty file"));
    }
    let label_idx = header
        .iter()
        .position(|h| h.trim() == schema.label_column)
        .ok_or_else(|| format_err(1, format!("no label column {:?}", schema.label_column)))?;
    let feature_names: Vec<String> = header
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != label_idx)
        .map(|(_, h)| h.trim().to_string())
        .collect();
    if let Some(n) = schema.n_features {
        if feature_names.len() != n {
            return Err(format_err(1, format!("expected {n} features, header has {}", feature_names.len())));
        }
    }

    let mut classes = schema.classes.clone();
    let fixed_classes = !classes.is_empty();
    let mut features = Vec::new();
    let mut labels = Vec::new();
    let mut rejected = 0;
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            format_err(line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.len() != header.len() {
            return Err(format_err(line, format!("expected {} fields, found {}", header.len(), rec.len())));
        }
        if rec.iter().any(is_missing) {
            rejected += 1;
            continue;
        }
        let label = rec[label_idx].trim();
        let class = match classes.iter().position(|c| c == label) {
            Some(c) => c,
            None if fixed_classes => return Err(Error::Label { line, label: label.to_string() }),
            None => {
                classes.push(label.to_string());
                classes.len() - 1
            }
        };
        let row = rec
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != label_idx)
            .map(|(_, f)| {
                f.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| format_err(line, format!("cannot parse {f:?} as a number")))
            })
            .collect::<Result<Vec<f64>>>()?;
        features.push(row);
        labels.push(class);
    }
    if features.is_empty() {
        return Err(format_err(1, "no data rows"));
    }
    if rejected > 0 {
        log::warn!("{}: rejected {rejected} rows with missing values", schema.name);
    }
    if let Some(c) = (0..classes.len()).find(|c| !labels.contains(c)) {
        return Err(format_err(0, format!("class {:?} has no rows", classes[c])));
    }
    Ok(Dataset {
        name: schema.name.clone(),
        features,
        labels,
        feature_names,
        class_names: classes,
        rejected_rows: rejected,
    })
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n_classes()];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }

    pub fn subset(&self, rows: &[usize]) -> Dataset {
        Dataset {
            name: self.name.clone(),
            features: rows.iter().map(|&r| self.features[r].clone()).collect(),
            labels: rows.iter().map(|&r| self.labels[r]).collect(),
            feature_names: self.feature_names.clone(),
            class_names: self.class_names.clone(),
            rejected_rows: 0,
        }
    }

    /// `+1` for `positive`, `-1` otherwise.
    pub fn binary_labels(&self, positive: usize) -> Vec<f64> {
        self.labels.iter().map(|&l| if l == positive { 1.0 } else { -1.0 }).collect()
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let io = |e: csv::Error| Error::Io { path: path.display().to_string(), message: e.to_string() };
        let mut w = csv::Writer::from_path(path).map_err(io)?;
        let mut header = self.feature_names.clone();
        header.push("label".into());
        w.write_record(&header).map_err(io)?;
        for (row, &l) in self.features.iter().zip(&self.labels) {
            let mut rec: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            rec.push(self.class_names[l].clone());
            w.write_record(&rec).map_err(io)?;
        }
        w.flush().map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })
    }
}

/// Per-class training counts summing to `n_train`, proportional to class
/// sizes (largest remainder), with at least one row of every class on each side.
fn allocate(counts: &[usize], n_train: usize) -> Result<Vec<usize>> {
    let n: usize = counts.iter().sum();
    if n_train < counts.len() || n - n_train < counts.len() {
        return Err(Error::Stratify(format!(
            "{n_train} of {n} rows cannot cover {} classes on both sides",
            counts.len()
        )));
    }
    let quota: Vec<f64> = counts.iter().map(|&c| n_train as f64 * c as f64 / n as f64).collect();
    let mut alloc: Vec<usize> = quota.iter().map(|q| q.floor() as usize).collect();
    let mut order: Vec<usize> = (0..counts.len()).collect();
    order.sort_by(|&a, &b| (quota[b] - quota[b].floor()).total_cmp(&(quota[a] - quota[a].floor())));
    let short = n_train - alloc.iter().sum::<usize>();
    for &c in order.iter().take(short) {
        alloc[c] += 1;
    }
    for (a, &c) in alloc.iter_mut().zip(counts) {
        *a = (*a).clamp(1, c - 1);
    }
    let slack = |a: &[usize], c: usize| a[c] as f64 - quota[c];
    while alloc.iter().sum::<usize>() > n_train {
        let c = (0..counts.len())
            .filter(|&c| alloc[c] > 1)
            .max_by(|&a, &b| slack(&alloc, a).total_cmp(&slack(&alloc, b)))
            .unwrap();
        alloc[c] -= 1;
    }
    while alloc.iter().sum::<usize>() < n_train {
        let c = (0..counts.len())
            .filter(|&c| alloc[c] < counts[c] - 1)
            .min_by(|&a, &b| slack(&alloc, a).total_cmp(&slack(&alloc, b)))
            .unwrap();
        alloc[c] += 1;
    }
    Ok(alloc)
}

/// Stratified split with exactly `n_train` training rows. Both halves keep
/// the original row order.
pub fn split_counts(d: &Dataset, n_train: usize, seed: u64) -> Result<(Dataset, Dataset)> {
    let counts = d.class_counts();
    if let Some(c) = counts.iter().position(|&c| c < 2) {
        return Err(Error::Stratify(format!(
            "class {:?} has {} rows, need at least 2",
            d.class_names[c], counts[c]
        )));
    }
    let alloc = allocate(&counts, n_train)?;
    let mut in_train = vec![false; d.len()];
    for (c, &take) in alloc.iter().enumerate() {
        let mut rows: Vec<usize> = (0..d.len()).filter(|&r| d.labels[r] == c).collect();
        rows.shuffle(&mut rng_from_seed(derive_seed(seed, &[c as u64])));
        for &r in &rows[..take] {
            in_train[r] = true;
        }
    }
    let train: Vec<usize> = (0..d.len()).filter(|&r| in_train[r]).collect();
    let test: Vec<usize> = (0..d.len()).filter(|&r| !in_train[r]).collect();
    Ok((d.subset(&train), d.subset(&test)))
}

pub fn split(d: &Dataset, train_fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::Argument(format!("train fraction {train_fraction} not in (0, 1)")));
    }
    split_counts(d, (train_fraction * d.len() as f64).round() as usize, seed)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PreprocessOrder {
    #[default]
    StandardizeThenPca,
    PcaThenStandardize,
}

/// Fitted preprocessing. Immutable after [`fit_transform`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PreprocessPipeline {
    pub order: PreprocessOrder,
    pub n_input: usize,
    /// Input columns that survived the zero-variance filter.
    pub kept: Vec<usize>,
    pub means: Vec<f64>,
    /// Per kept feature (standardize first) or per component (PCA first).
    pub stds: Vec<f64>,
    /// `k` orthonormal vectors over the kept features.
    pub components: Vec<Vec<f64>>,
    pub explained_variance: Vec<f64>,
    pub explained_variance_ratio: Vec<f64>,
    pub mins: Vec<f64>,
    pub maxs: Vec<f64>,
}

fn column_stats(rows: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
    let m = rows.len() as f64;
    let n = rows[0].len();
    let means: Vec<f64> = (0..n).map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / m).collect();
    let stds = (0..n)
        .map(|j| (rows.iter().map(|r| (r[j] - means[j]).powi(2)).sum::<f64>() / m).sqrt())
        .collect();
    (means, stds)
}

/// Leading `k` eigenpairs of the covariance of already-centred rows, with
/// each vector's largest-magnitude entry made positive.
fn principal_components(centred: &[Vec<f64>], k: usize) -> Result<(Vec<Vec<f64>>, Vec<f64>, Vec<f64>)> {
    let m = centred.len() as f64;
    let n = centred[0].len();
    let cov: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| centred.iter().map(|r| r[i] * r[j]).sum::<f64>() / m).collect())
        .collect();
    let d = eigendecompose(&HermitianMatrix::from_real_rows(&cov)?);
    let total: f64 = d.eigenvalues.iter().sum();
    let mut comps = Vec::with_capacity(k);
    let mut var = Vec::with_capacity(k);
    for idx in (0..n).rev().take(k) {
        let mut v: Vec<f64> = d.eigenvector(idx).iter().map(|c| c.re).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let lead = v.iter().copied().fold(0.0f64, |a, x| if x.abs() > a.abs() { x } else { a });
        let s = lead.signum() / norm;
        v.iter_mut().for_each(|x| *x *= s);
        comps.push(v);
        var.push(d.eigenvalues[idx].max(0.0));
    }
    let ratio = var.iter().map(|v| if total > 0.0 { v / total } else { 0.0 }).collect();
    Ok((comps, var, ratio))
}

fn project(rows: &[Vec<f64>], comps: &[Vec<f64>]) -> Vec<Vec<f64>> {
    rows.iter()
        .map(|r| comps.iter().map(|c| c.iter().zip(r).map(|(a, b)| a * b).sum()).collect())
        .collect()
}

fn scale_unit(v: f64, lo: f64, hi: f64) -> f64 {
    if hi - lo <= f64::EPSILON * hi.abs().max(lo.abs()).max(1.0) {
        0.0
    } else {
        2.0 * (v - lo) / (hi - lo) - 1.0
    }
}

/// Fit on `train` and return the pipeline with the transformed training rows.
pub fn fit_transform(
    train: &[Vec<f64>],
    k: usize,
    order: PreprocessOrder,
) -> Result<(PreprocessPipeline, Vec<Vec<f64>>)> {
    if train.len() < 2 {
        return Err(Error::Argument("need at least two training rows".into()));
    }
    let n_input = train[0].len();
    if train.iter().any(|r| r.len() != n_input) {
        return Err(Error::Dimension("ragged feature rows".into()));
    }
    let (_, raw_std) = column_stats(train);
    let kept: Vec<usize> = (0..n_input).filter(|&j| raw_std[j] > 0.0).collect();
    for j in (0..n_input).filter(|j| !kept.contains(j)) {
        log::warn!("dropping zero-variance feature {j}");
    }
    if k == 0 || k > kept.len() {
        return Err(Error::Dimension(format!("cannot keep {k} components of {} features", kept.len())));
    }
    let rows: Vec<Vec<f64>> = train.iter().map(|r| kept.iter().map(|&j| r[j]).collect()).collect();
    let (means, feat_std) = column_stats(&rows);
    let centred: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| r.iter().zip(&means).map(|(v, m)| v - m).collect())
        .collect();
    let mut pipe = PreprocessPipeline {
        order,
        n_input,
        kept,
        means,
        stds: Vec::new(),
        components: Vec::new(),
        explained_variance: Vec::new(),
        explained_variance_ratio: Vec::new(),
        mins: Vec::new(),
        maxs: Vec::new(),
    };
    let basis = match order {
        PreprocessOrder::StandardizeThenPca => {
            pipe.stds = feat_std;
            let z: Vec<Vec<f64>> = centred
                .iter()
                .map(|r| r.iter().zip(&pipe.stds).map(|(v, s)| v / s).collect())
                .collect();
            z
        }
        PreprocessOrder::PcaThenStandardize => centred,
    };
    let (comps, var, ratio) = principal_components(&basis, k)?;
    pipe.components = comps;
    pipe.explained_variance = var;
    pipe.explained_variance_ratio = ratio;
    let mut scores = project(&basis, &pipe.components);
    if order == PreprocessOrder::PcaThenStandardize {
        let (_, s) = column_stats(&scores);
        pipe.stds = s.iter().map(|&v| if v > 0.0 { v } else { 1.0 }).collect();
        for r in &mut scores {
            r.iter_mut().zip(&pipe.stds).for_each(|(v, s)| *v /= s);
        }
    }
    pipe.mins = (0..k).map(|j| scores.iter().map(|r| r[j]).fold(f64::INFINITY, f64::min)).collect();
    pipe.maxs = (0..k).map(|j| scores.iter().map(|r| r[j]).fold(f64::NEG_INFINITY, f64::max)).collect();
    let out = scores
        .iter()
        .map(|r| (0..k).map(|j| scale_unit(r[j], pipe.mins[j], pipe.maxs[j])).collect())
        .collect();
    Ok((pipe, out))
}

impl PreprocessPipeline {
    pub fn k(&self) -> usize {
        self.components.len()
    }

    fn check(&self, rows: &[Vec<f64>]) -> Result<()> {
        match rows.iter().find(|r| r.len() != self.n_input) {
            Some(r) => Err(Error::Dimension(format!(
                "pipeline fitted on {} features, got {}",
                self.n_input,
                r.len()
            ))),
            None => Ok(()),
        }
    }

    /// Rows in the space PCA was fitted in: centred, and divided by the
    /// feature standard deviations when standardizing first.
    pub fn pca_input(&self, rows: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        self.check(rows)?;
        let standardize = self.order == PreprocessOrder::StandardizeThenPca;
        Ok(rows
            .iter()
            .map(|r| {
                self.kept
                    .iter()
                    .enumerate()
                    .map(|(i, &j)| {
                        let c = r[j] - self.means[i];
                        if standardize {
                            c / self.stds[i]
                        } else {
                            c
                        }
                    })
                    .collect()
            })
            .collect())
    }

    /// Principal-component scores before any output scaling.
    pub fn scores(&self, rows: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        Ok(project(&self.pca_input(rows)?, &self.components))
    }

    /// Map scores back into the PCA input space.
    pub fn back_project(&self, scores: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let n = self.kept.len();
        scores
            .iter()
            .map(|s| {
                (0..n)
                    .map(|i| s.iter().zip(&self.components).map(|(a, c)| a * c[i]).sum())
                    .collect()
            })
            .collect()
    }

    /// Apply the fitted pipeline; outputs are clamped to [-1, 1].
    pub fn transform(&self, rows: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        let mut scores = self.scores(rows)?;
        if self.order == PreprocessOrder::PcaThenStandardize {
            for r in &mut scores {
                r.iter_mut().zip(&self.stds).for_each(|(v, s)| *v /= s);
            }
        }
        Ok(scores
            .iter()
            .map(|r| {
                (0..self.k())
                    .map(|j| scale_unit(r[j], self.mins[j], self.maxs[j]).clamp(-1.0, 1.0))
                    .collect()
            })
            .collect())
    }

    pub fn transform_dataset(&self, d: &Dataset) -> Result<Dataset> {
        Ok(Dataset {
            name: d.name.clone(),
            features: self.transform(&d.features)?,
            labels: d.labels.clone(),
            feature_names: (1..=self.k()).map(|i| format!("pc{i}")).collect(),
            class_names: d.class_names.clone(),
            rejected_rows: d.rejected_rows,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng as _;

    fn data_dir() -> std::path::PathBuf {
        Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
    }

    fn iris() -> Dataset {
        load_csv(data_dir().join("iris.csv"), &Schema::iris()).unwrap()
    }

    fn toy(labels: &[usize]) -> Dataset {
        Dataset {
            name: "toy".into(),
            features: labels.iter().enumerate().map(|(i, _)| vec![i as f64]).collect(),
            labels: labels.to_vec(),
            feature_names: vec!["x".into()],
            class_names: vec!["a".into(), "b".into(), "c".into()][..=*labels.iter().max().unwrap()].to_vec(),
            rejected_rows: 0,
        }
    }

    fn random_rows(m: usize, n: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = rng_from_seed(seed);
        let scales: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..50.0)).collect();
        (0..m)
            .map(|_| scales.iter().map(|s| s * rng.random_range(-1.0..1.0) + 3.0).collect())
            .collect()
    }

    #[test]
    fn bundled_iris() {
        let d = iris();
        assert_eq!((d.len(), d.n_features(), d.n_classes()), (150, 4, 3));
        assert_eq!(d.class_counts(), vec![50, 50, 50]);
        assert_eq!(d.rejected_rows, 0);
        assert_eq!(d.features[0], vec![5.1, 3.5, 1.4, 0.2]);
    }

    #[test]
    fn bundled_breast_cancer() {
        let d = load_csv(data_dir().join("breast_cancer.csv"), &Schema::breast_cancer()).unwrap();
        assert_eq!((d.len(), d.n_features(), d.n_classes()), (569, 30, 2));
        assert_eq!(d.class_counts(), vec![357, 212]);
    }

    #[test]
    fn load_errors() {
        let s = Schema { name: "t".into(), label_column: "label".into(), classes: vec![], n_features: None };
        assert!(matches!(read_csv("".as_bytes(), &s), Err(Error::Format { .. })));
        assert!(matches!(read_csv("a,label\n".as_bytes(), &s), Err(Error::Format { .. })));
        assert!(matches!(read_csv("a,b\n1,2\n".as_bytes(), &s), Err(Error::Format { line: 1, .. })));
        match read_csv("a,label\n1,x\n2,y\nfoo,x\n".as_bytes(), &s) {
            Err(Error::Format { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
        let fixed = Schema { classes: vec!["x".into()], ..s.clone() };
        match read_csv("a,label\n1,x\n2,z\n".as_bytes(), &fixed) {
            Err(Error::Label { line, label }) => assert_eq!((line, label.as_str()), (3, "z")),
            other => panic!("{other:?}"),
        }
        let io = load_csv("/nonexistent/file.csv", &s);
        assert!(matches!(io, Err(Error::Io { .. })));
    }

    #[test]
    fn missing_rows_rejected_with_count() {
        let s = Schema { name: "t".into(), label_column: "label".into(), classes: vec![], n_features: Some(2) };
        let d = read_csv("a,b,label\n1,2,x\n,3,y\n4,NA,x\n5,6,y\n".as_bytes(), &s).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.rejected_rows, 2);
        assert_eq!(d.labels, vec![0, 1]);
        assert_eq!(d.class_names, vec!["x", "y"]);
    }

    #[test]
    fn csv_round_trip() {
        let d = iris();
        let dir = std::env::temp_dir().join(format!("qlin-dataprep-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let p = dir.join("iris.csv");
        d.write_csv(&p).unwrap();
        let back = load_csv(&p, &Schema::iris()).unwrap();
        assert_eq!(back, d);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn iris_split_counts() {
        for seed in 0..5 {
            let (tr, te) = split(&iris(), 0.8, seed).unwrap();
            assert_eq!((tr.len(), te.len()), (120, 30));
            assert_eq!(tr.class_counts(), vec![40, 40, 40]);
            assert_eq!(te.class_counts(), vec![10, 10, 10]);
        }
    }

    #[test]
    fn split_is_an_exact_partition() {
        let mut d = iris();
        // tag rows so they can be traced through the split
        for (i, r) in d.features.iter_mut().enumerate() {
            r.push(i as f64);
        }
        let (tr, te) = split(&d, 0.8, 3).unwrap();
        let mut ids: Vec<usize> = tr.features.iter().chain(&te.features).map(|r| r[4] as usize).collect();
        ids.sort();
        assert_eq!(ids, (0..150).collect::<Vec<_>>());
    }

    #[test]
    fn breast_cancer_69_500() {
        let d = load_csv(data_dir().join("breast_cancer.csv"), &Schema::breast_cancer()).unwrap();
        let (tr, te) = split_counts(&d, 69, 1).unwrap();
        assert_eq!((tr.len(), te.len()), (69, 500));
        assert_eq!(tr.class_counts(), vec![43, 26]);
    }

    #[test]
    fn small_balanced_split() {
        let (tr, te) = split(&toy(&[0, 0, 1, 1]), 0.5, 9).unwrap();
        assert_eq!((tr.len(), te.len()), (2, 2));
        assert_eq!(tr.class_counts(), vec![1, 1]);
    }

    #[test]
    fn split_determinism_and_errors() {
        let d = iris();
        assert_eq!(split(&d, 0.8, 42).unwrap(), split(&d, 0.8, 42).unwrap());
        assert_ne!(split(&d, 0.8, 42).unwrap().0, split(&d, 0.8, 43).unwrap().0);
        assert!(matches!(split(&toy(&[0, 0, 1]), 0.5, 1), Err(Error::Stratify(_))));
        assert!(matches!(split(&d, 1.0, 1), Err(Error::Argument(_))));
        assert!(matches!(split(&d, 0.0, 1), Err(Error::Argument(_))));
    }

    #[test]
    fn rank_one_data_single_component() {
        let rows: Vec<Vec<f64>> = (0..20).map(|i| vec![i as f64, 2.0 * i as f64 + 1.0]).collect();
        let (p, out) = fit_transform(&rows, 1, PreprocessOrder::StandardizeThenPca).unwrap();
        assert!(p.explained_variance_ratio[0] >= 0.999);
        assert_eq!(out.len(), 20);
    }

    #[test]
    fn transformed_train_spans_unit_interval() {
        let rows = random_rows(40, 6, 1);
        for order in [PreprocessOrder::StandardizeThenPca, PreprocessOrder::PcaThenStandardize] {
            let (_, out) = fit_transform(&rows, 2, order).unwrap();
            for j in 0..2 {
                let lo = out.iter().map(|r| r[j]).fold(f64::INFINITY, f64::min);
                let hi = out.iter().map(|r| r[j]).fold(f64::NEG_INFINITY, f64::max);
                assert_eq!((lo, hi), (-1.0, 1.0));
            }
        }
    }

    #[test]
    fn iris_pca_against_covariance_oracle() {
        let (tr, _) = split(&iris(), 0.8, 0).unwrap();
        let (p, _) = fit_transform(&tr.features, 2, PreprocessOrder::StandardizeThenPca).unwrap();
        let r = &p.explained_variance_ratio;
        assert!(r[0] > r[1] && r[1] > 0.0);
        for (i, a) in p.components.iter().enumerate() {
            for (j, b) in p.components.iter().enumerate() {
                let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                assert!((dot - if i == j { 1.0 } else { 0.0 }).abs() < 1e-9);
            }
            let lead = a.iter().copied().fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
            assert!(lead > 0.0);
        }
        // C·v = λ·v on the covariance of the standardized train features
        let z = p.pca_input(&tr.features).unwrap();
        let m = z.len() as f64;
        for (v, &lam) in p.components.iter().zip(&p.explained_variance) {
            for i in 0..4 {
                let cv: f64 = (0..4)
                    .map(|j| z.iter().map(|r| r[i] * r[j]).sum::<f64>() / m * v[j])
                    .sum();
                assert!((cv - lam * v[i]).abs() < 1e-9);
            }
        }
        // power iteration finds the same leading direction
        let mut u = vec![1.0, 0.5, 0.25, 0.125];
        for _ in 0..500 {
            let w: Vec<f64> = (0..4)
                .map(|i| (0..4).map(|j| z.iter().map(|r| r[i] * r[j]).sum::<f64>() / m * u[j]).sum())
                .collect();
            let n = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            u = w.iter().map(|x| x / n).collect();
        }
        let align: f64 = u.iter().zip(&p.components[0]).map(|(a, b)| a * b).sum();
        assert!((align.abs() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn zero_variance_feature_dropped() {
        let mut rows = random_rows(10, 3, 2);
        rows.iter_mut().for_each(|r| r[1] = 7.0);
        let (p, _) = fit_transform(&rows, 2, PreprocessOrder::StandardizeThenPca).unwrap();
        assert_eq!(p.kept, vec![0, 2]);
        assert!(matches!(
            fit_transform(&rows, 3, PreprocessOrder::StandardizeThenPca),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn fit_errors() {
        assert!(matches!(fit_transform(&[vec![1.0, 2.0]], 1, PreprocessOrder::default()), Err(Error::Argument(_))));
        let rows = random_rows(5, 2, 3);
        assert!(matches!(fit_transform(&rows, 3, PreprocessOrder::default()), Err(Error::Dimension(_))));
        let (p, _) = fit_transform(&rows, 2, PreprocessOrder::default()).unwrap();
        assert!(matches!(p.transform(&[vec![1.0]]), Err(Error::Dimension(_))));
    }

    #[test]
    fn test_rows_clamped() {
        let rows = random_rows(30, 4, 4);
        let (p, _) = fit_transform(&rows, 2, PreprocessOrder::default()).unwrap();
        let far: Vec<Vec<f64>> = vec![vec![1e4, -1e4, 1e4, -1e4], vec![-1e4, 1e4, -1e4, 1e4]];
        for r in p.transform(&far).unwrap() {
            assert!(r.iter().all(|v| (-1.0..=1.0).contains(v)));
        }
    }

    #[test]
    fn pipeline_applies_unchanged_to_test() {
        let (tr, te) = split(&iris(), 0.8, 5).unwrap();
        let (p, out) = fit_transform(&tr.features, 2, PreprocessOrder::default()).unwrap();
        assert_eq!(p.transform(&tr.features).unwrap(), out);
        let t = p.transform_dataset(&te).unwrap();
        assert_eq!(t.feature_names, vec!["pc1", "pc2"]);
        assert_eq!(t.labels, te.labels);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn prop_standardized_moments(seed in 0u64..10_000, m in 3usize..60, n in 1usize..8) {
            let rows = random_rows(m, n, seed);
            let (p, _) = fit_transform(&rows, 1, PreprocessOrder::StandardizeThenPca).unwrap();
            let z = p.pca_input(&rows).unwrap();
            let (mu, sd) = column_stats(&z);
            for j in 0..n {
                prop_assert!(mu[j].abs() <= 1e-9);
                prop_assert!((sd[j] - 1.0).abs() <= 1e-9);
            }
        }

        #[test]
        fn prop_full_rank_reconstruction(seed in 0u64..10_000, m in 3usize..40, n in 1usize..7) {
            let rows = random_rows(m, n, seed);
            for order in [PreprocessOrder::StandardizeThenPca, PreprocessOrder::PcaThenStandardize] {
                let (p, _) = fit_transform(&rows, n, order).unwrap();
                let z = p.pca_input(&rows).unwrap();
                let back = p.back_project(&p.scores(&rows).unwrap());
                for (a, b) in z.iter().zip(&back) {
                    for (x, y) in a.iter().zip(b) {
                        prop_assert!((x - y).abs() <= 1e-8);
                    }
                }
            }
        }

        #[test]
        fn prop_transform_deterministic(seed in 0u64..10_000) {
            let rows = random_rows(20, 5, seed);
            let (p, _) = fit_transform(&rows, 2, PreprocessOrder::default()).unwrap();
            let q = random_rows(7, 5, seed + 1);
            let a = p.transform(&q).unwrap();
            let b = p.transform(&q).unwrap();
            for (r, s) in a.iter().zip(&b) {
                for (x, y) in r.iter().zip(s) {
                    prop_assert_eq!(x.to_bits(), y.to_bits());
                }
            }
        }
    }
}
