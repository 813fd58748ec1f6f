//! Kernel least-squares SVM with a quantum feature-map kernel.
//!
//! Training solves the bordered system
//!
//! ```text
//! [ 0   1ᵀ          ] [b]   [0]
//! [ 1   K + γ⁻¹·I   ] [a] = [y]
//! ```
//!
//! and a query is labelled by `sign(Σ a_j k(x_j, x) + b)`, with `sign(0) = +1`.
//! The kernel is either the plain dot product or the squared overlap of
//! second-order (ZZ) feature-map states, computed exactly or estimated from a
//! finite number of compute-uncompute shots.

use std::f64::consts::PI;

use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::linalg::{inner, solve_real};
use crate::rng::{derive_seed, label_hash, rng_from_seed};
use crate::spectral::{eigendecompose, HermitianMatrix};
use crate::state::StateVector;

/// Regularisation `γ⁻¹` when none is configured.
pub const DEFAULT_GAMMA_INV: f64 = 1.0;
pub const DEFAULT_REPS: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapKind {
    Linear,
    SecondOrderExpansion,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureMap {
    pub kind: MapKind,
    pub n_features: usize,
    pub depth_reps: usize,
}

impl FeatureMap {
    pub fn linear(n_features: usize) -> Self {
        FeatureMap { kind: MapKind::Linear, n_features, depth_reps: 0 }
    }

    pub fn second_order(n_features: usize, reps: usize) -> Self {
        FeatureMap { kind: MapKind::SecondOrderExpansion, n_features, depth_reps: reps }
    }

    pub fn is_quantum(&self) -> bool {
        self.kind == MapKind::SecondOrderExpansion
    }

    fn check(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n_features {
            return Err(Error::Dimension(format!(
                "feature map expects {} features, got {}",
                self.n_features,
                x.len()
            )));
        }
        Ok(())
    }

    /// The encoding circuit `U_φ(x)` on `n_features` qubits.
    pub fn circuit(&self, x: &[f64]) -> Result<Circuit> {
        self.check(x)?;
        if !self.is_quantum() {
            return Err(Error::Argument("the linear map has no circuit".into()));
        }
        let n = self.n_features;
        let mut c = Circuit::new(n);
        for _ in 0..self.depth_reps {
            for q in 0..n {
                c.push(Gate::h(q))?;
            }
            for (q, &xq) in x.iter().enumerate() {
                c.push(Gate::phase(2.0 * xq, q))?;
            }
            for i in 0..n {
                for j in i + 1..n {
                    c.push(Gate::cnot(i, j))?;
                    c.push(Gate::phase(2.0 * (PI - x[i]) * (PI - x[j]), j))?;
                    c.push(Gate::cnot(i, j))?;
                }
            }
        }
        Ok(c)
    }

    /// Compute-uncompute circuit `U_φ(z)† U_φ(x)`; its all-zeros probability
    /// is the kernel value.
    pub fn overlap_circuit(&self, x: &[f64], z: &[f64]) -> Result<Circuit> {
        let mut c = self.circuit(x)?;
        c.extend(&self.circuit(z)?.inverse())?;
        Ok(c)
    }
}

pub fn feature_map_state(x: &[f64], map: &FeatureMap) -> Result<StateVector> {
    map.circuit(x)?.simulate(&StateVector::zero(map.n_features)?)
}

fn overlap(a: &StateVector, b: &StateVector) -> f64 {
    inner(a.amplitudes(), b.amplitudes()).norm_sqr()
}

pub fn kernel_exact(x: &[f64], z: &[f64], map: &FeatureMap) -> Result<f64> {
    map.check(x)?;
    map.check(z)?;
    match map.kind {
        MapKind::Linear => Ok(x.iter().zip(z).map(|(a, b)| a * b).sum()),
        MapKind::SecondOrderExpansion => {
            Ok(overlap(&feature_map_state(x, map)?, &feature_map_state(z, map)?))
        }
    }
}

fn binomial_estimate(p: f64, shots: u64, seed: u64) -> f64 {
    let p = p.clamp(0.0, 1.0);
    let draw = Binomial::new(shots, p).expect("p clamped to [0, 1]");
    draw.sample(&mut rng_from_seed(seed)) as f64 / shots as f64
}

fn check_shots(shots: u64) -> Result<()> {
    if shots == 0 {
        return Err(Error::Argument("shots must be at least 1".into()));
    }
    Ok(())
}

/// Shot estimate of the all-zeros probability of the compute-uncompute
/// circuit for `(x, z)`.
pub fn kernel_sampled(x: &[f64], z: &[f64], map: &FeatureMap, shots: u64, seed: u64) -> Result<f64> {
    check_shots(shots)?;
    let state = map
        .overlap_circuit(x, z)?
        .simulate(&StateVector::zero(map.n_features)?)?;
    Ok(binomial_estimate(state.amplitudes()[0].norm_sqr(), shots, seed))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Provenance {
    Exact,
    Sampled { shots: u64, seed: u64 },
}

/// Row-major `rows × cols` kernel values. Training Gram matrices are square.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<f64>,
    pub provenance: Provenance,
}

impl KernelMatrix {
    pub fn dim(&self) -> usize {
        self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// Square sub-kernel on the given rows and columns.
    pub fn submatrix(&self, idx: &[usize]) -> KernelMatrix {
        KernelMatrix {
            rows: idx.len(),
            cols: idx.len(),
            entries: idx.iter().flat_map(|&i| idx.iter().map(move |&j| self.get(i, j))).collect(),
            provenance: self.provenance,
        }
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn symmetry_error(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        (0..n)
            .flat_map(|i| (0..i).map(move |j| (i, j)))
            .map(|(i, j)| (self.get(i, j) - self.get(j, i)).abs())
            .fold(0.0, f64::max)
    }

    /// Smallest eigenvalue of a square kernel matrix.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        if !self.is_square() {
            return Err(Error::Dimension("kernel matrix is not square".into()));
        }
        let rows: Vec<Vec<f64>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let h = HermitianMatrix::from_real_rows(&rows)?;
        Ok(eigendecompose(&h).eigenvalues[0])
    }

    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let io = |e: csv::Error| Error::Io { path: "<kernel>".into(), message: e.to_string() };
        let mut out = csv::Writer::from_writer(w);
        for i in 0..self.rows {
            out.serialize(self.row(i)).map_err(io)?;
        }
        out.flush().map_err(|e| Error::Io { path: "<kernel>".into(), message: e.to_string() })
    }
}

/// Encoded states for a batch of inputs; `None` for the linear map.
fn encode(xs: &[Vec<f64>], map: &FeatureMap) -> Result<Option<Vec<StateVector>>> {
    for x in xs {
        map.check(x)?;
    }
    if !map.is_quantum() {
        return Ok(None);
    }
    xs.iter().map(|x| feature_map_state(x, map)).collect::<Result<Vec<_>>>().map(Some)
}

fn pair_value(xs: &[Vec<f64>], zs: &[Vec<f64>], sx: &Option<Vec<StateVector>>, sz: &Option<Vec<StateVector>>, i: usize, j: usize) -> f64 {
    match (sx, sz) {
        (Some(a), Some(b)) => overlap(&a[i], &b[j]),
        _ => xs[i].iter().zip(&zs[j]).map(|(p, q)| p * q).sum(),
    }
}

/// Exact training Gram matrix.
pub fn gram_exact(xs: &[Vec<f64>], map: &FeatureMap) -> Result<KernelMatrix> {
    let states = encode(xs, map)?;
    let n = xs.len();
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let v = pair_value(xs, xs, &states, &states, i, j);
            entries[i * n + j] = v;
            entries[j * n + i] = v;
        }
    }
    Ok(KernelMatrix { rows: n, cols: n, entries, provenance: Provenance::Exact })
}

/// Shot-estimated training Gram matrix. Each unordered pair is estimated
/// once with its own derived seed and mirrored.
pub fn gram_sampled(xs: &[Vec<f64>], map: &FeatureMap, shots: u64, seed: u64) -> Result<KernelMatrix> {
    check_shots(shots)?;
    if !map.is_quantum() {
        return Err(Error::Argument("sampling needs a quantum feature map".into()));
    }
    let states = encode(xs, map)?;
    let n = xs.len();
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let p = pair_value(xs, xs, &states, &states, i, j);
            let v = binomial_estimate(p, shots, derive_seed(seed, &[i as u64, j as u64]));
            entries[i * n + j] = v;
            entries[j * n + i] = v;
        }
    }
    Ok(KernelMatrix { rows: n, cols: n, entries, provenance: Provenance::Sampled { shots, seed } })
}

/// Kernel values between queries (rows) and training inputs (columns).
pub fn cross_kernel(
    queries: &[Vec<f64>],
    train: &[Vec<f64>],
    map: &FeatureMap,
    provenance: Provenance,
) -> Result<KernelMatrix> {
    if let Provenance::Sampled { shots, .. } = provenance {
        check_shots(shots)?;
        if !map.is_quantum() {
            return Err(Error::Argument("sampling needs a quantum feature map".into()));
        }
    }
    let sq = encode(queries, map)?;
    let st = encode(train, map)?;
    let (rows, cols) = (queries.len(), train.len());
    let tag = label_hash("cross");
    let mut entries = Vec::with_capacity(rows * cols);
    for q in 0..rows {
        for j in 0..cols {
            let p = pair_value(queries, train, &sq, &st, q, j);
            entries.push(match provenance {
                Provenance::Exact => p,
                Provenance::Sampled { shots, seed } => {
                    binomial_estimate(p, shots, derive_seed(seed, &[tag, q as u64, j as u64]))
                }
            });
        }
    }
    Ok(KernelMatrix { rows, cols, entries, provenance })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LSSVMModel {
    /// Regularisation `γ⁻¹`; zero is the unregularised limit.
    pub gamma_inv: f64,
    pub b: f64,
    pub a: Vec<f64>,
    pub train_x: Vec<Vec<f64>>,
    pub train_y: Vec<f64>,
    pub map: FeatureMap,
}

fn check_labels(y: &[f64]) -> Result<()> {
    if y.len() < 2 {
        return Err(Error::Argument("need at least two training points".into()));
    }
    if let Some(v) = y.iter().find(|&&v| v != 1.0 && v != -1.0) {
        return Err(Error::Argument(format!("label {v} is not ±1")));
    }
    Ok(())
}

fn check_gram(k: &KernelMatrix, m: usize) -> Result<()> {
    if !k.is_square() || k.rows != m {
        return Err(Error::Dimension(format!(
            "kernel is {}x{}, labels have length {m}",
            k.rows, k.cols
        )));
    }
    Ok(())
}

/// `(b, a)` from the bordered system by pivoted Gaussian elimination.
pub fn solve_bordered(k: &KernelMatrix, y: &[f64], gamma_inv: f64) -> Result<(f64, Vec<f64>)> {
    check_gram(k, y.len())?;
    let m = y.len();
    let n = m + 1;
    let mut sys = vec![0.0; n * n];
    for j in 1..n {
        sys[j] = 1.0;
        sys[j * n] = 1.0;
    }
    for i in 0..m {
        for j in 0..m {
            sys[(i + 1) * n + j + 1] = k.get(i, j);
        }
        sys[(i + 1) * n + i + 1] += gamma_inv;
    }
    let mut rhs = vec![0.0];
    rhs.extend_from_slice(y);
    let sol = solve_real(&sys, n, &rhs)?;
    Ok((sol[0], sol[1..].to_vec()))
}

/// `(b, a)` by the two-solve Cholesky route on `H = K + γ⁻¹·I`:
/// `Hη = y`, `Hν = 1`, `b = Σ η / Σ ν`, `a = η − b·ν`. Needs `H` positive definite.
pub fn solve_cholesky(k: &KernelMatrix, y: &[f64], gamma_inv: f64) -> Result<(f64, Vec<f64>)> {
    check_gram(k, y.len())?;
    let m = y.len();
    let h = nalgebra::DMatrix::from_fn(m, m, |i, j| k.get(i, j) + if i == j { gamma_inv } else { 0.0 });
    let chol = nalgebra::Cholesky::new(h)
        .ok_or_else(|| Error::Singular("K + γ⁻¹I is not positive definite".into()))?;
    let eta = chol.solve(&nalgebra::DVector::from_column_slice(y));
    let nu = chol.solve(&nalgebra::DVector::from_element(m, 1.0));
    let b = eta.sum() / nu.sum();
    let a = (eta - nu * b).iter().copied().collect();
    Ok((b, a))
}

/// Which route solves the training system.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Solver {
    #[default]
    Bordered,
    Cholesky,
}

pub fn train_lssvm(
    k: &KernelMatrix,
    train_x: &[Vec<f64>],
    y: &[f64],
    gamma_inv: f64,
    map: &FeatureMap,
) -> Result<LSSVMModel> {
    train_lssvm_with(k, train_x, y, gamma_inv, map, Solver::Bordered)
}

pub fn train_lssvm_with(
    k: &KernelMatrix,
    train_x: &[Vec<f64>],
    y: &[f64],
    gamma_inv: f64,
    map: &FeatureMap,
    solver: Solver,
) -> Result<LSSVMModel> {
    check_labels(y)?;
    if train_x.len() != y.len() {
        return Err(Error::Dimension("inputs and labels differ in length".into()));
    }
    let (b, a) = match solver {
        Solver::Bordered => solve_bordered(k, y, gamma_inv)?,
        Solver::Cholesky => solve_cholesky(k, y, gamma_inv)?,
    };
    Ok(LSSVMModel {
        gamma_inv,
        b,
        a,
        train_x: train_x.to_vec(),
        train_y: y.to_vec(),
        map: map.clone(),
    })
}

pub fn sign(v: f64) -> f64 {
    if v >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

impl LSSVMModel {
    /// Decision value from precomputed kernel values `k(x_j, x)`.
    pub fn decision_from_kernel(&self, k_row: &[f64]) -> f64 {
        self.a.iter().zip(k_row).map(|(a, k)| a * k).sum::<f64>() + self.b
    }

    pub fn decision_value(&self, x: &[f64]) -> Result<f64> {
        let row = self
            .train_x
            .iter()
            .map(|xj| kernel_exact(xj, x, &self.map))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.decision_from_kernel(&row))
    }

    /// Bordered-system residual `‖A·[b; a] − [0; y]‖` against `k`.
    pub fn residual(&self, k: &KernelMatrix) -> f64 {
        let m = self.a.len();
        let mut r2 = self.a.iter().sum::<f64>().powi(2);
        for i in 0..m {
            let row: f64 = (0..m).map(|j| k.get(i, j) * self.a[j]).sum();
            let ri = self.b + row + self.gamma_inv * self.a[i] - self.train_y[i];
            r2 += ri * ri;
        }
        r2.sqrt()
    }
}

pub fn classify(model: &LSSVMModel, x: &[f64]) -> Result<f64> {
    model.decision_value(x).map(sign)
}

/// One binary model per class, each trained as "class c" (+1) against the rest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OneVsRest {
    pub models: Vec<LSSVMModel>,
}

/// Index of the largest value; ties go to the lowest index.
pub fn argmax(values: &[f64]) -> usize {
    values
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, &v)| if v > bv { (i, v) } else { (bi, bv) })
        .0
}

pub fn one_vs_rest_labels(labels: &[usize], class: usize) -> Vec<f64> {
    labels.iter().map(|&l| if l == class { 1.0 } else { -1.0 }).collect()
}

impl OneVsRest {
    pub fn train(
        k: &KernelMatrix,
        train_x: &[Vec<f64>],
        labels: &[usize],
        n_classes: usize,
        gamma_inv: f64,
        map: &FeatureMap,
    ) -> Result<Self> {
        Self::train_with(k, train_x, labels, n_classes, gamma_inv, map, Solver::Bordered)
    }

    pub fn train_with(
        k: &KernelMatrix,
        train_x: &[Vec<f64>],
        labels: &[usize],
        n_classes: usize,
        gamma_inv: f64,
        map: &FeatureMap,
        solver: Solver,
    ) -> Result<Self> {
        if n_classes < 2 {
            return Err(Error::Argument("need at least two classes".into()));
        }
        let models = (0..n_classes)
            .map(|c| train_lssvm_with(k, train_x, &one_vs_rest_labels(labels, c), gamma_inv, map, solver))
            .collect::<Result<Vec<_>>>()?;
        Ok(OneVsRest { models })
    }

    pub fn decisions_from_kernel(&self, k_row: &[f64]) -> Vec<f64> {
        self.models.iter().map(|m| m.decision_from_kernel(k_row)).collect()
    }

    pub fn classify_from_kernel(&self, k_row: &[f64]) -> usize {
        argmax(&self.decisions_from_kernel(k_row))
    }
}

/// Binary model for one pair of classes, trained on their rows only.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairModel {
    pub positive: usize,
    pub negative: usize,
    pub rows: Vec<usize>,
    pub model: LSSVMModel,
}

/// One model per class pair; prediction by majority vote, ties to the
/// lowest class index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AllPairs {
    pub n_classes: usize,
    pub pairs: Vec<PairModel>,
}

impl AllPairs {
    pub fn train_with(
        k: &KernelMatrix,
        train_x: &[Vec<f64>],
        labels: &[usize],
        n_classes: usize,
        gamma_inv: f64,
        map: &FeatureMap,
        solver: Solver,
    ) -> Result<Self> {
        if n_classes < 2 {
            return Err(Error::Argument("need at least two classes".into()));
        }
        let mut pairs = Vec::new();
        for positive in 0..n_classes {
            for negative in positive + 1..n_classes {
                let rows: Vec<usize> =
                    (0..labels.len()).filter(|&i| labels[i] == positive || labels[i] == negative).collect();
                let x: Vec<Vec<f64>> = rows.iter().map(|&i| train_x[i].clone()).collect();
                let y: Vec<f64> = rows.iter().map(|&i| if labels[i] == positive { 1.0 } else { -1.0 }).collect();
                let model = train_lssvm_with(&k.submatrix(&rows), &x, &y, gamma_inv, map, solver)?;
                pairs.push(PairModel { positive, negative, rows, model });
            }
        }
        Ok(AllPairs { n_classes, pairs })
    }

    pub fn votes_from_kernel(&self, k_row: &[f64]) -> Vec<f64> {
        let mut votes = vec![0.0; self.n_classes];
        for p in &self.pairs {
            let row: Vec<f64> = p.rows.iter().map(|&i| k_row[i]).collect();
            if p.model.decision_from_kernel(&row) >= 0.0 {
                votes[p.positive] += 1.0;
            } else {
                votes[p.negative] += 1.0;
            }
        }
        votes
    }

    pub fn classify_from_kernel(&self, k_row: &[f64]) -> usize {
        argmax(&self.votes_from_kernel(k_row))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reduction {
    OneVsRest,
    #[default]
    AllPairs,
}

/// A trained classifier over class indices. With two classes it is a single
/// binary model where class 0 is the `+1` side.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum ClassModel {
    Binary(LSSVMModel),
    OneVsRest(OneVsRest),
    AllPairs(AllPairs),
}

impl ClassModel {
    #[allow(clippy::too_many_arguments)]
    pub fn train(
        k: &KernelMatrix,
        train_x: &[Vec<f64>],
        labels: &[usize],
        n_classes: usize,
        gamma_inv: f64,
        map: &FeatureMap,
        reduction: Reduction,
        solver: Solver,
    ) -> Result<Self> {
        if n_classes == 2 {
            let y = one_vs_rest_labels(labels, 0);
            return train_lssvm_with(k, train_x, &y, gamma_inv, map, solver).map(ClassModel::Binary);
        }
        Ok(match reduction {
            Reduction::OneVsRest => {
                ClassModel::OneVsRest(OneVsRest::train_with(k, train_x, labels, n_classes, gamma_inv, map, solver)?)
            }
            Reduction::AllPairs => {
                ClassModel::AllPairs(AllPairs::train_with(k, train_x, labels, n_classes, gamma_inv, map, solver)?)
            }
        })
    }

    pub fn predict_from_kernel(&self, k_row: &[f64]) -> usize {
        match self {
            ClassModel::Binary(m) => {
                if sign(m.decision_from_kernel(k_row)) > 0.0 {
                    0
                } else {
                    1
                }
            }
            ClassModel::OneVsRest(m) => m.classify_from_kernel(k_row),
            ClassModel::AllPairs(m) => m.classify_from_kernel(k_row),
        }
    }

    /// Predictions for every row of a query-by-train kernel.
    pub fn predict(&self, cross: &KernelMatrix) -> Vec<usize> {
        (0..cross.rows).map(|q| self.predict_from_kernel(cross.row(q))).collect()
    }
}

pub fn multiclass_classify(models: &OneVsRest, x: &[f64]) -> Result<usize> {
    let values = models
        .models
        .iter()
        .map(|m| m.decision_value(x))
        .collect::<Result<Vec<_>>>()?;
    Ok(argmax(&values))
}
