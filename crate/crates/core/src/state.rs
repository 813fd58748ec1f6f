//! Dense statevector simulation.
//!
//! Basis-index convention: qubit 0 is the least significant bit, so the
//! amplitude of `|q_{n-1} … q_1 q_0⟩` lives at index `Σ q_k 2^k`. A k-qubit
//! matrix applied to `targets` reads its own local index the same way:
//! local bit `j` is the state of `targets[j]`.

use std::collections::BTreeMap;

use rand::Rng as _;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{inner, Matrix, UnitaryMatrix, C64, ONE, ZERO};
use crate::rng::rng_from_seed;

/// Largest register the dense simulator accepts.
pub const MAX_QUBITS: usize = 24;

/// Normalized amplitudes over `n_qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<C64>,
}

impl StateVector {
    /// `|0…0⟩` on `n_qubits` qubits.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        check_qubits(n_qubits)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::Argument(format!("basis index {index} out of range for {n_qubits} qubits")));
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Ok(Self { n_qubits, amps })
    }

    /// Normalize a raw amplitude array of length `2^n`.
    pub fn normalize(v: &[C64]) -> Result<Self> {
        let len = v.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::Dimension(format!("length {len} is not a power of two ≥ 2")));
        }
        let n_qubits = len.trailing_zeros() as usize;
        check_qubits(n_qubits)?;
        if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Argument("non-finite amplitude".into()));
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(Self { n_qubits, amps: v.iter().map(|z| z / norm).collect() })
    }

    pub fn from_real(v: &[f64]) -> Result<Self> {
        let v: Vec<C64> = v.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::normalize(&v)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Apply `u` to the ordered `targets`, returning the new state.
    pub fn apply_unitary(&self, u: &UnitaryMatrix, targets: &[usize]) -> Result<Self> {
        check_targets(self.n_qubits, targets, &[])?;
        if u.dim() != 1usize << targets.len() {
            return Err(Error::Dimension(format!(
                "{}x{} matrix on {} targets",
                u.dim(),
                u.dim(),
                targets.len()
            )));
        }
        let mut amps = self.amps.clone();
        apply_matrix(&mut amps, u.matrix(), targets, &[]);
        Ok(Self { n_qubits: self.n_qubits, amps })
    }

    /// Born-rule probabilities `|c_i|² / Σ|c_j|²`.
    pub fn probabilities(&self) -> Vec<f64> {
        let total: f64 = self.amps.iter().map(|z| z.norm_sqr()).sum();
        self.amps.iter().map(|z| z.norm_sqr() / total).collect()
    }

    /// Draw `shots` computational-basis measurements.
    pub fn sample(&self, shots: u64, seed: u64) -> Result<Histogram> {
        sample_distribution(&self.probabilities(), self.n_qubits, shots, seed)
    }

    /// Pure-state fidelity `|⟨a|b⟩|²`.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        state_fidelity(self, other)
    }

    pub(crate) fn from_raw_unchecked(n_qubits: usize, amps: Vec<C64>) -> Self {
        debug_assert_eq!(amps.len(), 1 << n_qubits);
        Self { n_qubits, amps }
    }
}

fn check_qubits(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::Size(format!("{n} qubits (allowed 1..={MAX_QUBITS})")));
    }
    Ok(())
}

pub(crate) fn check_targets(n_qubits: usize, targets: &[usize], controls: &[usize]) -> Result<()> {
    let mut seen = 0u64;
    for &q in targets.iter().chain(controls) {
        if q >= n_qubits {
            return Err(Error::Target(format!("qubit {q} out of range for {n_qubits} qubits")));
        }
        if seen & (1 << q) != 0 {
            return Err(Error::Target(format!("qubit {q} used twice")));
        }
        seen |= 1 << q;
    }
    if targets.is_empty() {
        return Err(Error::Target("no target qubits".into()));
    }
    Ok(())
}

/// In-place application of a `2^k × 2^k` matrix on `targets`, restricted to
/// the subspace where every qubit in `controls` is 1.
pub(crate) fn apply_matrix(amps: &mut [C64], m: &Matrix, targets: &[usize], controls: &[usize]) {
    let k = targets.len();
    let local = 1usize << k;
    debug_assert_eq!(m.dim(), local);
    let target_mask: usize = targets.iter().map(|&t| 1usize << t).sum();
    let control_mask: usize = controls.iter().map(|&c| 1usize << c).sum();
    let offsets: Vec<usize> = (0..local)
        .map(|l| {
            targets
                .iter()
                .enumerate()
                .filter(|(j, _)| l >> j & 1 == 1)
                .map(|(_, &t)| 1usize << t)
                .sum()
        })
        .collect();
    let mut buf = vec![ZERO; local];
    for base in 0..amps.len() {
        if base & target_mask != 0 || base & control_mask != control_mask {
            continue;
        }
        for (b, &off) in buf.iter_mut().zip(&offsets) {
            *b = amps[base | off];
        }
        for (r, &off) in offsets.iter().enumerate() {
            amps[base | off] = m.row(r).iter().zip(&buf).map(|(a, b)| a * b).sum();
        }
    }
}

/// Apply a diagonal on `targets` (local index convention as in [`apply_matrix`]).
pub(crate) fn apply_diagonal(amps: &mut [C64], diag: &[C64], targets: &[usize], controls: &[usize]) {
    let control_mask: usize = controls.iter().map(|&c| 1usize << c).sum();
    for (i, a) in amps.iter_mut().enumerate() {
        if i & control_mask != control_mask {
            continue;
        }
        let local = targets
            .iter()
            .enumerate()
            .fold(0usize, |acc, (j, &t)| acc | ((i >> t & 1) << j));
        *a *= diag[local];
    }
}

/// Measurement counts keyed by basis index.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Histogram {
    n_qubits: usize,
    counts: BTreeMap<usize, u64>,
}

impl Histogram {
    pub fn count(&self, index: usize) -> u64 {
        self.counts.get(&index).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.counts.iter().map(|(&k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Bitstring key for `index`, most significant qubit first.
    pub fn key(&self, index: usize) -> String {
        format!("{:0width$b}", index, width = self.n_qubits)
    }
}

/// Serializes as `{"<bitstring>": count}` with qubit `n-1` leftmost.
impl Serialize for Histogram {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(self.counts.len()))?;
        for (&k, v) in &self.counts {
            map.serialize_entry(&self.key(k), v)?;
        }
        map.end()
    }
}

/// Inverse-CDF sampling of a discrete distribution over `2^n_qubits` outcomes.
pub(crate) fn sample_distribution(probs: &[f64], n_qubits: usize, shots: u64, seed: u64) -> Result<Histogram> {
    if shots == 0 {
        return Err(Error::Argument("shots must be ≥ 1".into()));
    }
    let mut cdf = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for &p in probs {
        acc += p;
        cdf.push(acc);
    }
    let total = acc;
    let mut rng = rng_from_seed(seed);
    let mut counts = BTreeMap::new();
    for _ in 0..shots {
        let u: f64 = rng.random::<f64>() * total;
        let mut idx = cdf.partition_point(|&c| c <= u);
        // guard against landing past the end through rounding, and skip zero-weight bins
        idx = idx.min(probs.len() - 1);
        while probs[idx] == 0.0 && idx > 0 {
            idx -= 1;
        }
        *counts.entry(idx).or_insert(0) += 1;
    }
    Ok(Histogram { n_qubits, counts })
}

/// Pure-state fidelity `|⟨a|b⟩|²`, clamped to `[0, 1]`.
pub fn state_fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension(format!("states of dimension {} and {}", a.dim(), b.dim())));
    }
    Ok(inner(&a.amps, &b.amps).norm_sqr().clamp(0.0, 1.0))
}
