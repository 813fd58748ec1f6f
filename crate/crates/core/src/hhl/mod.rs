//! The HHL linear-system solver on the statevector simulator.
//!
//! Register layout, least significant first: `log2(dim)` memory qubits, then
//! `n_clock` clock qubits, then the ancilla. The circuit is
//! prepare `|b⟩` → phase estimation of `e^{iAt0}` → controlled `Ry` on the
//! ancilla → inverse phase estimation, and the solution is read from the
//! branch with ancilla `|1⟩` and the clock back at `|0…0⟩`.
//!
//! Clock decoding: the phase fraction of eigenvalue `λ` is `λ·t0/(2π)`, so
//! clock value `k` decodes to `λ̃ = 2πk/(t0·2^n)` (unsigned) or, in
//! two's-complement mode, to the same formula with `k - 2^n` for
//! `k ≥ 2^{n-1}`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::circuit::{decompose, Circuit, Gate};
use crate::error::{Error, Result};
use crate::linalg::{vec_norm, Matrix, UnitaryMatrix, C64, ONE, ZERO};
use crate::spectral::{classical_solve, eigendecompose, HermitianMatrix, SpectralDecomposition, SINGULAR_TOL};
use crate::state::StateVector;

/// How clock values are mapped back to eigenvalues.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignMode {
    /// `k ∈ [0, 2^n)` decodes to a non-negative eigenvalue.
    Unsigned,
    /// The top half of the clock range decodes to negative eigenvalues.
    #[default]
    #[serde(alias = "signed")]
    TwosComplement,
}

impl SignMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SignMode::Unsigned => "unsigned",
            SignMode::TwosComplement => "twos-complement",
        }
    }
}

impl std::str::FromStr for SignMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unsigned" => Ok(SignMode::Unsigned),
            "twos-complement" | "signed" => Ok(SignMode::TwosComplement),
            _ => Err(Error::Config(format!("unknown sign mode {s:?}"))),
        }
    }
}

/// Where the spectral bounds used to pick `t0` and `C` come from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumEstimate {
    /// Exact eigenvalues from the Jacobi eigensolver.
    #[default]
    Exact,
    /// Gershgorin disc bounds only, as a hardware run without a classical
    /// eigensolve would have. Exact for diagonal matrices.
    Gershgorin,
}

/// Which clock values receive the inversion rotation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InversionWindow {
    /// Only `|λ̃|` at or above the bin of the lower spectral bound; `C` is the
    /// smallest such `λ̃`. Clock values below the window are left unrotated.
    #[default]
    Spectrum,
    /// Every nonzero clock value; `C` is the smallest decodable `λ̃`.
    Full,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HHLConfig {
    /// Clock qubits (the minimum when `max_clock` is set).
    pub n_clock: usize,
    /// When set, the clock grows with the estimated condition number to
    /// `n_clock + ⌈log2 κ̂⌉`, capped at this value. `κ̂` is unbounded when the
    /// spectral bounds straddle zero.
    pub max_clock: Option<usize>,
    /// Evolution time; `None` picks the largest value that keeps every
    /// eigenvalue inside the decodable range.
    pub t0: Option<f64>,
    /// Rotation constant; `None` picks the smallest `λ̃` in the window.
    #[serde(rename = "C")]
    pub c: Option<f64>,
    /// Ancilla measurements for the sampled success rate (0 disables).
    pub shots: u64,
    pub mode: SignMode,
    pub estimate: SpectrumEstimate,
    pub window: InversionWindow,
    /// Right-hand side; `None` is the uniform superposition.
    pub b: Option<Vec<C64>>,
    pub seed: u64,
}

impl Default for HHLConfig {
    fn default() -> Self {
        Self {
            n_clock: 4,
            max_clock: None,
            t0: None,
            c: None,
            shots: 1024,
            mode: SignMode::default(),
            estimate: SpectrumEstimate::default(),
            window: InversionWindow::default(),
            b: None,
            seed: 0,
        }
    }
}

/// Clock register interpretation for a given `t0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClockDecoding {
    pub n_clock: usize,
    pub t0: f64,
    pub mode: SignMode,
}

impl ClockDecoding {
    pub fn states(&self) -> usize {
        1 << self.n_clock
    }

    /// Signed clock integer for value `k`.
    pub fn signed_index(&self, k: usize) -> i64 {
        let t = self.states() as i64;
        let k = k as i64;
        match self.mode {
            SignMode::TwosComplement if k >= t / 2 => k - t,
            _ => k,
        }
    }

    /// Eigenvalue spacing `2π/(t0·2^n)`.
    pub fn resolution(&self) -> f64 {
        2.0 * PI / (self.t0 * self.states() as f64)
    }

    pub fn decode(&self, k: usize) -> f64 {
        self.signed_index(k) as f64 * self.resolution()
    }

    /// Largest phase fraction `|λ|·t0/(2π)` the mode can decode.
    fn phase_limit(&self) -> f64 {
        match self.mode {
            SignMode::Unsigned => 1.0,
            SignMode::TwosComplement => 0.5,
        }
    }
}

/// Spectral bounds used for parameter selection.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpectrumBounds {
    /// Upper bound on `|λ|`.
    pub max_abs: f64,
    /// Lower bound on `|λ|` (0 when the bounds straddle zero).
    pub min_abs: f64,
}

impl SpectrumBounds {
    /// Condition-number estimate `max/min` (infinite if `min` is 0).
    pub fn kappa(&self) -> f64 {
        if self.min_abs > 0.0 { self.max_abs / self.min_abs } else { f64::INFINITY }
    }
}

/// Clock size for `cfg` given the spectral bounds.
pub fn clock_size(cfg: &HHLConfig, bounds: &SpectrumBounds) -> usize {
    match cfg.max_clock {
        None => cfg.n_clock,
        Some(cap) => {
            let cap = cap.max(cfg.n_clock);
            let kappa = bounds.kappa();
            if !kappa.is_finite() {
                return cap;
            }
            let extra = kappa.log2().ceil().max(0.0) as usize;
            (cfg.n_clock + extra).min(cap)
        }
    }
}

pub fn spectrum_bounds(m: &HermitianMatrix, d: &SpectralDecomposition, est: SpectrumEstimate) -> SpectrumBounds {
    match est {
        SpectrumEstimate::Exact => SpectrumBounds { max_abs: d.max_abs_eigenvalue(), min_abs: d.min_abs_eigenvalue() },
        SpectrumEstimate::Gershgorin => {
            let (lo, hi) = m.gershgorin_bounds();
            let min_abs = if lo > 0.0 {
                lo
            } else if hi < 0.0 {
                -hi
            } else {
                0.0
            };
            SpectrumBounds { max_abs: lo.abs().max(hi.abs()), min_abs }
        }
    }
}

/// Default `t0`: the largest `|λ|` lands on the last clock value of the
/// decodable range.
pub fn default_t0(max_abs: f64, n_clock: usize, mode: SignMode) -> Result<f64> {
    if !(max_abs > SINGULAR_TOL) {
        return Err(Error::Singular("spectral bound is zero".into()));
    }
    let t = (1usize << n_clock) as f64;
    let frac = match mode {
        SignMode::Unsigned => 1.0 - 1.0 / t,
        SignMode::TwosComplement => 0.5 - 1.0 / t,
    };
    if frac <= 0.0 {
        return Err(Error::Config(format!("{} mode needs at least 2 clock qubits", mode.as_str())));
    }
    Ok(2.0 * PI * frac / max_abs)
}

/// Uniform DFT on `n` qubits: `|j⟩ ↦ Σ_k e^{2πijk/2^n}|k⟩ / √2^n`, with the
/// output bit order restored by swaps.
pub fn qft_circuit(n: usize) -> Circuit {
    let mut c = Circuit::new(n);
    for q in (0..n).rev() {
        c.push(Gate::h(q)).expect("in range");
        for r in (0..q).rev() {
            let theta = PI / (1u64 << (q - r)) as f64;
            c.push(controlled_phase(theta, r, q)).expect("in range");
        }
    }
    for q in 0..n / 2 {
        let p = n - 1 - q;
        c.push(Gate::cnot(q, p)).expect("in range");
        c.push(Gate::cnot(p, q)).expect("in range");
        c.push(Gate::cnot(q, p)).expect("in range");
    }
    c
}

fn controlled_phase(theta: f64, control: usize, target: usize) -> Gate {
    let u = UnitaryMatrix::new_unchecked(Matrix::diagonal(&[ONE, C64::from_polar(1.0, theta)]));
    Gate::controlled_unitary(u, vec![control], vec![target]).expect("valid controls")
}

/// Phase estimation circuit on `memory ++ clock` qubits: Hadamards on the
/// clock, `powers[j]` controlled by clock qubit `j`, inverse QFT.
pub fn qpe_circuit(memory_qubits: usize, powers: &[UnitaryMatrix]) -> Result<Circuit> {
    let n_clock = powers.len();
    if n_clock == 0 {
        return Err(Error::Config("phase estimation needs at least one clock qubit".into()));
    }
    let mem: Vec<usize> = (0..memory_qubits).collect();
    let clock: Vec<usize> = (memory_qubits..memory_qubits + n_clock).collect();
    let mut c = Circuit::new(memory_qubits + n_clock);
    for &q in &clock {
        c.push(Gate::h(q))?;
    }
    for (j, u) in powers.iter().enumerate() {
        if u.n_qubits() != memory_qubits {
            return Err(Error::Dimension(format!("{}-qubit power for {memory_qubits} memory qubits", u.n_qubits())));
        }
        c.push(Gate::controlled_unitary(u.clone(), vec![clock[j]], mem.clone())?)?;
    }
    c.extend_mapped(&qft_circuit(n_clock).inverse(), &clock)?;
    Ok(c)
}

/// Clock distribution after phase estimation of `u` on `eigenstate`.
pub fn phase_estimation(u: &UnitaryMatrix, eigenstate: &StateVector, n_clock: usize) -> Result<Vec<f64>> {
    if u.dim() != eigenstate.dim() {
        return Err(Error::Dimension(format!("{}-dim state for a {}-dim unitary", eigenstate.dim(), u.dim())));
    }
    let mut powers = Vec::with_capacity(n_clock);
    let mut p = u.clone();
    for _ in 0..n_clock {
        let next = p.compose(&p);
        powers.push(p);
        p = next;
    }
    let m = eigenstate.n_qubits();
    let circuit = qpe_circuit(m, &powers)?;
    let init = embed(eigenstate.amplitudes(), m + n_clock);
    let out = circuit.simulate(&init)?;
    Ok(clock_marginal(out.amplitudes(), m, n_clock))
}

/// `e^{iA·t0·2^j}` for `j = 0..n_clock`.
pub fn evolution_powers(d: &SpectralDecomposition, t0: f64, n_clock: usize) -> Vec<UnitaryMatrix> {
    (0..n_clock).map(|j| d.evolution(t0 * (1u64 << j) as f64)).collect()
}

/// Checks that every `|λ| ≤ max_abs` decodes without wrap-around.
pub fn check_t0(t0: f64, max_abs: f64, dec: &ClockDecoding) -> Result<()> {
    if !(t0 > 0.0 && t0.is_finite()) {
        return Err(Error::Config(format!("t0 = {t0} must be positive")));
    }
    let frac = max_abs * t0 / (2.0 * PI);
    if frac >= dec.phase_limit() {
        return Err(Error::Config(format!(
            "t0 = {t0} puts |λ| = {max_abs} at phase {frac:.4}, beyond the {} range",
            dec.mode.as_str()
        )));
    }
    Ok(())
}

/// Ancilla rotation angles per clock value: `2·asin(C/λ̃_k)` for `|k| ≥ k_min`,
/// `None` where the rotation is skipped (`k = 0` or below the window).
pub fn inversion_angles(dec: &ClockDecoding, c: f64, k_min: u64) -> Result<Vec<Option<f64>>> {
    (0..dec.states())
        .map(|k| {
            let sk = dec.signed_index(k);
            if sk == 0 || sk.unsigned_abs() < k_min.max(1) {
                return Ok(None);
            }
            let ratio = c / dec.decode(k);
            if ratio.abs() > 1.0 + 1e-12 {
                return Err(Error::Config(format!("|C/λ̃| = {:.6} > 1 at clock value {k}", ratio.abs())));
            }
            Ok(Some(2.0 * ratio.clamp(-1.0, 1.0).asin()))
        })
        .collect()
}

/// The inversion rotation as a clock-multiplexed `Ry` on the ancilla.
pub fn eigenvalue_inversion(angles: &[Option<f64>], clock: &[usize], ancilla: usize) -> Result<Gate> {
    Gate::multiplexed_ry(angles.iter().map(|a| a.unwrap_or(0.0)).collect(), clock.to_vec(), ancilla)
}

/// Amplitude-encoding circuit: from `|0…0⟩` it prepares `b/‖b‖` (exactly
/// for real `b`, up to a global phase otherwise).
pub fn state_preparation(b: &[C64]) -> Result<Circuit> {
    let target = StateVector::normalize(b)?;
    let amps = target.amplitudes();
    let n = target.n_qubits();
    let real = amps.iter().all(|z| z.im == 0.0);
    let mut c = Circuit::new(n);
    // magnitude tree, most significant qubit first
    let mut weights: Vec<f64> = amps.iter().map(|z| z.norm_sqr()).collect();
    let mut levels = Vec::new();
    for q in 0..n {
        let angles: Vec<f64> = if q == 0 && real {
            amps.chunks(2).map(|p| 2.0 * p[1].re.atan2(p[0].re)).collect()
        } else {
            weights.chunks(2).map(|p| 2.0 * p[1].sqrt().atan2(p[0].sqrt())).collect()
        };
        weights = weights.chunks(2).map(|p| p[0] + p[1]).collect();
        levels.push(angles);
    }
    for q in (0..n).rev() {
        let angles = &levels[q];
        if angles.iter().all(|a| *a == 0.0) {
            continue;
        }
        c.push(Gate::multiplexed_ry(angles.clone(), (q + 1..n).collect(), q)?)?;
    }
    if !real {
        let mut phases: Vec<f64> = amps.iter().map(|z| if z.norm() > 0.0 { z.arg() } else { 0.0 }).collect();
        for q in 0..n {
            let angles: Vec<f64> = phases.chunks(2).map(|p| p[1] - p[0]).collect();
            phases = phases.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect();
            if angles.iter().any(|a| *a != 0.0) {
                c.push(Gate::multiplexed_rz(angles, (q + 1..n).collect(), q)?)?;
            }
        }
    }
    Ok(c)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MatrixMetadata {
    pub dim: usize,
    pub diagonal: bool,
    pub density: f64,
    pub kappa: f64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HHLReport {
    /// Exact probability of ancilla `|1⟩`.
    pub success_probability: f64,
    /// Ancilla `|1⟩` frequency over `shots` samples.
    pub sampled_success_rate: Option<f64>,
    /// Largest joint probability of ancilla `|1⟩` with one memory basis state.
    pub top_outcome_probability: f64,
    /// `|⟨x|x̃⟩|²` against the classical solution.
    pub fidelity: f64,
    pub width: usize,
    pub depth_raw: usize,
    pub depth_basis: usize,
    /// Normalized memory amplitudes on the ancilla-`|1⟩`, clock-`|0⟩` branch.
    pub solution_amplitudes: Vec<C64>,
    /// Clock weight after phase estimation on values that got no rotation.
    pub unrotated_weight: f64,
    /// Probability that the clock reads `|0…0⟩` given ancilla `|1⟩`.
    pub clock_reset_probability: f64,
    pub n_clock: usize,
    pub t0: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub mode: SignMode,
    pub shots: u64,
    pub matrix_metadata: MatrixMetadata,
}

/// CSV column order for [`HHLReport::csv_record`].
pub const CSV_HEADER: [&str; 15] = [
    "dim",
    "diagonal",
    "density",
    "kappa",
    "n_clock",
    "t0",
    "C",
    "mode",
    "success_probability",
    "top_outcome_probability",
    "fidelity",
    "width",
    "depth_raw",
    "depth_basis",
    "seed",
];

impl HHLReport {
    pub fn csv_record(&self) -> Vec<String> {
        let md = &self.matrix_metadata;
        vec![
            md.dim.to_string(),
            md.diagonal.to_string(),
            md.density.to_string(),
            md.kappa.to_string(),
            self.n_clock.to_string(),
            self.t0.to_string(),
            self.c.to_string(),
            self.mode.as_str().to_string(),
            self.success_probability.to_string(),
            self.top_outcome_probability.to_string(),
            self.fidelity.to_string(),
            self.width.to_string(),
            self.depth_raw.to_string(),
            self.depth_basis.to_string(),
            md.seed.to_string(),
        ]
    }
}

/// The assembled HHL circuit, split at the point where the clock holds the
/// eigenvalue estimates.
#[derive(Clone, Debug)]
pub struct HHLCircuit {
    /// State preparation and phase estimation.
    pub forward: Circuit,
    /// Inversion rotation and uncompute.
    pub backward: Circuit,
    pub memory_qubits: usize,
    pub decoding: ClockDecoding,
    pub c: f64,
    pub rotated: Vec<bool>,
}

impl HHLCircuit {
    pub fn full(&self) -> Circuit {
        let mut c = self.forward.clone();
        c.extend(&self.backward).expect("same register");
        c
    }

    pub fn width(&self) -> usize {
        self.forward.n_qubits()
    }

    pub fn ancilla(&self) -> usize {
        self.width() - 1
    }
}

/// Resolved `t0`, `C`, window and circuit for `m` under `cfg`.
pub fn build_hhl(m: &HermitianMatrix, d: &SpectralDecomposition, b: &[C64], cfg: &HHLConfig) -> Result<HHLCircuit> {
    let dim = m.dim();
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::Dimension(format!("matrix dimension {dim} is not a power of two ≥ 2")));
    }
    if b.len() != dim {
        return Err(Error::Dimension(format!("rhs length {} for a {dim}x{dim} matrix", b.len())));
    }
    if cfg.n_clock == 0 {
        return Err(Error::Config("n_clock must be at least 1".into()));
    }
    let mem = dim.trailing_zeros() as usize;
    let bounds = spectrum_bounds(m, d, cfg.estimate);
    let n_clock = clock_size(cfg, &bounds);
    let width = mem + n_clock + 1;
    if width > crate::state::MAX_QUBITS {
        return Err(Error::Size(format!("{width} qubits exceeds the simulator limit")));
    }
    let t0 = match cfg.t0 {
        Some(t) => t,
        None => default_t0(bounds.max_abs, n_clock, cfg.mode)?,
    };
    let decoding = ClockDecoding { n_clock, t0, mode: cfg.mode };
    check_t0(t0, bounds.max_abs, &decoding)?;
    let res = decoding.resolution();
    let k_min = match cfg.window {
        InversionWindow::Full => 1,
        InversionWindow::Spectrum => ((bounds.min_abs / res * (1.0 + 1e-12)).floor() as u64).max(1),
    };
    let c = cfg.c.unwrap_or(k_min as f64 * res);
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::Config(format!("C = {c} must be positive")));
    }
    let angles = inversion_angles(&decoding, c, k_min)?;

    let clock: Vec<usize> = (mem..mem + n_clock).collect();
    let ancilla = width - 1;
    let qpe = qpe_circuit(mem, &evolution_powers(d, t0, n_clock))?;
    let mut forward = Circuit::new(width);
    forward.extend(&state_preparation(b)?)?;
    forward.extend(&qpe)?;
    let mut backward = Circuit::new(width);
    backward.push(eigenvalue_inversion(&angles, &clock, ancilla)?)?;
    backward.extend(&qpe.inverse())?;
    Ok(HHLCircuit { forward, backward, memory_qubits: mem, decoding, c, rotated: angles.iter().map(Option::is_some).collect() })
}

/// Solve `m x = b` with HHL and report the benchmark metrics.
pub fn run_hhl(m: &HermitianMatrix, cfg: &HHLConfig) -> Result<HHLReport> {
    let dim = m.dim();
    let b = match &cfg.b {
        Some(b) => b.clone(),
        None => vec![C64::new(1.0 / (dim as f64).sqrt(), 0.0); dim],
    };
    if b.len() == dim && vec_norm(&b) == 0.0 {
        return Err(Error::ZeroVector);
    }
    let d = eigendecompose(m);
    let kappa = d.condition_number()?;
    let exact = classical_solve(m, &b)?;
    let hc = build_hhl(m, &d, &b, cfg)?;
    let (mem, n_clock, width) = (hc.memory_qubits, hc.decoding.n_clock, hc.width());

    let mid = hc.forward.simulate(&StateVector::zero(width)?)?;
    let clock_dist = clock_marginal(mid.amplitudes(), mem, n_clock);
    let unrotated_weight = clock_dist.iter().zip(&hc.rotated).filter(|(_, r)| !**r).map(|(p, _)| p).sum();
    let out = hc.backward.simulate(&mid)?;
    let amps = out.amplitudes();

    let anc_bit = 1usize << hc.ancilla();
    let mem_mask = (1usize << mem) - 1;
    let mut success = 0.0;
    let mut joint = vec![0.0; dim];
    for (i, a) in amps.iter().enumerate() {
        if i & anc_bit != 0 {
            success += a.norm_sqr();
            joint[i & mem_mask] += a.norm_sqr();
        }
    }
    let branch: Vec<C64> = (0..dim).map(|i| amps[anc_bit | i]).collect();
    let branch_norm = vec_norm(&branch);
    let clock_reset_probability = if success > 0.0 { branch_norm * branch_norm / success } else { 0.0 };
    let (solution_amplitudes, fidelity) = if branch_norm > 0.0 {
        let x: Vec<C64> = branch.iter().map(|z| z / branch_norm).collect();
        let f = crate::linalg::inner(&exact, &x).norm_sqr().clamp(0.0, 1.0);
        (x, f)
    } else {
        (vec![ZERO; dim], 0.0)
    };
    let sampled_success_rate = if cfg.shots > 0 {
        let hist = out.sample(cfg.shots, cfg.seed)?;
        let hits: u64 = hist.iter().filter(|(i, _)| i & anc_bit != 0).map(|(_, n)| n).sum();
        Some(hits as f64 / cfg.shots as f64)
    } else {
        None
    };
    let full = hc.full();
    let depth_basis = decompose(&full)?.depth();
    Ok(HHLReport {
        success_probability: success.clamp(0.0, 1.0),
        sampled_success_rate,
        top_outcome_probability: joint.iter().copied().fold(0.0, f64::max),
        fidelity,
        width,
        depth_raw: full.depth(),
        depth_basis,
        solution_amplitudes,
        unrotated_weight,
        clock_reset_probability,
        n_clock,
        t0: hc.decoding.t0,
        c: hc.c,
        mode: cfg.mode,
        shots: cfg.shots,
        matrix_metadata: MatrixMetadata { dim, diagonal: m.is_diagonal(), density: m.density(), kappa, seed: cfg.seed },
    })
}

fn embed(low: &[C64], n_qubits: usize) -> StateVector {
    let mut amps = vec![ZERO; 1 << n_qubits];
    amps[..low.len()].copy_from_slice(low);
    StateVector::normalize(&amps).expect("nonzero state")
}

/// Marginal distribution of clock qubits `mem..mem+n_clock`.
fn clock_marginal(amps: &[C64], mem: usize, n_clock: usize) -> Vec<f64> {
    let mut dist = vec![0.0; 1 << n_clock];
    let mask = (1usize << n_clock) - 1;
    for (i, a) in amps.iter().enumerate() {
        dist[(i >> mem) & mask] += a.norm_sqr();
    }
    dist
}

#[cfg(test)]
mod tests;
