//! Synthesis of circuits into the basis `{U3, Phase, CNOT}`.
//!
//! Arbitrary unitaries go through the recursive quantum Shannon
//! decomposition: a cosine-sine split on the most significant qubit, the two
//! block-diagonal factors demultiplexed into a multiplexed `Rz` sandwiched by
//! half-size unitaries, and multiplexed rotations lowered with the Gray-code
//! CNOT ladder. Diagonal unitaries skip all of that and go straight to a
//! phase ladder of multiplexed `Rz` rotations, which is what makes diagonal
//! operators measurably shallower.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Schur};

use super::{u3_matrix, Circuit, Gate, GateKind, MAX_SYNTHESIS_QUBITS};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, UnitaryMatrix, C64, ONE};

/// Off-diagonal magnitude below which a unitary takes the diagonal path.
pub const DIAGONAL_TOL: f64 = 1e-12;
/// Rotations with a smaller angle are dropped.
pub const PRUNE_TOL: f64 = 1e-12;

/// Which synthesis strategy to use for unitary payloads.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Synthesis {
    /// Take the phase-ladder path for diagonal unitaries and skip demultiplexing when both halves agree.
    Auto,
    /// Always run the full cosine-sine recursion.
    Generic,
}

/// A circuit restricted to `U3`, `Phase` and `CNOT`.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
#[serde(transparent)]
pub struct BasisCircuit(Circuit);

impl BasisCircuit {
    pub fn circuit(&self) -> &Circuit {
        &self.0
    }

    pub fn into_circuit(self) -> Circuit {
        self.0
    }

    pub fn depth(&self) -> usize {
        self.0.depth()
    }

    pub fn width(&self) -> usize {
        self.0.width()
    }

    pub fn cnot_count(&self) -> usize {
        self.0.gates().iter().filter(|g| matches!(g.kind(), GateKind::Cnot)).count()
    }

    pub fn to_unitary(&self) -> Result<UnitaryMatrix> {
        self.0.to_unitary()
    }
}

/// Lower `c` to the basis gate set. The result implements the same unitary
/// up to a global phase.
pub fn decompose(c: &Circuit) -> Result<BasisCircuit> {
    decompose_with(c, Synthesis::Auto)
}

pub fn decompose_with(c: &Circuit, mode: Synthesis) -> Result<BasisCircuit> {
    let mut out = Emitter::new(c.n_qubits());
    for g in c.gates() {
        lower_gate(g, mode, &mut out)?;
    }
    Ok(BasisCircuit(out.finish()))
}

/// Synthesize a bare unitary on qubits `0..n`.
pub fn synthesize_unitary(u: &UnitaryMatrix, mode: Synthesis) -> Result<BasisCircuit> {
    let n = u.n_qubits();
    if n > MAX_SYNTHESIS_QUBITS {
        return Err(Error::Size(format!("{n}-qubit unitary exceeds synthesis limit {MAX_SYNTHESIS_QUBITS}")));
    }
    let mut out = Emitter::new(n.max(1));
    let qubits: Vec<usize> = (0..n).collect();
    synth(u.matrix(), &qubits, mode, &mut out);
    Ok(BasisCircuit(out.finish()))
}

fn lower_gate(g: &Gate, mode: Synthesis, out: &mut Emitter) -> Result<()> {
    let t = g.targets();
    let c = g.controls();
    match g.kind() {
        GateKind::Cnot => out.cnot(c[0], t[0]),
        GateKind::Phase(theta) | GateKind::Rz(theta) => out.one(t[0], Matrix::diagonal(&[ONE, C64::from_polar(1.0, *theta)])),
        GateKind::Toffoli => toffoli(c[0], c[1], t[0], out),
        GateKind::Fredkin => {
            out.cnot(t[1], t[0]);
            toffoli(c[0], t[0], t[1], out);
            out.cnot(t[1], t[0]);
        }
        GateKind::MultiplexedRy(angles) => multiplexed(Axis::Y, angles, c, t[0], out),
        GateKind::MultiplexedRz(angles) => multiplexed(Axis::Z, angles, c, t[0], out),
        GateKind::ControlledUnitary(_) | GateKind::GenericUnitary(_) => {
            let k = t.len() + c.len();
            if k > MAX_SYNTHESIS_QUBITS {
                return Err(Error::Size(format!("{k}-qubit payload exceeds synthesis limit {MAX_SYNTHESIS_QUBITS}")));
            }
            let full = g.full_matrix();
            let err = full.unitarity_error();
            if !(err <= crate::linalg::UNITARY_TOL) {
                return Err(Error::Unitary(err));
            }
            let qubits: Vec<usize> = g.qubits().collect();
            synth(&full, &qubits, mode, out);
        }
        _ => out.one(t[0], g.target_matrix().expect("single-qubit gate")),
    }
    Ok(())
}

/// Textbook Toffoli: 6 CNOTs, T/T† phases and two Hadamards.
fn toffoli(c1: usize, c2: usize, t: usize, out: &mut Emitter) {
    let h = u3_matrix(PI / 2.0, 0.0, PI);
    let tg = Matrix::diagonal(&[ONE, C64::from_polar(1.0, PI / 4.0)]);
    let tdg = tg.adjoint();
    out.one(t, h.clone());
    out.cnot(c2, t);
    out.one(t, tdg.clone());
    out.cnot(c1, t);
    out.one(t, tg.clone());
    out.cnot(c2, t);
    out.one(t, tdg.clone());
    out.cnot(c1, t);
    out.one(c2, tg.clone());
    out.one(t, tg.clone());
    out.one(t, h);
    out.cnot(c1, c2);
    out.one(c1, tg);
    out.one(c2, tdg);
    out.cnot(c1, c2);
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Axis {
    Y,
    Z,
}

fn rotation(axis: Axis, theta: f64) -> Matrix {
    match axis {
        Axis::Y => u3_matrix(theta, 0.0, 0.0),
        // Rz up to a global phase; the multiplexor applies it unconditionally
        Axis::Z => Matrix::diagonal(&[ONE, C64::from_polar(1.0, theta)]),
    }
}

fn gray(i: usize) -> usize {
    i ^ (i >> 1)
}

/// Uniformly controlled rotation: `angles[l]` about `axis` on `target` when
/// the `selects` read `l`. Lowered to `2^m` rotations and `2^m` CNOTs.
fn multiplexed(axis: Axis, angles: &[f64], selects: &[usize], target: usize, out: &mut Emitter) {
    if angles.iter().all(|a| a.abs() < PRUNE_TOL) {
        return;
    }
    let (lo, hi) = angles.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &a| (lo.min(a), hi.max(a)));
    if hi - lo < PRUNE_TOL || selects.is_empty() {
        out.one(target, rotation(axis, angles[0]));
        return;
    }
    let n = angles.len();
    // θ_l = Σ_i (-1)^{popcount(l & gray(i))} φ_i, inverted by the orthogonality of the sign matrix.
    let phis: Vec<f64> = (0..n)
        .map(|i| {
            let g = gray(i);
            angles
                .iter()
                .enumerate()
                .map(|(l, &a)| if (l & g).count_ones() % 2 == 0 { a } else { -a })
                .sum::<f64>()
                / n as f64
        })
        .collect();
    for (i, &phi) in phis.iter().enumerate() {
        if phi.abs() >= PRUNE_TOL {
            out.one(target, rotation(axis, phi));
        }
        let flip = gray(i) ^ gray((i + 1) % n);
        out.cnot(selects[flip.trailing_zeros() as usize], target);
    }
}

/// Phase ladder for `diag(e^{iα_x})` on `qubits` (local index convention).
fn diagonal(phases: &[f64], qubits: &[usize], out: &mut Emitter) {
    let n = qubits.len();
    if n == 1 {
        let d = phases[1] - phases[0];
        out.one(qubits[0], Matrix::diagonal(&[ONE, C64::from_polar(1.0, d)]));
        return;
    }
    let half = phases.len() / 2;
    let (low, high) = phases.split_at(half);
    let rz: Vec<f64> = low.iter().zip(high).map(|(a0, a1)| a1 - a0).collect();
    let rest: Vec<f64> = low.iter().zip(high).map(|(a0, a1)| (a0 + a1) / 2.0).collect();
    multiplexed(Axis::Z, &rz, &qubits[..n - 1], qubits[n - 1], out);
    diagonal(&rest, &qubits[..n - 1], out);
}

fn is_identity_up_to_phase(m: &Matrix) -> bool {
    m.phase_invariant_diff(&Matrix::identity(m.dim())) < PRUNE_TOL
}

fn synth(m: &Matrix, qubits: &[usize], mode: Synthesis, out: &mut Emitter) {
    let n = qubits.len();
    if is_identity_up_to_phase(m) {
        return;
    }
    if n == 1 {
        out.one(qubits[0], m.clone());
        return;
    }
    if mode == Synthesis::Auto && m.is_diagonal(DIAGONAL_TOL) {
        let phases: Vec<f64> = (0..m.dim()).map(|i| m[(i, i)].arg()).collect();
        diagonal(&phases, qubits, out);
        return;
    }
    let half = m.dim() / 2;
    let block = |r0: usize, c0: usize| Matrix::from_fn(half, |r, c| m[(r0 + r, c0 + c)]);
    let (u00, u01, u10, u11) = (block(0, 0), block(0, half), block(half, 0), block(half, half));
    let csd = cos_sin(&u00, &u01, &u10, &u11);
    demultiplex(&csd.r0, &csd.r1, qubits, mode, out);
    let angles: Vec<f64> = csd.thetas.iter().map(|t| 2.0 * t).collect();
    multiplexed(Axis::Y, &angles, &qubits[..n - 1], qubits[n - 1], out);
    demultiplex(&csd.l0, &csd.l1, qubits, mode, out);
}

/// `A0 ⊕ A1 = (I⊗V)(D⊕D†)(I⊗W)` with `A0 A1† = V D² V†`, `W = D V† A1`.
fn demultiplex(a0: &Matrix, a1: &Matrix, qubits: &[usize], mode: Synthesis, out: &mut Emitter) {
    let n = qubits.len();
    let lower = &qubits[..n - 1];
    let top = qubits[n - 1];
    if mode == Synthesis::Auto && a0.max_abs_diff(a1) < PRUNE_TOL {
        synth(a0, lower, mode, out);
        return;
    }
    let p = to_na(&(a0 * &a1.adjoint()));
    let (q, t) = schur(p).unpack();
    let v = from_na(&q);
    let d: Vec<C64> = (0..t.nrows()).map(|i| {
        let z = t[(i, i)];
        C64::from_polar(1.0, z.arg() / 2.0)
    }).collect();
    let w = &Matrix::diagonal(&d) * &(&v.adjoint() * a1);
    debug_assert!(
        (&(&v * &Matrix::diagonal(&d)) * &w).max_abs_diff(a0) < 1e-7,
        "demultiplex reconstruction failed"
    );
    synth(&w, lower, mode, out);
    let angles: Vec<f64> = d.iter().map(|z| -2.0 * z.arg()).collect();
    multiplexed(Axis::Z, &angles, lower, top, out);
    synth(&v, lower, mode, out);
}

// The unbounded nalgebra entry points iterate to machine epsilon and can
// stall for seconds on degenerate spectra, so cap the sweeps and relax.
const ITER_CAP: usize = 10_000;

fn schur(p: DMatrix<C64>) -> Schur<C64, nalgebra::Dyn> {
    [1e-15, 1e-13, 1e-11]
        .iter()
        .find_map(|&eps| Schur::try_new(p.clone(), eps, ITER_CAP))
        .expect("Schur iteration did not converge")
}

fn svd(m: DMatrix<C64>) -> nalgebra::SVD<C64, nalgebra::Dyn, nalgebra::Dyn> {
    [1e-15, 1e-13, 1e-11]
        .iter()
        .find_map(|&eps| m.clone().try_svd(true, true, eps, ITER_CAP))
        .expect("SVD iteration did not converge")
}

struct CosSin {
    l0: Matrix,
    l1: Matrix,
    r0: Matrix,
    r1: Matrix,
    thetas: Vec<f64>,
}

fn to_na(m: &Matrix) -> DMatrix<C64> {
    DMatrix::from_fn(m.dim(), m.dim(), |r, c| m[(r, c)])
}

fn from_na(m: &DMatrix<C64>) -> Matrix {
    Matrix::from_fn(m.nrows(), |r, c| m[(r, c)])
}

/// Cosine-sine decomposition
/// `[[u00,u01],[u10,u11]] = diag(l0,l1) · [[C,-S],[S,C]] · diag(r0,r1)`,
/// with cosines ascending.
fn cos_sin(u00: &Matrix, u01: &Matrix, u10: &Matrix, u11: &Matrix) -> CosSin {
    let n = u00.dim();
    let svd = svd(to_na(u00));
    let u = svd.u.expect("svd u");
    let v_t = svd.v_t.expect("svd v_t");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
    let c: Vec<f64> = order.iter().map(|&i| svd.singular_values[i].min(1.0)).collect();
    let l0 = Matrix::from_fn(n, |r, k| u[(r, order[k])]);
    let r0 = Matrix::from_fn(n, |k, col| v_t[(order[k], col)]);

    let qr = to_na(&(u10 * &r0.adjoint())).qr();
    let mut l1 = from_na(&qr.q());
    let rmat = qr.r();
    let mut s = vec![0.0; n];
    for j in 0..n {
        let z = rmat[(j, j)];
        let r = z.norm();
        if r > 1e-300 {
            let w = z.conj() / r;
            for i in 0..n {
                l1[(i, j)] /= w;
            }
        }
        s[j] = r;
    }

    let l0_dag_u01 = &l0.adjoint() * u01;
    let l1_dag_u11 = &l1.adjoint() * u11;
    let r1 = Matrix::from_fn(n, |i, j| {
        if s[i] > c[i] {
            -l0_dag_u01[(i, j)] / s[i]
        } else {
            l1_dag_u11[(i, j)] / c[i]
        }
    });
    let thetas = c.iter().zip(&s).map(|(&ci, &si)| si.atan2(ci)).collect();
    CosSin { l0, l1, r0, r1, thetas }
}

/// ZYZ angles `(θ, φ, λ)` with `m = e^{iγ} U3(θ, φ, λ)`.
pub(crate) fn euler_angles(m: &Matrix) -> (f64, f64, f64) {
    let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let theta = 2.0 * c.norm().atan2(a.norm());
    if c.norm() < 1e-14 {
        // diagonal: only the relative phase matters
        return (0.0, 0.0, d.arg() - a.arg());
    }
    if a.norm() < 1e-14 {
        let gamma = (-b).arg();
        return (theta, c.arg() - gamma, 0.0);
    }
    let gamma = a.arg();
    (theta, c.arg() - gamma, (-b).arg() - gamma)
}

fn wrap_angle(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(2.0 * PI) - PI;
    if y <= -PI { y + 2.0 * PI } else { y }
}

enum Item {
    One(usize, Matrix),
    Cx(usize, usize),
}

/// Accumulates basis gates, fusing adjacent single-qubit gates and
/// cancelling back-to-back identical CNOTs.
struct Emitter {
    n_qubits: usize,
    items: Vec<Option<Item>>,
    last: Vec<Vec<usize>>,
}

impl Emitter {
    fn new(n_qubits: usize) -> Self {
        Self { n_qubits, items: Vec::new(), last: vec![Vec::new(); n_qubits] }
    }

    fn one(&mut self, q: usize, m: Matrix) {
        if let Some(&i) = self.last[q].last() {
            if let Some(Item::One(_, prev)) = &mut self.items[i] {
                *prev = &m * prev;
                if is_identity_up_to_phase(prev) {
                    self.items[i] = None;
                    self.last[q].pop();
                }
                return;
            }
        }
        if is_identity_up_to_phase(&m) {
            return;
        }
        self.last[q].push(self.items.len());
        self.items.push(Some(Item::One(q, m)));
    }

    fn cnot(&mut self, c: usize, t: usize) {
        if let (Some(&i), Some(&j)) = (self.last[c].last(), self.last[t].last()) {
            if i == j && matches!(self.items[i], Some(Item::Cx(pc, pt)) if pc == c && pt == t) {
                self.items[i] = None;
                self.last[c].pop();
                self.last[t].pop();
                return;
            }
        }
        let idx = self.items.len();
        self.last[c].push(idx);
        self.last[t].push(idx);
        self.items.push(Some(Item::Cx(c, t)));
    }

    fn finish(self) -> Circuit {
        let mut circ = Circuit::new(self.n_qubits);
        for item in self.items.into_iter().flatten() {
            let g = match item {
                Item::Cx(c, t) => Gate::cnot(c, t),
                Item::One(q, m) => {
                    let (theta, phi, lambda) = euler_angles(&m);
                    if theta.abs() < PRUNE_TOL {
                        let total = wrap_angle(phi + lambda);
                        if total.abs() < PRUNE_TOL {
                            continue;
                        }
                        Gate::phase(total, q)
                    } else {
                        Gate::u3(theta, phi, lambda, q)
                    }
                }
            };
            circ.push(g).expect("emitter qubits are in range");
        }
        circ
    }
}

