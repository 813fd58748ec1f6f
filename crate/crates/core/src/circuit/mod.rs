//! Gate-level circuit representation, width/depth metrics and unitary
//! extraction.
//!
//! A gate's matrix acts on its `targets` using the crate-wide local index
//! convention (`targets[0]` is the least significant local bit). For the
//! controlled kinds (`Cnot`, `Toffoli`, `Fredkin`, `ControlledUnitary`) the
//! matrix is applied only where every qubit in `controls` is 1. For the
//! multiplexed rotations, `controls` are select lines instead: the rotation
//! angle applied to the target is `params[l]`, where `l` is the value of the
//! select qubits read in the same local convention.

mod decompose;

use std::f64::consts::FRAC_1_SQRT_2;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

pub use decompose::{decompose, synthesize_unitary, BasisCircuit, Synthesis, DIAGONAL_TOL, PRUNE_TOL};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, UnitaryMatrix, C64, ONE, ZERO};
use crate::state::{apply_diagonal, apply_matrix, check_targets, StateVector};

/// Largest register for which [`Circuit::to_unitary`] builds a dense matrix.
pub const MAX_UNITARY_QUBITS: usize = 12;

/// Largest payload (targets plus controls) accepted by [`decompose`].
pub const MAX_SYNTHESIS_QUBITS: usize = 10;

#[derive(Clone, Debug, PartialEq)]
pub enum GateKind {
    H,
    X,
    Y,
    Z,
    SqrtNot,
    Cnot,
    Toffoli,
    Fredkin,
    /// `diag(1, e^{iθ})`
    Phase(f64),
    Ry(f64),
    /// `diag(e^{-iθ/2}, e^{iθ/2})`
    Rz(f64),
    /// Three-Euler-angle rotation `U3(θ, φ, λ)`.
    U3(f64, f64, f64),
    ControlledUnitary(UnitaryMatrix),
    GenericUnitary(UnitaryMatrix),
    MultiplexedRy(Vec<f64>),
    MultiplexedRz(Vec<f64>),
}

impl GateKind {
    pub fn name(&self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::X => "X",
            GateKind::Y => "Y",
            GateKind::Z => "Z",
            GateKind::SqrtNot => "SqrtNot",
            GateKind::Cnot => "CNOT",
            GateKind::Toffoli => "Toffoli",
            GateKind::Fredkin => "Fredkin",
            GateKind::Phase(_) => "Phase",
            GateKind::Ry(_) => "Ry",
            GateKind::Rz(_) => "Rz",
            GateKind::U3(..) => "U3",
            GateKind::ControlledUnitary(_) => "ControlledUnitary",
            GateKind::GenericUnitary(_) => "GenericUnitary",
            GateKind::MultiplexedRy(_) => "MultiplexedRy",
            GateKind::MultiplexedRz(_) => "MultiplexedRz",
        }
    }

    fn params(&self) -> Vec<f64> {
        match self {
            GateKind::Phase(t) | GateKind::Ry(t) | GateKind::Rz(t) => vec![*t],
            GateKind::U3(a, b, c) => vec![*a, *b, *c],
            GateKind::MultiplexedRy(a) | GateKind::MultiplexedRz(a) => a.clone(),
            _ => Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    kind: GateKind,
    targets: Vec<usize>,
    controls: Vec<usize>,
}

pub fn u3_matrix(theta: f64, phi: f64, lambda: f64) -> Matrix {
    let (s, c) = (theta / 2.0).sin_cos();
    Matrix::from_rows(&[
        vec![C64::new(c, 0.0), -C64::from_polar(s, lambda)],
        vec![C64::from_polar(s, phi), C64::from_polar(c, phi + lambda)],
    ])
    .unwrap()
}

fn ry_matrix(theta: f64) -> Matrix {
    let (s, c) = (theta / 2.0).sin_cos();
    Matrix::from_real_rows(&[vec![c, -s], vec![s, c]]).unwrap()
}

fn rz_diag(theta: f64) -> [C64; 2] {
    [C64::from_polar(1.0, -theta / 2.0), C64::from_polar(1.0, theta / 2.0)]
}

impl Gate {
    fn single(kind: GateKind, q: usize) -> Self {
        Self { kind, targets: vec![q], controls: Vec::new() }
    }

    pub fn h(q: usize) -> Self {
        Self::single(GateKind::H, q)
    }
    pub fn x(q: usize) -> Self {
        Self::single(GateKind::X, q)
    }
    pub fn y(q: usize) -> Self {
        Self::single(GateKind::Y, q)
    }
    pub fn z(q: usize) -> Self {
        Self::single(GateKind::Z, q)
    }
    pub fn sqrt_not(q: usize) -> Self {
        Self::single(GateKind::SqrtNot, q)
    }
    pub fn phase(theta: f64, q: usize) -> Self {
        Self::single(GateKind::Phase(theta), q)
    }
    pub fn ry(theta: f64, q: usize) -> Self {
        Self::single(GateKind::Ry(theta), q)
    }
    pub fn rz(theta: f64, q: usize) -> Self {
        Self::single(GateKind::Rz(theta), q)
    }
    pub fn u3(theta: f64, phi: f64, lambda: f64, q: usize) -> Self {
        Self::single(GateKind::U3(theta, phi, lambda), q)
    }
    pub fn cnot(control: usize, target: usize) -> Self {
        Self { kind: GateKind::Cnot, targets: vec![target], controls: vec![control] }
    }
    pub fn toffoli(c1: usize, c2: usize, target: usize) -> Self {
        Self { kind: GateKind::Toffoli, targets: vec![target], controls: vec![c1, c2] }
    }
    /// Controlled swap of `a` and `b`.
    pub fn fredkin(control: usize, a: usize, b: usize) -> Self {
        Self { kind: GateKind::Fredkin, targets: vec![a, b], controls: vec![control] }
    }

    pub fn controlled_unitary(u: UnitaryMatrix, controls: Vec<usize>, targets: Vec<usize>) -> Result<Self> {
        if u.dim() != 1 << targets.len() {
            return Err(Error::Dimension(format!("{}x{} payload on {} targets", u.dim(), u.dim(), targets.len())));
        }
        if controls.is_empty() {
            return Err(Error::Argument("controlled unitary needs at least one control".into()));
        }
        Ok(Self { kind: GateKind::ControlledUnitary(u), targets, controls })
    }

    pub fn generic_unitary(u: UnitaryMatrix, targets: Vec<usize>) -> Result<Self> {
        if u.dim() != 1 << targets.len() {
            return Err(Error::Dimension(format!("{}x{} payload on {} targets", u.dim(), u.dim(), targets.len())));
        }
        Ok(Self { kind: GateKind::GenericUnitary(u), targets, controls: Vec::new() })
    }

    /// Build a gate from an arbitrary matrix, rejecting non-unitary payloads.
    pub fn from_matrix(m: Matrix, targets: Vec<usize>) -> Result<Self> {
        Self::generic_unitary(UnitaryMatrix::new(m)?, targets)
    }

    pub fn multiplexed_ry(angles: Vec<f64>, selects: Vec<usize>, target: usize) -> Result<Self> {
        Self::multiplexed(GateKind::MultiplexedRy(angles), selects, target)
    }

    pub fn multiplexed_rz(angles: Vec<f64>, selects: Vec<usize>, target: usize) -> Result<Self> {
        Self::multiplexed(GateKind::MultiplexedRz(angles), selects, target)
    }

    fn multiplexed(kind: GateKind, selects: Vec<usize>, target: usize) -> Result<Self> {
        let n = kind.params().len();
        if n != 1 << selects.len() {
            return Err(Error::Dimension(format!("{n} angles for {} select qubits", selects.len())));
        }
        Ok(Self { kind, targets: vec![target], controls: selects })
    }

    /// Construct a named gate from its kind name and parameters.
    pub fn standard(kind: &str, params: &[f64], qubits: &[usize]) -> Result<Self> {
        let arity = |n_params: usize, n_qubits: usize| -> Result<()> {
            if params.len() != n_params || qubits.len() != n_qubits {
                return Err(Error::Argument(format!(
                    "{kind} takes {n_params} parameters and {n_qubits} qubits"
                )));
            }
            if params.iter().any(|p| !p.is_finite()) {
                return Err(Error::Argument(format!("{kind}: non-finite angle")));
            }
            Ok(())
        };
        let g = match kind.to_ascii_lowercase().as_str() {
            "h" => arity(0, 1).map(|_| Self::h(qubits[0])),
            "x" => arity(0, 1).map(|_| Self::x(qubits[0])),
            "y" => arity(0, 1).map(|_| Self::y(qubits[0])),
            "z" => arity(0, 1).map(|_| Self::z(qubits[0])),
            "sqrtnot" => arity(0, 1).map(|_| Self::sqrt_not(qubits[0])),
            "cnot" | "cx" => arity(0, 2).map(|_| Self::cnot(qubits[0], qubits[1])),
            "toffoli" | "ccx" => arity(0, 3).map(|_| Self::toffoli(qubits[0], qubits[1], qubits[2])),
            "fredkin" | "cswap" => arity(0, 3).map(|_| Self::fredkin(qubits[0], qubits[1], qubits[2])),
            "phase" | "p" => arity(1, 1).map(|_| Self::phase(params[0], qubits[0])),
            "ry" => arity(1, 1).map(|_| Self::ry(params[0], qubits[0])),
            "rz" => arity(1, 1).map(|_| Self::rz(params[0], qubits[0])),
            "u3" => arity(3, 1).map(|_| Self::u3(params[0], params[1], params[2], qubits[0])),
            _ => Err(Error::Argument(format!("unknown gate kind {kind:?}"))),
        }?;
        check_targets(usize::BITS as usize, &g.targets, &g.controls)?;
        Ok(g)
    }

    pub fn kind(&self) -> &GateKind {
        &self.kind
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn controls(&self) -> &[usize] {
        &self.controls
    }

    /// Every qubit the gate touches.
    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.targets.iter().chain(&self.controls).copied()
    }

    /// The matrix applied to `targets` (for controlled kinds, the payload).
    /// `None` for multiplexed rotations, whose action depends on the selects.
    pub fn target_matrix(&self) -> Option<Matrix> {
        let h = FRAC_1_SQRT_2;
        let m = match &self.kind {
            GateKind::H => Matrix::from_real_rows(&[vec![h, h], vec![h, -h]]).unwrap(),
            GateKind::X | GateKind::Cnot | GateKind::Toffoli => {
                Matrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap()
            }
            GateKind::Y => Matrix::from_rows(&[
                vec![ZERO, C64::new(0.0, -1.0)],
                vec![C64::new(0.0, 1.0), ZERO],
            ])
            .unwrap(),
            GateKind::Z => Matrix::diagonal(&[ONE, -ONE]),
            GateKind::SqrtNot => Matrix::from_real_rows(&[vec![h, -h], vec![h, h]]).unwrap(),
            GateKind::Fredkin => {
                let mut m = Matrix::zeros(4);
                m[(0, 0)] = ONE;
                m[(1, 2)] = ONE;
                m[(2, 1)] = ONE;
                m[(3, 3)] = ONE;
                m
            }
            GateKind::Phase(t) => Matrix::diagonal(&[ONE, C64::from_polar(1.0, *t)]),
            GateKind::Ry(t) => ry_matrix(*t),
            GateKind::Rz(t) => Matrix::diagonal(&rz_diag(*t)),
            GateKind::U3(a, b, c) => u3_matrix(*a, *b, *c),
            GateKind::ControlledUnitary(u) | GateKind::GenericUnitary(u) => u.matrix().clone(),
            GateKind::MultiplexedRy(_) | GateKind::MultiplexedRz(_) => return None,
        };
        Some(m)
    }

    /// Full matrix over the local qubit order `[targets…, controls…]`.
    pub fn full_matrix(&self) -> Matrix {
        let k = self.targets.len() + self.controls.len();
        let dim = 1usize << k;
        let mut out = Matrix::zeros(dim);
        let local_targets: Vec<usize> = (0..self.targets.len()).collect();
        let local_controls: Vec<usize> = (self.targets.len()..k).collect();
        let local = Gate { kind: self.kind.clone(), targets: local_targets, controls: local_controls };
        for col in 0..dim {
            let mut amps = vec![ZERO; dim];
            amps[col] = ONE;
            local.apply_to(&mut amps);
            for (r, a) in amps.into_iter().enumerate() {
                out[(r, col)] = a;
            }
        }
        out
    }

    /// Inverse gate.
    pub fn inverse(&self) -> Gate {
        let kind = match &self.kind {
            GateKind::Phase(t) => GateKind::Phase(-t),
            GateKind::Ry(t) => GateKind::Ry(-t),
            GateKind::Rz(t) => GateKind::Rz(-t),
            GateKind::U3(a, b, c) => GateKind::U3(-a, -c, -b),
            GateKind::SqrtNot => {
                GateKind::GenericUnitary(UnitaryMatrix::new_unchecked(self.target_matrix().unwrap().adjoint()))
            }
            GateKind::ControlledUnitary(u) => GateKind::ControlledUnitary(u.adjoint()),
            GateKind::GenericUnitary(u) => GateKind::GenericUnitary(u.adjoint()),
            GateKind::MultiplexedRy(a) => GateKind::MultiplexedRy(a.iter().map(|x| -x).collect()),
            GateKind::MultiplexedRz(a) => GateKind::MultiplexedRz(a.iter().map(|x| -x).collect()),
            k => k.clone(),
        };
        Gate { kind, targets: self.targets.clone(), controls: self.controls.clone() }
    }

    pub(crate) fn apply_to(&self, amps: &mut [C64]) {
        match &self.kind {
            GateKind::MultiplexedRy(angles) | GateKind::MultiplexedRz(angles) => {
                let is_ry = matches!(self.kind, GateKind::MultiplexedRy(_));
                let t = self.targets[0];
                for i in 0..amps.len() {
                    if i >> t & 1 == 1 {
                        continue;
                    }
                    let sel = self
                        .controls
                        .iter()
                        .enumerate()
                        .fold(0usize, |acc, (j, &c)| acc | ((i >> c & 1) << j));
                    let (a0, a1) = (amps[i], amps[i | 1 << t]);
                    if is_ry {
                        let (s, c) = (angles[sel] / 2.0).sin_cos();
                        amps[i] = a0 * c - a1 * s;
                        amps[i | 1 << t] = a0 * s + a1 * c;
                    } else {
                        let d = rz_diag(angles[sel]);
                        amps[i] = a0 * d[0];
                        amps[i | 1 << t] = a1 * d[1];
                    }
                }
            }
            GateKind::Z | GateKind::Phase(_) | GateKind::Rz(_) => {
                let m = self.target_matrix().unwrap();
                apply_diagonal(amps, &[m[(0, 0)], m[(1, 1)]], &self.targets, &self.controls);
            }
            _ => {
                let m = self.target_matrix().unwrap();
                apply_matrix(amps, &m, &self.targets, &self.controls);
            }
        }
    }
}

impl Serialize for Gate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let payload = match &self.kind {
            GateKind::ControlledUnitary(u) | GateKind::GenericUnitary(u) => Some(u.matrix()),
            _ => None,
        };
        let mut st = s.serialize_struct("Gate", if payload.is_some() { 5 } else { 4 })?;
        st.serialize_field("kind", self.kind.name())?;
        st.serialize_field("targets", &self.targets)?;
        st.serialize_field("controls", &self.controls)?;
        st.serialize_field("params", &self.kind.params())?;
        if let Some(m) = payload {
            st.serialize_field("matrix", m)?;
        }
        st.end()
    }
}

/// Ordered gate list on a fixed register. Serializes as the JSON gate list.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl Serialize for Circuit {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.gates.serialize(s)
    }
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self { n_qubits, gates: Vec::new() }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Circuit width: the number of qubits in the register.
    pub fn width(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<&mut Self> {
        check_targets(self.n_qubits, &gate.targets, &gate.controls)?;
        self.gates.push(gate);
        Ok(self)
    }

    pub fn extend(&mut self, other: &Circuit) -> Result<&mut Self> {
        if other.n_qubits > self.n_qubits {
            return Err(Error::Dimension(format!(
                "cannot append a {}-qubit circuit to a {}-qubit one",
                other.n_qubits, self.n_qubits
            )));
        }
        self.gates.extend(other.gates.iter().cloned());
        Ok(self)
    }

    /// Append `other` with its qubit `i` mapped to `layout[i]`.
    pub fn extend_mapped(&mut self, other: &Circuit, layout: &[usize]) -> Result<&mut Self> {
        if layout.len() != other.n_qubits {
            return Err(Error::Dimension("layout length differs from circuit width".into()));
        }
        for g in &other.gates {
            let mapped = Gate {
                kind: g.kind.clone(),
                targets: g.targets.iter().map(|&q| layout[q]).collect(),
                controls: g.controls.iter().map(|&q| layout[q]).collect(),
            };
            self.push(mapped)?;
        }
        Ok(self)
    }

    pub fn inverse(&self) -> Circuit {
        Circuit { n_qubits: self.n_qubits, gates: self.gates.iter().rev().map(Gate::inverse).collect() }
    }

    /// Number of layers when gates on disjoint qubits share a layer and each
    /// qubit's gate order is preserved (as-soon-as-possible layering).
    pub fn depth(&self) -> usize {
        let mut level = vec![0usize; self.n_qubits];
        let mut depth = 0;
        for g in &self.gates {
            let l = g.qubits().map(|q| level[q]).max().unwrap_or(0) + 1;
            for q in g.qubits() {
                level[q] = l;
            }
            depth = depth.max(l);
        }
        depth
    }

    /// Count of gates per kind name.
    pub fn gate_counts(&self) -> std::collections::BTreeMap<&'static str, usize> {
        let mut m = std::collections::BTreeMap::new();
        for g in &self.gates {
            *m.entry(g.kind.name()).or_insert(0) += 1;
        }
        m
    }

    /// Run the circuit on `initial`.
    pub fn simulate(&self, initial: &StateVector) -> Result<StateVector> {
        if initial.n_qubits() != self.n_qubits {
            return Err(Error::Dimension(format!(
                "{}-qubit state for a {}-qubit circuit",
                initial.n_qubits(),
                self.n_qubits
            )));
        }
        let mut amps = initial.amplitudes().to_vec();
        for g in &self.gates {
            g.apply_to(&mut amps);
        }
        Ok(StateVector::from_raw_unchecked(self.n_qubits, amps))
    }

    /// Dense unitary of the whole circuit (product of embedded gates in
    /// application order).
    pub fn to_unitary(&self) -> Result<UnitaryMatrix> {
        if self.n_qubits > MAX_UNITARY_QUBITS {
            return Err(Error::Size(format!(
                "{} qubits exceeds the dense unitary limit of {MAX_UNITARY_QUBITS}",
                self.n_qubits
            )));
        }
        let dim = 1usize << self.n_qubits;
        let mut u = Matrix::zeros(dim);
        let mut amps = vec![ZERO; dim];
        for col in 0..dim {
            amps.iter_mut().for_each(|a| *a = ZERO);
            amps[col] = ONE;
            for g in &self.gates {
                g.apply_to(&mut amps);
            }
            for (r, a) in amps.iter().enumerate() {
                u[(r, col)] = *a;
            }
        }
        Ok(UnitaryMatrix::new_unchecked(u))
    }
}
