//! Dense statevector quantum simulation with the pieces needed to benchmark
//! HHL linear-system solving and quantum-kernel least-squares SVMs.
//!
//! Modules, bottom up:
//!
//! - [`state`]: statevectors, unitary application, Born-rule probabilities,
//!   seeded sampling, fidelity.
//! - [`circuit`]: gate IR, width/depth, unitary extraction, and synthesis to
//!   `{U3, Phase, CNOT}` for depth accounting.
//! - [`spectral`]: Hermitian matrices, Jacobi eigensolver, condition number,
//!   classical solve, `e^{iAt}`.
//! - [`hhl`]: QFT, phase estimation, eigenvalue inversion and the full HHL run.
//! - [`qsvm`]: feature maps, exact and shot-sampled kernels, LS-SVM.
//! - [`dataprep`]: CSV datasets, stratified splits, standardize/PCA/min-max.
//!
//! Qubit 0 is always the least significant bit of a basis index.

pub mod circuit;
pub mod dataprep;
pub mod error;
pub mod hhl;
pub mod linalg;
pub mod qsvm;
pub mod rng;
pub mod spectral;
pub mod state;

pub use error::{Error, Result};
pub use linalg::{Matrix, UnitaryMatrix, C64};
pub use state::{state_fidelity, Histogram, StateVector};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
