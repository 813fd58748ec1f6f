//! Hermitian matrices: construction, random generation, Jacobi
//! eigendecomposition, conditioning, the classical reference solve and exact
//! time evolution `e^{iAt}`.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, random_unitary, vec_norm, Matrix, UnitaryMatrix, C64, ZERO};
use crate::rng::rng_from_seed;

/// Absolute hermiticity tolerance, scaled by `max(1, max|A|)`.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Eigenvalues with magnitude at or below this are treated as zero.
pub const SINGULAR_TOL: f64 = 1e-12;
/// Jacobi stops once the off-diagonal Frobenius norm is below this (scaled).
pub const JACOBI_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Matrix", into = "Matrix")]
pub struct HermitianMatrix(Matrix);

impl HermitianMatrix {
    pub fn new(m: Matrix) -> Result<Self> {
        let err = m.hermiticity_error();
        if !(err <= HERMITIAN_TOL * m.max_abs().max(1.0)) {
            return Err(Error::Hermiticity(err));
        }
        Ok(Self(m))
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(Matrix::from_real_rows(rows)?)
    }

    pub fn diagonal(entries: &[f64]) -> Self {
        let d: Vec<C64> = entries.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self(Matrix::diagonal(&d))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn is_diagonal(&self) -> bool {
        self.0.is_diagonal(crate::circuit::DIAGONAL_TOL)
    }

    /// Fraction of entries that are nonzero.
    pub fn density(&self) -> f64 {
        let nz = self.0.as_slice().iter().filter(|z| **z != ZERO).count();
        nz as f64 / (self.dim() * self.dim()) as f64
    }

    /// Gershgorin enclosure `[lo, hi]` of the (real) spectrum.
    pub fn gershgorin_bounds(&self) -> (f64, f64) {
        let n = self.dim();
        (0..n).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), i| {
            let radius: f64 = (0..n).filter(|&j| j != i).map(|j| self.0[(i, j)].norm()).sum();
            let center = self.0[(i, i)].re;
            (lo.min(center - radius), hi.max(center + radius))
        })
    }
}

impl TryFrom<Matrix> for HermitianMatrix {
    type Error = Error;
    fn try_from(m: Matrix) -> Result<Self> {
        Self::new(m)
    }
}

impl From<HermitianMatrix> for Matrix {
    fn from(h: HermitianMatrix) -> Matrix {
        h.0
    }
}

/// `B = A + A†`, Hermitian to the last bit.
pub fn hermitize(a: &Matrix) -> HermitianMatrix {
    HermitianMatrix(a.add(&a.adjoint()))
}

/// [`hermitize`] on a row list, rejecting ragged or non-square input.
pub fn hermitize_rows(rows: &[Vec<C64>]) -> Result<HermitianMatrix> {
    Ok(hermitize(&Matrix::from_rows(rows)?))
}

/// Parameters of a random sparse Hermitian draw.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparsitySpec {
    /// Target fraction of nonzero entries in the Hermitian result.
    pub density: f64,
    pub dim: usize,
    pub seed: u64,
}

fn nonzero_uniform(rng: &mut impl Rng) -> f64 {
    loop {
        let x: f64 = rng.random_range(-1.0..=1.0);
        if x != 0.0 {
            return x;
        }
    }
}

/// Random sparse Hermitian matrix whose nonzero fraction is as close to
/// `spec.density` as the symmetric structure allows (within one entry of the rounded target).
///
/// The structural pattern is drawn on the upper triangle: slots are visited
/// in a seeded random order and kept while they fit the target count
/// (a diagonal slot fills one entry, an off-diagonal slot fills two). `A`
/// carries uniform `[-1, 1]` real and imaginary parts on the kept slots
/// (real on the diagonal) and the result is `(A + A†) / 2`.
pub fn random_sparse_hermitian(spec: &SparsitySpec) -> Result<HermitianMatrix> {
    if !(0.0..=1.0).contains(&spec.density) {
        return Err(Error::Argument(format!("density {} outside [0, 1]", spec.density)));
    }
    let n = spec.dim;
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::Dimension(format!("dimension {n} is not a power of two")));
    }
    let mut rng = rng_from_seed(spec.seed);
    let target = (spec.density * (n * n) as f64).round() as usize;
    let mut slots: Vec<(usize, usize)> = (0..n).flat_map(|j| (j..n).map(move |k| (j, k))).collect();
    slots.shuffle(&mut rng);
    let mut filled = 0;
    let mut a = Matrix::zeros(n);
    for (j, k) in slots {
        let weight = if j == k { 1 } else { 2 };
        if filled + weight > target {
            continue;
        }
        filled += weight;
        a[(j, k)] = if j == k {
            C64::new(nonzero_uniform(&mut rng), 0.0)
        } else {
            C64::new(nonzero_uniform(&mut rng), nonzero_uniform(&mut rng))
        };
    }
    let b = hermitize(&a).0.scale(C64::new(0.5, 0.0));
    Ok(HermitianMatrix(b))
}

/// Diagonal benchmark matrix with entries uniform on `[0.5, 2.5]`; with
/// `sign_mixed` each entry's sign is also drawn at random.
pub fn random_diagonal(dim: usize, seed: u64, sign_mixed: bool) -> HermitianMatrix {
    let mut rng = rng_from_seed(seed);
    let d: Vec<f64> = (0..dim)
        .map(|_| {
            let v: f64 = rng.random_range(0.5..=2.5);
            if sign_mixed && rng.random::<bool>() { -v } else { v }
        })
        .collect();
    HermitianMatrix::diagonal(&d)
}

/// Dense Hermitian matrix with eigenvalues uniform on `[0.5, 2.5]` in a
/// random eigenbasis: the non-diagonal counterpart of [`random_diagonal`].
pub fn random_dense_positive(dim: usize, seed: u64) -> HermitianMatrix {
    let mut rng = rng_from_seed(seed);
    let eig: Vec<f64> = (0..dim).map(|_| rng.random_range(0.5..=2.5)).collect();
    let v = random_unitary(dim, rng.random());
    let d = Matrix::diagonal(&eig.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>());
    let m = &(v.matrix() * &d) * &v.adjoint();
    // exact hermiticity
    HermitianMatrix(m.add(&m.adjoint()).scale(C64::new(0.5, 0.0)))
}

/// Eigenvalues (ascending) and orthonormal eigenvectors (columns).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Matrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, j: usize) -> Vec<C64> {
        self.eigenvectors.column(j)
    }

    /// `U Λ U†`.
    pub fn reconstruct(&self) -> Matrix {
        self.spectral_map(|l| C64::new(l, 0.0))
    }

    /// `Σ_j f(λ_j) u_j u_j†`.
    pub fn spectral_map(&self, f: impl Fn(f64) -> C64) -> Matrix {
        let d: Vec<C64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        &(&self.eigenvectors * &Matrix::diagonal(&d)) * &self.eigenvectors.adjoint()
    }

    pub fn max_abs_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, l| m.max(l.abs()))
    }

    pub fn min_abs_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().fold(f64::INFINITY, |m, l| m.min(l.abs()))
    }

    pub fn condition_number(&self) -> Result<f64> {
        condition_number(self)
    }

    /// `e^{iAt} = Σ_j e^{iλ_j t} u_j u_j†`.
    pub fn evolution(&self, t: f64) -> UnitaryMatrix {
        UnitaryMatrix::new_unchecked(self.spectral_map(|l| C64::from_polar(1.0, l * t)))
    }
}

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix.
pub fn eigendecompose(m: &HermitianMatrix) -> SpectralDecomposition {
    let n = m.dim();
    let mut a = m.0.clone();
    let mut v = Matrix::identity(n);
    let scale = a.max_abs().max(1.0);
    for i in 0..n {
        a[(i, i)] = C64::new(a[(i, i)].re, 0.0);
    }
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| (0..n).filter(move |&q| q != p).map(move |q| (p, q)))
            .map(|(p, q)| a[(p, q)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= JACOBI_TOL * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let b = a[(p, q)];
                let mag = b.norm();
                if mag <= f64::MIN_POSITIVE {
                    continue;
                }
                let phase = b / mag; // e^{iφ}
                let theta = 0.5 * (2.0 * mag).atan2(a[(q, q)].re - a[(p, p)].re);
                let (s, c) = theta.sin_cos();
                // J = diag(1, e^{-iφ}) · [[c, s], [-s, c]] on the (p, q) plane
                let jpp = C64::new(c, 0.0);
                let jpq = C64::new(s, 0.0);
                let jqp = -phase.conj() * s;
                let jqq = phase.conj() * c;
                rotate_columns(&mut a, p, q, jpp, jpq, jqp, jqq);
                rotate_rows(&mut a, p, q, jpp, jpq, jqp, jqq);
                rotate_columns(&mut v, p, q, jpp, jpq, jqp, jqq);
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut eigenvectors = Matrix::zeros(n);
    for (k, &src) in order.iter().enumerate() {
        let col = v.column(src);
        // fix the phase: largest-magnitude component real positive
        let pivot = col
            .iter()
            .copied()
            .max_by(|x, y| x.norm().total_cmp(&y.norm()))
            .unwrap_or(ZERO);
        let ph = if pivot.norm() > 0.0 { pivot.conj() / pivot.norm() } else { C64::new(1.0, 0.0) };
        for (r, z) in col.into_iter().enumerate() {
            eigenvectors[(r, k)] = z * ph;
        }
    }
    SpectralDecomposition { eigenvalues, eigenvectors }
}

fn rotate_columns(m: &mut Matrix, p: usize, q: usize, jpp: C64, jpq: C64, jqp: C64, jqq: C64) {
    for r in 0..m.dim() {
        let (x, y) = (m[(r, p)], m[(r, q)]);
        m[(r, p)] = x * jpp + y * jqp;
        m[(r, q)] = x * jpq + y * jqq;
    }
}

fn rotate_rows(m: &mut Matrix, p: usize, q: usize, jpp: C64, jpq: C64, jqp: C64, jqq: C64) {
    for c in 0..m.dim() {
        let (x, y) = (m[(p, c)], m[(q, c)]);
        m[(p, c)] = jpp.conj() * x + jqp.conj() * y;
        m[(q, c)] = jpq.conj() * x + jqq.conj() * y;
    }
}

/// `κ = max|λ| / min|λ|`.
pub fn condition_number(d: &SpectralDecomposition) -> Result<f64> {
    let min = d.min_abs_eigenvalue();
    if min <= SINGULAR_TOL {
        return Err(Error::Singular(format!("eigenvalue of magnitude {min:.3e}")));
    }
    Ok(d.max_abs_eigenvalue() / min)
}

/// Normalized solution of `A x = b` by pivoted Gaussian elimination.
pub fn classical_solve(m: &HermitianMatrix, b: &[C64]) -> Result<Vec<C64>> {
    if b.len() != m.dim() {
        return Err(Error::Dimension(format!("rhs length {} for a {}x{} matrix", b.len(), m.dim(), m.dim())));
    }
    if vec_norm(b) == 0.0 {
        return Err(Error::ZeroVector);
    }
    let x = linalg::solve(&m.0, b)?;
    let norm = vec_norm(&x);
    Ok(x.into_iter().map(|z| z / norm).collect())
}

/// Exact `e^{iAt}` via the eigendecomposition.
pub fn evolution_unitary(m: &HermitianMatrix, t: f64) -> UnitaryMatrix {
    eigendecompose(m).evolution(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_complex(dim: usize, seed: u64) -> Matrix {
        let mut rng = rng_from_seed(seed);
        Matrix::from_fn(dim, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
    }

    fn symmetric_2x2() -> HermitianMatrix {
        HermitianMatrix::from_real_rows(&[vec![1.5, 0.5], vec![0.5, 1.5]]).unwrap()
    }

    #[test]
    fn hermitize_examples() {
        let a = Matrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        let b = hermitize(&a);
        assert_eq!(b.matrix(), &Matrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap());

        let sym = Matrix::from_real_rows(&[vec![1.0, 2.0], vec![2.0, -3.0]]).unwrap();
        assert_eq!(hermitize(&sym).matrix(), &sym.scale(c(2.0, 0.0)));

        let b = hermitize(&random_complex(4, 42));
        for j in 0..4 {
            for k in 0..4 {
                assert_eq!(b.matrix()[(j, k)], b.matrix()[(k, j)].conj());
            }
        }
        assert!(matches!(
            hermitize_rows(&[vec![c(1.0, 0.0), c(2.0, 0.0)]]),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn hermitize_always_hermitian() {
        for seed in 0..1000 {
            let dim = [2, 3, 4, 8][seed as usize % 4];
            let b = hermitize(&random_complex(dim, seed));
            assert_eq!(b.matrix().hermiticity_error(), 0.0);
        }
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = Matrix::from_real_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(HermitianMatrix::new(m), Err(Error::Hermiticity(_))));
    }

    #[test]
    fn sparse_generation_examples() {
        let z = random_sparse_hermitian(&SparsitySpec { density: 0.0, dim: 4, seed: 1 }).unwrap();
        assert_eq!(z.matrix(), &Matrix::zeros(4));
        assert!(condition_number(&eigendecompose(&z)).is_err());

        let full = random_sparse_hermitian(&SparsitySpec { density: 1.0, dim: 2, seed: 9 }).unwrap();
        assert!(full.matrix().as_slice().iter().all(|z| *z != ZERO));

        let half = random_sparse_hermitian(&SparsitySpec { density: 0.5, dim: 8, seed: 42 }).unwrap();
        let d = half.density();
        assert!((0.4..=0.6).contains(&d), "achieved density {d}");
        assert!(half.matrix().hermiticity_error() <= 1e-12);

        assert!(matches!(
            random_sparse_hermitian(&SparsitySpec { density: 1.5, dim: 2, seed: 0 }),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn sparse_generation_hits_density_across_grid() {
        for dim in [2, 4, 8] {
            for step in 0..=10 {
                let density = step as f64 / 10.0;
                for seed in 0..5 {
                    let m = random_sparse_hermitian(&SparsitySpec { density, dim, seed }).unwrap();
                    let achieved = m.density();
                    // one entry from the rounded target
                    assert!((achieved - density).abs() <= 1.5 / (dim * dim) as f64 + 1e-12);
                    if dim >= 4 {
                        assert!((achieved - density).abs() <= 0.1);
                    }
                }
            }
        }
    }

    #[test]
    fn sparse_generation_is_deterministic() {
        let spec = SparsitySpec { density: 0.7, dim: 4, seed: 3 };
        assert_eq!(random_sparse_hermitian(&spec).unwrap(), random_sparse_hermitian(&spec).unwrap());
    }

    #[test]
    fn eigen_examples() {
        let d = eigendecompose(&HermitianMatrix::diagonal(&[1.0, 2.0]));
        assert_eq!(d.eigenvalues, vec![1.0, 2.0]);
        assert_eq!(d.eigenvectors, Matrix::identity(2));

        let d = eigendecompose(&symmetric_2x2());
        assert!((d.eigenvalues[0] - 1.0).abs() < 1e-12);
        assert!((d.eigenvalues[1] - 2.0).abs() < 1e-12);
        let h = FRAC_1_SQRT_2;
        let u1 = d.eigenvector(0);
        let u2 = d.eigenvector(1);
        // |−⟩ and |+⟩ up to phase
        assert!((linalg::inner(&u1, &[c(h, 0.0), c(-h, 0.0)]).norm() - 1.0).abs() < 1e-12);
        assert!((linalg::inner(&u2, &[c(h, 0.0), c(h, 0.0)]).norm() - 1.0).abs() < 1e-12);
        assert!(d.reconstruct().max_abs_diff(symmetric_2x2().matrix()) < 1e-12);

        let z = eigendecompose(&HermitianMatrix::diagonal(&[1.0, -1.0]));
        assert_eq!(z.eigenvalues, vec![-1.0, 1.0]);
    }

    #[test]
    fn eigen_reconstruction_on_random_matrices() {
        for seed in 0..500u64 {
            let dim = [2, 4, 8][seed as usize % 3];
            let m = hermitize(&random_complex(dim, 10_000 + seed));
            let d = eigendecompose(&m);
            let bound = 1e-8 * m.matrix().max_abs().max(1.0);
            assert!(d.reconstruct().max_abs_diff(m.matrix()) <= bound, "seed {seed}");
            assert!(d.eigenvectors.unitarity_error() <= 1e-9);
            assert!(d.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
            for j in 0..dim {
                let u = d.eigenvector(j);
                let au = m.matrix().mul_vec(&u);
                let err = au.iter().zip(&u).map(|(x, y)| (x - y * d.eigenvalues[j]).norm()).fold(0.0, f64::max);
                assert!(err <= bound);
            }
        }
    }

    #[test]
    fn jacobi_handles_larger_real_symmetric() {
        let mut rng = rng_from_seed(5);
        let n = 30;
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let x = rng.random_range(-1.0..1.0);
                m[(i, j)] = c(x, 0.0);
                m[(j, i)] = c(x, 0.0);
            }
        }
        let h = HermitianMatrix::new(m).unwrap();
        let d = eigendecompose(&h);
        assert!(d.reconstruct().max_abs_diff(h.matrix()) < 1e-9);
    }

    #[test]
    fn condition_number_examples() {
        let d = eigendecompose(&HermitianMatrix::diagonal(&[1.0, 2.0]));
        assert!((condition_number(&d).unwrap() - 2.0).abs() < 1e-15);
        let d = eigendecompose(&HermitianMatrix::diagonal(&[1.0, 1.0]));
        assert_eq!(condition_number(&d).unwrap(), 1.0);
        let d = eigendecompose(&HermitianMatrix::diagonal(&[0.1, 1.0, -10.0, 2.0]));
        assert!((condition_number(&d).unwrap() - 100.0).abs() < 1e-9);
        let d = eigendecompose(&HermitianMatrix::diagonal(&[0.0, 1.0]));
        assert!(matches!(condition_number(&d), Err(Error::Singular(_))));
    }

    fn assert_vec_close(a: &[C64], b: &[f64], tol: f64) {
        for (x, y) in a.iter().zip(b) {
            assert!((x - c(*y, 0.0)).norm() < tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn classical_solve_examples() {
        let x = classical_solve(&HermitianMatrix::diagonal(&[1.0, 1.0]), &[c(0.6, 0.0), c(0.8, 0.0)]).unwrap();
        assert_vec_close(&x, &[0.6, 0.8], 1e-15);

        // A⁻¹(1,0) = (0.75, -0.25), normalized by √0.625
        let x = classical_solve(&symmetric_2x2(), &[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let n = 0.625f64.sqrt();
        assert_vec_close(&x, &[0.75 / n, -0.25 / n], 1e-12);
        assert_vec_close(&x, &[0.9487, -0.3162], 1e-4);

        let h = FRAC_1_SQRT_2;
        let x = classical_solve(&HermitianMatrix::diagonal(&[1.0, 2.0]), &[c(h, 0.0), c(h, 0.0)]).unwrap();
        let n = 1.25f64.sqrt();
        assert_vec_close(&x, &[1.0 / n, 0.5 / n], 1e-12);
        assert_vec_close(&x, &[0.8944, 0.4472], 1e-4);

        let z = HermitianMatrix::diagonal(&[1.0, 0.0]);
        assert!(matches!(classical_solve(&z, &[c(1.0, 0.0), c(1.0, 0.0)]), Err(Error::Singular(_))));
        assert!(matches!(classical_solve(&symmetric_2x2(), &[ZERO, ZERO]), Err(Error::ZeroVector)));
    }

    #[test]
    fn classical_solve_matches_spectral_solution() {
        for seed in 0..100u64 {
            let dim = [2, 4, 8][seed as usize % 3];
            let m = hermitize(&random_complex(dim, 20_000 + seed));
            let b = random_complex(dim, 30_000 + seed).column(0);
            let d = eigendecompose(&m);
            if d.min_abs_eigenvalue() < 1e-3 {
                continue;
            }
            // x = Σ (β_j / λ_j) u_j with β_j = ⟨u_j|b⟩
            let mut x = vec![ZERO; dim];
            for j in 0..dim {
                let u = d.eigenvector(j);
                let beta = linalg::inner(&u, &b);
                for (xi, ui) in x.iter_mut().zip(&u) {
                    *xi += ui * beta / d.eigenvalues[j];
                }
            }
            let n = vec_norm(&x);
            let direct = classical_solve(&m, &b).unwrap();
            for (p, q) in direct.iter().zip(&x) {
                assert!((p - q / n).norm() < 1e-8, "seed {seed}");
            }
        }
    }

    #[test]
    fn evolution_examples() {
        let u = evolution_unitary(&symmetric_2x2(), 0.0);
        assert!(u.max_abs_diff(&Matrix::identity(2)) < 1e-15);

        let u = evolution_unitary(&HermitianMatrix::diagonal(&[1.0, -1.0]), PI);
        assert!(u.max_abs_diff(&Matrix::identity(2).scale(c(-1.0, 0.0))) < 1e-12);

        let u = evolution_unitary(&HermitianMatrix::diagonal(&[1.0, 2.0]), PI);
        assert!(u.max_abs_diff(&Matrix::diagonal(&[c(-1.0, 0.0), c(1.0, 0.0)])) < 1e-12);
    }

    #[test]
    fn evolution_group_law() {
        for seed in 0..100u64 {
            let m = hermitize(&random_complex(4, 40_000 + seed));
            let mut rng = rng_from_seed(seed);
            let (t1, t2) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let d = eigendecompose(&m);
            let u1 = d.evolution(t1);
            let u2 = d.evolution(t2);
            assert!(u1.unitarity_error() < 1e-9);
            let prod = u1.matrix() * u2.matrix();
            assert!(prod.max_abs_diff(d.evolution(t1 + t2).matrix()) < 1e-8);
        }
    }

    #[test]
    fn benchmark_generators() {
        let d = random_diagonal(4, 1, false);
        assert!(d.is_diagonal());
        let e = eigendecompose(&d);
        assert!(e.eigenvalues.iter().all(|&l| (0.5..=2.5).contains(&l)));
        let p = random_dense_positive(4, 1);
        assert!(!p.is_diagonal());
        let e = eigendecompose(&p);
        assert!(e.eigenvalues.iter().all(|&l| (0.5 - 1e-9..=2.5 + 1e-9).contains(&l)));
        let (lo, hi) = p.gershgorin_bounds();
        assert!(lo <= e.eigenvalues[0] && hi >= e.eigenvalues[3]);
    }

    #[test]
    fn matrix_json_round_trip() {
        let m = symmetric_2x2();
        let s = serde_json::to_string(&m).unwrap();
        assert!(s.starts_with(r#"{"dim":2,"entries":[[1.5,0.0],[0.5,0.0]"#));
        let back: HermitianMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        let bad = r#"{"dim":2,"entries":[[1.0,0.0],[2.0,0.0],[0.0,0.0],[1.0,0.0]]}"#;
        assert!(serde_json::from_str::<HermitianMatrix>(bad).is_err());
    }
}
