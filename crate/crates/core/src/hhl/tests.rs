use std::f64::consts::{FRAC_1_SQRT_2, PI};

use rand::Rng;

use super::*;
use crate::linalg::{inner, random_unitary};
use crate::rng::rng_from_seed;
use crate::spectral::{random_diagonal, random_sparse_hermitian, SparsitySpec};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn real(v: &[f64]) -> Vec<C64> {
    v.iter().map(|&x| c(x, 0.0)).collect()
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 { v[n / 2] } else { 0.5 * (v[n / 2 - 1] + v[n / 2]) }
}

/// `|(1/T) Σ_τ e^{2πiτ(φ - k/T)}|²`, the textbook phase-estimation outcome law.
fn fejer(phi: f64, k: usize, t: usize) -> C64 {
    (0..t)
        .map(|tau| C64::from_polar(1.0, 2.0 * PI * tau as f64 * (phi - k as f64 / t as f64)))
        .sum::<C64>()
        / t as f64
}

fn dft(n: usize) -> Matrix {
    let dim = 1usize << n;
    Matrix::from_fn(dim, |j, k| C64::from_polar(1.0 / (dim as f64).sqrt(), 2.0 * PI * (j * k) as f64 / dim as f64))
}

#[test]
fn qft_matches_dft() {
    for n in 1..=4 {
        let u = qft_circuit(n).to_unitary().unwrap();
        assert!(u.max_abs_diff(&dft(n)) < 1e-10, "n = {n}");
    }
    let h = FRAC_1_SQRT_2;
    let one = qft_circuit(1).to_unitary().unwrap();
    assert!(one.max_abs_diff(&Matrix::from_real_rows(&[vec![h, h], vec![h, -h]]).unwrap()) < 1e-15);
    let two = qft_circuit(2).to_unitary().unwrap();
    for k in 0..4 {
        assert!((two.matrix()[(0, k)] - c(0.5, 0.0)).norm() < 1e-12);
    }
}

#[test]
fn qft_then_inverse_is_identity() {
    for n in 1..=4 {
        let mut circ = qft_circuit(n);
        circ.extend(&qft_circuit(n).inverse()).unwrap();
        let u = circ.to_unitary().unwrap();
        assert!(u.max_abs_diff(&Matrix::identity(1 << n)) < 1e-10);
    }
}

fn phase_gate(phi: f64) -> UnitaryMatrix {
    UnitaryMatrix::new(Matrix::diagonal(&[ONE, C64::from_polar(1.0, 2.0 * PI * phi)])).unwrap()
}

#[test]
fn qpe_exact_phases() {
    let eig = StateVector::basis(1, 1).unwrap();
    for n in 2..=4 {
        let t = 1usize << n;
        for k in 0..t {
            let dist = phase_estimation(&phase_gate(k as f64 / t as f64), &eig, n).unwrap();
            assert!(dist[k] >= 1.0 - 1e-9, "n = {n}, k = {k}: {}", dist[k]);
        }
    }
    let half = phase_estimation(&phase_gate(0.5), &eig, 3).unwrap();
    assert!(half[0b100] > 1.0 - 1e-12);
    let zero = phase_estimation(&UnitaryMatrix::identity(2), &eig, 3).unwrap();
    assert!(zero[0] > 1.0 - 1e-12);
}

#[test]
fn qpe_inexact_phase_matches_fejer_law() {
    let eig = StateVector::basis(1, 1).unwrap();
    let dist = phase_estimation(&phase_gate(1.0 / 3.0), &eig, 3).unwrap();
    let modal = (0..8).max_by(|&a, &b| dist[a].total_cmp(&dist[b])).unwrap();
    assert!(modal == 0b010 || modal == 0b011);
    assert!(dist[modal] >= 0.4);
    let mut rng = rng_from_seed(8);
    for _ in 0..20 {
        let phi: f64 = rng.random();
        let n = rng.random_range(1..=5);
        let dist = phase_estimation(&phase_gate(phi), &eig, n).unwrap();
        for (k, p) in dist.iter().enumerate() {
            assert!((p - fejer(phi, k, 1 << n).norm_sqr()).abs() < 1e-10);
        }
    }
}

#[test]
fn decoding_modes() {
    let u = ClockDecoding { n_clock: 3, t0: PI / 4.0, mode: SignMode::Unsigned };
    assert!((u.resolution() - 1.0).abs() < 1e-15);
    assert_eq!(u.decode(7), 7.0);
    let s = ClockDecoding { mode: SignMode::TwosComplement, ..u };
    assert_eq!(s.decode(3), 3.0);
    assert_eq!(s.decode(4), -4.0);
    assert_eq!(s.decode(7), -1.0);
    assert!(check_t0(PI / 4.0, 7.5, &u).is_ok());
    assert!(matches!(check_t0(PI / 4.0, 8.0, &u), Err(Error::Config(_))));
    assert!(matches!(check_t0(PI / 4.0, 4.0, &s), Err(Error::Config(_))));
    assert!(matches!(default_t0(1.0, 1, SignMode::TwosComplement), Err(Error::Config(_))));
}

fn unit_decoding() -> ClockDecoding {
    // n = 2, λ̃ = k
    ClockDecoding { n_clock: 2, t0: PI / 2.0, mode: SignMode::Unsigned }
}

#[test]
fn inversion_rotation_examples() {
    let dec = unit_decoding();
    let angles = inversion_angles(&dec, 2.0, 2).unwrap();
    assert_eq!(angles[0], None);
    assert_eq!(angles[1], None);
    assert!((angles[2].unwrap() - PI).abs() < 1e-15); // C = λ̃
    let half = angles[3].unwrap(); // C/λ̃ = 2/3
    assert!(((half / 2.0).sin() - 2.0 / 3.0).abs() < 1e-15);

    // C = λ̃/2 on a single clock value
    let angles = inversion_angles(&dec, 1.0, 1).unwrap();
    let gate = eigenvalue_inversion(&angles, &[0, 1], 2).unwrap();
    let mut circ = Circuit::new(3);
    circ.push(gate).unwrap();
    let out = circ.simulate(&StateVector::basis(3, 2).unwrap()).unwrap();
    assert!((out.amplitudes()[2] - c(3f64.sqrt() / 2.0, 0.0)).norm() < 1e-15);
    assert!((out.amplitudes()[6] - c(0.5, 0.0)).norm() < 1e-15);

    assert!(matches!(inversion_angles(&dec, 1.5, 1), Err(Error::Config(_))));
}

#[test]
fn inversion_on_two_eigenvalue_superposition() {
    // clock in β1|1⟩ + β2|2⟩, λ̃ = (1, 2), C = 1
    let (b1, b2) = (0.6, 0.8);
    let mut amps = vec![ZERO; 8];
    amps[1] = c(b1, 0.0);
    amps[2] = c(b2, 0.0);
    let angles = inversion_angles(&unit_decoding(), 1.0, 1).unwrap();
    let mut circ = Circuit::new(3);
    circ.push(eigenvalue_inversion(&angles, &[0, 1], 2).unwrap()).unwrap();
    let out = circ.simulate(&StateVector::normalize(&amps).unwrap()).unwrap();
    let a = out.amplitudes();
    assert!((a[4 | 1] - c(b1, 0.0)).norm() < 1e-15);
    assert!((a[4 | 2] - c(b2 * 0.5, 0.0)).norm() < 1e-15);
    assert!(a[1].norm() < 1e-15);
    assert!((a[2] - c(b2 * (0.75f64).sqrt(), 0.0)).norm() < 1e-15);
}

#[test]
fn state_preparation_reproduces_vectors() {
    let mut rng = rng_from_seed(3);
    for trial in 0..60 {
        let n = 1 + trial % 4;
        let dim = 1 << n;
        let complex = trial % 2 == 1;
        let v: Vec<C64> = (0..dim)
            .map(|_| c(rng.random_range(-1.0..1.0), if complex { rng.random_range(-1.0..1.0) } else { 0.0 }))
            .collect();
        let out = state_preparation(&v).unwrap().simulate(&StateVector::zero(n).unwrap()).unwrap();
        let want = StateVector::normalize(&v).unwrap();
        assert!((out.fidelity(&want).unwrap() - 1.0).abs() < 1e-12);
        if !complex {
            for (x, y) in out.amplitudes().iter().zip(want.amplitudes()) {
                assert!((x - y).norm() < 1e-12);
            }
        }
    }
    // sparse vectors with zero blocks
    let v = real(&[0.0, 0.0, 0.0, 1.0]);
    let out = state_preparation(&v).unwrap().simulate(&StateVector::zero(2).unwrap()).unwrap();
    assert!((out.amplitudes()[3] - ONE).norm() < 1e-12);
    assert!(matches!(state_preparation(&real(&[0.0, 0.0])), Err(Error::ZeroVector)));
    assert!(matches!(state_preparation(&real(&[1.0, 0.0, 0.0])), Err(Error::Dimension(_))));
}

fn exact_cfg(b: &[f64]) -> HHLConfig {
    HHLConfig { n_clock: 2, t0: Some(PI / 2.0), mode: SignMode::Unsigned, b: Some(real(b)), shots: 0, ..Default::default() }
}

#[test]
fn identity_returns_b() {
    let m = HermitianMatrix::diagonal(&[1.0, 1.0]);
    for mode in [SignMode::Unsigned, SignMode::TwosComplement] {
        let cfg = HHLConfig { b: Some(real(&[0.6, 0.8])), mode, ..Default::default() };
        let r = run_hhl(&m, &cfg).unwrap();
        assert!((r.fidelity - 1.0).abs() < 1e-9);
        assert!((r.solution_amplitudes[0] - c(0.6, 0.0)).norm() < 1e-9);
    }
}

#[test]
fn diagonal_one_two_fixture() {
    let h = FRAC_1_SQRT_2;
    let m = HermitianMatrix::diagonal(&[1.0, 2.0]);
    let r = run_hhl(&m, &exact_cfg(&[h, h])).unwrap();
    assert!(r.fidelity >= 0.999);
    assert!((r.fidelity - 1.0).abs() < 1e-9);
    let n = 1.25f64.sqrt();
    assert!((r.solution_amplitudes[0] - c(1.0 / n, 0.0)).norm() < 1e-9);
    assert!((r.solution_amplitudes[1] - c(0.5 / n, 0.0)).norm() < 1e-9);
    assert_eq!(r.c, 1.0);
    // C²(|β1/λ1|² + |β2/λ2|²)
    assert!((r.success_probability - (0.5 + 0.5 / 4.0)).abs() < 1e-9);
    assert_eq!(r.width, 1 + 2 + 1);
    assert!(r.unrotated_weight < 1e-12);
}

#[test]
fn symmetric_2x2_fixture() {
    let m = HermitianMatrix::from_real_rows(&[vec![1.5, 0.5], vec![0.5, 1.5]]).unwrap();
    let cfg = HHLConfig { c: Some(1.0), ..exact_cfg(&[1.0, 0.0]) };
    let r = run_hhl(&m, &cfg).unwrap();
    assert!(r.fidelity >= 0.999);
    let x = &r.solution_amplitudes;
    let phase = x[0].conj() / x[0].norm();
    assert!((x[0] * phase - c(0.9487, 0.0)).norm() < 1e-4);
    assert!((x[1] * phase - c(-0.3162, 0.0)).norm() < 1e-4);
    // β = (1/√2, 1/√2) in the eigenbasis (λ = 1, 2)
    assert!((r.success_probability - 0.625).abs() < 1e-9);
    assert!(r.clock_reset_probability > 1.0 - 1e-9);
}

/// Random Hermitian matrix with eigenvalues `k_j·res` for integer `k_j`.
fn representable(dim: usize, n_clock: usize, seed: u64, signed: bool) -> (HermitianMatrix, Vec<f64>) {
    let mut rng = rng_from_seed(seed);
    let t = 1i64 << n_clock;
    let ks: Vec<i64> = (0..dim)
        .map(|_| {
            if signed {
                let k = rng.random_range(1..t / 2);
                if rng.random::<bool>() { -k } else { k }
            } else {
                rng.random_range(1..t)
            }
        })
        .collect();
    let lam: Vec<f64> = ks.iter().map(|&k| k as f64).collect();
    let v = random_unitary(dim, rng.random());
    let d = Matrix::diagonal(&real(&lam));
    let a = &(v.matrix() * &d) * &v.adjoint();
    let a = a.add(&a.adjoint()).scale(c(0.5, 0.0));
    (HermitianMatrix::new(a).unwrap(), lam)
}

#[test]
fn exact_spectrum_gives_exact_solution() {
    for seed in 0..40u64 {
        let dim = [2, 4, 8][seed as usize % 3];
        let n_clock = 3 + (seed as usize % 2);
        let signed = seed % 4 >= 2;
        let (m, lam) = representable(dim, n_clock, seed, signed);
        let mut rng = rng_from_seed(100 + seed);
        let b: Vec<C64> = (0..dim).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        // λ̃ = k  ⇔  t0 = 2π/T
        let cfg = HHLConfig {
            n_clock,
            t0: Some(2.0 * PI / (1 << n_clock) as f64),
            mode: if signed { SignMode::TwosComplement } else { SignMode::Unsigned },
            b: Some(b.clone()),
            shots: 0,
            ..Default::default()
        };
        let r = run_hhl(&m, &cfg).unwrap();
        assert!(r.fidelity >= 1.0 - 1e-6, "seed {seed}: {}", r.fidelity);
        assert!(r.clock_reset_probability >= 1.0 - 1e-6);
        // success = C² Σ |β_j/λ_j|² in the eigenbasis
        let d = eigendecompose(&m);
        let bn = vec_norm(&b);
        let want: f64 = (0..dim)
            .map(|j| (inner(&d.eigenvector(j), &b) / bn).norm_sqr() * (r.c / d.eigenvalues[j]).powi(2))
            .sum();
        assert!((r.success_probability - want).abs() < 1e-9, "seed {seed}");
        let _ = lam;
    }
}

/// Independent route for inexact phases: the postselected clock-zero branch
/// is `Σ_j β_j (Σ_k |α_jk|² c_k) u_j` with Fejér amplitudes `α_jk`, and the
/// success probability is `Σ_j |β_j|² Σ_k |α_jk|² c_k²`.
#[test]
fn inexact_phases_match_closed_form() {
    for seed in 0..24u64 {
        let dim = [2, 4][seed as usize % 2];
        let mode = if seed % 3 == 0 { SignMode::Unsigned } else { SignMode::TwosComplement };
        let m = if mode == SignMode::Unsigned {
            random_diagonal(dim, seed, false)
        } else {
            random_sparse_hermitian(&SparsitySpec { density: 1.0, dim, seed }).unwrap()
        };
        let m = if seed % 2 == 0 {
            m
        } else {
            let v = random_unitary(dim, seed);
            let a = &(v.matrix() * m.matrix()) * &v.adjoint();
            HermitianMatrix::new(a.add(&a.adjoint()).scale(c(0.5, 0.0))).unwrap()
        };
        let window = if seed % 4 < 2 { InversionWindow::Spectrum } else { InversionWindow::Full };
        let cfg = HHLConfig { n_clock: 4, mode, window, shots: 0, ..Default::default() };
        let r = run_hhl(&m, &cfg).unwrap();

        let d = eigendecompose(&m);
        let b = vec![c(1.0 / (dim as f64).sqrt(), 0.0); dim];
        let dec = ClockDecoding { n_clock: 4, t0: r.t0, mode };
        let t = dec.states();
        let rot: Vec<f64> = (0..t)
            .map(|k| {
                let sk = dec.signed_index(k);
                let lt = dec.decode(k);
                if sk == 0 || (r.c / lt).abs() > 1.0 + 1e-12 { 0.0 } else { r.c / lt }
            })
            .collect();
        let mut x = vec![ZERO; dim];
        let mut success = 0.0;
        for j in 0..dim {
            let u = d.eigenvector(j);
            let beta = inner(&u, &b);
            let phi = d.eigenvalues[j] * r.t0 / (2.0 * PI);
            let w: Vec<f64> = (0..t).map(|k| fejer(phi, k, t).norm_sqr()).collect();
            let mean: f64 = w.iter().zip(&rot).map(|(p, r)| p * r).sum();
            success += beta.norm_sqr() * w.iter().zip(&rot).map(|(p, r)| p * r * r).sum::<f64>();
            for (xi, ui) in x.iter_mut().zip(&u) {
                *xi += ui * beta * mean;
            }
        }
        assert!((r.success_probability - success).abs() < 1e-9, "seed {seed}");
        let n = vec_norm(&x);
        let overlap = inner(&x, &r.solution_amplitudes).norm() / n;
        assert!((overlap - 1.0).abs() < 1e-9, "seed {seed}: {overlap}");
    }
}

#[test]
fn positive_diagonal_fidelity_is_high_for_inexact_phases() {
    let f: Vec<f64> = (0..10u64)
        .map(|seed| run_hhl(&random_diagonal(4, seed, false), &HHLConfig { shots: 0, ..Default::default() }).unwrap().fidelity)
        .collect();
    assert!(median(f) >= 0.99);
}

#[test]
fn sampled_success_within_binomial_bounds() {
    for seed in 0..5u64 {
        let m = random_sparse_hermitian(&SparsitySpec { density: 1.0, dim: 4, seed }).unwrap();
        let cfg = HHLConfig { shots: 100_000, seed, ..Default::default() };
        let r = run_hhl(&m, &cfg).unwrap();
        let p = r.success_probability;
        let sigma = (p * (1.0 - p) / 1e5).sqrt();
        assert!((r.sampled_success_rate.unwrap() - p).abs() <= 5.0 * sigma + 1e-12);
    }
}

#[test]
fn signed_mode_beats_unsigned_on_mixed_spectra() {
    let mut signed = Vec::new();
    let mut unsigned = Vec::new();
    let mut seed = 0;
    while signed.len() < 10 {
        seed += 1;
        let m = random_sparse_hermitian(&SparsitySpec { density: 1.0, dim: 4, seed }).unwrap();
        let d = eigendecompose(&m);
        if d.eigenvalues[0] >= 0.0 || d.min_abs_eigenvalue() < 1e-3 {
            continue;
        }
        let run = |mode| run_hhl(&m, &HHLConfig { mode, shots: 0, ..Default::default() }).unwrap().fidelity;
        signed.push(run(SignMode::TwosComplement));
        unsigned.push(run(SignMode::Unsigned));
    }
    assert!(median(signed) >= median(unsigned));
}

#[test]
fn diagonal_matrices_are_shallower_and_succeed_more() {
    let cfg = HHLConfig { estimate: SpectrumEstimate::Gershgorin, max_clock: Some(9), shots: 0, ..Default::default() };
    for dim in [2, 4] {
        let (mut dp, mut np, mut dd, mut nd) = (vec![], vec![], vec![], vec![]);
        for seed in 0..5u64 {
            let a = run_hhl(&random_diagonal(dim, seed, false), &cfg).unwrap();
            let m = random_sparse_hermitian(&SparsitySpec { density: 1.0, dim, seed }).unwrap();
            let b = run_hhl(&m, &cfg).unwrap();
            dp.push(a.success_probability);
            np.push(b.success_probability);
            dd.push(a.depth_basis as f64);
            nd.push(b.depth_basis as f64);
        }
        assert!(median(nd) > median(dd), "dim {dim}");
        assert!(median(dp.clone()) >= median(np.clone()), "dim {dim}: {dp:?} vs {np:?}");
    }
}

#[test]
fn clock_grows_with_condition_estimate() {
    let cfg = HHLConfig { max_clock: Some(9), ..Default::default() };
    let b = |max_abs, min_abs| SpectrumBounds { max_abs, min_abs };
    assert_eq!(clock_size(&cfg, &b(1.0, 1.0)), 4);
    assert_eq!(clock_size(&cfg, &b(2.0, 1.0)), 5);
    assert_eq!(clock_size(&cfg, &b(5.0, 1.0)), 7);
    assert_eq!(clock_size(&cfg, &b(1e6, 1.0)), 9);
    assert_eq!(clock_size(&cfg, &b(1.0, 0.0)), 9);
    assert_eq!(clock_size(&HHLConfig::default(), &b(1.0, 0.0)), 4);

    let m = random_sparse_hermitian(&SparsitySpec { density: 1.0, dim: 8, seed: 0 }).unwrap();
    let cfg = HHLConfig { estimate: SpectrumEstimate::Gershgorin, shots: 0, ..cfg };
    let r = run_hhl(&m, &cfg).unwrap();
    assert!(r.width <= 13);
    assert_eq!(r.width, 1 + r.n_clock + 3);
}

#[test]
fn run_hhl_errors() {
    let cfg = HHLConfig::default();
    let singular = HermitianMatrix::diagonal(&[1.0, 0.0]);
    assert!(matches!(run_hhl(&singular, &cfg), Err(Error::Singular(_))));
    let m = HermitianMatrix::diagonal(&[1.0, 2.0]);
    let zero = HHLConfig { b: Some(vec![ZERO; 2]), ..Default::default() };
    assert!(matches!(run_hhl(&m, &zero), Err(Error::ZeroVector)));
    let wrong = HHLConfig { b: Some(vec![ONE; 4]), ..Default::default() };
    assert!(matches!(run_hhl(&m, &wrong), Err(Error::Dimension(_))));
    let t0 = HHLConfig { t0: Some(4.0), mode: SignMode::Unsigned, ..Default::default() };
    assert!(matches!(run_hhl(&m, &t0), Err(Error::Config(_))));
    let big_c = HHLConfig { c: Some(5.0), ..Default::default() };
    assert!(matches!(run_hhl(&m, &big_c), Err(Error::Config(_))));
    let odd = HermitianMatrix::diagonal(&[1.0, 2.0, 3.0]);
    assert!(matches!(run_hhl(&odd, &cfg), Err(Error::Dimension(_))));
}

#[test]
fn width_and_report_format() {
    for (dim, n_clock) in [(2, 2), (4, 4), (8, 4)] {
        let m = random_diagonal(dim, 1, false);
        let r = run_hhl(&m, &HHLConfig { n_clock, shots: 16, ..Default::default() }).unwrap();
        assert_eq!(r.width, 1 + n_clock + dim.trailing_zeros() as usize);
        assert!(r.depth_basis >= r.depth_raw);
        assert!((0.0..=1.0).contains(&r.success_probability));
        assert!((0.0..=1.0).contains(&r.fidelity));
        assert!(r.top_outcome_probability <= r.success_probability + 1e-15);
        let rec = r.csv_record();
        assert_eq!(rec.len(), CSV_HEADER.len());
        assert_eq!(rec[7], "twos-complement");
        let json = serde_json::to_value(&r).unwrap();
        for key in ["success_probability", "fidelity", "C", "matrix_metadata", "solution_amplitudes"] {
            assert!(json.get(key).is_some(), "{key}");
        }
    }
}

#[test]
fn run_is_deterministic() {
    let m = random_sparse_hermitian(&SparsitySpec { density: 0.75, dim: 4, seed: 2 }).unwrap();
    let cfg = HHLConfig { seed: 5, ..Default::default() };
    assert_eq!(run_hhl(&m, &cfg).unwrap(), run_hhl(&m, &cfg).unwrap());
}

#[test]
fn config_json_round_trip() {
    let cfg: HHLConfig = serde_json::from_str(r#"{"n_clock": 3, "mode": "signed", "C": 0.5}"#).unwrap();
    assert_eq!(cfg.n_clock, 3);
    assert_eq!(cfg.mode, SignMode::TwosComplement);
    assert_eq!(cfg.c, Some(0.5));
    let back: HHLConfig = serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
    assert_eq!(back, cfg);
    assert!(serde_json::from_str::<HHLConfig>(r#"{"clock": 3}"#).is_err());
}
