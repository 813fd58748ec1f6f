//! Fixture checks behind `qlinbench verify`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::path::Path;

use qlin_core::dataprep::{load_csv, Schema};
use qlin_core::hhl::{phase_estimation, qft_circuit, run_hhl, HHLConfig, SignMode};
use qlin_core::linalg::{Matrix, UnitaryMatrix, C64};
use qlin_core::qsvm::{gram_exact, kernel_exact, train_lssvm, FeatureMap};
use qlin_core::spectral::HermitianMatrix;
use qlin_core::state::StateVector;

use crate::metrics::{metrics, ConfusionMatrix};

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

fn check(name: &'static str, outcome: Result<(bool, String), String>) -> Check {
    match outcome {
        Ok((passed, detail)) => Check { name, passed, detail },
        Err(e) => Check { name, passed: false, detail: e },
    }
}

fn qft() -> Result<(bool, String), String> {
    let mut worst = 0.0f64;
    for n in 1..=3 {
        let dim = 1usize << n;
        let dft = Matrix::from_fn(dim, |j, k| {
            C64::from_polar(1.0 / (dim as f64).sqrt(), 2.0 * PI * (j * k) as f64 / dim as f64)
        });
        let u = qft_circuit(n).to_unitary().map_err(|e| e.to_string())?;
        worst = worst.max(u.matrix().max_abs_diff(&dft));
    }
    Ok((worst <= 1e-10, format!("max entry error {worst:.2e}")))
}

fn qpe() -> Result<(bool, String), String> {
    let eig = StateVector::basis(1, 1).map_err(|e| e.to_string())?;
    let mut worst = 1.0f64;
    for n in 2..=4 {
        let t = 1usize << n;
        for k in 0..t {
            let phase = C64::from_polar(1.0, 2.0 * PI * k as f64 / t as f64);
            let u = UnitaryMatrix::new(Matrix::diagonal(&[C64::new(1.0, 0.0), phase])).map_err(|e| e.to_string())?;
            let dist = phase_estimation(&u, &eig, n).map_err(|e| e.to_string())?;
            worst = worst.min(dist[k]);
        }
    }
    Ok((worst >= 1.0 - 1e-9, format!("smallest modal probability {worst:.12}")))
}

fn hhl_fixture(rows: &[Vec<f64>], b: &[f64], c: Option<f64>) -> Result<(bool, String), String> {
    let m = HermitianMatrix::from_real_rows(rows).map_err(|e| e.to_string())?;
    let cfg = HHLConfig {
        n_clock: 2,
        t0: Some(PI / 2.0),
        c,
        mode: SignMode::Unsigned,
        b: Some(b.iter().map(|&v| C64::new(v, 0.0)).collect()),
        shots: 0,
        ..Default::default()
    };
    let r = run_hhl(&m, &cfg).map_err(|e| e.to_string())?;
    Ok((r.fidelity >= 0.999, format!("fidelity {:.9}", r.fidelity)))
}

fn lssvm() -> Result<(bool, String), String> {
    let map = FeatureMap::linear(2);
    let xs = vec![vec![1.0, 0.0], vec![-1.0, 0.0]];
    let k = gram_exact(&xs, &map).map_err(|e| e.to_string())?;
    let m = train_lssvm(&k, &xs, &[1.0, -1.0], 0.0, &map).map_err(|e| e.to_string())?;
    let ok = m.b.abs() <= 1e-9 && (m.a[0] - 0.5).abs() <= 1e-9 && (m.a[1] + 0.5).abs() <= 1e-9;
    Ok((ok, format!("b = {:.3e}, a = ({:.9}, {:.9})", m.b, m.a[0], m.a[1])))
}

fn metrics_row() -> Result<(bool, String), String> {
    let m = metrics(&ConfusionMatrix::binary(69, 5, 5, 119)).map_err(|e| e.to_string())?;
    let want = [0.9495, 0.9324, 0.9597, 0.9324];
    let got = [m.accuracy, m.sensitivity.unwrap_or(f64::NAN), m.specificity.unwrap_or(f64::NAN), m.f1.unwrap_or(f64::NAN)];
    let ok = got.iter().zip(want).all(|(g, w)| (g - w).abs() <= 5e-4);
    Ok((ok, format!("{:.4} {:.4} {:.4} {:.4}", got[0], got[1], got[2], got[3])))
}

fn kernel() -> Result<(bool, String), String> {
    let k = kernel_exact(&[PI / 2.0, 0.0], &[-PI / 2.0, 0.0], &FeatureMap::second_order(2, 1))
        .map_err(|e| e.to_string())?;
    let want = (PI * PI).cos().powi(2);
    Ok(((k - want).abs() <= 1e-12, format!("k = {k:.15}")))
}

fn dataset(dir: &Path, file: &str, schema: Schema, rows: usize, features: usize) -> Result<(bool, String), String> {
    let d = load_csv(dir.join(file), &schema).map_err(|e| e.to_string())?;
    let ok = d.len() == rows && d.n_features() == features;
    Ok((ok, format!("{} rows x {} features, classes {:?}", d.len(), d.n_features(), d.class_counts())))
}

/// Every fixture check, in a fixed order. Dataset checks read from `data_dir`.
pub fn run_checks(data_dir: &Path) -> Vec<Check> {
    let h = FRAC_1_SQRT_2;
    vec![
        check("qft-matches-dft", qft()),
        check("qpe-exact-phases", qpe()),
        check("hhl-diag-1-2", hhl_fixture(&[vec![1.0, 0.0], vec![0.0, 2.0]], &[h, h], None)),
        check("hhl-symmetric-2x2", hhl_fixture(&[vec![1.5, 0.5], vec![0.5, 1.5]], &[1.0, 0.0], Some(1.0))),
        check("lssvm-two-point", lssvm()),
        check("metrics-row", metrics_row()),
        check("zz-kernel-value", kernel()),
        check("iris-csv", dataset(data_dir, "iris.csv", Schema::iris(), 150, 4)),
        check("breast-cancer-csv", dataset(data_dir, "breast_cancer.csv", Schema::breast_cancer(), 569, 30)),
    ]
}
