//! Confusion matrices and the four classification metrics.

use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};

/// Counts indexed `[actual][predicted]`. For binary problems class 0 is the
/// positive class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub counts: Vec<Vec<u64>>,
}

/// One-vs-rest counts for a single class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BinaryCounts {
    pub tp: u64,
    pub fn_: u64,
    pub fp: u64,
    pub tn: u64,
}

impl ConfusionMatrix {
    pub fn binary(tp: u64, fn_: u64, fp: u64, tn: u64) -> Self {
        ConfusionMatrix { counts: vec![vec![tp, fn_], vec![fp, tn]] }
    }

    pub fn from_predictions(actual: &[usize], predicted: &[usize], n_classes: usize) -> Self {
        let mut counts = vec![vec![0; n_classes]; n_classes];
        for (&a, &p) in actual.iter().zip(predicted) {
            counts[a][p] += 1;
        }
        ConfusionMatrix { counts }
    }

    pub fn n_classes(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn correct(&self) -> u64 {
        (0..self.n_classes()).map(|c| self.counts[c][c]).sum()
    }

    pub fn one_vs_rest(&self, class: usize) -> BinaryCounts {
        let n = self.n_classes();
        let tp = self.counts[class][class];
        let fn_ = (0..n).filter(|&p| p != class).map(|p| self.counts[class][p]).sum();
        let fp = (0..n).filter(|&a| a != class).map(|a| self.counts[a][class]).sum();
        BinaryCounts { tp, fn_, fp, tn: self.total() - tp - fn_ - fp }
    }

    /// Compact text form, rows separated by `;`.
    pub fn to_compact(&self) -> String {
        self.counts
            .iter()
            .map(|r| r.iter().map(u64::to_string).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>()
            .join(";")
    }
}

/// Fields are `None` where a denominator is zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub accuracy: f64,
    pub sensitivity: Option<f64>,
    pub specificity: Option<f64>,
    pub f1: Option<f64>,
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

fn binary_metrics(c: BinaryCounts) -> (Option<f64>, Option<f64>, Option<f64>) {
    (
        ratio(c.tp, c.tp + c.fn_),
        ratio(c.tn, c.tn + c.fp),
        ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn_),
    )
}

fn macro_mean(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let defined: Vec<f64> = values.flatten().collect();
    (!defined.is_empty()).then(|| defined.iter().sum::<f64>() / defined.len() as f64)
}

/// Binary matrices use class 0 as positive; larger ones macro-average the
/// per-class one-vs-rest values over the classes where they are defined.
pub fn metrics(cm: &ConfusionMatrix) -> Result<Metrics> {
    let total = cm.total();
    if total == 0 {
        return Err(BenchError::Empty);
    }
    let accuracy = cm.correct() as f64 / total as f64;
    if cm.n_classes() == 2 {
        let (sensitivity, specificity, f1) = binary_metrics(cm.one_vs_rest(0));
        return Ok(Metrics { accuracy, sensitivity, specificity, f1 });
    }
    let per: Vec<_> = (0..cm.n_classes()).map(|c| binary_metrics(cm.one_vs_rest(c))).collect();
    Ok(Metrics {
        accuracy,
        sensitivity: macro_mean(per.iter().map(|m| m.0)),
        specificity: macro_mean(per.iter().map(|m| m.1)),
        f1: macro_mean(per.iter().map(|m| m.2)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reference_row() {
        let m = metrics(&ConfusionMatrix::binary(69, 5, 5, 119)).unwrap();
        assert!((m.accuracy - 0.9495).abs() < 5e-4);
        assert!((m.sensitivity.unwrap() - 0.9324).abs() < 5e-4);
        assert!((m.specificity.unwrap() - 0.9597).abs() < 5e-4);
        assert!((m.f1.unwrap() - 0.9324).abs() < 5e-4);
    }

    #[test]
    fn perfect_and_total_failure() {
        let m = metrics(&ConfusionMatrix::binary(1, 0, 0, 1)).unwrap();
        assert_eq!((m.accuracy, m.sensitivity, m.specificity, m.f1), (1.0, Some(1.0), Some(1.0), Some(1.0)));
        let m = metrics(&ConfusionMatrix::binary(0, 1, 1, 0)).unwrap();
        assert_eq!((m.accuracy, m.sensitivity, m.specificity, m.f1), (0.0, Some(0.0), Some(0.0), Some(0.0)));
    }

    #[test]
    fn empty_and_undefined() {
        assert!(matches!(metrics(&ConfusionMatrix::binary(0, 0, 0, 0)), Err(BenchError::Empty)));
        let m = metrics(&ConfusionMatrix::binary(0, 0, 2, 3)).unwrap();
        assert_eq!(m.sensitivity, None);
        assert_eq!(m.specificity, Some(0.6));
        assert_eq!(m.f1, Some(0.0));
    }

    #[test]
    fn multiclass() {
        let cm = ConfusionMatrix::from_predictions(&[0, 0, 1, 1, 2, 2], &[0, 0, 1, 2, 2, 2], 3);
        assert_eq!(cm.counts, vec![vec![2, 0, 0], vec![0, 1, 1], vec![0, 0, 2]]);
        let m = metrics(&cm).unwrap();
        assert!((m.accuracy - 5.0 / 6.0).abs() < 1e-15);
        // per-class sensitivity 1, 1/2, 1
        assert!((m.sensitivity.unwrap() - 2.5 / 3.0).abs() < 1e-15);
        assert_eq!(cm.to_compact(), "2 0 0;0 1 1;0 0 2");
    }

    proptest! {
        #[test]
        fn prop_identities(tp in 0u64..500, fn_ in 0u64..500, fp in 0u64..500, tn in 0u64..500) {
            prop_assume!(tp + fn_ + fp + tn > 0);
            let cm = ConfusionMatrix::binary(tp, fn_, fp, tn);
            let m = metrics(&cm).unwrap();
            let total = (tp + fn_ + fp + tn) as f64;
            prop_assert_eq!(cm.total(), tp + fn_ + fp + tn);
            prop_assert!((m.accuracy - (tp + tn) as f64 / total).abs() < 1e-15);
            if tp + fp > 0 && tp + fn_ > 0 && tp > 0 {
                let precision = tp as f64 / (tp + fp) as f64;
                let recall = m.sensitivity.unwrap();
                let harmonic = 2.0 * precision * recall / (precision + recall);
                prop_assert!((m.f1.unwrap() - harmonic).abs() < 1e-12);
            }
            if let Some(f1) = m.f1 {
                prop_assert!((f1 - 2.0 * tp as f64 / (2 * tp + fp + fn_) as f64).abs() < 1e-15);
            }
        }
    }
}
