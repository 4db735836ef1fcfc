//! Constancy metrics for computed invariants and residual reports for
//! checked identities.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// One checked quantity: either an invariant tested for constancy or
/// an identity tested for a small residual.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DriftEntry {
    pub name: String,
    /// Value at t0 as (re, im).
    pub value_t0: (f64, f64),
    /// max |I(t) - I(t0)| over the grid.
    pub max_abs_deviation: f64,
    /// max |I(t) - I(t0)| / max(1, max |I(t)|).
    pub relative_drift: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl DriftEntry {
    /// Constancy check of a complex-valued series.
    pub fn drift(name: impl Into<String>, series: &[Complex64], threshold: f64) -> DriftEntry {
        let i0 = series[0];
        let max_dev = series.iter().map(|v| (v - i0).norm()).fold(0.0, f64::max);
        let scale = series.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1.0);
        let relative_drift = max_dev / scale;
        DriftEntry {
            name: name.into(),
            value_t0: (i0.re, i0.im),
            max_abs_deviation: max_dev,
            relative_drift,
            threshold,
            pass: relative_drift <= threshold,
        }
    }

    /// Constancy check in the absolute (unnormalized) sense.
    pub fn absolute_drift(
        name: impl Into<String>,
        series: &[Complex64],
        threshold: f64,
    ) -> DriftEntry {
        let i0 = series[0];
        let max_dev = series.iter().map(|v| (v - i0).norm()).fold(0.0, f64::max);
        DriftEntry {
            name: name.into(),
            value_t0: (i0.re, i0.im),
            max_abs_deviation: max_dev,
            relative_drift: max_dev,
            threshold,
            pass: max_dev <= threshold,
        }
    }

    /// Residual check: the series itself should be small.
    pub fn residual(name: impl Into<String>, series: &[Complex64], threshold: f64) -> DriftEntry {
        let max_abs = series.iter().map(|v| v.norm()).fold(0.0, f64::max);
        DriftEntry {
            name: name.into(),
            value_t0: (series[0].re, series[0].im),
            max_abs_deviation: max_abs,
            relative_drift: max_abs,
            threshold,
            pass: max_abs <= threshold,
        }
    }

    pub fn residual_real(
        name: impl Into<String>,
        series: &[f64],
        threshold: f64,
    ) -> DriftEntry {
        let as_complex: Vec<Complex64> = series.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        DriftEntry::residual(name, &as_complex, threshold)
    }
}

/// Collection of per-quantity checks for one scenario run.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct DriftReport {
    pub entries: Vec<DriftEntry>,
}

impl DriftReport {
    pub fn push(&mut self, entry: DriftEntry) {
        self.entries.push(entry);
    }

    pub fn extend(&mut self, other: DriftReport) {
        self.entries.extend(other.entries);
    }

    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }
}
