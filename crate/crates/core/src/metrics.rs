//! Shift sweeps, consistency, and the frequency-retention ablation.

use crate::compose::{EquivalenceProbe, Feature, FeatureShift, Pipeline, Upsampler, EXACT_TOL};
use crate::error::{Error, Result};
use crate::spectral::{band_split_complex, complex_energy, KeptBand, RealSignal};

/// Per-shift values from one sweep, in request order.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub shifts: Vec<i64>,
    pub values: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepSummary {
    pub max: f64,
    pub mean: f64,
    pub std: f64,
}

impl SweepResult {
    pub fn summary(&self) -> SweepSummary {
        let n = self.values.len().max(1) as f64;
        let mean = self.values.iter().sum::<f64>() / n;
        SweepSummary {
            max: self.values.iter().copied().fold(0.0, f64::max),
            mean,
            std: population_std(&self.values),
        }
    }

    /// Whether each shift's error is at most `tol`.
    pub fn exact_flags(&self, tol: f64) -> Vec<bool> {
        self.values.iter().map(|&v| v <= tol).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.shifts.iter().copied().zip(self.values.iter().copied())
    }
}

/// Equivalence error of `pipeline` under diagonal shifts.
pub fn shift_sweep(
    pipeline: &Pipeline,
    upsampler: Upsampler,
    shifts: &[i64],
    x: &Feature,
) -> Result<SweepResult> {
    let n = pipeline.input_shape().extent.width() as i64;
    if let Some(&bad) = shifts.iter().find(|&&t| t < -n || t > n) {
        return Err(Error::domain(format!("shift {bad} outside [-{n}, {n}]")));
    }
    let probe = EquivalenceProbe::new(pipeline, upsampler, x)?;
    let fs: Vec<FeatureShift> = shifts.iter().map(|&t| FeatureShift::diagonal(t)).collect();
    Ok(SweepResult {
        shifts: shifts.to_vec(),
        values: probe.errors(&fs),
    })
}

/// `EXACT_TOL` scaled by the input norm.
pub fn exact_tolerance(x: &Feature) -> f64 {
    EXACT_TOL * crate::compose::feature_norm(x)
}

/// Fraction of unordered pairs of predictions that agree.
pub fn consistency_from_predictions(classes: &[usize]) -> Result<f64> {
    if classes.len() < 2 {
        return Err(Error::domain("consistency needs at least two predictions"));
    }
    let mut agree = 0usize;
    let mut total = 0usize;
    for i in 0..classes.len() {
        for j in i + 1..classes.len() {
            total += 1;
            if classes[i] == classes[j] {
                agree += 1;
            }
        }
    }
    Ok(agree as f64 / total as f64)
}

pub fn population_std(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RetentionRow {
    /// Fraction of the input's bins kept (per axis).
    pub rate: f64,
    /// Bins kept at each end of the spectrum.
    pub mu: usize,
    /// Total `‖x - x_l‖²` over the corpus.
    pub error: f64,
}

/// Reconstruction error when only a fraction `rate` of each signal's
/// frequency bins is kept.
///
/// A rate keeps `mu = round(rate · n / 2)` bins at each end of the spectrum,
/// so `rate = 0.5` with even `n / 2` is the band of F-pooling by 2. The
/// error is evaluated with the exact (complex) split.
pub fn retention_ablation(rates: &[f64], corpus: &[RealSignal]) -> Result<Vec<RetentionRow>> {
    if corpus.is_empty() {
        return Err(Error::domain("retention ablation needs a non-empty corpus"));
    }
    let n = corpus[0].len();
    if corpus.iter().any(|x| x.len() != n) {
        return Err(Error::domain("corpus signals must share one length"));
    }
    rates
        .iter()
        .map(|&rate| {
            if !(rate > 0.0 && rate <= 0.5) {
                return Err(Error::domain(format!("retention rate {rate} outside (0, 0.5]")));
            }
            let mu = ((rate * n as f64 / 2.0).round() as usize).max(1);
            let band = KeptBand::lowpass(n, mu)?;
            let mut error = 0.0;
            for x in corpus {
                error += complex_energy(&band_split_complex(x, &band)?.high);
            }
            Ok(RetentionRow { rate, mu, error })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn consistency_examples() {
        assert_eq!(consistency_from_predictions(&[4, 4, 4]).unwrap(), 1.0);
        assert_eq!(consistency_from_predictions(&[0, 1]).unwrap(), 0.0);
        assert!((consistency_from_predictions(&[0, 0, 1, 1]).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!(consistency_from_predictions(&[]).is_err());
        assert!(consistency_from_predictions(&[1]).is_err());
    }

    #[test]
    fn summary_is_recomputable() {
        let r = SweepResult {
            shifts: vec![-1, 0, 1],
            values: vec![1.0, 0.0, 2.0],
        };
        let s = r.summary();
        assert_eq!(s.max, 2.0);
        assert_eq!(s.mean, 1.0);
        assert!((s.std - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(r.exact_flags(0.5), vec![false, true, false]);
    }

    #[test]
    fn rate_out_of_range() {
        let x = RealSignal::new(vec![1.0; 8]).unwrap();
        assert!(retention_ablation(&[0.0], std::slice::from_ref(&x)).is_err());
        assert!(retention_ablation(&[0.75], std::slice::from_ref(&x)).is_err());
        assert!(retention_ablation(&[0.5], &[]).is_err());
    }

    #[test]
    fn band_limited_corpus_has_zero_error() {
        let x = RealSignal::new((0..32).map(|t| 1.0 + (2.0 * std::f64::consts::PI * t as f64 / 32.0).sin()).collect()).unwrap();
        let rows = retention_ablation(&[0.5, 0.375, 0.25], &[x]).unwrap();
        assert!(rows.iter().all(|r| r.error < 1e-20));
        assert_eq!(rows.iter().map(|r| r.mu).collect::<Vec<_>>(), vec![8, 6, 4]);
    }
}
