//! FFT-backed F-pooling.
//!
//! Same operators as [`FPoolPlan`](crate::fpool::FPoolPlan), computed in
//! `O(n log n)` by selecting bins between a length-`n` and a length-`m`
//! transform instead of multiplying by dense matrices.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{check_len, Error, Result};
use crate::fpool::selection_rows;
use crate::spectral::{ComplexSpectrum, RealSignal};

/// Unscaled forward DFT through the FFT.
pub fn fft_dft(x: &RealSignal) -> ComplexSpectrum {
    let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(x.len()).process(&mut buf);
    ComplexSpectrum::new(buf).expect("signal is non-empty")
}

pub struct FastFPool {
    n: usize,
    m: usize,
    rows: Vec<Option<usize>>,
    forward_n: Arc<dyn Fft<f64>>,
    inverse_n: Arc<dyn Fft<f64>>,
    forward_m: Arc<dyn Fft<f64>>,
    inverse_m: Arc<dyn Fft<f64>>,
}

impl FastFPool {
    pub fn new(n: usize, m: usize, odd_padding: bool) -> Result<Self> {
        if m == 0 || m > n {
            return Err(Error::domain(format!("pooled length must lie in 1..={n}, got {m}")));
        }
        let mut planner = FftPlanner::new();
        Ok(FastFPool {
            n,
            m,
            rows: selection_rows(n, m, odd_padding),
            forward_n: planner.plan_fft_forward(n),
            inverse_n: planner.plan_fft_inverse(n),
            forward_m: planner.plan_fft_forward(m),
            inverse_m: planner.plan_fft_inverse(m),
        })
    }

    pub fn pool1d(&self, x: &RealSignal) -> Result<RealSignal> {
        check_len(self.n, x.len())?;
        let mut spec: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward_n.process(&mut spec);
        let mut out: Vec<Complex64> = self
            .rows
            .iter()
            .map(|r| r.map_or(Complex64::ZERO, |b| spec[b]))
            .collect();
        self.inverse_m.process(&mut out);
        let scale = 1.0 / self.n as f64;
        RealSignal::new(out.iter().map(|c| c.re * scale).collect())
    }

    pub fn unpool1d(&self, y: &RealSignal) -> Result<RealSignal> {
        check_len(self.m, y.len())?;
        let mut spec: Vec<Complex64> = y.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward_m.process(&mut spec);
        let mut out = vec![Complex64::ZERO; self.n];
        for (r, b) in self.rows.iter().enumerate() {
            if let Some(b) = b {
                out[*b] = spec[r];
            }
        }
        self.inverse_n.process(&mut out);
        let scale = 1.0 / self.m as f64;
        RealSignal::new(out.iter().map(|c| c.re * scale).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpool::FPoolPlan;
    use crate::spectral::dft;

    fn ramp(n: usize) -> RealSignal {
        RealSignal::new((0..n).map(|i| ((i * 37 + 11) % 23) as f64 / 7.0 - 1.5).collect()).unwrap()
    }

    #[test]
    fn fft_matches_dense_dft() {
        for n in [1, 2, 7, 16, 17, 60] {
            let x = ramp(n);
            let (a, b) = (dft(&x), fft_dft(&x));
            for k in 0..n {
                assert!((a[k] - b[k]).norm() < 1e-9, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn fast_pooling_matches_matrix_path() {
        for (n, m, odd) in [(16, 8, false), (16, 8, true), (17, 5, false), (12, 12, false), (9, 1, true)] {
            let x = ramp(n);
            let dense = FPoolPlan::new(n, m, odd).unwrap();
            let fast = FastFPool::new(n, m, odd).unwrap();
            let (yd, yf) = (dense.pool1d(&x).unwrap(), fast.pool1d(&x).unwrap());
            assert!(yd.max_abs_diff(&yf) < 1e-9);
            let (zd, zf) = (dense.unpool1d(&yd).unwrap(), fast.unpool1d(&yd).unwrap());
            assert!(zd.max_abs_diff(&zf) < 1e-9);
        }
        assert!(FastFPool::new(4, 5, false).is_err());
    }
}
