//! Exact DFT/IDFT by dense matrix multiplication, circular shifts, the shift
//! theorem and the low/high frequency split.
//!
//! Both transforms are unscaled: `idft(dft(x)) == n * x`. Callers apply the
//! `1/n` factor where the pooling formulas place it.
//!
//! Spectra use standard bin order. Bin `k` holds frequency `k` for
//! `2k < n` and frequency `k - n` otherwise, so for even `n` the Nyquist bin
//! `n/2` is treated as the negative frequency `-n/2`.

use std::f64::consts::PI;
use std::ops::Index;

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Real sample grid of positive length with finite values.
#[derive(Clone, Debug, PartialEq)]
pub struct RealSignal(Vec<f64>);

impl RealSignal {
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::domain("signal must have at least one sample"));
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::domain(format!("sample {i} is not finite")));
        }
        Ok(RealSignal(samples))
    }

    pub(crate) fn from_vec_unchecked(samples: Vec<f64>) -> Self {
        debug_assert!(!samples.is_empty());
        RealSignal(samples)
    }

    pub fn zeros(n: usize) -> Result<Self> {
        RealSignal::new(vec![0.0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; a signal has at least one sample.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.0.iter()
    }

    /// Squared Euclidean norm.
    pub fn energy(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum()
    }

    pub fn norm(&self) -> f64 {
        self.energy().sqrt()
    }

    pub fn mean(&self) -> f64 {
        self.0.iter().sum::<f64>() / self.0.len() as f64
    }

    /// Largest absolute sample-wise difference.
    pub fn max_abs_diff(&self, other: &RealSignal) -> f64 {
        max_abs_diff(&self.0, &other.0)
    }

    pub fn to_array(&self) -> Array1<f64> {
        Array1::from(self.0.clone())
    }
}

impl AsRef<[f64]> for RealSignal {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

impl Index<usize> for RealSignal {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// DFT coefficients in standard bin order.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexSpectrum(Vec<Complex64>);

impl ComplexSpectrum {
    pub fn new(bins: Vec<Complex64>) -> Result<Self> {
        if bins.is_empty() {
            return Err(Error::domain("spectrum must have at least one bin"));
        }
        Ok(ComplexSpectrum(bins))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bins(&self) -> &[Complex64] {
        &self.0
    }

    pub fn into_bins(self) -> Vec<Complex64> {
        self.0
    }

    /// Sum of squared magnitudes of all bins.
    pub fn energy(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Largest `|bin[k] - conj(bin[n-k])|` over all bins.
    pub fn conjugate_asymmetry(&self) -> f64 {
        let n = self.0.len();
        (0..n)
            .map(|k| (self.0[k] - self.0[(n - k) % n].conj()).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<usize> for ComplexSpectrum {
    type Output = Complex64;

    fn index(&self, k: usize) -> &Complex64 {
        &self.0[k]
    }
}

/// Integer circular shift in pixels. Positive values move samples toward
/// higher indices: `out[(j + delta_t) mod n] = x[j]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct ShiftSpec {
    pub delta_t: i64,
}

impl ShiftSpec {
    pub const fn new(delta_t: i64) -> Self {
        ShiftSpec { delta_t }
    }

    /// The equivalent shift in `0..n`.
    pub fn normalized(self, n: usize) -> usize {
        self.delta_t.rem_euclid(n as i64) as usize
    }
}

impl From<i64> for ShiftSpec {
    fn from(delta_t: i64) -> Self {
        ShiftSpec { delta_t }
    }
}

/// Signed frequency of bin `k` in a length-`n` spectrum.
pub fn signed_frequency(k: usize, n: usize) -> i64 {
    if 2 * k < n {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

fn twiddles(n: usize, sign: f64) -> Vec<Complex64> {
    (0..n)
        .map(|r| Complex64::from_polar(1.0, sign * 2.0 * PI * r as f64 / n as f64))
        .collect()
}

/// Dense forward DFT matrix `F_n[k, j] = exp(-2πi·kj/n)`.
pub fn dft_matrix(n: usize) -> Array2<Complex64> {
    let w = twiddles(n, -1.0);
    Array2::from_shape_fn((n, n), |(k, j)| w[(k * j) % n])
}

/// Dense inverse DFT matrix `F_n^*` (conjugate transpose, no `1/n`).
pub fn idft_matrix(n: usize) -> Array2<Complex64> {
    let w = twiddles(n, 1.0);
    Array2::from_shape_fn((n, n), |(k, j)| w[(k * j) % n])
}

/// Unscaled forward transform of a real signal.
pub fn dft(x: &RealSignal) -> ComplexSpectrum {
    let v: Array1<Complex64> = x.iter().map(|&s| Complex64::new(s, 0.0)).collect();
    ComplexSpectrum(dft_matrix(x.len()).dot(&v).to_vec())
}

/// Unscaled forward transform of a complex sequence.
pub fn dft_complex(x: &[Complex64]) -> Result<ComplexSpectrum> {
    if x.is_empty() {
        return Err(Error::domain("cannot transform an empty sequence"));
    }
    let v = Array1::from(x.to_vec());
    Ok(ComplexSpectrum(dft_matrix(x.len()).dot(&v).to_vec()))
}

/// Unscaled inverse transform: `idft(dft(x)) == n * x`.
pub fn idft(s: &ComplexSpectrum) -> Vec<Complex64> {
    let v = Array1::from(s.0.clone());
    idft_matrix(s.len()).dot(&v).to_vec()
}

/// Rotate a slice so that `out[(j + delta) mod n] = x[j]`.
pub fn roll<T: Copy>(x: &[T], delta: i64) -> Vec<T> {
    let n = x.len();
    if n == 0 {
        return Vec::new();
    }
    let d = delta.rem_euclid(n as i64) as usize;
    let mut out = Vec::with_capacity(n);
    out.extend_from_slice(&x[n - d..]);
    out.extend_from_slice(&x[..n - d]);
    out
}

pub fn circular_shift(x: &RealSignal, s: ShiftSpec) -> RealSignal {
    RealSignal(roll(&x.0, s.delta_t))
}

/// Multiply bin `k` by `exp(-2πi·f_k·delta_t/n)` with `f_k` the signed
/// frequency of the bin. For integer `delta_t` this is the spectrum of the
/// circularly shifted signal.
pub fn shift_phase(s: &ComplexSpectrum, delta_t: f64) -> ComplexSpectrum {
    let n = s.len();
    let bins = s
        .0
        .iter()
        .enumerate()
        .map(|(k, &b)| {
            let f = signed_frequency(k, n) as f64;
            b * Complex64::from_polar(1.0, -2.0 * PI * f * delta_t / n as f64)
        })
        .collect();
    ComplexSpectrum(bins)
}

/// A set of retained DFT bins `{0, .., low-1} ∪ {n-high, .., n-1}`.
///
/// `KeptBand::lowpass(n, mu)` is the diagonal mask keeping the first and last
/// `mu` rows. `KeptBand::for_pooling` is the set of input bins an F-pooling
/// from `n` to `m` samples retains.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KeptBand {
    n: usize,
    low: usize,
    high: usize,
}

impl KeptBand {
    pub fn lowpass(n: usize, mu: usize) -> Result<Self> {
        let max_mu = n.div_ceil(2);
        if mu == 0 || mu > max_mu {
            return Err(Error::domain(format!(
                "mu must lie in 1..={max_mu} for n = {n}, got {mu}"
            )));
        }
        Ok(KeptBand {
            n,
            low: mu,
            high: mu,
        })
    }

    /// Input bins retained when pooling `n` samples to `m`.
    ///
    /// Even `m = 2μ` keeps `{0..μ-1} ∪ {-μ..-1}`; odd padding drops the
    /// unmatched `-μ`. Odd `m = 2μ-1` keeps `{0..μ-1} ∪ {-(μ-1)..-1}`.
    pub fn for_pooling(n: usize, m: usize, odd_padding: bool) -> Result<Self> {
        if m == 0 || m > n {
            return Err(Error::domain(format!(
                "pooled length must lie in 1..={n}, got {m}"
            )));
        }
        let low = m.div_ceil(2);
        let mut high = m / 2;
        if odd_padding && m.is_multiple_of(2) {
            high -= 1;
        }
        Ok(KeptBand { n, low, high })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of leading bins kept.
    pub fn low(&self) -> usize {
        self.low
    }

    /// Number of trailing bins kept.
    pub fn high(&self) -> usize {
        self.high
    }

    pub fn contains(&self, k: usize) -> bool {
        k < self.low || k + self.high >= self.n
    }

    pub fn mask(&self) -> Vec<bool> {
        (0..self.n).map(|k| self.contains(k)).collect()
    }

    /// True when every kept frequency has its negative kept as well, so the
    /// masked spectrum of a real signal inverts to a real signal.
    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|k| self.contains(k) == self.contains((self.n - k) % self.n))
    }

    /// Number of distinct bins kept.
    pub fn count(&self) -> usize {
        (0..self.n).filter(|&k| self.contains(k)).count()
    }
}

/// Low/high decomposition `x = x_l + x_h` of a real signal.
#[derive(Clone, Debug)]
pub struct BandSplit {
    /// Real part of the masked inverse transform.
    pub low: RealSignal,
    /// `x - low`.
    pub high: RealSignal,
    /// Largest imaginary part discarded from the masked inverse transform.
    /// Zero (to rounding) iff the band is symmetric on the signal's support.
    pub imag_residue: f64,
}

/// Complex-valued split, exact for every band.
#[derive(Clone, Debug)]
pub struct ComplexBandSplit {
    pub low: Vec<Complex64>,
    pub high: Vec<Complex64>,
}

/// Split with the `L_mu` mask (first and last `mu` bins).
pub fn low_high_split(x: &RealSignal, mu: usize) -> Result<BandSplit> {
    band_split(x, &KeptBand::lowpass(x.len(), mu)?)
}

pub fn band_split(x: &RealSignal, band: &KeptBand) -> Result<BandSplit> {
    let ComplexBandSplit { low, .. } = band_split_complex(x, band)?;
    let imag_residue = low.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
    let low: Vec<f64> = low.iter().map(|c| c.re).collect();
    let high = x.iter().zip(&low).map(|(a, b)| a - b).collect();
    Ok(BandSplit {
        low: RealSignal(low),
        high: RealSignal(high),
        imag_residue,
    })
}

pub fn band_split_complex(x: &RealSignal, band: &KeptBand) -> Result<ComplexBandSplit> {
    crate::error::check_len(band.n, x.len())?;
    let n = x.len() as f64;
    let spectrum = dft(x);
    let masked = spectrum
        .0
        .iter()
        .enumerate()
        .map(|(k, &b)| if band.contains(k) { b } else { Complex64::ZERO })
        .collect();
    let low: Vec<Complex64> = idft(&ComplexSpectrum(masked))
        .into_iter()
        .map(|c| c / n)
        .collect();
    let high = x
        .iter()
        .zip(&low)
        .map(|(&a, &b)| Complex64::new(a, 0.0) - b)
        .collect();
    Ok(ComplexBandSplit { low, high })
}

/// Time-domain energy carried by frequencies with `|f| > max_freq`.
pub fn energy_above(x: &RealSignal, max_freq: usize) -> f64 {
    let n = x.len();
    dft(x)
        .0
        .iter()
        .enumerate()
        .filter(|(k, _)| signed_frequency(*k, n).unsigned_abs() as usize > max_freq)
        .map(|(_, b)| b.norm_sqr())
        .sum::<f64>()
        / n as f64
}

pub(crate) fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub(crate) fn complex_energy(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum()
}
