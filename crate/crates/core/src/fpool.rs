//! F-pooling and its coupled inverse.
//!
//! A plan for pooling `n` samples down to `m` holds two dense complex
//! matrices:
//!
//! ```text
//! P    = (1/n) · F_m^* · D · F_n      (m × n)
//! Pbar = (1/m) · F_n^* · Dᵀ · F_m     (n × m)
//! ```
//!
//! `D` picks the retained input bins (first `⌈m/2⌉`, last `⌊m/2⌋`) and lays
//! them out in output bin order. `Pbar · P` is the projection onto those bins.
//!
//! Feature maps are real, so `pool1d` and `unpool1d` keep only the real part.
//! With odd `m`, or with odd padding on even `m`, the retained band is
//! conjugate-symmetric and nothing is lost.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{check_len, Error, Result};
use crate::image::RealImage;
use crate::spectral::{
    band_split_complex, complex_energy, dft_matrix, idft_matrix, KeptBand, RealSignal,
};

const PLAN_CHECK_TOL: f64 = 1e-9;

/// Precomputed F-pooling operators for one `(n, m, odd_padding)` triple.
#[derive(Clone, Debug)]
pub struct FPoolPlan {
    n: usize,
    m: usize,
    odd_padding: bool,
    band: KeptBand,
    forward: Array2<Complex64>,
    inverse: Array2<Complex64>,
    forward_re: Array2<f64>,
    forward_im: Array2<f64>,
    inverse_re: Array2<f64>,
}

/// Input bin selected by each row of `D`, `None` for a row zeroed by odd
/// padding.
pub fn selection_rows(n: usize, m: usize, odd_padding: bool) -> Vec<Option<usize>> {
    let low = m.div_ceil(2);
    (0..m)
        .map(|r| {
            if r < low {
                Some(r)
            } else if odd_padding && m.is_multiple_of(2) && r == m / 2 {
                None
            } else {
                Some(n - (m - r))
            }
        })
        .collect()
}

impl FPoolPlan {
    pub fn new(n: usize, m: usize, odd_padding: bool) -> Result<Self> {
        if m == 0 {
            return Err(Error::domain("pooled length must be at least 1"));
        }
        if m > n {
            return Err(Error::domain(format!(
                "pooled length {m} exceeds input length {n}; upsampling is not a pooling plan"
            )));
        }
        let band = KeptBand::for_pooling(n, m, odd_padding)?;
        let rows = selection_rows(n, m, odd_padding);

        let f_n = dft_matrix(n);
        let fi_n = idft_matrix(n);
        let f_m = dft_matrix(m);
        let fi_m = idft_matrix(m);

        // D · F_n and F_n^* · Dᵀ by row/column selection.
        let d_f_n = Array2::from_shape_fn((m, n), |(r, j)| match rows[r] {
            Some(b) => f_n[[b, j]],
            None => Complex64::ZERO,
        });
        let fi_n_dt = Array2::from_shape_fn((n, m), |(j, r)| match rows[r] {
            Some(b) => fi_n[[j, b]],
            None => Complex64::ZERO,
        });

        let forward = fi_m.dot(&d_f_n) / Complex64::new(n as f64, 0.0);
        let inverse = fi_n_dt.dot(&f_m) / Complex64::new(m as f64, 0.0);

        let plan = FPoolPlan {
            n,
            m,
            odd_padding,
            band,
            forward_re: forward.mapv(|c| c.re),
            forward_im: forward.mapv(|c| c.im),
            inverse_re: inverse.mapv(|c| c.re),
            forward,
            inverse,
        };
        if m % 2 == 1 || !odd_padding {
            plan.verify_round_trip()?;
        }
        Ok(plan)
    }

    /// Identity-on-`C^m` self-check for `P · Pbar` on fixed probe vectors.
    fn verify_round_trip(&self) -> Result<()> {
        let m = self.m;
        let mut probes = vec![Array1::from_shape_fn(m, |i| {
            if i == 0 {
                Complex64::ONE
            } else {
                Complex64::ZERO
            }
        })];
        probes.push(Array1::from_shape_fn(m, |i| {
            let t = i as f64;
            Complex64::new((1.7 * t + 0.3).cos(), (0.9 * t * t + 0.1).sin())
        }));
        for v in probes {
            let back = self.forward.dot(&self.inverse.dot(&v));
            let err = (&back - &v).iter().map(|c| c.norm()).fold(0.0, f64::max);
            let scale = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if err > PLAN_CHECK_TOL * scale.max(1.0) {
                return Err(Error::Contract(format!(
                    "plan ({}, {}) failed P·Pbar = I self-check: error {err:e}",
                    self.n, self.m
                )));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn odd_padding(&self) -> bool {
        self.odd_padding
    }

    /// Input bins that survive pooling.
    pub fn band(&self) -> &KeptBand {
        &self.band
    }

    /// `P`, `m × n`.
    pub fn forward_matrix(&self) -> &Array2<Complex64> {
        &self.forward
    }

    /// `Pbar`, `n × m`.
    pub fn inverse_matrix(&self) -> &Array2<Complex64> {
        &self.inverse
    }

    /// Highest frequency an output of this plan can carry.
    pub fn output_nyquist(&self) -> usize {
        self.m / 2
    }

    /// `Re(P · x)`.
    pub fn pool1d(&self, x: &RealSignal) -> Result<RealSignal> {
        check_len(self.n, x.len())?;
        Ok(RealSignal::from_vec_unchecked(self.forward_re.dot(&x.to_array()).to_vec()))
    }

    /// `Re(P · x)` together with the largest imaginary magnitude discarded.
    pub fn pool1d_with_residue(&self, x: &RealSignal) -> Result<(RealSignal, f64)> {
        let y = self.pool1d(x)?;
        let im = self.forward_im.dot(&x.to_array());
        let residue = im.iter().map(|v| v.abs()).fold(0.0, f64::max);
        Ok((y, residue))
    }

    /// `P · x` without discarding the imaginary part.
    pub fn pool1d_complex(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        check_len(self.n, x.len())?;
        Ok(self.forward.dot(&Array1::from(x.to_vec())).to_vec())
    }

    /// `Re(Pbar · y)`.
    pub fn unpool1d(&self, y: &RealSignal) -> Result<RealSignal> {
        check_len(self.m, y.len())?;
        Ok(RealSignal::from_vec_unchecked(self.inverse_re.dot(&y.to_array()).to_vec()))
    }

    /// `Pbar · y` without discarding the imaginary part.
    pub fn unpool1d_complex(&self, y: &[Complex64]) -> Result<Vec<Complex64>> {
        check_len(self.m, y.len())?;
        Ok(self.inverse.dot(&Array1::from(y.to_vec())).to_vec())
    }

    /// `unpool1d(pool1d(x))`.
    pub fn project(&self, x: &RealSignal) -> Result<RealSignal> {
        self.unpool1d(&self.pool1d(x)?)
    }

    pub(crate) fn forward_real(&self) -> &Array2<f64> {
        &self.forward_re
    }

    pub(crate) fn inverse_real(&self) -> &Array2<f64> {
        &self.inverse_re
    }
}

fn check_image_plans(rows: &FPoolPlan, cols: &FPoolPlan, h: usize, w: usize, pooled: bool) -> Result<()> {
    let (eh, ew) = if pooled { (rows.m, cols.m) } else { (rows.n, cols.n) };
    if (h, w) != (eh, ew) {
        return Err(Error::domain(format!(
            "image is {h}x{w} but plans expect {eh}x{ew}"
        )));
    }
    Ok(())
}

/// Separable 2D F-pooling, `Y = Re(P_r) · X · Re(P_c)ᵀ` per channel.
///
/// `plan_rows` acts along the vertical axis (`n == height`), `plan_cols`
/// along the horizontal axis (`n == width`).
pub fn pool2d(plan_rows: &FPoolPlan, plan_cols: &FPoolPlan, image: &RealImage) -> Result<RealImage> {
    check_image_plans(plan_rows, plan_cols, image.height(), image.width(), false)?;
    image.map_channels(|x| plan_rows.forward_real().dot(&x).dot(&plan_cols.forward_real().t()))
}

/// Separable 2D inverse F-pooling with `Pbar` along both axes.
pub fn unpool2d(plan_rows: &FPoolPlan, plan_cols: &FPoolPlan, image: &RealImage) -> Result<RealImage> {
    check_image_plans(plan_rows, plan_cols, image.height(), image.width(), true)?;
    image.map_channels(|y| plan_rows.inverse_real().dot(&y).dot(&plan_cols.inverse_real().t()))
}

/// Terms of the reconstruction error `‖Pbar·y - x‖²` for a downsampled `y`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Reconstruction {
    /// `‖Pbar·y - x‖²`
    pub total: f64,
    /// `‖Pbar·y - x_l‖²`
    pub low: f64,
    /// `‖x_h‖²`
    pub high_energy: f64,
}

/// Reconstruction error of F-pooling itself, `y = P·x`.
///
/// Evaluated with complex operators, so `total == low + high_energy` holds
/// for every plan; for symmetric bands the values coincide with the real
/// pipeline's.
pub fn reconstruction_decomposition(x: &RealSignal, plan: &FPoolPlan) -> Result<Reconstruction> {
    let xc: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let y = plan.pool1d_complex(&xc)?;
    decompose(x, plan, &y)
}

/// Reconstruction error of an arbitrary downsampled signal under `Pbar`.
pub fn reconstruction_with(x: &RealSignal, plan: &FPoolPlan, y: &RealSignal) -> Result<Reconstruction> {
    let yc: Vec<Complex64> = y.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    decompose(x, plan, &yc)
}

fn decompose(x: &RealSignal, plan: &FPoolPlan, y: &[Complex64]) -> Result<Reconstruction> {
    check_len(plan.n, x.len())?;
    let recon = plan.unpool1d_complex(y)?;
    let split = band_split_complex(x, plan.band())?;
    let diff = |a: &[Complex64], b: &dyn Fn(usize) -> Complex64| -> f64 {
        complex_energy(&a.iter().enumerate().map(|(i, v)| v - b(i)).collect::<Vec<_>>())
    };
    Ok(Reconstruction {
        total: diff(&recon, &|i| Complex64::new(x[i], 0.0)),
        low: diff(&recon, &|i| split.low[i]),
        high_energy: complex_energy(&split.high),
    })
}
