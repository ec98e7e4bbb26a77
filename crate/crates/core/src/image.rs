use ndarray::{Array2, Array3, ArrayView2, Axis};

use crate::error::{Error, Result};

/// Multi-channel real image stored as `(channels, height, width)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RealImage {
    data: Array3<f64>,
}

impl RealImage {
    pub fn from_array(data: Array3<f64>) -> Result<Self> {
        let (c, h, w) = data.dim();
        if c == 0 || h == 0 || w == 0 {
            return Err(Error::domain(format!(
                "image dimensions must be positive, got {c}x{h}x{w}"
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("image contains non-finite values"));
        }
        Ok(RealImage { data })
    }

    /// Build from row-major `height × width × channels` samples.
    pub fn from_interleaved(height: usize, width: usize, channels: usize, samples: &[f64]) -> Result<Self> {
        crate::error::check_len(height * width * channels, samples.len())?;
        let data = Array3::from_shape_fn((channels, height, width), |(c, y, x)| {
            samples[(y * width + x) * channels + c]
        });
        RealImage::from_array(data)
    }

    pub fn constant(height: usize, width: usize, channels: usize, value: f64) -> Result<Self> {
        RealImage::from_array(Array3::from_elem((channels, height, width), value))
    }

    pub fn from_channel(plane: Array2<f64>) -> Result<Self> {
        RealImage::from_array(plane.insert_axis(Axis(0)))
    }

    pub fn height(&self) -> usize {
        self.data.dim().1
    }

    pub fn width(&self) -> usize {
        self.data.dim().2
    }

    pub fn channels(&self) -> usize {
        self.data.dim().0
    }

    pub fn channel(&self, c: usize) -> ArrayView2<'_, f64> {
        self.data.index_axis(Axis(0), c)
    }

    pub fn data(&self) -> &Array3<f64> {
        &self.data
    }

    pub fn into_array(self) -> Array3<f64> {
        self.data
    }

    /// Row-major `height × width × channels` samples.
    pub fn to_interleaved(&self) -> Vec<f64> {
        let (c, h, w) = self.data.dim();
        let mut out = Vec::with_capacity(c * h * w);
        for y in 0..h {
            for x in 0..w {
                for ch in 0..c {
                    out.push(self.data[[ch, y, x]]);
                }
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &RealImage) -> f64 {
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Apply `f` to every channel plane; all outputs must share a shape.
    pub(crate) fn map_channels<F>(&self, f: F) -> Result<RealImage>
    where
        F: FnMut(ArrayView2<'_, f64>) -> Array2<f64>,
    {
        let planes: Vec<Array2<f64>> = self.data.outer_iter().map(f).collect();
        let views: Vec<_> = planes.iter().map(|p| p.view()).collect();
        let data = ndarray::stack(Axis(0), &views)
            .map_err(|e| Error::domain(format!("channel shape mismatch: {e}")))?;
        RealImage::from_array(data)
    }
}
