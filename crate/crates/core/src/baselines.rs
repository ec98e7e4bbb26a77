//! Comparison poolings and the rules that swap them for F-pooling.
//!
//! Every window wraps around the end of the signal, and the stride must
//! divide the signal length.

use std::fmt;

use ndarray::{Array2, ArrayView2, Axis};

use crate::error::{Error, Result};
use crate::fpool::{pool2d, FPoolPlan};
use crate::image::RealImage;
use crate::spectral::RealSignal;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PoolingKind {
    /// F-pooling by an integer factor: `n` samples become `n / factor`.
    FPool { factor: usize, odd_padding: bool },
    Max { window: usize, stride: usize },
    Avg { window: usize, stride: usize },
    /// Keep every `stride`-th sample.
    Stride { stride: usize },
    /// Box blur of the given width, then subsample.
    BlurStride { width: usize, stride: usize },
}

impl PoolingKind {
    pub fn stride(&self) -> usize {
        match *self {
            PoolingKind::FPool { factor, .. } => factor,
            PoolingKind::Max { stride, .. }
            | PoolingKind::Avg { stride, .. }
            | PoolingKind::Stride { stride }
            | PoolingKind::BlurStride { stride, .. } => stride,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let window = match *self {
            PoolingKind::Max { window, .. } | PoolingKind::Avg { window, .. } => window,
            PoolingKind::BlurStride { width, .. } => width,
            PoolingKind::FPool { .. } | PoolingKind::Stride { .. } => 1,
        };
        if window == 0 || self.stride() == 0 {
            return Err(Error::domain(format!("{self}: windows and strides must be at least 1")));
        }
        Ok(())
    }

    /// Output length for an input of length `n`.
    pub fn output_len(&self, n: usize) -> Result<usize> {
        self.validate()?;
        let s = self.stride();
        if !n.is_multiple_of(s) {
            return Err(Error::domain(format!(
                "{self}: stride {s} does not divide length {n}"
            )));
        }
        Ok(n / s)
    }

    /// Short identifier used in reports.
    pub fn label(&self) -> &'static str {
        match self {
            PoolingKind::FPool { .. } => "fpool",
            PoolingKind::Max { .. } => "max",
            PoolingKind::Avg { .. } => "avg",
            PoolingKind::Stride { .. } => "stride",
            PoolingKind::BlurStride { .. } => "blur",
        }
    }
}

impl fmt::Display for PoolingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            PoolingKind::FPool { factor, odd_padding } => {
                write!(f, "FPool({factor}{})", if odd_padding { ", odd" } else { "" })
            }
            PoolingKind::Max { window, stride } => write!(f, "Max({window}, {stride})"),
            PoolingKind::Avg { window, stride } => write!(f, "Avg({window}, {stride})"),
            PoolingKind::Stride { stride } => write!(f, "Stride({stride})"),
            PoolingKind::BlurStride { width, stride } => write!(f, "BlurStride({width}, {stride})"),
        }
    }
}

/// Pool a 1D signal with any [`PoolingKind`].
pub fn pool_baseline(kind: PoolingKind, x: &RealSignal) -> Result<RealSignal> {
    let m = kind.output_len(x.len())?;
    if let PoolingKind::FPool { odd_padding, .. } = kind {
        return FPoolPlan::new(x.len(), m, odd_padding)?.pool1d(x);
    }
    Ok(RealSignal::from_vec_unchecked(pool_window_slice(kind, x.as_slice())))
}

/// Window-based pooling of one row. `kind` must not be `FPool` and must
/// already be validated against `x.len()`.
pub(crate) fn pool_window_slice(kind: PoolingKind, x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let at = |i: usize| x[i % n];
    let window = |start: usize, k: usize| (start..start + k).map(at);
    let s = kind.stride();
    (0..n / s)
        .map(|i| {
            let start = i * s;
            match kind {
                PoolingKind::Max { window: k, .. } => {
                    window(start, k).fold(f64::NEG_INFINITY, f64::max)
                }
                PoolingKind::Avg { window: k, .. } => window(start, k).sum::<f64>() / k as f64,
                PoolingKind::Stride { .. } => x[start],
                PoolingKind::BlurStride { width, .. } => {
                    // box filter anchored at the output sample, then subsample
                    window(start, width).map(|v| v / width as f64).sum()
                }
                PoolingKind::FPool { .. } => unreachable!("F-pooling is not window based"),
            }
        })
        .collect()
}

fn pool_axis(kind: PoolingKind, plane: ArrayView2<'_, f64>, axis: Axis) -> Array2<f64> {
    let lanes: Vec<Vec<f64>> = plane
        .lanes(axis)
        .into_iter()
        .map(|lane| pool_window_slice(kind, &lane.to_vec()))
        .collect();
    let out_len = lanes.first().map_or(0, Vec::len);
    let flat: Vec<f64> = lanes.into_iter().flatten().collect();
    // `lanes(axis)` iterates the other axis; the pooled axis becomes contiguous
    let arr = Array2::from_shape_vec((flat.len() / out_len.max(1), out_len), flat)
        .expect("lane lengths are uniform");
    if axis == Axis(1) {
        arr
    } else {
        arr.reversed_axes()
    }
}

/// Separable 2D pooling: along the width, then along the height.
pub fn pool_image(kind: PoolingKind, image: &RealImage) -> Result<RealImage> {
    let mh = kind.output_len(image.height())?;
    let mw = kind.output_len(image.width())?;
    if let PoolingKind::FPool { odd_padding, .. } = kind {
        let rows = FPoolPlan::new(image.height(), mh, odd_padding)?;
        let cols = FPoolPlan::new(image.width(), mw, odd_padding)?;
        return pool2d(&rows, &cols, image);
    }
    image.map_channels(|plane| {
        let across = pool_axis(kind, plane, Axis(1));
        pool_axis(kind, across.view(), Axis(0))
    })
}

/// Split a strided pooling into a stride-1 part followed by F-pooling.
///
/// `Max(k, s)` becomes `[Max(k, 1), FPool(s)]`, `Avg(k, s)` becomes
/// `[FPool(s)]`, and a strided subsampling (the downsampling half of a strided
/// convolution) becomes `[Stride(1), FPool(s)]`. Stride 1 is returned as is.
pub fn replace_rule(original: PoolingKind, odd_padding: bool) -> Vec<PoolingKind> {
    let s = original.stride();
    if s <= 1 {
        return vec![original];
    }
    let fpool = PoolingKind::FPool { factor: s, odd_padding };
    match original {
        PoolingKind::Max { window, .. } => vec![PoolingKind::Max { window, stride: 1 }, fpool],
        PoolingKind::Avg { .. } => vec![fpool],
        PoolingKind::Stride { .. } => vec![PoolingKind::Stride { stride: 1 }, fpool],
        PoolingKind::BlurStride { width, .. } => {
            vec![PoolingKind::BlurStride { width, stride: 1 }, fpool]
        }
        PoolingKind::FPool { .. } => vec![original],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(v: &[f64]) -> RealSignal {
        RealSignal::new(v.to_vec()).unwrap()
    }

    #[test]
    fn simple_examples() {
        let x = sig(&[1.0, 3.0, 5.0, 7.0]);
        let avg = pool_baseline(PoolingKind::Avg { window: 2, stride: 2 }, &x).unwrap();
        assert_eq!(avg.as_slice(), &[2.0, 6.0]);
        let max = pool_baseline(PoolingKind::Max { window: 2, stride: 2 }, &x).unwrap();
        assert_eq!(max.as_slice(), &[3.0, 7.0]);
        let st = pool_baseline(PoolingKind::Stride { stride: 2 }, &x).unwrap();
        assert_eq!(st.as_slice(), &[1.0, 5.0]);
    }

    #[test]
    fn windows_wrap_around() {
        let x = sig(&[1.0, 0.0, 0.0, 9.0]);
        let max = pool_baseline(PoolingKind::Max { window: 3, stride: 2 }, &x).unwrap();
        assert_eq!(max.as_slice(), &[1.0, 9.0]);
    }

    #[test]
    fn non_divisible_length_is_rejected() {
        let x = sig(&[1.0, 2.0, 3.0]);
        assert!(matches!(
            pool_baseline(PoolingKind::Stride { stride: 2 }, &x),
            Err(Error::Domain(_))
        ));
        assert!(pool_baseline(PoolingKind::Max { window: 0, stride: 1 }, &x).is_err());
    }

    #[test]
    fn average_equals_blur_then_stride() {
        let x = sig(&[0.3, -1.2, 4.0, 2.2, 0.0, 1.1, -0.7, 5.5, 3.3, 0.9, -2.0, 1.0]);
        for s in [1, 2, 3, 4, 6] {
            let a = pool_baseline(PoolingKind::Avg { window: s, stride: s }, &x).unwrap();
            let b = pool_baseline(PoolingKind::BlurStride { width: s, stride: s }, &x).unwrap();
            assert!(a.max_abs_diff(&b) <= 1e-12, "s={s}");
        }
    }

    #[test]
    fn replacement_rules() {
        assert_eq!(
            replace_rule(PoolingKind::Max { window: 2, stride: 2 }, false),
            vec![
                PoolingKind::Max { window: 2, stride: 1 },
                PoolingKind::FPool { factor: 2, odd_padding: false }
            ]
        );
        assert_eq!(
            replace_rule(PoolingKind::Avg { window: 2, stride: 2 }, false),
            vec![PoolingKind::FPool { factor: 2, odd_padding: false }]
        );
        assert_eq!(
            replace_rule(PoolingKind::Stride { stride: 1 }, false),
            vec![PoolingKind::Stride { stride: 1 }]
        );
        assert_eq!(
            replace_rule(PoolingKind::Stride { stride: 4 }, true),
            vec![
                PoolingKind::Stride { stride: 1 },
                PoolingKind::FPool { factor: 4, odd_padding: true }
            ]
        );
    }

    #[test]
    fn image_pooling_is_separable() {
        let samples: Vec<f64> = (0..48).map(|i| ((i * 7) % 11) as f64).collect();
        let img = RealImage::from_interleaved(6, 8, 1, &samples).unwrap();
        let kind = PoolingKind::Max { window: 2, stride: 2 };
        let out = pool_image(kind, &img).unwrap();
        assert_eq!((out.height(), out.width()), (3, 4));
        let plane = img.channel(0);
        for y in 0..3 {
            for x in 0..4 {
                let want = (0..2)
                    .flat_map(|dy| (0..2).map(move |dx| (dy, dx)))
                    .map(|(dy, dx)| plane[[2 * y + dy, 2 * x + dx]])
                    .fold(f64::NEG_INFINITY, f64::max);
                assert_eq!(out.channel(0)[[y, x]], want);
            }
        }
    }
}
