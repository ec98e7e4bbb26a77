//! Layer pipelines and the shift-equivalence harness.
//!
//! Features are `(channels, height, width)` arrays. One-dimensional features
//! use height 1; rolling a length-1 axis is the identity, so diagonal shifts
//! act on the width only.
//!
//! A pipeline is shift-equivalent with respect to an upsampler `U` when
//! `shift(U(p(x))) == U(p(shift(x)))` for every integer shift.

use std::fmt;

use ndarray::{s, Array1, Array2, Array3, Array4, ArrayView2, Axis};
use rand::Rng;
use rayon::prelude::*;

use crate::baselines::{pool_window_slice, replace_rule, PoolingKind};
use crate::error::{Error, Result};
use crate::fpool::FPoolPlan;
use crate::image::RealImage;
use crate::seeded_rng;
use crate::spectral::{roll, RealSignal};

/// Feature map, `(channels, height, width)`.
pub type Feature = Array3<f64>;

/// Spatial layout of a feature map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Extent {
    Line(usize),
    Grid { height: usize, width: usize },
}

impl Extent {
    pub fn height(&self) -> usize {
        match *self {
            Extent::Line(_) => 1,
            Extent::Grid { height, .. } => height,
        }
    }

    pub fn width(&self) -> usize {
        match *self {
            Extent::Line(w) => w,
            Extent::Grid { width, .. } => width,
        }
    }

    fn with_dims(&self, height: usize, width: usize) -> Extent {
        match self {
            Extent::Line(_) => Extent::Line(width),
            Extent::Grid { .. } => Extent::Grid { height, width },
        }
    }

    fn is_grid(&self) -> bool {
        matches!(self, Extent::Grid { .. })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FeatureShape {
    pub channels: usize,
    pub extent: Extent,
}

impl FeatureShape {
    pub fn line(channels: usize, n: usize) -> Self {
        FeatureShape {
            channels,
            extent: Extent::Line(n),
        }
    }

    pub fn grid(channels: usize, height: usize, width: usize) -> Self {
        FeatureShape {
            channels,
            extent: Extent::Grid { height, width },
        }
    }

    pub fn dim(&self) -> (usize, usize, usize) {
        (self.channels, self.extent.height(), self.extent.width())
    }
}

impl fmt::Display for FeatureShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.extent {
            Extent::Line(n) => write!(f, "{}x{}", self.channels, n),
            Extent::Grid { height, width } => write!(f, "{}x{}x{}", self.channels, height, width),
        }
    }
}

pub fn signal_feature(x: &RealSignal) -> Feature {
    Array3::from_shape_vec((1, 1, x.len()), x.as_slice().to_vec()).expect("shape matches length")
}

pub fn image_feature(img: &RealImage) -> Feature {
    img.data().clone()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Padding {
    Circular,
    Zero,
}

impl std::str::FromStr for Padding {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "circular" => Ok(Padding::Circular),
            "zero" => Ok(Padding::Zero),
            other => Err(Error::Config(format!("unknown padding mode `{other}`"))),
        }
    }
}

impl fmt::Display for Padding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Padding::Circular => "circular",
            Padding::Zero => "zero",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Layer {
    /// Stride-1 "same" convolution; weights are `(out, in, kh, kw)`.
    Conv {
        weights: Array4<f64>,
        bias: Array1<f64>,
        padding: Padding,
    },
    Relu,
    Pool(PoolingKind),
    /// Spatial mean per channel.
    GlobalAvg,
    /// Dense layer on the flattened feature; weights are `(out, in)`.
    Linear { weights: Array2<f64>, bias: Array1<f64> },
}

impl Layer {
    pub fn conv(weights: Array4<f64>, bias: Array1<f64>, padding: Padding) -> Result<Self> {
        let (out, _, _, _) = weights.dim();
        if bias.len() != out {
            return Err(Error::LengthMismatch {
                expected: out,
                actual: bias.len(),
            });
        }
        if weights.iter().chain(bias.iter()).any(|v| !v.is_finite()) {
            return Err(Error::domain("convolution weights must be finite"));
        }
        Ok(Layer::Conv {
            weights,
            bias,
            padding,
        })
    }

    /// 1D convolution from `(out, in, k)` weights.
    pub fn conv1d(weights: Array3<f64>, bias: Array1<f64>, padding: Padding) -> Result<Self> {
        Layer::conv(weights.insert_axis(Axis(2)), bias, padding)
    }

    /// Convolution with weights uniform in `[-1, 1)` scaled by `1/sqrt(fan_in)`.
    pub fn random_conv(
        rng: &mut impl Rng,
        in_ch: usize,
        out_ch: usize,
        kernel: (usize, usize),
        padding: Padding,
    ) -> Self {
        let scale = 1.0 / ((in_ch * kernel.0 * kernel.1) as f64).sqrt();
        let weights = Array4::from_shape_simple_fn((out_ch, in_ch, kernel.0, kernel.1), || {
            rng.random_range(-1.0..1.0) * scale
        });
        let bias = Array1::from_shape_simple_fn(out_ch, || rng.random_range(-0.1..0.1));
        Layer::Conv {
            weights,
            bias,
            padding,
        }
    }

    pub fn random_linear(rng: &mut impl Rng, inputs: usize, outputs: usize) -> Self {
        let scale = 1.0 / (inputs as f64).sqrt();
        Layer::Linear {
            weights: Array2::from_shape_simple_fn((outputs, inputs), || {
                rng.random_range(-1.0..1.0) * scale
            }),
            bias: Array1::zeros(outputs),
        }
    }

    fn describe(&self) -> String {
        match self {
            Layer::Conv { weights, padding, .. } => {
                let (o, i, kh, kw) = weights.dim();
                format!("Conv({i}->{o}, {kh}x{kw}, {padding})")
            }
            Layer::Relu => "ReLU".into(),
            Layer::Pool(kind) => kind.to_string(),
            Layer::GlobalAvg => "GlobalAvg".into(),
            Layer::Linear { weights, .. } => {
                let (o, i) = weights.dim();
                format!("Linear({i}->{o})")
            }
        }
    }
}

/// F-pooling plans for one pooling stage, `(rows, cols)`.
#[derive(Clone, Debug)]
struct StagePlans {
    rows: Option<FPoolPlan>,
    cols: FPoolPlan,
}

#[derive(Clone, Debug)]
struct Stage {
    layer: Layer,
    input: FeatureShape,
    output: FeatureShape,
    plans: Option<StagePlans>,
}

#[derive(Clone, Debug)]
pub struct Pipeline {
    input: FeatureShape,
    stages: Vec<Stage>,
}

fn output_shape(layer: &Layer, input: FeatureShape) -> Result<(FeatureShape, Option<StagePlans>)> {
    let ext = input.extent;
    match layer {
        Layer::Conv { weights, .. } => {
            let (out, inp, kh, _) = weights.dim();
            if inp != input.channels {
                return Err(Error::domain(format!(
                    "conv expects {inp} input channels, stage has {}",
                    input.channels
                )));
            }
            if !ext.is_grid() && kh != 1 {
                return Err(Error::domain("1D features need kernel height 1"));
            }
            Ok((FeatureShape { channels: out, extent: ext }, None))
        }
        Layer::Relu => Ok((input, None)),
        Layer::Pool(kind) => {
            let w = kind.output_len(ext.width())?;
            let h = if ext.is_grid() { kind.output_len(ext.height())? } else { 1 };
            let plans = match *kind {
                PoolingKind::FPool { odd_padding, .. } => Some(StagePlans {
                    rows: if ext.is_grid() {
                        Some(FPoolPlan::new(ext.height(), h, odd_padding)?)
                    } else {
                        None
                    },
                    cols: FPoolPlan::new(ext.width(), w, odd_padding)?,
                }),
                _ => None,
            };
            Ok((
                FeatureShape {
                    channels: input.channels,
                    extent: ext.with_dims(h, w),
                },
                plans,
            ))
        }
        Layer::GlobalAvg => Ok((
            FeatureShape {
                channels: input.channels,
                extent: ext.with_dims(1, 1),
            },
            None,
        )),
        Layer::Linear { weights, bias } => {
            let (out, inp) = weights.dim();
            let (c, h, w) = input.dim();
            if inp != c * h * w {
                return Err(Error::domain(format!(
                    "linear layer expects {inp} inputs, stage has {}",
                    c * h * w
                )));
            }
            if bias.len() != out {
                return Err(Error::LengthMismatch {
                    expected: out,
                    actual: bias.len(),
                });
            }
            Ok((
                FeatureShape {
                    channels: out,
                    extent: ext.with_dims(1, 1),
                },
                None,
            ))
        }
    }
}

impl Pipeline {
    pub fn new(input: FeatureShape, layers: Vec<Layer>) -> Result<Self> {
        let (c, h, w) = input.dim();
        if c == 0 || h == 0 || w == 0 {
            return Err(Error::domain("input shape must be positive"));
        }
        let mut shape = input;
        let mut stages = Vec::with_capacity(layers.len());
        for layer in layers {
            let (output, plans) = output_shape(&layer, shape)?;
            stages.push(Stage {
                layer,
                input: shape,
                output,
                plans,
            });
            shape = output;
        }
        Ok(Pipeline { input, stages })
    }

    pub fn input_shape(&self) -> FeatureShape {
        self.input
    }

    pub fn output_shape(&self) -> FeatureShape {
        self.stages.last().map_or(self.input, |s| s.output)
    }

    /// Output shape of every stage, in order.
    pub fn stage_shapes(&self) -> Vec<FeatureShape> {
        self.stages.iter().map(|s| s.output).collect()
    }

    pub fn layers(&self) -> impl Iterator<Item = &Layer> {
        self.stages.iter().map(|s| &s.layer)
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    /// Sub-pipeline of `layers[range]`, starting from that stage's input shape.
    pub fn segment(&self, range: std::ops::Range<usize>) -> Result<Pipeline> {
        if range.start > range.end || range.end > self.stages.len() {
            return Err(Error::domain("segment out of range"));
        }
        let input = self
            .stages
            .get(range.start)
            .map_or(self.output_shape(), |s| s.input);
        Ok(Pipeline {
            input,
            stages: self.stages[range].to_vec(),
        })
    }

    /// Same pipeline with every strided pooling split into a stride-1 part
    /// and an F-pooling.
    pub fn with_fpool_replacements(&self, odd_padding: bool) -> Result<Pipeline> {
        let layers = self
            .stages
            .iter()
            .flat_map(|s| match &s.layer {
                Layer::Pool(kind) => replace_rule(*kind, odd_padding)
                    .into_iter()
                    .map(Layer::Pool)
                    .collect(),
                other => vec![other.clone()],
            })
            .collect();
        Pipeline::new(self.input, layers)
    }

    pub fn describe(&self) -> String {
        if self.stages.is_empty() {
            return "identity".into();
        }
        self.stages
            .iter()
            .map(|s| s.layer.describe())
            .collect::<Vec<_>>()
            .join(" -> ")
    }

    /// Evaluate the pipeline, returning the input followed by every stage's
    /// output.
    pub fn forward(&self, x: &Feature) -> Result<Vec<Feature>> {
        check_shape(self.input, x)?;
        let mut trace = Vec::with_capacity(self.stages.len() + 1);
        trace.push(x.clone());
        for stage in &self.stages {
            let next = stage.apply(trace.last().expect("trace is non-empty"));
            trace.push(next);
        }
        Ok(trace)
    }

    /// Final output only.
    pub fn apply(&self, x: &Feature) -> Result<Feature> {
        check_shape(self.input, x)?;
        let mut cur = x.clone();
        for stage in &self.stages {
            cur = stage.apply(&cur);
        }
        Ok(cur)
    }
}

fn check_shape(shape: FeatureShape, x: &Feature) -> Result<()> {
    if x.dim() != shape.dim() {
        return Err(Error::domain(format!(
            "feature has shape {:?}, expected {:?}",
            x.dim(),
            shape.dim()
        )));
    }
    Ok(())
}

impl Stage {
    fn apply(&self, x: &Feature) -> Feature {
        match &self.layer {
            Layer::Conv {
                weights,
                bias,
                padding,
            } => convolve(x, weights, bias, *padding),
            Layer::Relu => x.mapv(|v| v.max(0.0)),
            Layer::Pool(kind) => self.pool(*kind, x),
            Layer::GlobalAvg => {
                let means = x.map_axis(Axis(2), |r| r.sum()).map_axis(Axis(1), |r| r.sum())
                    / (x.dim().1 * x.dim().2) as f64;
                means.insert_axis(Axis(1)).insert_axis(Axis(2))
            }
            Layer::Linear { weights, bias } => {
                let flat = Array1::from_iter(x.iter().copied());
                let out = weights.dot(&flat) + bias;
                out.insert_axis(Axis(1)).insert_axis(Axis(2))
            }
        }
    }

    fn pool(&self, kind: PoolingKind, x: &Feature) -> Feature {
        let (c, h, w) = self.output.dim();
        let mut out = Array3::zeros((c, h, w));
        for (ch, plane) in x.outer_iter().enumerate() {
            let pooled = match &self.plans {
                Some(plans) => {
                    let across = plane.dot(&plans.cols.forward_real().t());
                    match &plans.rows {
                        Some(rows) => rows.forward_real().dot(&across),
                        None => across,
                    }
                }
                None => {
                    let across = pool_lanes(kind, plane);
                    if self.input.extent.is_grid() {
                        pool_lanes(kind, across.t()).reversed_axes()
                    } else {
                        across
                    }
                }
            };
            out.slice_mut(s![ch, .., ..]).assign(&pooled);
        }
        out
    }
}

/// Pool every row of `plane` along its width.
fn pool_lanes(kind: PoolingKind, plane: ArrayView2<'_, f64>) -> Array2<f64> {
    let rows: Vec<Vec<f64>> = plane
        .outer_iter()
        .map(|r| pool_window_slice(kind, &r.to_vec()))
        .collect();
    let w = rows[0].len();
    Array2::from_shape_vec((rows.len(), w), rows.concat()).expect("uniform rows")
}

fn convolve(x: &Feature, weights: &Array4<f64>, bias: &Array1<f64>, padding: Padding) -> Feature {
    let (_, h, w) = x.dim();
    let (out_ch, in_ch, kh, kw) = weights.dim();
    let (ch, cw) = ((kh / 2) as i64, (kw / 2) as i64);
    let mut out = Array3::zeros((out_ch, h, w));
    for o in 0..out_ch {
        for y in 0..h {
            for xx in 0..w {
                let mut acc = bias[o];
                for i in 0..in_ch {
                    for dy in 0..kh {
                        let sy = y as i64 + dy as i64 - ch;
                        let sy = match padding {
                            Padding::Circular => sy.rem_euclid(h as i64),
                            Padding::Zero if sy < 0 || sy >= h as i64 => continue,
                            Padding::Zero => sy,
                        } as usize;
                        for dx in 0..kw {
                            let sx = xx as i64 + dx as i64 - cw;
                            let sx = match padding {
                                Padding::Circular => sx.rem_euclid(w as i64),
                                Padding::Zero if sx < 0 || sx >= w as i64 => continue,
                                Padding::Zero => sx,
                            } as usize;
                            acc += weights[[o, i, dy, dx]] * x[[i, sy, sx]];
                        }
                    }
                }
                out[[o, y, xx]] = acc;
            }
        }
    }
    out
}

/// Integer circular shift of a feature map along height and width.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct FeatureShift {
    pub dy: i64,
    pub dx: i64,
}

impl FeatureShift {
    /// Equal shift along both axes. On 1D features only the width moves.
    pub fn diagonal(t: i64) -> Self {
        FeatureShift { dy: t, dx: t }
    }

    pub fn apply(&self, x: &Feature) -> Feature {
        let (c, h, w) = x.dim();
        let mut out = Array3::zeros((c, h, w));
        let dy = self.dy.rem_euclid(h as i64) as usize;
        let dx = self.dx.rem_euclid(w as i64) as usize;
        for ch in 0..c {
            for y in 0..h {
                let row: Vec<f64> = x.slice(s![ch, y, ..]).to_vec();
                let rolled = roll(&row, dx as i64);
                out.slice_mut(s![ch, (y + dy) % h, ..])
                    .assign(&Array1::from(rolled));
            }
        }
        out
    }
}

/// Map from a pipeline's output resolution back to its input resolution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Upsampler {
    /// Inverse F-pooling along each spatial axis.
    InverseFPool { odd_padding: bool },
    /// No resampling; output and input resolutions must already match.
    Identity,
}

impl Default for Upsampler {
    fn default() -> Self {
        Upsampler::InverseFPool { odd_padding: true }
    }
}

/// An [`Upsampler`] with its plans built for one pair of extents.
#[derive(Clone, Debug)]
pub struct BoundUpsampler {
    rows: Option<FPoolPlan>,
    cols: Option<FPoolPlan>,
}

impl Upsampler {
    pub fn bind(&self, from: Extent, to: Extent) -> Result<BoundUpsampler> {
        if from.is_grid() != to.is_grid() {
            return Err(Error::domain("upsampler cannot change dimensionality"));
        }
        match *self {
            Upsampler::Identity => {
                if from != to {
                    return Err(Error::domain(format!(
                        "identity upsampler cannot map {from:?} to {to:?}"
                    )));
                }
                Ok(BoundUpsampler { rows: None, cols: None })
            }
            Upsampler::InverseFPool { odd_padding } => Ok(BoundUpsampler {
                rows: if to.is_grid() {
                    Some(FPoolPlan::new(to.height(), from.height(), odd_padding)?)
                } else {
                    None
                },
                cols: Some(FPoolPlan::new(to.width(), from.width(), odd_padding)?),
            }),
        }
    }
}

impl BoundUpsampler {
    pub fn apply(&self, y: &Feature) -> Feature {
        let Some(cols) = &self.cols else {
            return y.clone();
        };
        let planes: Vec<Array2<f64>> = y
            .outer_iter()
            .map(|p| {
                let across = p.dot(&cols.inverse_real().t());
                match &self.rows {
                    Some(rows) => rows.inverse_real().dot(&across),
                    None => across,
                }
            })
            .collect();
        let views: Vec<_> = planes.iter().map(|p| p.view()).collect();
        ndarray::stack(Axis(0), &views).expect("planes share a shape")
    }
}

/// Reusable evaluator of the equivalence error for one pipeline and input.
pub struct EquivalenceProbe<'a> {
    pipeline: &'a Pipeline,
    upsampler: BoundUpsampler,
    x: Feature,
    reference: Feature,
}

impl<'a> EquivalenceProbe<'a> {
    pub fn new(pipeline: &'a Pipeline, upsampler: Upsampler, x: &Feature) -> Result<Self> {
        let up = upsampler.bind(pipeline.output_shape().extent, pipeline.input_shape().extent)?;
        let reference = up.apply(&pipeline.apply(x)?);
        Ok(EquivalenceProbe {
            pipeline,
            upsampler: up,
            x: x.clone(),
            reference,
        })
    }

    /// Max-abs difference between `shift(U(p(x)))` and `U(p(shift(x)))`.
    pub fn error(&self, shift: FeatureShift) -> f64 {
        let lhs = shift.apply(&self.reference);
        let rhs = self
            .upsampler
            .apply(&self.pipeline.apply(&shift.apply(&self.x)).expect("shape checked at construction"));
        lhs.iter()
            .zip(rhs.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Errors for many shifts, evaluated in parallel, in input order.
    pub fn errors(&self, shifts: &[FeatureShift]) -> Vec<f64> {
        shifts.par_iter().map(|s| self.error(*s)).collect()
    }
}

pub fn equivalence_error(
    pipeline: &Pipeline,
    upsampler: Upsampler,
    shift: FeatureShift,
    x: &Feature,
) -> Result<f64> {
    Ok(EquivalenceProbe::new(pipeline, upsampler, x)?.error(shift))
}

pub(crate) fn feature_norm(x: &Feature) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Relative tolerance for "exactly shift-equivalent".
pub const EXACT_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct TransitivityConfig {
    pub seed: u64,
    /// Input length (1D) or side length (2D); must be divisible by 4.
    pub size: usize,
    pub channels: usize,
    pub two_d: bool,
    pub shifts: Vec<i64>,
}

impl Default for TransitivityConfig {
    fn default() -> Self {
        TransitivityConfig {
            seed: 0,
            size: 32,
            channels: 4,
            two_d: false,
            shifts: (-4..=4).collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TransitivityRow {
    pub pipeline: String,
    pub shift: i64,
    pub error: f64,
    /// `‖input‖` of the evaluated segment, the scale of the tolerance.
    pub input_norm: f64,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct TransitivitySummary {
    pub pipeline: String,
    pub max_error: f64,
    pub pass: bool,
    /// Expected verdict for the pipelines whose outcome is known in advance:
    /// single-pooling segments pass, the nonlinear stack fails.
    pub expected: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct TransitivityReport {
    pub rows: Vec<TransitivityRow>,
    pub summaries: Vec<TransitivitySummary>,
}

impl TransitivityReport {
    pub fn summary(&self, name: &str) -> Option<&TransitivitySummary> {
        self.summaries.iter().find(|s| s.pipeline == name)
    }

    /// True when every pipeline with an expected verdict meets it.
    pub fn matches_expected(&self) -> bool {
        self.summaries
            .iter()
            .all(|s| s.expected.is_none_or(|e| e == s.pass))
    }
}

pub const SEGMENT_FIRST: &str = "f1->P (first pooling)";
pub const SEGMENT_SECOND: &str = "f2->P (second pooling)";
pub const WHOLE_NETWORK: &str = "f1->P->f2->P (end to end)";
pub const FPOOL_RELU_FPOOL: &str = "P->ReLU->P (end to end)";
pub const FPOOL_FPOOL: &str = "P->P (linear cascade)";
pub const FPOOL_CONV_FPOOL: &str = "P->Conv->P (linear cascade)";

/// Shift-equivalence of single-pooling segments versus stacked poolings.
///
/// Each stacked pipeline is judged at its final output with the inverse
/// F-pooling from the final resolution straight back to the input
/// resolution as the upsampler.
pub fn transitivity_report(cfg: &TransitivityConfig) -> Result<TransitivityReport> {
    if !cfg.size.is_multiple_of(4) || cfg.size == 0 {
        return Err(Error::domain(format!(
            "transitivity size must be a positive multiple of 4, got {}",
            cfg.size
        )));
    }
    let mut rng = seeded_rng(cfg.seed);
    let (shape, kernel) = if cfg.two_d {
        (FeatureShape::grid(1, cfg.size, cfg.size), (3, 3))
    } else {
        (FeatureShape::line(1, cfg.size), (1, 3))
    };
    let c = cfg.channels;
    let x = random_feature(&mut rng, shape);
    let pool = Layer::Pool(PoolingKind::FPool { factor: 2, odd_padding: true });
    let conv1 = Layer::random_conv(&mut rng, 1, c, kernel, Padding::Circular);
    let conv2 = Layer::random_conv(&mut rng, c, c, kernel, Padding::Circular);
    let conv_mid = Layer::random_conv(&mut rng, 1, 1, kernel, Padding::Circular);

    let whole = Pipeline::new(
        shape,
        vec![conv1, Layer::Relu, pool.clone(), conv2, Layer::Relu, pool.clone()],
    )?;
    let first = whole.segment(0..3)?;
    let second = whole.segment(3..6)?;
    let intermediate = first.apply(&x)?;

    let cases: Vec<(&str, Pipeline, Feature, Option<bool>)> = vec![
        (SEGMENT_FIRST, first, x.clone(), Some(true)),
        (SEGMENT_SECOND, second, intermediate, Some(true)),
        (WHOLE_NETWORK, whole, x.clone(), Some(false)),
        (
            FPOOL_RELU_FPOOL,
            Pipeline::new(shape, vec![pool.clone(), Layer::Relu, pool.clone()])?,
            x.clone(),
            None,
        ),
        (
            FPOOL_FPOOL,
            Pipeline::new(shape, vec![pool.clone(), pool.clone()])?,
            x.clone(),
            None,
        ),
        (
            FPOOL_CONV_FPOOL,
            Pipeline::new(shape, vec![pool.clone(), conv_mid, pool])?,
            x,
            None,
        ),
    ];

    let shifts: Vec<FeatureShift> = cfg.shifts.iter().map(|&t| FeatureShift::diagonal(t)).collect();
    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    for (name, pipeline, input, expected) in cases {
        let probe = EquivalenceProbe::new(&pipeline, Upsampler::default(), &input)?;
        let norm = feature_norm(&input);
        let errors = probe.errors(&shifts);
        let mut max_error: f64 = 0.0;
        for (&t, &e) in cfg.shifts.iter().zip(&errors) {
            max_error = max_error.max(e);
            rows.push(TransitivityRow {
                pipeline: name.to_string(),
                shift: t,
                error: e,
                input_norm: norm,
                pass: e <= EXACT_TOL * norm,
            });
        }
        summaries.push(TransitivitySummary {
            pipeline: name.to_string(),
            max_error,
            pass: max_error <= EXACT_TOL * norm,
            expected,
        });
    }
    Ok(TransitivityReport { rows, summaries })
}

pub(crate) fn random_feature(rng: &mut impl Rng, shape: FeatureShape) -> Feature {
    Array3::from_shape_simple_fn(shape.dim(), || rng.random_range(-1.0..1.0))
}

#[derive(Clone, Debug)]
pub struct ConsistencyConfig {
    pub seed: u64,
    /// Side length of the square input image.
    pub size: usize,
    pub channels: usize,
    pub classes: usize,
    pub padding: Padding,
    pub pooling: PoolingKind,
    /// Diagonal shifts to evaluate.
    pub shifts: Vec<i64>,
}

impl Default for ConsistencyConfig {
    fn default() -> Self {
        ConsistencyConfig {
            seed: 0,
            size: 16,
            channels: 8,
            classes: 10,
            padding: Padding::Circular,
            pooling: PoolingKind::FPool { factor: 2, odd_padding: false },
            shifts: (-7..=7).collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConsistencyResult {
    pub consistency: f64,
    /// Population standard deviation of the designated class probability.
    pub std: f64,
    /// Argmax class at each shift.
    pub predictions: Vec<usize>,
    /// Designated class probability at each shift.
    pub probabilities: Vec<f64>,
    /// Class predicted at the first shift.
    pub designated_class: usize,
}

/// The toy classifier `Conv -> ReLU -> Pooling -> GlobalAvg -> Linear`.
///
/// Weights and input depend only on `seed`, so two configs differing only in
/// `pooling` share every weight.
pub fn toy_classifier(cfg: &ConsistencyConfig) -> Result<(Pipeline, Feature)> {
    if cfg.shifts.is_empty() {
        return Err(Error::domain("at least one shift is required"));
    }
    let mut rng = seeded_rng(cfg.seed);
    let shape = FeatureShape::grid(1, cfg.size, cfg.size);
    let x = random_feature(&mut rng, shape);
    let conv = Layer::random_conv(&mut rng, 1, cfg.channels, (3, 3), cfg.padding);
    let linear = Layer::random_linear(&mut rng, cfg.channels, cfg.classes);
    let p = Pipeline::new(
        shape,
        vec![conv, Layer::Relu, Layer::Pool(cfg.pooling), Layer::GlobalAvg, linear],
    )?;
    Ok((p, x))
}

pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exp: Vec<f64> = logits.iter().map(|v| (v - max).exp()).collect();
    let total: f64 = exp.iter().sum();
    exp.into_iter().map(|v| v / total).collect()
}

/// Index of the largest value; ties go to the lowest index.
pub fn argmax(values: &[f64]) -> usize {
    values
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, &v)| if v > bv { (i, v) } else { (bi, bv) })
        .0
}

pub fn toy_classifier_consistency(cfg: &ConsistencyConfig) -> Result<ConsistencyResult> {
    let (pipeline, x) = toy_classifier(cfg)?;
    let outputs: Vec<Vec<f64>> = cfg
        .shifts
        .par_iter()
        .map(|&t| {
            let logits = pipeline.apply(&FeatureShift::diagonal(t).apply(&x))?;
            Ok(softmax(&logits.iter().copied().collect::<Vec<_>>()))
        })
        .collect::<Result<_>>()?;
    let predictions: Vec<usize> = outputs.iter().map(|p| argmax(p)).collect();
    let designated_class = predictions[0];
    let probabilities: Vec<f64> = outputs.iter().map(|p| p[designated_class]).collect();
    let consistency = if predictions.len() >= 2 {
        crate::metrics::consistency_from_predictions(&predictions)?
    } else {
        1.0
    };
    Ok(ConsistencyResult {
        consistency,
        std: crate::metrics::population_std(&probabilities),
        predictions,
        probabilities,
        designated_class,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn empty_pipeline_is_identity() {
        let p = Pipeline::new(FeatureShape::line(1, 4), vec![]).unwrap();
        let x = signal_feature(&RealSignal::new(vec![1.0, -2.0, 3.0, 0.5]).unwrap());
        let trace = p.forward(&x).unwrap();
        assert_eq!(trace.len(), 1);
        assert_eq!(p.apply(&x).unwrap(), x);
        assert_eq!(p.describe(), "identity");
    }

    #[test]
    fn relu_example() {
        let p = Pipeline::new(FeatureShape::line(1, 2), vec![Layer::Relu]).unwrap();
        let out = p.apply(&array![[[-1.0, 2.0]]]).unwrap();
        assert_eq!(out, array![[[0.0, 2.0]]]);
    }

    #[test]
    fn delta_kernel_is_identity() {
        let conv = Layer::conv1d(array![[[0.0, 1.0, 0.0]]], array![0.0], Padding::Circular).unwrap();
        let p = Pipeline::new(FeatureShape::line(1, 5), vec![conv]).unwrap();
        let x = array![[[1.0, 2.0, 3.0, 4.0, 5.0]]];
        assert_eq!(p.apply(&x).unwrap(), x);
    }

    #[test]
    fn conv_padding_modes_differ_at_edges() {
        let w = array![[[1.0, 0.0, 0.0]]];
        let x = array![[[1.0, 2.0, 3.0]]];
        let circ = Pipeline::new(FeatureShape::line(1, 3), vec![Layer::conv1d(w.clone(), array![0.0], Padding::Circular).unwrap()]).unwrap();
        let zero = Pipeline::new(FeatureShape::line(1, 3), vec![Layer::conv1d(w, array![0.0], Padding::Zero).unwrap()]).unwrap();
        assert_eq!(circ.apply(&x).unwrap(), array![[[3.0, 1.0, 2.0]]]);
        assert_eq!(zero.apply(&x).unwrap(), array![[[0.0, 1.0, 2.0]]]);
    }

    #[test]
    fn shape_errors() {
        let p = Pipeline::new(FeatureShape::line(1, 8), vec![Layer::Relu]).unwrap();
        assert!(p.apply(&Array3::zeros((1, 1, 7))).is_err());
        let conv = Layer::conv1d(Array3::zeros((2, 3, 3)), Array1::zeros(2), Padding::Zero).unwrap();
        assert!(Pipeline::new(FeatureShape::line(1, 8), vec![conv]).is_err());
        let pool = Layer::Pool(PoolingKind::Max { window: 3, stride: 3 });
        assert!(Pipeline::new(FeatureShape::line(1, 8), vec![pool]).is_err());
        assert!(Layer::conv1d(Array3::zeros((2, 1, 3)), Array1::zeros(1), Padding::Zero).is_err());
    }

    #[test]
    fn stage_shapes_track_resolution() {
        let mut rng = seeded_rng(1);
        let p = Pipeline::new(
            FeatureShape::grid(1, 8, 8),
            vec![
                Layer::random_conv(&mut rng, 1, 3, (3, 3), Padding::Circular),
                Layer::Relu,
                Layer::Pool(PoolingKind::Max { window: 2, stride: 2 }),
                Layer::GlobalAvg,
                Layer::random_linear(&mut rng, 3, 5),
            ],
        )
        .unwrap();
        let shapes = p.stage_shapes();
        assert_eq!(shapes[0], FeatureShape::grid(3, 8, 8));
        assert_eq!(shapes[1], FeatureShape::grid(3, 8, 8));
        assert_eq!(shapes[2], FeatureShape::grid(3, 4, 4));
        assert_eq!(shapes[3], FeatureShape::grid(3, 1, 1));
        assert_eq!(shapes[4], FeatureShape::grid(5, 1, 1));
        let trace = p.forward(&random_feature(&mut rng, p.input_shape())).unwrap();
        for (f, s) in trace[1..].iter().zip(&shapes) {
            assert_eq!(f.dim(), s.dim());
        }
    }

    #[test]
    fn replacement_pipeline() {
        let p = Pipeline::new(
            FeatureShape::line(1, 8),
            vec![Layer::Pool(PoolingKind::Max { window: 2, stride: 2 })],
        )
        .unwrap();
        let q = p.with_fpool_replacements(true).unwrap();
        assert_eq!(q.describe(), "Max(2, 1) -> FPool(2, odd)");
        assert_eq!(q.output_shape(), p.output_shape());
    }

    #[test]
    fn feature_shift_rolls_both_axes() {
        let x = Array3::from_shape_fn((1, 2, 3), |(_, y, x)| (10 * y + x) as f64);
        let s = FeatureShift { dy: 1, dx: 1 }.apply(&x);
        assert_eq!(s, array![[[12.0, 10.0, 11.0], [2.0, 0.0, 1.0]]]);
    }

    #[test]
    fn softmax_and_argmax() {
        let p = softmax(&[1.0, 1.0]);
        assert!((p[0] - 0.5).abs() < 1e-15);
        assert_eq!(argmax(&[0.2, 0.7, 0.7]), 1);
        assert_eq!(argmax(&[3.0]), 0);
    }
}
