//! Experiment drivers behind the `fpool` binary.
//!
//! Every driver takes an [`ExperimentConfig`], validates it before doing any
//! numerical work, and returns a [`Report`]: a `# key=value` header recording
//! the resolved configuration followed by `shift,series,value` rows. Reports
//! contain no timestamps or unordered data, so identical configs produce
//! byte-identical CSV (except for the `*_ns` timing rows of `bench`).

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::Rng;

use crate::baselines::{pool_image, PoolingKind};
use crate::compose::{
    signal_feature, toy_classifier_consistency, transitivity_report, ConsistencyConfig,
    FeatureShape, FeatureShift, Layer, Padding, Pipeline, TransitivityConfig, Upsampler, EXACT_TOL,
};
use crate::error::{Error, Result};
use crate::fast::FastFPool;
use crate::fpool::FPoolPlan;
use crate::io::netpbm::Netpbm;
use crate::io::signal::{read_csv_signal, synthetic_image, SignalSpec};
use crate::metrics::shift_sweep;
use crate::seeded_rng;
use crate::spectral::{dft, idft, ComplexSpectrum, RealSignal};

/// Flags shared by every command. Unset values fall back to per-command
/// defaults, and the resolved values are written to the report header.
#[derive(Clone, Debug, Default, clap::Args)]
pub struct ExperimentConfig {
    /// Signal length (1D) or side length (2D).
    #[arg(long)]
    pub n: Option<usize>,
    /// Pooled length; must equal n / stride when both are given.
    #[arg(long)]
    pub m: Option<usize>,
    /// Downsampling factor.
    #[arg(long)]
    pub stride: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub shift_min: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub shift_max: Option<i64>,
    /// Zero the unmatched Nyquist bin when the pooled length is even.
    #[arg(long, action = clap::ArgAction::Set)]
    pub odd_padding: Option<bool>,
    /// Convolution padding: circular or zero.
    #[arg(long)]
    pub padding: Option<Padding>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Input file: CSV signal, or PGM/PPM image.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Output file; CSV reports go to stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Synthetic signal: tone:<f>, impulse or rand:<seed>.
    #[arg(long)]
    pub signal: Option<SignalSpec>,
    /// Image row used as the 1D signal (default: a seeded random row).
    #[arg(long)]
    pub row: Option<usize>,
    /// Comma-separated poolings: fpool, max, avg, stride, blur (pool also accepts none).
    #[arg(long, value_delimiter = ',')]
    pub pooling: Vec<String>,
    /// Comma-separated signal lengths for bench.
    #[arg(long, value_delimiter = ',')]
    pub sizes: Vec<usize>,
    /// Run the transitivity study on 2D feature maps.
    #[arg(long)]
    pub two_d: bool,
}

/// One `shift,series,value` record; `shift` is empty for scalar summaries.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub shift: Option<i64>,
    pub series: String,
    pub value: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub header: Vec<(String, String)>,
    pub rows: Vec<Row>,
}

impl Report {
    fn new(command: &str) -> Self {
        let mut r = Report::default();
        r.meta("command", command);
        r
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.header.push((key.to_string(), value.to_string()));
    }

    pub fn push(&mut self, shift: Option<i64>, series: impl Into<String>, value: f64) {
        self.rows.push(Row {
            shift,
            series: series.into(),
            value,
        });
    }

    /// Rows of one series, in insertion order.
    pub fn series<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a Row> + 'a {
        self.rows.iter().filter(move |r| r.series == name)
    }

    /// The value of a scalar (shift-less) series.
    pub fn scalar(&self, name: &str) -> Option<f64> {
        self.series(name).find(|r| r.shift.is_none()).map(|r| r.value)
    }

    pub fn header_value(&self, key: &str) -> Option<&str> {
        self.header.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.header {
            let _ = writeln!(out, "# {k}={v}");
        }
        out.push_str("shift,series,value\n");
        for r in &self.rows {
            let shift = r.shift.map(|s| s.to_string()).unwrap_or_default();
            let _ = writeln!(out, "{shift},{},{}", r.series, format_value(r.value));
        }
        out
    }

    /// Write the CSV to `path`, or to stdout when `path` is `None`.
    pub fn emit(&self, path: Option<&Path>) -> Result<()> {
        match path {
            Some(p) => fs::write(p, self.to_csv()).map_err(|e| Error::io(p, e)),
            None => {
                let mut out = std::io::stdout().lock();
                match out.write_all(self.to_csv().as_bytes()).and_then(|()| out.flush()) {
                    // a closed pipe (e.g. `| head`) is not a failure of the run
                    Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Error::io("<stdout>", e)),
                    _ => Ok(()),
                }
            }
        }
    }
}

/// Integers print plainly; everything else in round-trip scientific form.
fn format_value(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v:e}")
    }
}

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

/// Resolve `(m, stride)` from an input length and the optional flags.
fn resolve_factor(n: usize, m: Option<usize>, stride: Option<usize>, default_stride: usize) -> Result<(usize, usize)> {
    let stride = match (m, stride) {
        (_, Some(0)) => return Err(config_err("--stride must be at least 1")),
        (Some(0), _) => return Err(config_err("--m must be at least 1")),
        (_, Some(s)) => s,
        (Some(m), None) if n.is_multiple_of(m) => n / m,
        (Some(m), None) => return Err(config_err(format!("--m {m} does not divide n = {n}"))),
        (None, None) => default_stride,
    };
    if !n.is_multiple_of(stride) {
        return Err(config_err(format!("stride {stride} does not divide n = {n}")));
    }
    let derived = n / stride;
    if let Some(m) = m {
        if m != derived {
            return Err(config_err(format!("--m {m} disagrees with n / stride = {derived}")));
        }
    }
    Ok((derived, stride))
}

fn resolve_shifts(cfg: &ExperimentConfig, default: (i64, i64), n: usize) -> Result<Vec<i64>> {
    let lo = cfg.shift_min.unwrap_or(default.0);
    let hi = cfg.shift_max.unwrap_or(default.1);
    if lo > hi {
        return Err(config_err(format!("--shift-min {lo} exceeds --shift-max {hi}")));
    }
    let n = n as i64;
    if lo < -n || hi > n {
        return Err(config_err(format!("shifts must lie in [-{n}, {n}], got [{lo}, {hi}]")));
    }
    Ok((lo..=hi).collect())
}

fn parse_pooling(name: &str, stride: usize, odd_padding: bool) -> Result<PoolingKind> {
    Ok(match name {
        "fpool" => PoolingKind::FPool { factor: stride, odd_padding },
        "max" => PoolingKind::Max { window: stride, stride },
        "avg" => PoolingKind::Avg { window: stride, stride },
        "stride" => PoolingKind::Stride { stride },
        "blur" => PoolingKind::BlurStride { width: stride, stride },
        other => {
            return Err(config_err(format!(
                "unknown pooling `{other}` (use fpool, max, avg, stride, blur)"
            )))
        }
    })
}

fn poolings(cfg: &ExperimentConfig, default: &[&str], stride: usize, odd_padding: bool) -> Result<Vec<PoolingKind>> {
    let names: Vec<&str> = if cfg.pooling.is_empty() {
        default.to_vec()
    } else {
        cfg.pooling.iter().map(String::as_str).collect()
    };
    names.iter().map(|n| parse_pooling(n, stride, odd_padding)).collect()
}

fn is_image_path(path: &Path) -> bool {
    matches!(
        path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref(),
        Some("pgm" | "ppm" | "pnm")
    )
}

/// Pick the requested row, or a seeded random one.
fn pick_row(cfg: &ExperimentConfig, height: usize) -> Result<usize> {
    match cfg.row {
        Some(r) if r < height => Ok(r),
        Some(r) => Err(config_err(format!("--row {r} outside image of height {height}"))),
        None => Ok(seeded_rng(cfg.seed).random_range(0..height)),
    }
}

/// The 1D input: a CSV file, an image row, a synthetic spec, or by default a
/// row of the built-in synthetic test card.
fn load_signal(cfg: &ExperimentConfig, report: &mut Report, default_n: usize) -> Result<RealSignal> {
    if let Some(path) = &cfg.input {
        if is_image_path(path) {
            let img = Netpbm::read(path)?;
            let row = pick_row(cfg, img.height)?;
            report.meta("input", format!("{} row {row}", path.display()));
            return RealSignal::new(img.row(row)?);
        }
        report.meta("input", path.display());
        return read_csv_signal(path);
    }
    let n = cfg.n.unwrap_or(default_n);
    if let Some(spec) = cfg.signal {
        report.meta("input", spec);
        return spec.generate(n);
    }
    let img = synthetic_image(n, 0)?;
    let row = pick_row(cfg, n)?;
    report.meta("input", format!("synthetic test card {n}x{n} row {row}"));
    RealSignal::new(img.channel(0).row(row).to_vec())
}

/// `(shift(U(p(x))), U(p(shift(x))))` for a single-pooling pipeline.
fn curves(kind: PoolingKind, up: Upsampler, x: &RealSignal, shift: i64) -> Result<(Vec<f64>, Vec<f64>)> {
    let p = Pipeline::new(FeatureShape::line(1, x.len()), vec![Layer::Pool(kind)])?;
    let bound = up.bind(p.output_shape().extent, p.input_shape().extent)?;
    let xf = signal_feature(x);
    let s = FeatureShift::diagonal(shift);
    let a = s.apply(&bound.apply(&p.apply(&xf)?));
    let b = bound.apply(&p.apply(&s.apply(&xf))?);
    Ok((a.iter().copied().collect(), b.iter().copied().collect()))
}

fn sweep_errors(kind: PoolingKind, up: Upsampler, x: &RealSignal, shifts: &[i64]) -> Result<Vec<f64>> {
    let p = Pipeline::new(FeatureShape::line(1, x.len()), vec![Layer::Pool(kind)])?;
    Ok(shift_sweep(&p, up, shifts, &signal_feature(x))?.values)
}

fn exact_expected(m: usize, odd_padding: bool) -> bool {
    odd_padding || m % 2 == 1
}

/// Pool-then-upsample versus shift-first curves for every pooling.
///
/// Upsampling is inverse F-pooling. Fails with [`Error::Contract`] if the
/// F-pooling gap exceeds `1e-9 · ‖x‖` where exactness is guaranteed.
pub fn cmd_demo1d(cfg: &ExperimentConfig) -> Result<Report> {
    let mut report = Report::new("demo1d");
    let x = load_signal(cfg, &mut report, 512)?;
    let n = x.len();
    let (m, stride) = resolve_factor(n, cfg.m, cfg.stride, 4)?;
    let odd_padding = cfg.odd_padding.unwrap_or(true);
    let shifts = resolve_shifts(cfg, (2, 2), n)?;
    let kinds = poolings(cfg, &["fpool", "max", "avg", "stride", "blur"], stride, odd_padding)?;
    let up = Upsampler::InverseFPool { odd_padding };
    let tol = EXACT_TOL * x.norm();

    report.meta("n", n);
    report.meta("m", m);
    report.meta("stride", stride);
    report.meta("odd_padding", odd_padding);
    report.meta("shifts", format!("{}..={}", shifts[0], shifts[shifts.len() - 1]));
    report.meta("upsampler", "inverse F-pooling");
    report.meta("max_window", format!("{stride} (window = stride)"));
    report.meta("poolings", kinds.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(" "));

    for (j, v) in x.iter().enumerate() {
        report.push(None, format!("input:{j}"), *v);
    }
    for kind in &kinds {
        let label = kind.label();
        for &t in &shifts {
            let (a, b) = curves(*kind, up, &x, t)?;
            let gap = a.iter().zip(&b).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
            for (j, v) in a.iter().enumerate() {
                report.push(Some(t), format!("{label}:pool_up_shift:{j}"), *v);
            }
            for (j, v) in b.iter().enumerate() {
                report.push(Some(t), format!("{label}:shift_pool_up:{j}"), *v);
            }
            report.push(Some(t), format!("{label}:gap"), gap);
            if matches!(kind, PoolingKind::FPool { .. }) && exact_expected(m, odd_padding) && gap > tol {
                return Err(Error::Contract(format!(
                    "F-pooling gap {gap:e} at shift {t} exceeds {tol:e}"
                )));
            }
        }
    }
    Ok(report)
}

/// Zero the input bins at `±m/2`, the one F-pooling without odd padding keeps
/// without its conjugate partner.
pub fn zero_unmatched_nyquist(x: &RealSignal, m: usize) -> Result<RealSignal> {
    let n = x.len();
    let mut bins = dft(x).into_bins();
    if m.is_multiple_of(2) && m < n {
        bins[m / 2] = 0.0.into();
        bins[n - m / 2] = 0.0.into();
    }
    let scale = 1.0 / n as f64;
    RealSignal::new(idft(&ComplexSpectrum::new(bins)?).iter().map(|c| c.re * scale).collect())
}

/// Equivalence error against shift, with and without odd padding (even `m`),
/// alongside every baseline and the Nyquist-zeroed input.
pub fn cmd_oddpad(cfg: &ExperimentConfig) -> Result<Report> {
    let mut report = Report::new("oddpad");
    let x = load_signal(cfg, &mut report, 512)?;
    let n = x.len();
    let (m, stride) = resolve_factor(n, cfg.m, cfg.stride, 4)?;
    if m % 2 == 1 {
        return Err(config_err(format!("oddpad needs an even pooled length, got m = {m}")));
    }
    let half = (n / 2) as i64;
    let shifts = resolve_shifts(cfg, (-half.min(8), half.min(8)), n)?;
    report.meta("n", n);
    report.meta("m", m);
    report.meta("stride", stride);
    report.meta("shifts", format!("{}..={}", shifts[0], shifts[shifts.len() - 1]));
    report.meta("upsampler", "inverse F-pooling with the same odd padding (baselines: odd padding off)");
    report.meta("max_window", format!("{stride} (window = stride)"));

    let fp = |odd| PoolingKind::FPool { factor: stride, odd_padding: odd };
    let coupled = |odd| Upsampler::InverseFPool { odd_padding: odd };
    let zeroed = zero_unmatched_nyquist(&x, m)?;
    let mut series: Vec<(String, Vec<f64>)> = vec![
        ("fpool_odd_padding:error".into(), sweep_errors(fp(true), coupled(true), &x, &shifts)?),
        ("fpool_no_odd_padding:error".into(), sweep_errors(fp(false), coupled(false), &x, &shifts)?),
        (
            "fpool_no_odd_padding_nyquist_zeroed:error".into(),
            sweep_errors(fp(false), coupled(false), &zeroed, &shifts)?,
        ),
    ];
    for name in ["max", "avg", "stride", "blur"] {
        let kind = parse_pooling(name, stride, false)?;
        series.push((format!("{name}:error"), sweep_errors(kind, coupled(false), &x, &shifts)?));
    }
    let tol = EXACT_TOL * x.norm();
    for (name, values) in &series {
        for (&t, &v) in shifts.iter().zip(values) {
            report.push(Some(t), name.clone(), v);
        }
        report.push(None, format!("{name}:max"), values.iter().copied().fold(0.0, f64::max));
    }
    for (name, values) in &series[..1] {
        if let Some(v) = values.iter().find(|&&v| v > tol) {
            return Err(Error::Contract(format!("{name} {v:e} exceeds {tol:e}")));
        }
    }
    Ok(report)
}

/// Shift-equivalence of single-pooling segments versus stacked poolings.
pub fn cmd_transitivity(cfg: &ExperimentConfig) -> Result<Report> {
    let size = cfg.n.unwrap_or(32);
    let shifts = resolve_shifts(cfg, (-4, 4), size)?;
    let tcfg = TransitivityConfig {
        seed: cfg.seed,
        size,
        two_d: cfg.two_d,
        shifts,
        ..TransitivityConfig::default()
    };
    let result = transitivity_report(&tcfg)?;
    let mut report = Report::new("transitivity");
    report.meta("seed", tcfg.seed);
    report.meta("size", tcfg.size);
    report.meta("channels", tcfg.channels);
    report.meta("two_d", tcfg.two_d);
    report.meta("shifts", format!("{}..={}", tcfg.shifts[0], tcfg.shifts[tcfg.shifts.len() - 1]));
    report.meta("pooling", "FPool(2, odd)");
    report.meta("upsampler", "inverse F-pooling from the final to the input resolution");
    report.meta("tolerance", format!("{EXACT_TOL:e} * |input|"));
    for row in &result.rows {
        report.push(Some(row.shift), format!("{}:error", row.pipeline), row.error);
    }
    for s in &result.summaries {
        report.push(None, format!("{}:max_error", s.pipeline), s.max_error);
        report.push(None, format!("{}:pass", s.pipeline), f64::from(u8::from(s.pass)));
        if let Some(e) = s.expected {
            report.push(None, format!("{}:expected", s.pipeline), f64::from(u8::from(e)));
        }
    }
    if let Some(s) = result.summaries.iter().find(|s| s.expected == Some(true) && !s.pass) {
        return Err(Error::Contract(format!(
            "segment `{}` is not shift-equivalent (max error {:e})",
            s.pipeline, s.max_error
        )));
    }
    Ok(report)
}

/// Pool a PGM/PPM image with F-pooling or a baseline and write it in the
/// input's format and maxval. `--pooling none` copies the image.
pub fn cmd_pool_image(cfg: &ExperimentConfig) -> Result<Report> {
    let input = cfg.input.as_ref().ok_or_else(|| config_err("pool needs --input"))?;
    let output = cfg.output.as_ref().ok_or_else(|| config_err("pool needs --output"))?;
    let name = match cfg.pooling.as_slice() {
        [] => "fpool",
        [one] => one.as_str(),
        _ => return Err(config_err("pool takes a single --pooling")),
    };
    let stride = cfg.stride.unwrap_or(2);
    let odd_padding = cfg.odd_padding.unwrap_or(true);
    let kind = if name == "none" { None } else { Some(parse_pooling(name, stride, odd_padding)?) };
    if let Some(k) = kind {
        k.validate().map_err(|e| config_err(e.to_string()))?;
    }

    let src = Netpbm::read(input)?;
    let image = src.to_image()?;
    let pooled = match kind {
        Some(k) => pool_image(k, &image)?,
        None => image,
    };
    Netpbm::from_image(&pooled, src.format, src.maxval)?.write(output)?;

    let mut report = Report::new("pool");
    report.meta("input", input.display());
    report.meta("output", output.display());
    report.meta("format", src.format);
    report.meta("maxval", src.maxval);
    report.meta("pooling", kind.map_or("none".to_string(), |k| k.to_string()));
    report.push(None, "input_height", src.height as f64);
    report.push(None, "input_width", src.width as f64);
    report.push(None, "output_height", pooled.height() as f64);
    report.push(None, "output_width", pooled.width() as f64);
    Ok(report)
}

/// Consistency and probability spread of the toy classifier under diagonal
/// shifts, for each requested pooling with shared weights.
pub fn cmd_consistency(cfg: &ExperimentConfig) -> Result<Report> {
    let base = ConsistencyConfig::default();
    let size = cfg.n.unwrap_or(base.size);
    let stride = cfg.stride.unwrap_or(2);
    let odd_padding = cfg.odd_padding.unwrap_or(false);
    let padding = cfg.padding.unwrap_or(Padding::Circular);
    let shifts = resolve_shifts(cfg, (-7, 7), size)?;
    let kinds = poolings(cfg, &["fpool", "max"], stride, odd_padding)?;

    let mut report = Report::new("consistency");
    report.meta("seed", cfg.seed);
    report.meta("size", size);
    report.meta("channels", base.channels);
    report.meta("classes", base.classes);
    report.meta("padding", padding);
    report.meta("shifts", format!("{}..={} (diagonal)", shifts[0], shifts[shifts.len() - 1]));
    report.meta("designated_class", "argmax at the first shift");
    for kind in kinds {
        let result = toy_classifier_consistency(&ConsistencyConfig {
            seed: cfg.seed,
            size,
            padding,
            pooling: kind,
            shifts: shifts.clone(),
            ..base.clone()
        })?;
        let label = kind.label();
        for ((&t, &class), &p) in shifts.iter().zip(&result.predictions).zip(&result.probabilities) {
            report.push(Some(t), format!("{label}:prediction"), class as f64);
            report.push(Some(t), format!("{label}:probability"), p);
        }
        report.push(None, format!("{label}:consistency"), result.consistency);
        report.push(None, format!("{label}:std"), result.std);
        if matches!(kind, PoolingKind::FPool { .. })
            && padding == Padding::Circular
            && (result.consistency < 1.0 || result.std > EXACT_TOL)
        {
            return Err(Error::Contract(format!(
                "F-pooling classifier is not shift-invariant: consistency {}, std {:e}",
                result.consistency, result.std
            )));
        }
    }
    Ok(report)
}

/// Dense-matrix versus FFT F-pooling: construction and per-call timings plus
/// the largest disagreement between the two paths.
pub fn cmd_bench(cfg: &ExperimentConfig) -> Result<Report> {
    let sizes = if cfg.sizes.is_empty() { vec![64, 128, 256, 512] } else { cfg.sizes.clone() };
    let stride = cfg.stride.unwrap_or(2);
    let odd_padding = cfg.odd_padding.unwrap_or(true);
    let mut report = Report::new("bench");
    report.meta("sizes", sizes.iter().map(usize::to_string).collect::<Vec<_>>().join(" "));
    report.meta("stride", stride);
    report.meta("odd_padding", odd_padding);
    report.meta("seed", cfg.seed);
    report.meta("timings", "rows ending in _ns are wall-clock and vary between runs");
    for &n in &sizes {
        let (m, _) = resolve_factor(n, None, Some(stride), stride)?;
        let x = SignalSpec::Random(cfg.seed).generate(n)?;
        let reps = (1 << 22) / (n * m).max(1) + 1;

        let t0 = Instant::now();
        let dense = FPoolPlan::new(n, m, odd_padding)?;
        let dense_plan = t0.elapsed();
        let t0 = Instant::now();
        let fast = FastFPool::new(n, m, odd_padding)?;
        let fast_plan = t0.elapsed();

        let time = |f: &dyn Fn() -> Result<RealSignal>| -> Result<f64> {
            let t0 = Instant::now();
            for _ in 0..reps {
                f()?;
            }
            Ok(t0.elapsed().as_nanos() as f64 / reps as f64)
        };
        let dense_ns = time(&|| dense.pool1d(&x))?;
        let fast_ns = time(&|| fast.pool1d(&x))?;
        let diff = dense.pool1d(&x)?.max_abs_diff(&fast.pool1d(&x)?);

        let key = format!("n={n}:m={m}");
        report.push(None, format!("{key}:matrix_plan_ns"), dense_plan.as_nanos() as f64);
        report.push(None, format!("{key}:fast_plan_ns"), fast_plan.as_nanos() as f64);
        report.push(None, format!("{key}:matrix_pool_ns"), dense_ns.round());
        report.push(None, format!("{key}:fast_pool_ns"), fast_ns.round());
        report.push(None, format!("{key}:max_abs_diff"), diff);
        if diff > EXACT_TOL * x.norm().max(1.0) {
            return Err(Error::Contract(format!("fast and dense paths disagree by {diff:e} at n = {n}")));
        }
    }
    Ok(report)
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut r = Report::new("demo");
        r.meta("n", 4);
        r.push(Some(-2), "a:gap", 0.25);
        r.push(None, "a:max", 3.0);
        assert_eq!(r.to_csv(), "# command=demo\n# n=4\nshift,series,value\n-2,a:gap,2.5e-1\n,a:max,3\n");
        assert_eq!(r.scalar("a:max"), Some(3.0));
        assert_eq!(r.header_value("n"), Some("4"));
    }

    #[test]
    fn factor_resolution() {
        assert_eq!(resolve_factor(512, None, None, 4).unwrap(), (128, 4));
        assert_eq!(resolve_factor(12, Some(3), None, 2).unwrap(), (3, 4));
        assert_eq!(resolve_factor(12, Some(6), Some(2), 4).unwrap(), (6, 2));
        assert!(resolve_factor(12, Some(5), None, 2).is_err());
        assert!(resolve_factor(12, Some(4), Some(2), 2).is_err());
        assert!(resolve_factor(12, None, Some(0), 2).is_err());
    }

    #[test]
    fn shift_range_is_validated() {
        let cfg = ExperimentConfig { shift_min: Some(-3), ..ExperimentConfig::default() };
        assert_eq!(resolve_shifts(&cfg, (0, 1), 8).unwrap(), vec![-3, -2, -1, 0, 1]);
        let cfg = ExperimentConfig { shift_max: Some(9), ..ExperimentConfig::default() };
        assert!(matches!(resolve_shifts(&cfg, (0, 0), 8), Err(Error::Config(_))));
    }

    #[test]
    fn impulse_demo_curves_coincide() {
        let cfg = ExperimentConfig {
            signal: Some(SignalSpec::Impulse),
            n: Some(32),
            pooling: vec!["fpool".into()],
            ..ExperimentConfig::default()
        };
        let r = cmd_demo1d(&cfg).unwrap();
        let a: Vec<f64> = (0..32).map(|j| r.series(&format!("fpool:pool_up_shift:{j}")).next().unwrap().value).collect();
        let b: Vec<f64> = (0..32).map(|j| r.series(&format!("fpool:shift_pool_up:{j}")).next().unwrap().value).collect();
        assert!(a.iter().zip(&b).all(|(p, q)| (p - q).abs() < 1e-12));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(Error::Config("x".into()).exit_code(), 2);
        assert_eq!(Error::io("p", std::io::Error::other("x")).exit_code(), 3);
        assert_eq!(Error::Contract("x".into()).exit_code(), 4);
    }
}
