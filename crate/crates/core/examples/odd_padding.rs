//! With an even pooled length, the unmatched Nyquist bin breaks exact
//! shift-equivalence; odd padding (zeroing that bin) restores it.

use fpool::baselines::PoolingKind;
use fpool::compose::{signal_feature, FeatureShape, Layer, Pipeline, Upsampler};
use fpool::experiments::zero_unmatched_nyquist;
use fpool::io::signal::SignalSpec;
use fpool::metrics::shift_sweep;

fn main() -> fpool::Result<()> {
    let (n, factor) = (64, 4);
    let x = SignalSpec::Random(3).generate(n)?;
    let shifts: Vec<i64> = (-8..=8).collect();
    let sweep = |x: &fpool::spectral::RealSignal, odd: bool| -> fpool::Result<f64> {
        let p = Pipeline::new(
            FeatureShape::line(1, n),
            vec![Layer::Pool(PoolingKind::FPool { factor, odd_padding: odd })],
        )?;
        let s = shift_sweep(&p, Upsampler::InverseFPool { odd_padding: odd }, &shifts, &signal_feature(x))?;
        Ok(s.summary().max)
    };
    println!("n = {n}, m = {}, shifts -8..=8, |x| = {:.3}", n / factor, x.norm());
    println!("odd padding on:                 max error {:.3e}", sweep(&x, true)?);
    println!("odd padding off:                max error {:.3e}", sweep(&x, false)?);
    let zeroed = zero_unmatched_nyquist(&x, n / factor)?;
    println!("off, Nyquist bin of x zeroed:   max error {:.3e}", sweep(&zeroed, false)?);
    Ok(())
}
