//! Shift a signal before or after pooling and upsampling, and compare.
//!
//! F-pooling followed by its inverse commutes with the shift; the classical
//! poolings do not.

use fpool::baselines::PoolingKind;
use fpool::compose::{signal_feature, FeatureShape, FeatureShift, Layer, Pipeline, Upsampler};
use fpool::io::signal::synthetic_image;
use fpool::spectral::RealSignal;

fn main() -> fpool::Result<()> {
    let card = synthetic_image(512, 0)?;
    let x = RealSignal::new(card.channel(0).row(200).to_vec())?;
    let shift = FeatureShift::diagonal(2);
    let up = Upsampler::InverseFPool { odd_padding: true };

    let poolings = [
        PoolingKind::FPool { factor: 4, odd_padding: true },
        PoolingKind::Max { window: 4, stride: 4 },
        PoolingKind::Avg { window: 4, stride: 4 },
        PoolingKind::Stride { stride: 4 },
        PoolingKind::BlurStride { width: 4, stride: 4 },
    ];
    println!("signal: row 200 of the test card, |x| = {:.1}, shift 2, factor 4", x.norm());
    for kind in poolings {
        let p = Pipeline::new(FeatureShape::line(1, x.len()), vec![Layer::Pool(kind)])?;
        let u = up.bind(p.output_shape().extent, p.input_shape().extent)?;
        let xf = signal_feature(&x);
        let a = shift.apply(&u.apply(&p.apply(&xf)?));
        let b = u.apply(&p.apply(&shift.apply(&xf))?);
        let gap = a.iter().zip(b.iter()).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
        println!("{:<22} max |shift∘pool - pool∘shift| = {gap:.3e}", kind.to_string());
    }
    Ok(())
}
