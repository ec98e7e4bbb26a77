//! Pure tones above the pooled Nyquist band vanish under F-pooling but alias
//! into the output of every classical pooling.

use std::f64::consts::PI;

use fpool::baselines::{pool_baseline, PoolingKind};
use fpool::spectral::RealSignal;

fn main() -> fpool::Result<()> {
    let (n, factor) = (16, 2);
    let kinds = [
        PoolingKind::FPool { factor, odd_padding: true },
        PoolingKind::Max { window: factor, stride: factor },
        PoolingKind::Avg { window: factor, stride: factor },
        PoolingKind::Stride { stride: factor },
        PoolingKind::BlurStride { width: factor, stride: factor },
    ];
    println!("n = {n}, m = {}; output energy / input energy", n / factor);
    print!("{:>6}", "tone");
    for k in &kinds {
        print!("{:>18}", k.to_string());
    }
    println!();
    for f in 5..=7 {
        let x = RealSignal::new((0..n).map(|t| (2.0 * PI * f as f64 * t as f64 / n as f64).cos()).collect())?;
        print!("{f:>6}");
        for k in &kinds {
            let y = pool_baseline(*k, &x)?;
            print!("{:>18.3e}", y.energy() / x.energy());
        }
        println!();
    }
    Ok(())
}
