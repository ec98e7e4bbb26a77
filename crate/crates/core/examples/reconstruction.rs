//! The F-pooling reconstruction error is exactly the energy of the discarded
//! high band, and no baseline reconstructs better through the same upsampler.

use fpool::baselines::{pool_baseline, PoolingKind};
use fpool::fpool::{reconstruction_decomposition, reconstruction_with, FPoolPlan};
use fpool::io::signal::SignalSpec;

fn main() -> fpool::Result<()> {
    let (n, m) = (64, 16);
    let plan = FPoolPlan::new(n, m, true)?;
    let x = SignalSpec::Random(7).generate(n)?;

    let r = reconstruction_decomposition(&x, &plan)?;
    println!("F-pooling:  |Pbar P x - x|^2 = {:.6}", r.total);
    println!("            |x_h|^2          = {:.6}", r.high_energy);

    for kind in [
        PoolingKind::Max { window: 4, stride: 4 },
        PoolingKind::Avg { window: 4, stride: 4 },
        PoolingKind::Stride { stride: 4 },
        PoolingKind::BlurStride { width: 4, stride: 4 },
    ] {
        let y = pool_baseline(kind, &x)?;
        let rb = reconstruction_with(&x, &plan, &y)?;
        println!("{:<18} |Pbar y - x|^2 = {:.6}", kind.to_string(), rb.total);
    }
    Ok(())
}
