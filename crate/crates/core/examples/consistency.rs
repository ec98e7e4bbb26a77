//! A random-weight classifier with F-pooling gives the same answer under every
//! diagonal shift; its max-pooling twin, with identical weights, wobbles.

use fpool::baselines::PoolingKind;
use fpool::compose::{toy_classifier_consistency, ConsistencyConfig};

fn main() -> fpool::Result<()> {
    println!("{:>4} {:>14} {:>12} {:>14} {:>12}", "seed", "fpool consist", "fpool std", "max consist", "max std");
    for seed in 0..10 {
        let fp = toy_classifier_consistency(&ConsistencyConfig { seed, ..ConsistencyConfig::default() })?;
        let mx = toy_classifier_consistency(&ConsistencyConfig {
            seed,
            pooling: PoolingKind::Max { window: 2, stride: 2 },
            ..ConsistencyConfig::default()
        })?;
        println!(
            "{seed:>4} {:>14.3} {:>12.2e} {:>14.3} {:>12.2e}",
            fp.consistency, fp.std, mx.consistency, mx.std
        );
    }
    Ok(())
}
