//! Keeping fewer frequency bins can only increase the reconstruction error.

use fpool::io::signal::SignalSpec;
use fpool::metrics::retention_ablation;

fn main() -> fpool::Result<()> {
    let corpus: Vec<_> = (0..20)
        .map(|seed| SignalSpec::Random(seed).generate(64))
        .collect::<fpool::Result<_>>()?;
    for row in retention_ablation(&[0.5, 0.375, 0.25], &corpus)? {
        println!("rate {:>5.1}%  bins kept per side {:>2}  error {:.4}", row.rate * 100.0, row.mu, row.error);
    }
    Ok(())
}
