//! The FFT-backed F-pooling agrees with the dense matrix operators.

use fpool::fast::FastFPool;
use fpool::fpool::FPoolPlan;
use fpool::io::signal::SignalSpec;

fn main() -> fpool::Result<()> {
    for (n, m) in [(12, 3), (17, 8), (64, 16), (512, 128)] {
        let dense = FPoolPlan::new(n, m, true)?;
        let fast = FastFPool::new(n, m, true)?;
        let x = SignalSpec::Random(n as u64).generate(n)?;
        let y = dense.pool1d(&x)?;
        let pool_diff = y.max_abs_diff(&fast.pool1d(&x)?);
        let unpool_diff = dense.unpool1d(&y)?.max_abs_diff(&fast.unpool1d(&y)?);
        println!("n = {n:>3}, m = {m:>3}: pool diff {pool_diff:.2e}, unpool diff {unpool_diff:.2e}");
    }
    Ok(())
}
