//! Frequency-domain pooling.
//!
//! F-pooling downsamples a signal by transforming it with the DFT, keeping
//! only the bins an `m`-sample signal can represent, and transforming back at
//! length `m`. Paired with its inverse (zero-padding the spectrum back to the
//! original length) it commutes exactly with circular shifts, and its output
//! carries no aliased energy.
//!
//! The crate provides:
//!
//! - [`spectral`]: dense DFT/IDFT, circular shifts, the shift theorem and the
//!   low/high frequency split;
//! - [`fpool`]: F-pooling plans, 1D/2D pooling and unpooling, and the
//!   reconstruction-error decomposition;
//! - [`baselines`]: max, average, strided and blur-then-stride pooling, plus
//!   the rules that swap them for F-pooling;
//! - [`compose`]: layer pipelines and the shift-equivalence harness;
//! - [`metrics`]: shift sweeps, classifier consistency and the
//!   frequency-retention ablation;
//! - [`fast`]: an FFT-backed F-pooling path checked against the dense one;
//! - [`io`] and [`experiments`]: file formats and the experiment drivers
//!   behind the `fpool` binary.
//!
//! ```
//! use fpool::fpool::FPoolPlan;
//! use fpool::spectral::{circular_shift, RealSignal, ShiftSpec};
//!
//! let x = RealSignal::new((0..16).map(|t| ((t * t) % 7) as f64).collect()).unwrap();
//! let plan = FPoolPlan::new(16, 7, false).unwrap();
//! let shift = ShiftSpec::new(3);
//!
//! let a = circular_shift(&plan.project(&x).unwrap(), shift);
//! let b = plan.project(&circular_shift(&x, shift)).unwrap();
//! assert!(a.max_abs_diff(&b) < 1e-9);
//! ```

pub mod baselines;
pub mod compose;
pub mod error;
pub mod experiments;
pub mod fast;
pub mod fpool;
pub mod image;
pub mod io;
pub mod metrics;
pub mod spectral;

pub use error::{Error, Result};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Deterministic generator used for every seeded quantity in the crate.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
