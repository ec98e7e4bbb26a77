//! File formats: Netpbm images and single-column CSV signals.

pub mod netpbm;
pub mod signal;
