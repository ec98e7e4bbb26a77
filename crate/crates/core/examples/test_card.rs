//! Write the deterministic synthetic test card as a binary PGM.
//!
//! `cargo run --example test_card -- data/synthetic_512.pgm` regenerates the
//! image shipped with the crate.

use fpool::io::netpbm::{Netpbm, PnmFormat};
use fpool::io::signal::synthetic_image;

fn main() -> fpool::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "synthetic_512.pgm".into());
    let image = synthetic_image(512, 0)?;
    Netpbm::from_image(&image, PnmFormat::P5, 255)?.write(&path)?;
    println!("wrote {path} ({}x{})", image.width(), image.height());
    Ok(())
}
