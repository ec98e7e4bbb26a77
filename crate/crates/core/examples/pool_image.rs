//! Downsample the shipped test card with 2D F-pooling and max pooling and
//! write both as PGM files.

use fpool::baselines::{pool_image, PoolingKind};
use fpool::io::netpbm::Netpbm;

fn main() -> fpool::Result<()> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| ".".into());
    let src = Netpbm::read(concat!(env!("CARGO_MANIFEST_DIR"), "/data/synthetic_512.pgm"))?;
    let image = src.to_image()?;
    for (name, kind) in [
        ("fpool", PoolingKind::FPool { factor: 4, odd_padding: true }),
        ("max", PoolingKind::Max { window: 4, stride: 4 }),
    ] {
        let pooled = pool_image(kind, &image)?;
        let path = format!("{dir}/test_card_{name}.pgm");
        Netpbm::from_image(&pooled, src.format, src.maxval)?.write(&path)?;
        println!("{kind}: {}x{} -> {path}", pooled.width(), pooled.height());
    }
    Ok(())
}
