//! Turn a network with strided max pooling into its F-pooling counterpart
//! and check that the rewritten segment is shift-equivalent.

use fpool::baselines::PoolingKind;
use fpool::compose::{equivalence_error, FeatureShape, FeatureShift, Layer, Padding, Pipeline, Upsampler};
use fpool::seeded_rng;
use rand::Rng;

fn main() -> fpool::Result<()> {
    let mut rng = seeded_rng(1);
    let shape = FeatureShape::grid(1, 16, 16);
    let net = Pipeline::new(
        shape,
        vec![
            Layer::random_conv(&mut rng, 1, 4, (3, 3), Padding::Circular),
            Layer::Relu,
            Layer::Pool(PoolingKind::Max { window: 2, stride: 2 }),
        ],
    )?;
    let rewritten = net.with_fpool_replacements(true)?;
    println!("original:  {}", net.describe());
    println!("rewritten: {}", rewritten.describe());

    let x = ndarray::Array3::from_shape_simple_fn(shape.dim(), || rng.random_range(-1.0..1.0));
    for t in [1, 3] {
        let s = FeatureShift::diagonal(t);
        let before = equivalence_error(&net, Upsampler::default(), s, &x)?;
        let after = equivalence_error(&rewritten, Upsampler::default(), s, &x)?;
        println!("shift {t}: error {before:.3e} -> {after:.3e}");
    }
    Ok(())
}
