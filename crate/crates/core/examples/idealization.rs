//! Idealization of a decorated class: moduli, pre-ideality and edge-modulus products.

use qhi::scissors::{edge_modulus_product, extract_class, is_pre_ideal};
use qhi::statesum::calibrate::Decorated;

fn main() -> anyhow::Result<()> {
    let (t, h) = qhi::census::s3_pentachoron();
    let d = Decorated::parabolic(t, h, 5)?;
    let tets = extract_class(&d.tri, &d.b, &d.z, &d.c).idealize();
    for (i, y) in tets.iter().enumerate() {
        println!("tetrahedron {i}: sign {:+} a = {:.4?} |a0a1a2 + 1| = {:.1e} pre-ideal {}", y.sign, y.a, y.product_defect(), is_pre_ideal(y));
    }
    for e in 0..d.tri.edge_count() {
        println!("edge {e}: modulus product {:.6}", edge_modulus_product(&d.tri, &tets, e));
    }
    Ok(())
}
