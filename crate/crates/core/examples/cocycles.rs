//! Symbolic parabolic cocycles, gauge action, and a full numeric decoration along a move script.

use num_complex::Complex64;
use qhi::branching::total_order_branching;
use qhi::census;
use qhi::cocycle::{is_full, parabolic_coboundary, perturb_to_full, validate_cocycle, FULL_EPS};
use qhi::poly::Poly;

fn main() -> anyhow::Result<()> {
    let (t, h) = census::s3_pentachoron();
    let b = total_order_branching(&t, &[0, 1, 2, 3, 4])?;
    let u: Vec<Poly> = (0..5).map(|k| Poly::var(&format!("u{k}"))).collect();
    let z = parabolic_coboundary(&t, &b, &u);
    println!("symbolic cocycle valid: {}", validate_cocycle(&t, &b, &z));
    let zero = vec![Complex64::new(0.0, 0.0); 5];
    let flat = parabolic_coboundary(&t, &b, &zero);
    let full = perturb_to_full(&t, &h, &b, &flat, &census::pentachoron_script(), 3, 20)?;
    println!("perturbed cocycle full along the script: {}", is_full(&full, FULL_EPS));
    Ok(())
}
