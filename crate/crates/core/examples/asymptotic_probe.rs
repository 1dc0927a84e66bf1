//! The sequence (2πi/N²) log K_N on the double.

use qhi::census;
use qhi::statesum::calibrate::{asymptotic_probe, Decorated};
use qhi::statesum::ConventionProfile;

fn main() -> anyhow::Result<()> {
    let (t, h) = census::s3_double();
    let d = Decorated::parabolic(t, h, 1)?;
    let r = asymptotic_probe(&d, &[3, 5, 7, 9, 11, 13], &ConventionProfile::default())?;
    for p in &r.points {
        println!("N={:2} {:.8}", p.n, p.value);
    }
    for (k, diff) in r.differences.iter().enumerate() {
        println!("step {k}: {diff:.3e}");
    }
    Ok(())
}
