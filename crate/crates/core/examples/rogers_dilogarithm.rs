//! The dilogarithm, Rogers' function, and the charged lift of ideal tetrahedra.

use num_complex::Complex64;
use qhi::dilog::{li2, rogers_l, rogers_lift, Normalization};
use qhi::scissors::ITetrahedron;

fn main() -> anyhow::Result<()> {
    let half = Complex64::new(0.5, 0.0);
    println!("Li2(1/2) = {:.15}", li2(half)?.re);
    let (x, y) = (Complex64::new(0.3, 0.0), Complex64::new(0.6, 0.0));
    let l = |v| rogers_l(v, Normalization::Standard);
    let five = l(x)? + l(y)? - l(x * y)? - l(x * (1.0 - y) / (1.0 - x * y))? - l(y * (1.0 - x) / (1.0 - x * y))?;
    println!("five-term residual at (0.3, 0.6): {:.2e}", five.norm());
    let tet = ITetrahedron::from_w0(1, Complex64::new(0.4, 0.9), [0, 0, 1])?;
    let r = rogers_lift(&tet)?;
    println!("lift of w0 = 0.4+0.9i: {:.12} (mod π²/2)", r.reduced());
    Ok(())
}
