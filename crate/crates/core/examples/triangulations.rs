//! Census triangulations, their counts, and 2↔3 round trips.

use qhi::census;
use qhi::triangulation::{apply_move, is_isomorphic, MoveSpec};

fn main() -> anyhow::Result<()> {
    for (name, (t, h)) in census::all() {
        let (r0, r1, r2, r3) = t.counts();
        println!("{name:18} vertices {r0} edges {r1} faces {r2} tetrahedra {r3} quasi-regular {} |H| {}", t.is_quasi_regular(), h.len());
    }
    let (t, h) = census::s3_pentachoron();
    let (t2, h2, corr) = apply_move(&t, &h, &MoveSpec::TwoThree { face: 0 })?;
    let new_edge = corr.created_edges[0];
    let (t3, _, _) = apply_move(&t2, &h2, &MoveSpec::ThreeTwo { edge: new_edge })?;
    println!("pentachoron 2→3 then 3→2 isomorphic to the start: {}", is_isomorphic(&t, &t3));
    Ok(())
}
