//! Total-order branchings, frames and signs, and their transit along a 2→3 move.

use qhi::branching::{branch_transit, total_order_branching};
use qhi::census;
use qhi::triangulation::{apply_move, MoveSpec};

fn main() -> anyhow::Result<()> {
    let (t, h) = census::s3_double();
    let b = total_order_branching(&t, &[2, 0, 3, 1])?;
    for tet in 0..t.tet_count() {
        let (frame, sign) = b.frame(tet);
        println!("tetrahedron {tet}: frame {frame:?} sign {sign:+}");
    }
    let m = MoveSpec::TwoThree { face: 0 };
    let (t2, _, corr) = apply_move(&t, &h, &m)?;
    let options = branch_transit(&t2, &b, &corr, &m)?;
    println!("{} branchings of the triple extend it", options.len());
    Ok(())
}
