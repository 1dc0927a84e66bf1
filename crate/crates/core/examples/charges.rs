//! Integer charges: a solution, the lattice vectors w(e), and a transit.

use qhi::census;
use qhi::charge::{charge_lattice_basis, charge_transit, solve_charge, verify_charge};
use qhi::triangulation::{apply_move, MoveSpec};

fn main() -> anyhow::Result<()> {
    let (t, h) = census::s3_double();
    let c = solve_charge(&t, &h)?;
    println!("charge {:?} valid {}", c.values, verify_charge(&t, &h, &c));
    let lattice = charge_lattice_basis(&t, &h)?;
    for (e, w) in lattice.basis.iter().enumerate() {
        println!("w(e{e}) = {w:?}");
    }
    let m = MoveSpec::TwoThree { face: 0 };
    let (t2, h2, corr) = apply_move(&t, &h, &m)?;
    let ct = charge_transit(&t, &c, &t2, &h2, &corr, &m)?;
    println!("transited {:?} with {} free directions", ct.charge.values, ct.directions.len());
    Ok(())
}
