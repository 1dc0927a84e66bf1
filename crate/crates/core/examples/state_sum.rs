//! Mod-N reduction, the contracted state sum against brute force, and H, K.

use qhi::census;
use qhi::statesum::calibrate::Decorated;
use qhi::statesum::oracle::psi_brute;
use qhi::statesum::{contract, h_from_psi, psi_sum, ConventionProfile, RootBranch};

fn main() -> anyhow::Result<()> {
    let (t, h) = census::s3_double();
    let d = Decorated::parabolic(t, h, 1)?;
    let profile = ConventionProfile::default();
    for n in [3, 5, 7] {
        let m = d.reduce(n, RootBranch::PRINCIPAL)?;
        let psi = psi_sum(&m, &profile)?;
        let brute = psi_brute(&m, &profile)?;
        let hv = h_from_psi(&m, psi);
        println!(
            "N={n}: width {} Ψ = {psi:.6} |Ψ − brute|/|Ψ| = {:.1e} H = {hv:.6} K = {:.6}",
            contract::plan(&m).width,
            (psi - brute).norm() / psi.norm(),
            hv.powu(n)
        );
    }
    Ok(())
}
