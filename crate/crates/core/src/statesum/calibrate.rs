//! Transit suites, convention calibration and the asymptotic probe.

use super::{
    compare_values, h_value, reduce_mod_n, ConventionProfile, InvarianceReport, ModNTriangulation, NegativeRule,
    RootBranch, StateSumError, TwoIndex, PROFILE_VERSION,
};
use crate::branching::{total_order_branching, Branching};
use crate::census;
use crate::charge::{charge_transit, solve_charge, Charge};
use crate::cocycle::{parabolic_coboundary, transit_step, BorelElement, Cocycle};
use crate::perm;
use crate::triangulation::{apply_move, MoveSpec, Triangulation};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Gate on the best calibrated residual.
pub const CALIBRATION_GATE: f64 = 1e-6;

/// A full decorated triangulation.
#[derive(Debug, Clone)]
pub struct Decorated {
    pub tri: Triangulation,
    pub h: BTreeSet<usize>,
    pub b: Branching,
    pub z: Cocycle<Complex64>,
    pub c: Charge,
}

impl Decorated {
    /// Identity-order branching, solved charge and a parabolic cocycle from seeded complex potentials.
    pub fn parabolic(tri: Triangulation, h: BTreeSet<usize>, seed: u64) -> Result<Self, StateSumError> {
        let order: Vec<usize> = (0..tri.vertex_count()).collect();
        let b = total_order_branching(&tri, &order).map_err(|e| StateSumError::Decoration(e.to_string()))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u: Vec<Complex64> = (0..tri.vertex_count()).map(|_| random_complex(&mut rng)).collect();
        let z = parabolic_coboundary(&tri, &b, &u);
        let c = solve_charge(&tri, &h).map_err(|e| StateSumError::Decoration(e.to_string()))?;
        Ok(Decorated { tri, h, b, z, c })
    }

    pub fn reduce(&self, n: u32, branch: RootBranch) -> Result<ModNTriangulation, StateSumError> {
        reduce_mod_n(&self.tri, &self.h, &self.b, &self.z, &self.c, n, branch)
    }

    /// The cocycle with every upper entry scaled by `lambda`.
    pub fn scaled(&self, lambda: Complex64) -> Self {
        let mut out = self.clone();
        for v in &mut out.z.values {
            v.x *= lambda;
        }
        out
    }

    /// Decorated move: branching, cocycle and charge transit together.
    pub fn step(&self, m: &MoveSpec, bubble: Option<Complex64>) -> Result<Self, StateSumError> {
        let dec = |e: String| StateSumError::Decoration(e);
        let bubble = bubble.map(BorelElement::parabolic);
        let (t2, h2, b2, z2) = transit_step(&self.tri, &self.h, &self.b, &self.z, m, bubble.as_ref()).map_err(|e| dec(e.to_string()))?;
        let (_, _, corr) = apply_move(&self.tri, &self.h, m).map_err(|e| dec(e.to_string()))?;
        let ct = charge_transit(&self.tri, &self.c, &t2, &h2, &corr, m).map_err(|e| dec(e.to_string()))?;
        Ok(Decorated { tri: t2, h: h2, b: b2, z: z2, c: ct.charge })
    }
}

fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
}

/// One decorated move reduced mod N on both sides.
#[derive(Debug, Clone)]
pub struct TransitPair {
    pub label: String,
    pub before: ModNTriangulation,
    pub after: ModNTriangulation,
}

/// Scalings of the double's cocycle used by the suite.
pub const SUITE_SCALINGS: [Complex64; 3] = [Complex64::new(2.0, 0.0), Complex64::new(-1.0, 0.0), Complex64::new(1.0, 1.0)];

/// The double under rescaling and a bubble move, and the pentachoron along its census script.
pub fn transit_suite(n: u32, seed: u64) -> Result<Vec<TransitPair>, StateSumError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let (t, h) = census::s3_double();
    let face = t.face(0, 3);
    let h_edge = t.edge_between(0, 0, 1).0;
    let double = Decorated::parabolic(t, h, seed)?;
    for lambda in SUITE_SCALINGS {
        out.push(TransitPair {
            label: format!("s3_double scaled by {lambda}"),
            before: double.reduce(n, RootBranch::PRINCIPAL)?,
            after: double.scaled(lambda).reduce(n, RootBranch::PRINCIPAL)?,
        });
    }
    let bubbled = double.step(&MoveSpec::Bubble { face, h_edge }, Some(random_complex(&mut rng)))?;
    out.push(TransitPair {
        label: "s3_double bubble".into(),
        before: double.reduce(n, RootBranch::PRINCIPAL)?,
        after: bubbled.reduce(n, RootBranch::PRINCIPAL)?,
    });
    let (t, h) = census::s3_pentachoron();
    let mut cur = Decorated::parabolic(t, h, seed.wrapping_add(1))?;
    for (k, m) in census::pentachoron_script().iter().enumerate() {
        let bubble = matches!(m, MoveSpec::Bubble { .. }).then(|| random_complex(&mut rng));
        let next = cur.step(m, bubble)?;
        out.push(TransitPair {
            label: format!("s3_pentachoron step {k} {m:?}"),
            before: cur.reduce(n, RootBranch::PRINCIPAL)?,
            after: next.reduce(n, RootBranch::PRINCIPAL)?,
        });
        cur = next;
    }
    Ok(out)
}

/// Every profile of the declared search space, in a fixed order.
pub fn search_space() -> Vec<ConventionProfile> {
    let mut out = Vec::new();
    for two_index in [TwoIndex::Range, TwoIndex::Difference, TwoIndex::ShiftedRange] {
        for face_order in perm::all() {
            for negative in [NegativeRule::Same, NegativeRule::Dual, NegativeRule::DualSwapped] {
                for charge_sign in [1, -1] {
                    for norm_slot in [None, Some(0), Some(1), Some(2)] {
                        out.push(ConventionProfile { version: PROFILE_VERSION, two_index, face_order, negative, charge_sign, norm_slot });
                    }
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedProfile {
    pub profile: ConventionProfile,
    /// Worst modulus or K gap over the suite; infinite when some evaluation fails.
    pub residual: f64,
    pub per_pair: Vec<f64>,
}

fn residual_of(pairs: &[TransitPair], profile: &ConventionProfile) -> Vec<f64> {
    pairs
        .iter()
        .map(|p| {
            let gap = h_value(&p.before, profile)
                .and_then(|h| Ok(compare_values(h, h_value(&p.after, profile)?, p.before.n)))
                .map(|r| r.worst());
            match gap {
                Ok(g) if g.is_finite() => g,
                _ => f64::INFINITY,
            }
        })
        .collect()
}

/// Profiles ranked by worst residual, ties by position in `space`.
pub fn calibrate_conventions(pairs: &[TransitPair], space: &[ConventionProfile]) -> Result<Vec<RankedProfile>, StateSumError> {
    if space.is_empty() {
        return Err(StateSumError::EmptySearchSpace);
    }
    let mut ranked: Vec<(usize, RankedProfile)> = space
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let per_pair = residual_of(pairs, p);
            let residual = per_pair.iter().copied().fold(0.0, f64::max);
            (i, RankedProfile { profile: *p, residual, per_pair })
        })
        .collect();
    ranked.sort_by(|a, b| a.1.residual.total_cmp(&b.1.residual).then(a.0.cmp(&b.0)));
    Ok(ranked.into_iter().map(|(_, r)| r).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationReport {
    pub n: u32,
    pub seed: u64,
    pub suite: Vec<String>,
    pub space_size: usize,
    pub gate: f64,
    /// `calibrated` when the best residual passes the gate, else `blocked-by-convention`.
    pub verdict: String,
    pub ranked: Vec<RankedProfile>,
}

/// Calibration over [`transit_suite`], keeping the `keep` best profiles.
pub fn calibration_report(n: u32, seed: u64, space: &[ConventionProfile], keep: usize) -> Result<CalibrationReport, StateSumError> {
    let pairs = transit_suite(n, seed)?;
    let ranked = calibrate_conventions(&pairs, space)?;
    let verdict = if ranked[0].residual < CALIBRATION_GATE { "calibrated" } else { "blocked-by-convention" };
    Ok(CalibrationReport {
        n,
        seed,
        suite: pairs.iter().map(|p| p.label.clone()).collect(),
        space_size: space.len(),
        gate: CALIBRATION_GATE,
        verdict: verdict.into(),
        ranked: ranked.into_iter().take(keep).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbePoint {
    pub n: u32,
    /// `(2πi / N²) log K_N` with the principal logarithm.
    pub value: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub points: Vec<ProbePoint>,
    pub differences: Vec<Complex64>,
}

pub fn asymptotic_probe(d: &Decorated, ns: &[u32], profile: &ConventionProfile) -> Result<ProbeReport, StateSumError> {
    let mut points = Vec::new();
    for &n in ns {
        let h = h_value(&d.reduce(n, RootBranch::PRINCIPAL)?, profile)?;
        if h.norm() == 0.0 || !h.is_finite() {
            return Err(StateSumError::ZeroStateSum);
        }
        // log K from H, so K = H^N never overflows
        let arg = Complex64::from_polar(1.0, n as f64 * h.arg()).arg();
        let log_k = Complex64::new(n as f64 * h.norm().ln(), arg);
        let scale = Complex64::new(0.0, 2.0 * std::f64::consts::PI / (n as f64 * n as f64));
        points.push(ProbePoint { n, value: scale * log_k });
    }
    let differences = points.windows(2).map(|w| w[1].value - w[0].value).collect();
    Ok(ProbeReport { points, differences })
}

/// Invariance report for one decorated pair under `profile`.
pub fn pair_report(p: &TransitPair, profile: &ConventionProfile) -> Result<InvarianceReport, StateSumError> {
    super::invariance_check(&p.before, &p.after, profile)
}
