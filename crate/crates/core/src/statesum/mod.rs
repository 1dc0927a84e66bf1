//! Mod-N reduction of a full decorated triangulation and the cyclic 6j state sum.
//!
//! The c-6j symbol is known here only up to the factors a [`ConventionProfile`]
//! fixes: the two-index cyclic dilogarithm, which face carries which state,
//! the rule for negative tetrahedra, the charge sign and a scalar normalization.

pub mod calibrate;
pub mod contract;
pub mod oracle;

use crate::branching::Branching;
use crate::charge::Charge;
use crate::cocycle::{is_full, Cocycle, FULL_EPS};
use crate::perm::{Perm4, IDENTITY};
use crate::scissors::extract_class;
use crate::triangulation::Triangulation;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::f64::consts::PI;
use thiserror::Error;

pub use contract::{psi_sum, StatePlan};

/// Relative tolerance of the Fermat relation.
pub const FERMAT_TOL: f64 = 1e-9;
/// Relative size below which a denominator counts as a pole.
pub const POLE_TOL: f64 = 1e-14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StateSumError {
    #[error("N = {0} must be odd and greater than 1")]
    EvenN(u32),
    #[error("cocycle vanishes on edge {0}")]
    NotFull(usize),
    #[error("pole of the cyclic dilogarithm")]
    PoleHit,
    #[error("Fermat relation violated by {0:e}")]
    FermatViolation(f64),
    #[error("g is singular at {0}")]
    SingularArgument(Complex64),
    #[error("state sum vanishes")]
    ZeroStateSum,
    #[error("empty profile search space")]
    EmptySearchSpace,
    #[error("decoration failed: {0}")]
    Decoration(String),
}

/// Determination of N-th roots: arguments are taken in `(cut - 2π, cut]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootBranch {
    pub cut: f64,
}

impl RootBranch {
    pub const PRINCIPAL: RootBranch = RootBranch { cut: PI };

    pub fn arg(&self, x: Complex64) -> f64 {
        let mut a = x.arg();
        while a > self.cut {
            a -= 2.0 * PI;
        }
        while a <= self.cut - 2.0 * PI {
            a += 2.0 * PI;
        }
        a
    }

    /// `x^(num/den)` in this determination.
    pub fn pow(&self, x: Complex64, num: i64, den: i64) -> Complex64 {
        let e = num as f64 / den as f64;
        Complex64::from_polar(x.norm().powf(e), self.arg(x) * e)
    }
}

/// `exp(2πi k / n)`.
pub fn root_of_unity(n: u32, k: i64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * k.rem_euclid(n as i64) as f64 / n as f64)
}

/// A tetrahedron of the reduction, read in its branching frame.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedTetrahedron {
    pub sign: i8,
    /// Face class opposite each frame vertex.
    pub faces: [usize; 4],
    /// `y(e_j) y(e_j')` per frame slot.
    pub yy: [Complex64; 3],
    /// `x(e_j) x(e_j')` per frame slot.
    pub xx: [Complex64; 3],
    /// Integer charges per frame slot.
    pub charge: [i64; 3],
}

/// A full decorated triangulation reduced mod N.
#[derive(Debug, Clone, PartialEq)]
pub struct ModNTriangulation {
    pub n: u32,
    pub branch: RootBranch,
    pub tets: Vec<ReducedTetrahedron>,
    pub face_count: usize,
    pub vertex_count: usize,
    /// `x(e)` and `y(e) = x(e)^(1/N)` per edge class.
    pub x: Vec<Complex64>,
    pub y: Vec<Complex64>,
    /// `a(e) = t(e)^(1/N)` per edge class.
    pub a: Vec<Complex64>,
    /// Edge classes outside H.
    pub off_h: Vec<usize>,
}

impl ModNTriangulation {
    pub fn p(&self) -> u32 {
        (self.n - 1) / 2
    }

    pub fn omega(&self) -> Complex64 {
        root_of_unity(self.n, 1)
    }

    /// `c/2 mod N`.
    pub fn reduced_charge(&self, c: i64) -> i64 {
        let inv2 = (self.n as i64 + 1) / 2;
        (c * inv2).rem_euclid(self.n as i64)
    }

    /// Reversed orientation with the conjugate cocycle.
    pub fn dual(&self) -> ModNTriangulation {
        let mut out = self.clone();
        for t in &mut out.tets {
            t.sign = -t.sign;
            t.yy = t.yy.map(|v| v.conj());
            t.xx = t.xx.map(|v| v.conj());
        }
        out.x = out.x.iter().map(|v| v.conj()).collect();
        out.y = out.y.iter().map(|v| v.conj()).collect();
        out.a = out.a.iter().map(|v| v.conj()).collect();
        out
    }
}

/// Reduction mod N with one global root determination.
pub fn reduce_mod_n(
    tri: &Triangulation,
    h: &BTreeSet<usize>,
    b: &Branching,
    z: &Cocycle<Complex64>,
    c: &Charge,
    n: u32,
    branch: RootBranch,
) -> Result<ModNTriangulation, StateSumError> {
    if !is_full(z, FULL_EPS) {
        let e = z.values.iter().position(|v| v.x.norm() <= FULL_EPS).unwrap_or(0);
        return Err(StateSumError::NotFull(e));
    }
    reduce_mod_n_degenerate(tri, h, b, z, c, n, branch)
}

/// Reduction that accepts vanishing `x(e)`; `H` is then typically infinite but `Ψ` may not be.
pub fn reduce_mod_n_degenerate(
    tri: &Triangulation,
    h: &BTreeSet<usize>,
    b: &Branching,
    z: &Cocycle<Complex64>,
    c: &Charge,
    n: u32,
    branch: RootBranch,
) -> Result<ModNTriangulation, StateSumError> {
    if n < 3 || n % 2 == 0 {
        return Err(StateSumError::EvenN(n));
    }
    let root = |v: Complex64| branch.pow(v, 1, n as i64);
    let x: Vec<Complex64> = z.values.iter().map(|v| v.x).collect();
    let y: Vec<Complex64> = x.iter().map(|&v| root(v)).collect();
    let a = z.values.iter().map(|v| root(v.t)).collect();
    let class = extract_class(tri, b, z, c);
    let tets = class
        .members
        .iter()
        .enumerate()
        .map(|(t, m)| {
            let (frame, _) = b.frame(t);
            let slot_edges = |j: usize| {
                let [(p, q), (r, s)] = SLOT_EDGES[j];
                (tri.edge_between(t, frame[p], frame[q]).0, tri.edge_between(t, frame[r], frame[s]).0)
            };
            let yy = std::array::from_fn(|j| {
                let (e, f) = slot_edges(j);
                y[e] * y[f]
            });
            let sx = m.slot_x();
            ReducedTetrahedron {
                sign: m.sign,
                faces: std::array::from_fn(|k| tri.face(t, frame[k])),
                yy,
                xx: sx.map(|(u, v)| u * v),
                charge: m.charge,
            }
        })
        .collect();
    let off_h = (0..tri.edge_count()).filter(|e| !h.contains(e)).collect();
    Ok(ModNTriangulation { n, branch, tets, face_count: tri.face_count(), vertex_count: tri.vertex_count(), x, y, a, off_h })
}

/// Frame vertex pairs of `e_j` and `e_j'`.
const SLOT_EDGES: [[(usize, usize); 2]; 3] = [[(0, 1), (2, 3)], [(1, 2), (0, 3)], [(0, 2), (1, 3)]];

fn fermat_check(x: Complex64, y: Complex64, z: Complex64, n: u32) -> Result<(), StateSumError> {
    let (xn, yn, zn) = (x.powu(n), y.powu(n), z.powu(n));
    let scale = xn.norm().max(yn.norm()).max(zn.norm()).max(f64::MIN_POSITIVE);
    let defect = (xn + yn - zn).norm() / scale;
    if defect > FERMAT_TOL {
        return Err(StateSumError::FermatViolation(defect));
    }
    Ok(())
}

/// `Π_{j=1..k} y / (z − x ω^j)` for `k = count mod N`, under `x^N + y^N = z^N`.
pub fn omega_cyc(x: Complex64, y: Complex64, z: Complex64, count: i64, n: u32) -> Result<Complex64, StateSumError> {
    fermat_check(x, y, z, n)?;
    omega_range(x, y, z, 1, count.rem_euclid(n as i64), n)
}

/// `Π_{j=from..from+len-1} y / (z − x ω^j)`.
fn omega_range(x: Complex64, y: Complex64, z: Complex64, from: i64, len: i64, n: u32) -> Result<Complex64, StateSumError> {
    let mut acc = Complex64::new(1.0, 0.0);
    for j in from..from + len {
        let d = z - x * root_of_unity(n, j);
        if d.norm() <= POLE_TOL * (z.norm() + x.norm()) {
            return Err(StateSumError::PoleHit);
        }
        acc *= y / d;
    }
    Ok(acc)
}

/// Reading of the two-index cyclic dilogarithm `ω(x, y, z | p, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TwoIndex {
    /// `Π_{j=q+1..p}`.
    Range,
    /// `Π_{j=1..p−q}`.
    Difference,
    /// `Π_{j=q..p−1}`.
    ShiftedRange,
}

pub fn omega_two(x: Complex64, y: Complex64, z: Complex64, p: i64, q: i64, rule: TwoIndex, n: u32) -> Result<Complex64, StateSumError> {
    fermat_check(x, y, z, n)?;
    let len = (p - q).rem_euclid(n as i64);
    match rule {
        TwoIndex::Range => omega_range(x, y, z, q + 1, len, n),
        TwoIndex::Difference => omega_range(x, y, z, 1, len, n),
        TwoIndex::ShiftedRange => omega_range(x, y, z, q, len, n),
    }
}

/// `g(x) = Π_{j=1..N−1} (1 − x ω^j)^(j/N)` with principal powers.
pub fn g_func(x: Complex64, n: u32) -> Result<Complex64, StateSumError> {
    let mut acc = Complex64::new(1.0, 0.0);
    for j in 1..n as i64 {
        let base = Complex64::new(1.0, 0.0) - x * root_of_unity(n, j);
        if base.norm() <= POLE_TOL * (1.0 + x.norm()) {
            return Err(StateSumError::SingularArgument(x));
        }
        acc *= RootBranch::PRINCIPAL.pow(base, j, n as i64);
    }
    Ok(acc)
}

/// `g(1)⁻¹ g(yy2 / yy1)`.
pub fn h_prime(yy: &[Complex64; 3], n: u32) -> Result<Complex64, StateSumError> {
    if yy[1].norm() <= 1e-300 {
        return Err(StateSumError::SingularArgument(yy[1]));
    }
    // g(1) has the zero factor 1 − ω^0 excluded, so it is finite and nonzero
    Ok(g_func(yy[2] / yy[1], n)? / g_func(Complex64::new(1.0, 0.0), n)?)
}

/// How a negatively oriented tetrahedron is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NegativeRule {
    /// The positive formula unchanged.
    Same,
    /// `conj(Ψ₊(D*, −α))`.
    Dual,
    /// `conj(Ψ₊(D*, −α'))` with `α' = (α1, α0, α3, α2)`.
    DualSwapped,
}

/// The choices the c-6j formula leaves open.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConventionProfile {
    pub version: u32,
    pub two_index: TwoIndex,
    /// `α_k` is the state of the face opposite frame vertex `face_order[k]`.
    pub face_order: Perm4,
    pub negative: NegativeRule,
    /// Sign applied to reduced charges.
    pub charge_sign: i8,
    /// Slot `j` whose `(y(e_j) y(e_j'))^p` normalizes the symbol; none if absent.
    pub norm_slot: Option<u8>,
}

pub const PROFILE_VERSION: u32 = 1;

/// Seed and N of the calibration run that fixes the default profile.
pub const CALIBRATION_SEED: u64 = 7;
pub const CALIBRATION_N: u32 = 3;

impl Default for ConventionProfile {
    /// The argmin of the calibration run at [`CALIBRATION_SEED`] and [`CALIBRATION_N`].
    fn default() -> Self {
        ConventionProfile {
            version: PROFILE_VERSION,
            two_index: TwoIndex::Difference,
            face_order: [3, 1, 2, 0],
            negative: NegativeRule::Same,
            charge_sign: 1,
            norm_slot: None,
        }
    }
}

impl ConventionProfile {
    /// The profile closest to the literal formula: identity faces, `Π_{j=q+1..p}`, dual negatives, `(y(e_0) y(e_0'))^p`.
    pub fn literal() -> Self {
        ConventionProfile {
            version: PROFILE_VERSION,
            two_index: TwoIndex::Range,
            face_order: IDENTITY,
            negative: NegativeRule::Dual,
            charge_sign: 1,
            norm_slot: Some(0),
        }
    }
}

/// States of the four frame faces, indexed by frame vertex.
pub type FaceStates = [i64; 4];

/// The c-6j symbol of one tetrahedron.
pub fn c6j(t: &ReducedTetrahedron, m: &ModNTriangulation, states: &FaceStates, profile: &ConventionProfile) -> Result<Complex64, StateSumError> {
    let alpha: [i64; 4] = std::array::from_fn(|k| states[profile.face_order[k] as usize]);
    if t.sign > 0 {
        return c6j_positive(&t.yy, &t.charge, m, &alpha, profile);
    }
    let yy = t.yy.map(|v| v.conj());
    let neg = alpha.map(|a| -a);
    Ok(match profile.negative {
        NegativeRule::Same => c6j_positive(&t.yy, &t.charge, m, &alpha, profile)?,
        NegativeRule::Dual => c6j_positive(&yy, &t.charge, m, &neg, profile)?.conj(),
        NegativeRule::DualSwapped => c6j_positive(&yy, &t.charge, m, &[neg[1], neg[0], neg[3], neg[2]], profile)?.conj(),
    })
}

fn c6j_positive(
    yy: &[Complex64; 3],
    charge: &[i64; 3],
    m: &ModNTriangulation,
    alpha: &[i64; 4],
    profile: &ConventionProfile,
) -> Result<Complex64, StateSumError> {
    let n = m.n;
    let nn = n as i64;
    if (alpha[2] + alpha[0] - alpha[1]).rem_euclid(nn) != 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let c0 = m.reduced_charge(profile.charge_sign as i64 * charge[0]);
    let c1 = m.reduced_charge(profile.charge_sign as i64 * charge[1]);
    let inv2 = (nn + 1) / 2;
    let phase = c1 * (alpha[2] - alpha[3]) - c0 * c1 * inv2 + alpha[3] * alpha[0];
    let dilog = omega_two(yy[1], yy[0], yy[2], alpha[2] - c0, alpha[3], profile.two_index, n)?;
    let norm = match profile.norm_slot {
        Some(j) => yy[j as usize].powu(m.p()),
        None => Complex64::new(1.0, 0.0),
    };
    Ok(h_prime(yy, n)? * root_of_unity(n, phase) * dilog * norm)
}

/// `Ψ · N^(−r0) · Π_{e ∉ H} x(e)^((1−N)/N)`.
pub fn h_value(m: &ModNTriangulation, profile: &ConventionProfile) -> Result<Complex64, StateSumError> {
    let psi = psi_sum(m, profile)?;
    Ok(h_from_psi(m, psi))
}

pub fn h_from_psi(m: &ModNTriangulation, psi: Complex64) -> Complex64 {
    let mut h = psi * (m.n as f64).powi(-(m.vertex_count as i32));
    for &e in &m.off_h {
        h *= m.y[e].powi(1 - m.n as i32);
    }
    h
}

/// `K = H^N`.
pub fn k_value(m: &ModNTriangulation, profile: &ConventionProfile) -> Result<Complex64, StateSumError> {
    Ok(h_value(m, profile)?.powu(m.n))
}

/// Gaps between the invariants of two reductions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub h_abs: f64,
    pub h_abs_other: f64,
    /// `||H| − |H'|| / |H|`.
    pub modulus_gap: f64,
    /// `|K − K'| / |K|`.
    pub k_gap: f64,
    /// Distance of the phase of `H'/H` to the nearest N-th root of unity, in radians.
    pub phase_gap: f64,
}

impl InvarianceReport {
    pub fn worst(&self) -> f64 {
        self.modulus_gap.max(self.k_gap)
    }
}

pub fn compare_values(h: Complex64, h2: Complex64, n: u32) -> InvarianceReport {
    let (k, k2) = (h.powu(n), h2.powu(n));
    let step = 2.0 * PI / n as f64;
    let phase = (h2 / h).arg();
    let phase_gap = (phase - (phase / step).round() * step).abs();
    InvarianceReport {
        h_abs: h.norm(),
        h_abs_other: h2.norm(),
        modulus_gap: (h.norm() - h2.norm()).abs() / h.norm(),
        k_gap: (k - k2).norm() / k.norm(),
        phase_gap,
    }
}

pub fn invariance_check(m: &ModNTriangulation, m2: &ModNTriangulation, profile: &ConventionProfile) -> Result<InvarianceReport, StateSumError> {
    Ok(compare_values(h_value(m, profile)?, h_value(m2, profile)?, m.n))
}
