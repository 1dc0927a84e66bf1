//! Signed decorated tetrahedra, their S₄ actions, idealization and ideal transits.
//!
//! Every tetrahedron carries a frame: `frame[k]` is the vertex label at
//! branching position `k`. Decorations are stored in frame positions, with the
//! three charge and modulus slots at `e0 = (01)`, `e1 = (12)`, `e2 = (02)`.
//! Position `j` also covers the opposite edge `(23)`, `(03)`, `(13)`.

use crate::branching::Branching;
use crate::charge::{pair_of_edge, Charge};
use crate::cocycle::{BorelElement, Cocycle, CocycleError};
use crate::perm::{self, Perm4, EDGE_VERTS, IDENTITY};
use crate::scalar::Scalar;
use crate::triangulation::Triangulation;
use num_complex::Complex64;
use num_rational::BigRational;
use std::f64::consts::PI;
use thiserror::Error;

/// Band `|Im w| < FLAT_BAND` counts as a flat tetrahedron.
pub const FLAT_BAND: f64 = 1e-12;
/// Tolerance of the modular relations in [`is_pre_ideal`].
pub const MODULAR_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScissorsError {
    #[error("mirror edges must be consecutive and avoid the chosen pair")]
    BadEdgeSelection,
    #[error("modulus target is degenerate")]
    DegenerateTarget,
    #[error("transited modulus lands in {{0, 1, ∞}}")]
    DegenerateModuli,
    #[error("inputs do not share the five-point frame")]
    IncompatibleFrame,
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
}

/// Frame edges of the three slots.
pub const POSITION_EDGES: [(usize, usize); 3] = [(0, 1), (1, 2), (0, 2)];
/// Opposite frame edges of the three slots.
pub const OPPOSITE_EDGES: [(usize, usize); 3] = [(2, 3), (0, 3), (1, 3)];
/// Slot of each opposite-edge pair of the identity frame; it is its own inverse.
const PAIR_POSITION: [usize; 3] = [0, 2, 1];

/// Slot holding the frame edge `{i, j}`.
pub fn slot_of(i: usize, j: usize) -> usize {
    PAIR_POSITION[pair_of_edge(perm::edge_index(i as u8, j as u8))]
}

fn frame_index(i: usize, j: usize) -> usize {
    perm::edge_index(i as u8, j as u8)
}

/// `*(Δ, b, z, c)` with `z` on the six frame edges, oriented `i → j` for `i < j`.
#[derive(Debug, Clone, PartialEq)]
pub struct DTetrahedron<S> {
    pub sign: i8,
    pub frame: Perm4,
    pub z: [BorelElement<S>; 6],
    pub charge: [i64; 3],
}

impl<S: Scalar> DTetrahedron<S> {
    /// Parabolic decoration from vertex potentials in frame order.
    pub fn from_potentials(sign: i8, frame: Perm4, u: &[S; 4], charge: [i64; 3]) -> Self {
        let z = std::array::from_fn(|k| {
            let (i, j) = EDGE_VERTS[k];
            BorelElement::parabolic(u[j as usize].sub(&u[i as usize]))
        });
        DTetrahedron { sign, frame, z, charge }
    }

    /// `z` on the frame edge `i → j`, inverted when `i > j`.
    pub fn z_on(&self, i: usize, j: usize) -> Result<BorelElement<S>, CocycleError> {
        if i < j {
            Ok(self.z[frame_index(i, j)].clone())
        } else {
            self.z[frame_index(j, i)].inverse()
        }
    }

    /// Upper entries on the slot edges and their opposites.
    pub fn slot_x(&self) -> [(S, S); 3] {
        std::array::from_fn(|j| {
            let (a, b) = POSITION_EDGES[j];
            let (c, d) = OPPOSITE_EDGES[j];
            (self.z[frame_index(a, b)].x.clone(), self.z[frame_index(c, d)].x.clone())
        })
    }

    /// `(p0, p1, p2) = (x(e0)x(e0'), x(e1)x(e1'), -x(e2)x(e2'))`.
    pub fn log_parameters(&self) -> [S; 3] {
        let x = self.slot_x();
        [x[0].0.mul(&x[0].1), x[1].0.mul(&x[1].1), x[2].0.mul(&x[2].1).neg()]
    }

    /// Face cocycle relations and the charge sum.
    pub fn is_valid(&self, tol: f64) -> bool {
        let faces = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];
        let cocycle = faces.iter().all(|&[i, j, k]| {
            let lhs = self.z[frame_index(i, j)].mul(&self.z[frame_index(j, k)]);
            matches!(lhs, Ok(v) if v.approx_eq(&self.z[frame_index(i, k)], tol))
        });
        cocycle && self.charge.iter().sum::<i64>() == 1 && self.sign.abs() == 1
    }

    pub fn is_full(&self, eps: f64) -> bool {
        self.z.iter().all(|v| !v.x.is_zero_within(eps))
    }

    /// `p_D(s, X)`: new frame vertex `k` is old vertex `s[k]`.
    pub fn act(&self, s: &Perm4) -> Result<Self, ScissorsError> {
        let mut z = self.z.clone();
        for (k, &(i, j)) in EDGE_VERTS.iter().enumerate() {
            z[k] = self.z_on(s[i as usize] as usize, s[j as usize] as usize)?;
        }
        Ok(DTetrahedron {
            sign: self.sign * perm::sign(s),
            frame: std::array::from_fn(|k| self.frame[s[k] as usize]),
            z,
            charge: permuted_slots(&self.charge, s),
        })
    }

    /// Mirror image across the pair at slot `u`, negating the charges of the
    /// adjacent frame edges `v` and `w`, which must span a face with an edge of slot `u`.
    pub fn mirror(&self, u: usize, v: (usize, usize), w: (usize, usize)) -> Result<Self, ScissorsError> {
        let ends = |e: (usize, usize)| [e.0.min(e.1), e.0.max(e.1)];
        let (ev, ew) = (ends(v), ends(w));
        let shared: Vec<usize> = ev.iter().copied().filter(|x| ew.contains(x)).collect();
        if u >= 3 || ev[1] > 3 || ew[1] > 3 || ev[0] == ev[1] || ew[0] == ew[1] || shared.len() != 1 {
            return Err(ScissorsError::BadEdgeSelection);
        }
        let far = |e: [usize; 2]| if e[0] == shared[0] { e[1] } else { e[0] };
        if slot_of(far(ev), far(ew)) != u {
            return Err(ScissorsError::BadEdgeSelection);
        }
        let (i, j, k, l) = (ev[0], ev[1], ew[0], ew[1]);
        let (sv, sw) = (slot_of(i, j), slot_of(k, l));
        let mut charge = [0; 3];
        charge[sv] = -self.charge[sv];
        charge[sw] = -self.charge[sw];
        charge[u] = 1 + self.charge[sv] + self.charge[sw];
        Ok(DTetrahedron { sign: -self.sign, frame: self.frame, z: self.z.clone(), charge })
    }
}

fn permuted_slots<T: Clone>(v: &[T; 3], s: &Perm4) -> [T; 3] {
    std::array::from_fn(|j| {
        let (a, b) = POSITION_EDGES[j];
        v[slot_of(s[a] as usize, s[b] as usize)].clone()
    })
}

impl DTetrahedron<Complex64> {
    /// The map `f`: `a_j = exp(p_j ± c_j π i)` with the sign of the tetrahedron.
    pub fn idealize(&self) -> PseudoIdealTetrahedron {
        let p = self.log_parameters();
        let a = std::array::from_fn(|j| (p[j] + Complex64::new(0.0, self.sign as f64 * self.charge[j] as f64 * PI)).exp());
        PseudoIdealTetrahedron { sign: self.sign, frame: self.frame, a, charge: self.charge }
    }
}

/// `*(Δ, b, a, c)` with `a0 a1 a2 = -1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoIdealTetrahedron {
    pub sign: i8,
    pub frame: Perm4,
    pub a: [Complex64; 3],
    pub charge: [i64; 3],
}

impl PseudoIdealTetrahedron {
    pub fn product_defect(&self) -> f64 {
        (self.a[0] * self.a[1] * self.a[2] + 1.0).norm()
    }

    /// The ideal tetrahedron, when the triple is modular and oriented by the sign.
    pub fn to_ideal(&self) -> Option<ITetrahedron> {
        is_pre_ideal(self).then(|| ITetrahedron { sign: self.sign, frame: self.frame, w: self.a, charge: self.charge })
    }
}

/// Modular relations plus half-plane agreement with the sign; flat triples avoid `{0, 1}`.
pub fn is_pre_ideal(y: &PseudoIdealTetrahedron) -> bool {
    let [a0, a1, a2] = y.a;
    let scale = 1.0 + (a0 * a1).norm();
    if (a0 * a1 * a2 + 1.0).norm() > MODULAR_TOL * scale || (a0 * a1 - a1 + 1.0).norm() > MODULAR_TOL * scale {
        return false;
    }
    if y.a.iter().all(|w| w.im.abs() < FLAT_BAND) {
        return y.a.iter().all(|w| w.re.abs() > FLAT_BAND && (w.re - 1.0).abs() > FLAT_BAND);
    }
    y.a.iter().all(|w| w.im * y.sign as f64 > 0.0)
}

/// `*(Δ, b, w, c)` with a modular triple `w`.
#[derive(Debug, Clone, PartialEq)]
pub struct ITetrahedron {
    pub sign: i8,
    pub frame: Perm4,
    pub w: [Complex64; 3],
    pub charge: [i64; 3],
}

impl ITetrahedron {
    /// `(w0, 1/(1-w0), 1-1/w0)` in the identity frame.
    pub fn from_w0(sign: i8, w0: Complex64, charge: [i64; 3]) -> Result<Self, ScissorsError> {
        if w0.norm() < FLAT_BAND || (w0 - 1.0).norm() < FLAT_BAND || !w0.is_finite() {
            return Err(ScissorsError::DegenerateTarget);
        }
        let one = Complex64::new(1.0, 0.0);
        Ok(ITetrahedron { sign, frame: IDENTITY, w: [w0, one / (one - w0), one - one / w0], charge })
    }

    /// `p_I(s, X)`: moduli follow the unordered edge and are inverted when `ε(s) = -1`.
    pub fn act(&self, s: &Perm4) -> Self {
        let eps = perm::sign(s);
        let w = permuted_slots(&self.w, s).map(|v| if eps < 0 { v.inv() } else { v });
        ITetrahedron {
            sign: self.sign * eps,
            frame: std::array::from_fn(|k| self.frame[s[k] as usize]),
            w,
            charge: permuted_slots(&self.charge, s),
        }
    }

    pub fn is_modular(&self, tol: f64) -> bool {
        let [w0, w1, w2] = self.w;
        (w0 * w1 * w2 + 1.0).norm() < tol && (w0 * w1 - w1 + 1.0).norm() < tol
    }

    pub fn as_pseudo(&self) -> PseudoIdealTetrahedron {
        PseudoIdealTetrahedron { sign: self.sign, frame: self.frame, a: self.w, charge: self.charge }
    }
}

/// The signed chain of decorated tetrahedra of a triangulation.
#[derive(Debug, Clone, PartialEq)]
pub struct DClass<S> {
    pub members: Vec<DTetrahedron<S>>,
}

impl<S: Scalar> DClass<S> {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

impl DClass<Complex64> {
    pub fn idealize(&self) -> Vec<PseudoIdealTetrahedron> {
        self.members.iter().map(DTetrahedron::idealize).collect()
    }
}

/// One signed member per tetrahedron, read in its branching frame.
pub fn extract_class<S: Scalar>(tri: &Triangulation, b: &Branching, z: &Cocycle<S>, c: &Charge) -> DClass<S> {
    let members = (0..tri.tet_count())
        .map(|t| {
            let (frame, sign) = b.frame(t);
            let zz = std::array::from_fn(|k| {
                let (i, j) = EDGE_VERTS[k];
                z.on_frame_edge(tri, b, t, i as usize, j as usize).clone()
            });
            DTetrahedron { sign, frame, z: zz, charge: c.in_frame(b, t) }
        })
        .collect();
    DClass { members }
}

/// Parabolic decorations in the identity frame idealizing to the modular triple of `w0`.
///
/// `x(e1)` solves a quadratic; both roots are returned.
pub fn cocycle_from_moduli(
    w0: Complex64,
    sign: i8,
    charge: [i64; 3],
    t: Complex64,
) -> Result<[DTetrahedron<Complex64>; 2], ScissorsError> {
    let target = ITetrahedron::from_w0(sign, w0, charge)?;
    if t.norm() < FLAT_BAND {
        return Err(ScissorsError::DegenerateTarget);
    }
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    let mut s: [Complex64; 3] =
        std::array::from_fn(|j| target.w[j].ln() - Complex64::new(0.0, sign as f64 * charge[j] as f64 * PI));
    let excess = ((s[0] + s[1] + s[2]) / two_pi_i).re.round();
    s[0] -= two_pi_i * excess;
    // move a vanishing parameter off zero by trading a period with a neighbour
    for j in 0..3 {
        if s[j].norm() < FLAT_BAND {
            s[j] += two_pi_i;
            s[(j + 1) % 3] -= two_pi_i;
        }
    }
    if s.iter().any(|v| v.norm() < FLAT_BAND) {
        return Err(ScissorsError::DegenerateTarget);
    }
    let x2 = t;
    let x0 = s[0] / t;
    let lin = t + x0;
    let disc = (lin * lin + 4.0 * s[1]).sqrt();
    let roots = [(-lin + disc) / 2.0, (-lin - disc) / 2.0];
    Ok(roots.map(|x1| {
        let u = [Complex64::new(0.0, 0.0), x0, x0 + x1, x0 + x1 + x2];
        DTetrahedron::from_potentials(sign, IDENTITY, &u, charge)
    }))
}

/// Charges of `(ABDE, BCDE, ABCD)` after the 2→3 move replacing `(ACDE, ABCE)`.
///
/// `free` is the charge of `AB` in `ABDE`; the family moves along the
/// lattice vector of the new edge `BD`.
pub fn five_term_charges(acde: [i64; 3], abce: [i64; 3], free: i64) -> [[i64; 3]; 3] {
    use num_traits::ToPrimitive;
    let q = |v: [i64; 3]| v.map(<BigRational as Scalar>::from_i64);
    five_term_charges_in(q(acde), q(abce), <BigRational as Scalar>::from_i64(free)).map(|t| t.map(|v| v.to_integer().to_i64().expect("small charge")))
}

/// [`five_term_charges`] over any scalar, e.g. symbolic charges.
pub fn five_term_charges_in<S: Scalar>(acde: [S; 3], abce: [S; 3], free: S) -> [[S; 3]; 3] {
    let one = S::one();
    let [ac_de, cd_ae, ad_ce] = acde;
    let [ab_ce, _bc_ae, ac_be] = abce;
    let abcd_ab = ab_ce.sub(&free);
    let bcde_bc = ac_de.sub(&free);
    let abcd_ac = ac_de.add(&ac_be);
    let abcd_bc = one.sub(&abcd_ab).sub(&abcd_ac);
    let abde_ad = ad_ce.sub(&abcd_bc);
    let abde_bd = one.sub(&free).sub(&abde_ad);
    let bcde_cd = cd_ae.sub(&abcd_ab);
    let bcde_bd = one.sub(&bcde_bc).sub(&bcde_cd);
    [[free, abde_bd, abde_ad], [bcde_bc, bcde_cd, bcde_bd], [abcd_ab, abcd_bc, abcd_ac]]
}

/// Cross-ratio modulus of four points in frame order; `None` stands for `∞`.
fn cross_ratio(v: [Option<Complex64>; 4]) -> Complex64 {
    match v {
        [None, Some(v1), Some(v2), Some(v3)] => (v2 - v1) / (v3 - v1),
        [Some(v0), Some(v1), Some(v2), Some(v3)] => (v2 - v1) * (v3 - v0) / ((v2 - v0) * (v3 - v1)),
        _ => unreachable!("only the first vertex is placed at infinity"),
    }
}

/// 2→3 ideal transit in the frame `A < B < C < D < E`.
///
/// Inputs are `ACDE` and `ABCE` in identity frames with a common sign;
/// outputs are `ABDE`, `BCDE`, `ABCD`. Ideal points are placed at
/// `A = ∞, C = 0, E = 1` and the outputs are read off as cross-ratios.
pub fn ideal_transit(acde: &ITetrahedron, abce: &ITetrahedron, free: i64) -> Result<[ITetrahedron; 3], ScissorsError> {
    if acde.sign != abce.sign || acde.frame != IDENTITY || abce.frame != IDENTITY {
        return Err(ScissorsError::IncompatibleFrame);
    }
    let (y, x) = (acde.w[0], abce.w[0]);
    let one = Complex64::new(1.0, 0.0);
    let pts = [None, Some(x / (x - one)), Some(Complex64::new(0.0, 0.0)), Some(y), Some(one)];
    let spans = [[0, 1, 3, 4], [1, 2, 3, 4], [0, 1, 2, 3]];
    let charges = five_term_charges(acde.charge, abce.charge, free);
    let mut out = Vec::with_capacity(3);
    for (span, ch) in spans.iter().zip(charges) {
        let w0 = cross_ratio(span.map(|k| pts[k]));
        let tet = ITetrahedron::from_w0(acde.sign, w0, ch).map_err(|_| ScissorsError::DegenerateModuli)?;
        if tet.w.iter().any(|w| !w.is_finite() || (*w - one).norm() < FLAT_BAND || w.norm() < FLAT_BAND) {
            return Err(ScissorsError::DegenerateModuli);
        }
        out.push(tet);
    }
    Ok(out.try_into().expect("three outputs"))
}

/// Product over the germs of edge class `e` of the modulus there, raised to the tetrahedron sign.
pub fn edge_modulus_product(tri: &Triangulation, tets: &[PseudoIdealTetrahedron], e: usize) -> Complex64 {
    tri.edge_class(e)
        .germs
        .iter()
        .map(|&(t, i)| {
            let inv = perm::inverse(&tets[t].frame);
            let (l1, l2) = EDGE_VERTS[i];
            let a = tets[t].a[slot_of(inv[l1 as usize] as usize, inv[l2 as usize] as usize)];
            if tets[t].sign > 0 {
                a
            } else {
                a.inv()
            }
        })
        .product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::branching::total_order_branching;
    use crate::census;
    use crate::charge::solve_charge;
    use crate::cocycle::{parabolic_coboundary, validate_cocycle};
    use crate::poly::Poly;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    fn random_parabolic(rng: &mut ChaCha8Rng) -> DTetrahedron<Complex64> {
        let u = std::array::from_fn(|_| c(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)));
        let k = rng.gen_range(0..3);
        let mut charge = [0; 3];
        charge[k] = 1;
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        let frame = perm::all()[rng.gen_range(0..24)];
        DTetrahedron::from_potentials(sign, frame, &u, charge)
    }

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn log_parameters_sum_to_zero_exactly() {
        let names = ["u0", "u1", "u2", "u3"];
        let u = names.map(Poly::var);
        let d = DTetrahedron::from_potentials(1, IDENTITY, &u, [1, 0, 0]);
        let p = d.log_parameters();
        assert!((&(&p[0] + &p[1]) + &p[2]).is_zero());
        assert!(d.is_valid(0.0));
    }

    proptest! {
        #[test]
        fn borel_log_parameters_sum_to_zero(ts in proptest::collection::vec((1i64..9, any::<bool>()), 4), xs in proptest::collection::vec(-9i64..9, 4)) {
            // z(ij) = g_i⁻¹ g_j for vertex elements g_k
            let g: Vec<BorelElement<BigRational>> = ts.iter().zip(&xs).map(|(&(t, s), &x)| BorelElement::new(q(if s { t } else { -t }), q(x))).collect();
            let z = std::array::from_fn(|k| {
                let (i, j) = EDGE_VERTS[k];
                g[i as usize].inverse().unwrap().mul(&g[j as usize]).unwrap()
            });
            let d = DTetrahedron { sign: 1, frame: IDENTITY, z, charge: [0, 0, 1] };
            prop_assert!(d.is_valid(0.0));
            let p = d.log_parameters();
            prop_assert!(p[0].add(&p[1]).add(&p[2]).is_zero_within(0.0));
        }
    }

    #[test]
    fn idealize_spec_examples() {
        let u = [c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)];
        let d = DTetrahedron::from_potentials(1, IDENTITY, &u, [1, 0, 0]);
        let p = d.log_parameters();
        assert_eq!(p, [c(1.0, 0.0), c(3.0, 0.0), c(-4.0, 0.0)]);
        let e = std::f64::consts::E;
        let a = d.idealize();
        let want = [c(-e, 0.0), c(e.powi(3), 0.0), c(e.powi(-4), 0.0)];
        assert!(a.a.iter().zip(want).all(|(x, y)| close(*x, y, 1e-12)));
        assert!(a.product_defect() < 1e-12);
        assert!(!is_pre_ideal(&a));
        let b = DTetrahedron { charge: [0, 1, 0], ..d }.idealize();
        let want = [c(e, 0.0), c(-e.powi(3), 0.0), c(e.powi(-4), 0.0)];
        assert!(b.a.iter().zip(want).all(|(x, y)| close(*x, y, 1e-12)));
    }

    #[test]
    fn product_invariant_on_random_tetrahedra() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            assert!(random_parabolic(&mut rng).idealize().product_defect() < 1e-12);
        }
    }

    #[test]
    fn pre_ideal_examples() {
        let ok = ITetrahedron { sign: 1, frame: IDENTITY, w: [c(0.0, 1.0), c(0.5, 0.5), c(1.0, 1.0)], charge: [0, 0, 1] };
        assert!(is_pre_ideal(&ok.as_pseudo()));
        assert_eq!(ITetrahedron::from_w0(1, c(0.0, 1.0), [0, 0, 1]).unwrap(), ok);
        assert!(!is_pre_ideal(&PseudoIdealTetrahedron { sign: -1, ..ok.as_pseudo() }));
        assert_eq!(ITetrahedron::from_w0(1, c(1.0, 0.0), [1, 0, 0]), Err(ScissorsError::DegenerateTarget));
        assert_eq!(ITetrahedron::from_w0(1, c(0.0, 0.0), [1, 0, 0]), Err(ScissorsError::DegenerateTarget));
        let flat = ITetrahedron::from_w0(-1, c(0.3, 0.0), [1, 0, 0]).unwrap();
        assert!(is_pre_ideal(&flat.as_pseudo()));
        let y = PseudoIdealTetrahedron { sign: 1, frame: IDENTITY, a: [c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)], charge: [1, 0, 0] };
        assert!(!is_pre_ideal(&y));
    }

    #[test]
    fn moduli_round_trip_through_cocycles() {
        for w0 in [c(0.0, 1.0), c(0.5, 1.0), c(2.0, 1.0), c(0.3, 0.0), c(2.0, 0.0), c(-1.0, -0.5)] {
            for sign in [1i8, -1] {
                for charge in [[0, 0, 1], [1, 0, 0], [0, 1, 0], [2, -1, 0]] {
                    let want = ITetrahedron::from_w0(sign, w0, charge).unwrap();
                    let roots = cocycle_from_moduli(w0, sign, charge, c(1.0, 0.0)).unwrap();
                    for d in roots {
                        assert!(d.is_valid(1e-12) && d.is_full(1e-9));
                        let a = d.idealize();
                        assert!(a.a.iter().zip(want.w).all(|(x, y)| close(*x, y, 1e-10)), "{w0} {sign} {charge:?}");
                        if w0.im * sign as f64 >= 0.0 {
                            assert!(is_pre_ideal(&a));
                        }
                    }
                }
            }
        }
        let d = cocycle_from_moduli(c(0.0, 1.0), 1, [0, 0, 1], c(1.0, 0.0)).unwrap();
        assert_ne!(d[0], d[1]);
        assert_eq!(cocycle_from_moduli(c(1.0, 0.0), 1, [0, 0, 1], c(1.0, 0.0)).unwrap_err(), ScissorsError::DegenerateTarget);
    }

    #[test]
    fn transposition_inverts_moduli() {
        let x = ITetrahedron::from_w0(1, c(0.0, 1.0), [0, 0, 1]).unwrap();
        assert_eq!(x.act(&IDENTITY), x);
        let y = x.act(&[1, 0, 2, 3]);
        assert_eq!(y.sign, -1);
        assert!(close(y.w[0], c(0.0, -1.0), 1e-15));
        assert!(y.is_modular(1e-12));
        assert!(is_pre_ideal(&y.as_pseudo()));
    }

    #[test]
    fn actions_compose() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let all = perm::all();
        for _ in 0..10_000 {
            let d = random_parabolic(&mut rng);
            let s = all[rng.gen_range(0..24)];
            let s2 = all[rng.gen_range(0..24)];
            let lhs = d.act(&s2).unwrap().act(&s).unwrap();
            let rhs = d.act(&perm::compose(&s2, &s)).unwrap();
            assert_eq!(lhs.sign, rhs.sign);
            assert_eq!(lhs.frame, rhs.frame);
            assert_eq!(lhs.charge, rhs.charge);
            assert!(lhs.z.iter().zip(&rhs.z).all(|(a, b)| a.approx_eq(b, 1e-12)));
            assert!(lhs.is_valid(1e-12));
            let w = ITetrahedron::from_w0(d.sign, c(rng.gen_range(-2.0..2.0), rng.gen_range(0.1..2.0) * d.sign as f64), d.charge).unwrap();
            let (l, r) = (w.act(&s2).act(&s), w.act(&perm::compose(&s2, &s)));
            assert_eq!((l.sign, l.frame, l.charge), (r.sign, r.frame, r.charge));
            assert!(l.w.iter().zip(r.w).all(|(a, b)| close(*a, b, 1e-9)));
            assert!(l.is_modular(1e-9));
        }
    }

    #[test]
    fn idealize_is_equivariant_on_pre_ideal_tetrahedra() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            let w0 = c(rng.gen_range(-2.0..2.0), sign as f64 * rng.gen_range(0.1..2.0));
            let charge = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, -1]][rng.gen_range(0..4)];
            let d = cocycle_from_moduli(w0, sign, charge, c(rng.gen_range(0.5..2.0), 0.3)).unwrap()[0].clone();
            let x = d.idealize().to_ideal().unwrap();
            for s in perm::all() {
                let lhs = d.act(&s).unwrap().idealize();
                let rhs = x.act(&s);
                assert!(is_pre_ideal(&lhs));
                assert!(lhs.a.iter().zip(rhs.w).all(|(a, b)| close(*a, b, 1e-10)), "{s:?}");
            }
        }
    }

    #[test]
    fn mirror_rules() {
        let u = [c(0.0, 0.0), c(1.0, 0.0), c(2.5, 0.0), c(3.0, 1.0)];
        let d = DTetrahedron::from_potentials(1, IDENTITY, &u, [1, 0, 0]);
        // u = slot 2 = pair (02)(13); v = 01, w = 12
        let m = d.mirror(2, (0, 1), (1, 2)).unwrap();
        assert_eq!(m.charge, [-1, 0, 2]);
        assert_eq!(m.sign, -1);
        assert_eq!(m.z, d.z);
        assert_eq!(m.mirror(2, (0, 1), (1, 2)).unwrap().charge, d.charge);
        // the pair carrying 1 stays put when its neighbours carry 0
        let m0 = d.mirror(0, (0, 2), (2, 1)).unwrap();
        assert_eq!(m0.charge, [1, 0, 0]);
        assert_eq!(m0.charge.iter().sum::<i64>(), 1);
        assert_eq!(d.mirror(0, (0, 1), (1, 2)), Err(ScissorsError::BadEdgeSelection));
        assert_eq!(d.mirror(2, (0, 1), (2, 3)), Err(ScissorsError::BadEdgeSelection));
        assert_eq!(d.mirror(2, (1, 0), (0, 2)), Err(ScissorsError::BadEdgeSelection));
        assert_eq!(d.mirror(1, (0, 1), (2, 3)), Err(ScissorsError::BadEdgeSelection));
        assert_eq!(d.mirror(1, (0, 1), (1, 3)).unwrap().charge, [-1, 2, 0]);
    }

    #[test]
    fn double_class_has_opposite_signs() {
        for (name, (t, h)) in census::all() {
            let order: Vec<usize> = (0..t.vertex_count()).collect();
            let Ok(b) = total_order_branching(&t, &order) else { continue };
            let u: Vec<Complex64> = (0..t.vertex_count()).map(|k| c(k as f64 * 0.7 + 0.1, (k * k) as f64 * 0.3)).collect();
            let z = parabolic_coboundary(&t, &b, &u);
            let ch = solve_charge(&t, &h).unwrap();
            let class = extract_class(&t, &b, &z, &ch);
            let (r0, r1, _, _) = t.counts();
            assert_eq!(class.len(), r1 - r0, "{name}");
            assert!(class.members.iter().all(|m| m.is_valid(1e-12)), "{name}");
            if name == "s3_double" {
                assert_eq!(class.members[0].sign, -class.members[1].sign);
            }
        }
    }

    #[test]
    fn edge_product_is_one_on_idealized_census() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (name, (t, h)) in census::all() {
            let order: Vec<usize> = (0..t.vertex_count()).collect();
            let Ok(b) = total_order_branching(&t, &order) else { continue };
            let ch = solve_charge(&t, &h).unwrap();
            for _ in 0..20 {
                let u: Vec<Complex64> = (0..t.vertex_count()).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
                let z = parabolic_coboundary(&t, &b, &u);
                assert!(validate_cocycle(&t, &b, &z));
                let tets = extract_class(&t, &b, &z, &ch).idealize();
                for e in 0..t.edge_count() {
                    assert!(close(edge_modulus_product(&t, &tets, e), c(1.0, 0.0), 1e-10), "{name} edge {e}");
                }
                let mut bad = tets.clone();
                bad[0].a[0] *= 1.5;
                assert!((0..t.edge_count()).any(|e| !close(edge_modulus_product(&t, &bad, e), c(1.0, 0.0), 1e-6)));
            }
        }
    }

    #[test]
    fn transit_reproduces_central_moduli() {
        let one = c(1.0, 0.0);
        for (y, x) in [(c(0.3, 0.8), c(0.6, 0.5)), (c(-1.0, 2.0), c(0.2, 0.1)), (c(0.5, 0.5), c(0.5, 0.5))] {
            let acde = ITetrahedron::from_w0(1, y, [0, 1, 0]).unwrap();
            let abce = ITetrahedron::from_w0(1, x, [0, 0, 1]).unwrap();
            let [abde, bcde, abcd] = ideal_transit(&acde, &abce, 0).unwrap();
            assert!(close(bcde.w[2], x * (y - one) / y, 1e-12));
            assert!(close(abcd.w[2], y * (x - one) / x, 1e-12));
            assert!(close(abde.w[1], one / ((x - one) * (y - one)), 1e-12));
            for t in [&abde, &bcde, &abcd] {
                assert!(t.is_modular(1e-10));
            }
            if x == y {
                assert!(close(bcde.w[2], abcd.w[2], 1e-15));
            }
        }
    }

    #[test]
    fn transit_satisfies_edge_equations() {
        let acde = ITetrahedron::from_w0(1, c(0.3, 0.8), [0, 1, 0]).unwrap();
        let abce = ITetrahedron::from_w0(1, c(0.6, 0.5), [0, 0, 1]).unwrap();
        let [abde, bcde, abcd] = ideal_transit(&acde, &abce, 0).unwrap();
        // (edge, T0 factors, T1 factors) as (tetra, slot)
        let ins = [&acde, &abce];
        let outs = [&abde, &bcde, &abcd];
        let rows: [(&[(usize, usize)], &[(usize, usize)]); 9] = [
            (&[(1, 0)], &[(0, 0), (2, 0)]),
            (&[(1, 1)], &[(1, 0), (2, 1)]),
            (&[(1, 2)], &[(0, 2), (1, 1)]),
            (&[(0, 2)], &[(0, 2), (2, 1)]),
            (&[(0, 1)], &[(1, 1), (2, 0)]),
            (&[(0, 0)], &[(0, 0), (1, 0)]),
            (&[(0, 0), (1, 2)], &[(2, 2)]),
            (&[(0, 1), (1, 1)], &[(0, 1)]),
            (&[(0, 2), (1, 0)], &[(1, 2)]),
        ];
        for (lhs, rhs) in rows {
            let l: Complex64 = lhs.iter().map(|&(t, s)| ins[t].w[s]).product();
            let r: Complex64 = rhs.iter().map(|&(t, s)| outs[t].w[s]).product();
            assert!(close(l, r, 1e-12));
            let lc: i64 = lhs.iter().map(|&(t, s)| ins[t].charge[s]).sum();
            let rc: i64 = rhs.iter().map(|&(t, s)| outs[t].charge[s]).sum();
            assert_eq!(lc, rc);
        }
        let central: Complex64 = [abde.w[1], bcde.w[2], abcd.w[2]].iter().product();
        assert!(close(central, c(1.0, 0.0), 1e-12));
        assert_eq!(abde.charge[1] + bcde.charge[2] + abcd.charge[2], 2);
        for t in outs {
            assert_eq!(t.charge.iter().sum::<i64>(), 1);
        }
    }

    #[test]
    fn idealized_transit_agrees_on_the_central_edge() {
        // T0 potentials A=0, B=d, C=b-c, D=a, E=b making ACDE and ABCE pre-ideal
        let pot = |v: [Complex64; 4]| [c(0.0, 0.0), v[3], v[1] - v[2], v[0], v[1]];
        let tet = |p: &[Complex64; 5], span: [usize; 4], ch: [i64; 3]| DTetrahedron::from_potentials(1, IDENTITY, &span.map(|k| p[k]), ch);
        let (y, x) = (c(0.3, 0.8), c(0.6, 0.5));
        let (ca, cb) = ([0, 1, 0], [0, 0, 1]);
        let targets = [ITetrahedron::from_w0(1, y, ca).unwrap(), ITetrahedron::from_w0(1, x, cb).unwrap()];
        let resid = |v: [Complex64; 4]| -> [Complex64; 4] {
            let p = pot(v);
            let mut r = [c(0.0, 0.0); 4];
            for (k, (span, ch)) in [([0, 2, 3, 4], ca), ([0, 1, 2, 4], cb)].into_iter().enumerate() {
                let lp = tet(&p, span, ch).log_parameters();
                for j in 0..2 {
                    r[2 * k + j] = lp[j] - (targets[k].w[j].ln() - c(0.0, ch[j] as f64 * PI));
                }
            }
            r
        };
        let v = newton(resid, [c(0.16, -0.42), c(1.88, -0.61), c(2.04, -1.3), c(-0.24, 0.19)]);
        let p = pot(v);
        assert!(tet(&p, [0, 2, 3, 4], ca).idealize().to_ideal().is_some());
        assert!(tet(&p, [0, 1, 2, 4], cb).idealize().to_ideal().is_some());
        let [abde, bcde, abcd] = ideal_transit(&targets[0], &targets[1], 0).unwrap();
        let [c3, c4, c5] = five_term_charges(ca, cb, 0);
        assert!(close(tet(&p, [0, 1, 3, 4], c3).idealize().a[1], abde.w[1], 1e-10));
        assert!(close(tet(&p, [1, 2, 3, 4], c4).idealize().a[2], bcde.w[2], 1e-10));
        assert!(close(tet(&p, [0, 1, 2, 3], c5).idealize().a[2], abcd.w[2], 1e-10));
    }

    fn newton(f: impl Fn([Complex64; 4]) -> [Complex64; 4], mut v: [Complex64; 4]) -> [Complex64; 4] {
        for _ in 0..60 {
            let f0 = f(v);
            if f0.iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-14 {
                break;
            }
            let h = 1e-7;
            let mut jac = [[c(0.0, 0.0); 4]; 4];
            for k in 0..4 {
                let mut w = v;
                w[k] += h;
                let fk = f(w);
                for r in 0..4 {
                    jac[r][k] = (fk[r] - f0[r]) / h;
                }
            }
            let step = solve4(jac, f0);
            for k in 0..4 {
                v[k] -= step[k];
            }
        }
        v
    }

    fn solve4(mut a: [[Complex64; 4]; 4], mut b: [Complex64; 4]) -> [Complex64; 4] {
        for col in 0..4 {
            let piv = (col..4).max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm())).unwrap();
            a.swap(col, piv);
            b.swap(col, piv);
            for r in col + 1..4 {
                let m = a[r][col] / a[col][col];
                for k in col..4 {
                    let t = a[col][k];
                    a[r][k] -= m * t;
                }
                let t = b[col];
                b[r] -= m * t;
            }
        }
        let mut x = [c(0.0, 0.0); 4];
        for r in (0..4).rev() {
            let s: Complex64 = (r + 1..4).map(|k| a[r][k] * x[k]).sum();
            x[r] = (b[r] - s) / a[r][r];
        }
        x
    }
}
