//! Integral charges: constraints, an exact solver, the lattice of all
//! charges and charge transits.
//!
//! A charge is stored per tetrahedron on its three pairs of opposite edges,
//! pair `k` holding local edges `k` and `5 - k`: `(01)(23)`, `(02)(13)`,
//! `(03)(12)`. Reading it in a branching frame is [`Charge::in_frame`].

mod intlin;

pub use intlin::{solve as solve_integer_system, IntSolution};

use crate::branching::Branching;
use crate::perm;
use crate::triangulation::{MoveCorrespondence, MoveSpec, Triangulation, TriangulationError};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, VecDeque};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChargeError {
    #[error("H is not a Hamiltonian subcomplex")]
    NotDistinguished,
    #[error("charge constraints have no integer solution")]
    Infeasible,
    #[error("charge cannot be transited: {0}")]
    ChargeNotTransitable(String),
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
}

pub fn pair_of_edge(local_edge: usize) -> usize {
    local_edge.min(5 - local_edge)
}

/// Frame positions `e0 = (01)`, `e1 = (12)`, `e2 = (02)` of the identity frame, as pairs.
const POSITION_PAIR: [usize; 3] = [0, 2, 1];

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Charge {
    pub values: Vec<[i64; 3]>,
}

impl Charge {
    pub fn at(&self, tet: usize, local_edge: usize) -> i64 {
        self.values[tet][pair_of_edge(local_edge)]
    }

    /// `(c(e0), c(e1), c(e2))` on the edges `b0b1`, `b1b2`, `b0b2` of the frame.
    pub fn in_frame(&self, b: &Branching, tet: usize) -> [i64; 3] {
        let (f, _) = b.frame(tet);
        [(0, 1), (1, 2), (0, 2)].map(|(i, j)| self.at(tet, perm::edge_index(f[i], f[j])))
    }

    pub fn add(&self, delta: &[[i64; 3]], k: i64) -> Charge {
        let values = self.values.iter().zip(delta).map(|(v, d)| [v[0] + k * d[0], v[1] + k * d[1], v[2] + k * d[2]]).collect();
        Charge { values }
    }
}

/// One step of a dual cycle: the tetrahedron and the local edge between its entry and exit faces.
pub type DualStep = (usize, usize);

/// Fundamental cycles of the dual graph, one per face outside a BFS spanning tree.
pub fn dual_cycles(tri: &Triangulation) -> Vec<Vec<DualStep>> {
    let n = tri.tet_count();
    // parent[x] = (parent tet, exit face in parent, entry face in x)
    let mut parent: Vec<Option<(usize, u8, u8)>> = vec![None; n];
    let mut depth = vec![usize::MAX; n];
    let mut tree_faces = BTreeSet::new();
    depth[0] = 0;
    let mut q = VecDeque::from([0]);
    while let Some(x) = q.pop_front() {
        for f in 0..4u8 {
            let g = tri.gluing(x, f);
            if depth[g.tet] == usize::MAX {
                depth[g.tet] = depth[x] + 1;
                parent[g.tet] = Some((x, f, g.face));
                tree_faces.insert(tri.face(x, f));
                q.push_back(g.tet);
            }
        }
    }
    let selected = |t: usize, fin: u8, fout: u8| {
        let rest: Vec<u8> = (0..4).filter(|&l| l != fin && l != fout).collect();
        (t, perm::edge_index(rest[0], rest[1]))
    };
    let mut cycles = Vec::new();
    for f in 0..tri.face_count() {
        if tree_faces.contains(&f) {
            continue;
        }
        let [(a, fa), (b, fb)] = tri.face_sides(f);
        // (tet, entry face, exit face) along a -> b -> tree path -> a
        let mut up_b = vec![b];
        let mut up_a = vec![a];
        let (mut x, mut y) = (b, a);
        while depth[x] > depth[y] {
            x = parent[x].unwrap().0;
            up_b.push(x);
        }
        while depth[y] > depth[x] {
            y = parent[y].unwrap().0;
            up_a.push(y);
        }
        while x != y {
            x = parent[x].unwrap().0;
            y = parent[y].unwrap().0;
            up_b.push(x);
            up_a.push(y);
        }
        up_a.pop();
        let mut path = up_b;
        path.extend(up_a.into_iter().rev());
        // faces crossed between consecutive path entries
        let cross = |from: usize, to: usize| -> (u8, u8) {
            match parent[from] {
                Some((p, pf, cf)) if p == to => (cf, pf),
                _ => {
                    let (_, pf, cf) = parent[to].unwrap();
                    (pf, cf)
                }
            }
        };
        let mut entries = vec![fb];
        let mut exits = Vec::new();
        for w in path.windows(2) {
            let (out, inn) = cross(w[0], w[1]);
            exits.push(out);
            entries.push(inn);
        }
        exits.push(fa);
        cycles.push(path.iter().enumerate().map(|(k, &t)| selected(t, entries[k], exits[k])).collect());
    }
    cycles
}

/// The affine integer system of a charge; unknowns are 3 per tetrahedron, then one even-slack per dual cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChargeSystem {
    pub rows: Vec<Vec<i64>>,
    pub rhs: Vec<i64>,
    pub tet_rows: usize,
    pub edge_rows: usize,
    pub loop_rows: usize,
}

pub fn charge_constraints(tri: &Triangulation, h: &BTreeSet<usize>) -> Result<ChargeSystem, ChargeError> {
    if !tri.is_distinguished(h)? {
        return Err(ChargeError::NotDistinguished);
    }
    let n = tri.tet_count();
    let cycles = dual_cycles(tri);
    let width = 3 * n + cycles.len();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for t in 0..n {
        let mut r = vec![0; width];
        r[3 * t..3 * t + 3].fill(1);
        rows.push(r);
        rhs.push(1);
    }
    for (e, class) in tri.edge_classes().iter().enumerate() {
        let mut r = vec![0; width];
        for &(t, i) in &class.germs {
            r[3 * t + pair_of_edge(i)] += 1;
        }
        rows.push(r);
        rhs.push(if h.contains(&e) { 0 } else { 2 });
    }
    for (k, cyc) in cycles.iter().enumerate() {
        let mut r = vec![0; width];
        for &(t, i) in cyc {
            r[3 * t + pair_of_edge(i)] += 1;
        }
        r[3 * n + k] = -2;
        rows.push(r);
        rhs.push(0);
    }
    Ok(ChargeSystem { rows, rhs, tet_rows: n, edge_rows: tri.edge_count(), loop_rows: cycles.len() })
}

fn to_big(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

fn to_charge(x: &[BigInt], n: usize) -> Result<Vec<[i64; 3]>, ChargeError> {
    let v: Option<Vec<i64>> = x[..3 * n].iter().map(ToPrimitive::to_i64).collect();
    let v = v.ok_or(ChargeError::Infeasible)?;
    Ok(v.chunks(3).map(|c| [c[0], c[1], c[2]]).collect())
}

fn solve_system(sys: &ChargeSystem) -> Option<IntSolution> {
    let rhs: Vec<BigInt> = sys.rhs.iter().map(|&x| BigInt::from(x)).collect();
    intlin::solve(&to_big(&sys.rows), &rhs)
}

/// Canonical charge: the normal-form preimage of the constraint system.
pub fn solve_charge(tri: &Triangulation, h: &BTreeSet<usize>) -> Result<Charge, ChargeError> {
    let sys = charge_constraints(tri, h)?;
    let sol = solve_system(&sys).ok_or(ChargeError::Infeasible)?;
    Ok(Charge { values: to_charge(&sol.particular, tri.tet_count())? })
}

/// Parity of `c` on every fundamental dual cycle.
pub fn loop_parities(tri: &Triangulation, c: &Charge) -> Vec<i64> {
    dual_cycles(tri).iter().map(|cyc| cyc.iter().map(|&(t, i)| c.at(t, i)).sum::<i64>().rem_euclid(2)).collect()
}

pub fn verify_charge(tri: &Triangulation, h: &BTreeSet<usize>, c: &Charge) -> bool {
    if c.values.len() != tri.tet_count() || c.values.iter().any(|v| v.iter().sum::<i64>() != 1) {
        return false;
    }
    let edges_ok = tri.edge_classes().iter().enumerate().all(|(e, class)| {
        let s: i64 = class.germs.iter().map(|&(t, i)| c.at(t, i)).sum();
        s == if h.contains(&e) { 0 } else { 2 }
    });
    edges_ok && loop_parities(tri, c).iter().all(|&p| p == 0)
}

/// Neumann's vector of edge class `e`, per tetrahedron and pair.
///
/// Around each germ it adds `*` to the next frame position and subtracts it
/// from the one after, `*` being the tetrahedron's orientation sign.
pub fn lattice_vector(tri: &Triangulation, e: usize) -> Vec<[i64; 3]> {
    let mut w = vec![[0i64; 3]; tri.tet_count()];
    for &(t, i) in &tri.edge_class(e).germs {
        let pos = POSITION_PAIR.iter().position(|&p| p == pair_of_edge(i)).unwrap();
        let s = tri.orientation(t) as i64;
        w[t][POSITION_PAIR[(pos + 1) % 3]] += s;
        w[t][POSITION_PAIR[(pos + 2) % 3]] -= s;
    }
    w
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChargeLattice {
    pub particular: Charge,
    /// `w(e)` for every edge class `e`.
    pub basis: Vec<Vec<[i64; 3]>>,
}

impl ChargeLattice {
    /// Whether `c - particular` is an integer combination of the `w(e)`.
    pub fn contains(&self, c: &Charge) -> bool {
        let n = self.particular.values.len();
        if c.values.len() != n {
            return false;
        }
        let rows: Vec<Vec<BigInt>> = (0..3 * n)
            .map(|k| self.basis.iter().map(|w| BigInt::from(w[k / 3][k % 3])).collect())
            .collect();
        let rhs: Vec<BigInt> = (0..3 * n).map(|k| BigInt::from(c.values[k / 3][k % 3] - self.particular.values[k / 3][k % 3])).collect();
        intlin::solve(&rows, &rhs).is_some()
    }
}

pub fn charge_lattice_basis(tri: &Triangulation, h: &BTreeSet<usize>) -> Result<ChargeLattice, ChargeError> {
    let particular = solve_charge(tri, h)?;
    let basis = (0..tri.edge_count()).map(|e| lattice_vector(tri, e)).collect();
    Ok(ChargeLattice { particular, basis })
}

/// A per-tetrahedron vector in the coordinates `(w1 = c(e0)` for all tetrahedra, then `w2 = -c(e1))`.
pub fn frame_coordinates(b: &Branching, v: &[[i64; 3]]) -> Vec<i64> {
    let c = Charge { values: v.to_vec() };
    let framed: Vec<[i64; 3]> = (0..v.len()).map(|t| c.in_frame(b, t)).collect();
    framed.iter().map(|f| f[0]).chain(framed.iter().map(|f| -f[1])).collect()
}

/// A transited charge and the lattice directions along which it may vary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChargeTransit {
    pub charge: Charge,
    pub directions: Vec<Vec<[i64; 3]>>,
}

/// Charges on the moved triangulation agreeing with `c` on every surviving tetrahedron.
///
/// For 2↔3 moves the sector sums over the moved region must also agree on
/// every common edge. For 0→2 and bubble moves the split edge and the old
/// H-edge change their sector sums, and validity alone fixes the transit.
pub fn charge_transit(
    old: &Triangulation,
    c: &Charge,
    new: &Triangulation,
    new_h: &BTreeSet<usize>,
    corr: &MoveCorrespondence,
    m: &MoveSpec,
) -> Result<ChargeTransit, ChargeError> {
    let mut sys = charge_constraints(new, new_h)?;
    let width = sys.rows.first().map_or(0, Vec::len);
    for (old, img) in corr.tet_map.iter().enumerate() {
        if let Some(t) = *img {
            for p in 0..3 {
                let mut r = vec![0; width];
                r[3 * t + p] = 1;
                sys.rows.push(r);
                sys.rhs.push(c.values[old][p]);
            }
        }
    }
    if matches!(m, MoveSpec::TwoThree { .. } | MoveSpec::ThreeTwo { .. }) {
        let destroyed: BTreeSet<usize> = corr.destroyed_tets.iter().copied().collect();
        let created: BTreeSet<usize> = corr.created_tets.iter().copied().collect();
        let before = sector_sums(old, c, &destroyed);
        for (e_old, img) in corr.edge_map.iter().enumerate() {
            let Some((e_new, _)) = *img else { continue };
            let mut r = vec![0; width];
            for &(t, i) in &new.edge_class(e_new).germs {
                if created.contains(&t) {
                    r[3 * t + pair_of_edge(i)] += 1;
                }
            }
            sys.rows.push(r);
            sys.rhs.push(before[e_old]);
        }
    }
    let sol = solve_system(&sys).ok_or_else(|| ChargeError::ChargeNotTransitable("surviving charges admit no extension".into()))?;
    let n = new.tet_count();
    let charge = Charge { values: to_charge(&sol.particular, n)? };
    let directions = sol
        .kernel
        .iter()
        .filter(|k| k[..3 * n].iter().any(|x| !x.is_zero()))
        .map(|k| to_charge(k, n))
        .collect::<Result<_, _>>()?;
    Ok(ChargeTransit { charge, directions })
}

/// Sum of charges over the germs of each new edge class lying in tetrahedra from `tets`.
pub fn sector_sums(tri: &Triangulation, c: &Charge, tets: &BTreeSet<usize>) -> Vec<i64> {
    tri.edge_classes()
        .iter()
        .map(|class| class.germs.iter().filter(|g| tets.contains(&g.0)).map(|&(t, i)| c.at(t, i)).sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::branching::total_order_branching;
    use crate::census;
    use crate::triangulation::apply_move;
    use proptest::prelude::*;

    #[test]
    fn double_system_shape() {
        let (t, h) = census::s3_double();
        let sys = charge_constraints(&t, &h).unwrap();
        assert_eq!((sys.tet_rows, sys.edge_rows, sys.loop_rows), (2, 6, 3));
        let hedge = sys.rhs[2..8].iter().filter(|&&x| x == 0).count();
        assert_eq!(hedge, 4);
        assert_eq!(charge_constraints(&t, &BTreeSet::new()).unwrap_err(), ChargeError::NotDistinguished);
    }

    #[test]
    fn double_hand_charge() {
        let (t, h) = census::s3_double();
        // zero on (01)(23) and (03)(12), one on (02)(13)
        let c = Charge { values: vec![[0, 1, 0], [0, 1, 0]] };
        assert!(verify_charge(&t, &h, &c));
        let b = total_order_branching(&t, &[0, 1, 2, 3]).unwrap();
        assert_eq!(c.in_frame(&b, 0), [0, 0, 1]);
        let mut bad = c.clone();
        bad.values[0] = [1, 1, 0];
        assert!(!verify_charge(&t, &h, &bad));
        let odd = c.add(&[[1, -1, 0], [0, 0, 0]], 1);
        assert!(!verify_charge(&t, &h, &odd));
    }

    #[test]
    fn census_charges_solve_deterministically() {
        for (name, (t, h)) in census::all() {
            let c = solve_charge(&t, &h).unwrap();
            assert!(verify_charge(&t, &h, &c), "{name}");
            assert_eq!(solve_charge(&t, &h).unwrap(), c);
            for e in 0..t.edge_count() {
                assert!(verify_charge(&t, &h, &c.add(&lattice_vector(&t, e), 1)), "{name} edge {e}");
            }
        }
    }

    #[test]
    fn frame_coordinates_match_signed_occurrences() {
        let (t, _) = census::s3_pentachoron();
        let b = total_order_branching(&t, &census::pentachoron_vertices(&t)).unwrap();
        for e in 0..t.edge_count() {
            let w = frame_coordinates(&b, &lattice_vector(&t, e));
            let n = t.tet_count();
            for tet in 0..n {
                let (f, s) = b.frame(tet);
                let (mut r1, mut r2) = (0, 0);
                for (pos, (i, j)) in [(0, 1), (1, 2), (0, 2)].into_iter().enumerate() {
                    let germ = perm::edge_index(f[i], f[j]);
                    for g in [germ, 5 - germ] {
                        if t.edge(tet, g) == e {
                            // c(e0) = w1, c(e1) = -w2, c(e2) = 1 - w1 + w2
                            match pos {
                                0 => r1 += 1,
                                1 => r2 -= 1,
                                _ => {
                                    r1 -= 1;
                                    r2 += 1
                                }
                            }
                        }
                    }
                }
                assert_eq!((w[tet], w[n + tet]), (s as i64 * r2, -(s as i64) * r1));
            }
        }
    }

    #[test]
    fn neumann_vector_example() {
        let (t, h) = census::s3_pentachoron();
        let vs = census::pentachoron_vertices(&t);
        let face = t.face(1, 2);
        let (t2, _, corr) = apply_move(&t, &h, &MoveSpec::TwoThree { face }).unwrap();
        let b = crate::branching::branch_transit(&t2, &total_order_branching(&t, &vs).unwrap(), &corr, &MoveSpec::TwoThree { face })
            .unwrap()
            .remove(0);
        let central = corr.created_edges[0];
        let name = |cls: usize| vs.iter().position(|&x| corr.vertex_map[x] == Some(cls)).unwrap();
        // star tetrahedra ordered by the simplex vertex they miss: 0, 2, 4
        let missing = |tet: usize| (0..5).find(|&k| (0..4).all(|l| name(t2.vertex(tet, l)) != k)).unwrap();
        let mut star: Vec<usize> = corr.created_tets.clone();
        star.sort_by_key(|&x| missing(x));
        assert_eq!(star.iter().map(|&x| missing(x)).collect::<Vec<_>>(), [0, 2, 4]);
        let full = frame_coordinates(&b, &lattice_vector(&t2, central));
        let n = t2.tet_count();
        let w: Vec<i64> = star.iter().map(|&x| full[x]).chain(star.iter().map(|&x| full[n + x])).collect();
        let signs: Vec<i8> = star.iter().map(|&x| b.sign(x)).collect();
        assert!(signs.iter().all(|&s| s == signs[0]));
        let expected = [1, -1, 1, 1, 0, 1].map(|x| x * signs[0] as i64);
        assert_eq!(w, expected);
    }

    #[test]
    fn two_three_transit_family() {
        for (name, (t, h)) in [("double", census::s3_double()), ("pentachoron", census::s3_pentachoron())] {
            let c = solve_charge(&t, &h).unwrap();
            let m = MoveSpec::TwoThree { face: 0 };
            let (t2, h2, corr) = apply_move(&t, &h, &m).unwrap();
            let tr = charge_transit(&t, &c, &t2, &h2, &corr, &m).unwrap();
            assert!(verify_charge(&t2, &h2, &tr.charge), "{name}");
            let central = corr.created_edges[0];
            let w = lattice_vector(&t2, central);
            // with no tetrahedron outside the star the family is the whole lattice, of rank r1 - r0
            let rank = if corr.tet_map.iter().all(Option::is_none) { t2.edge_count() - t2.vertex_count() } else { 1 };
            assert_eq!(tr.directions.len(), rank, "{name}");
            let cols: Vec<Vec<BigInt>> = (0..3 * t2.tet_count())
                .map(|k| tr.directions.iter().map(|d| BigInt::from(d[k / 3][k % 3])).collect())
                .collect();
            let target: Vec<BigInt> = (0..3 * t2.tet_count()).map(|k| BigInt::from(w[k / 3][k % 3])).collect();
            assert!(solve_integer_system(&cols, &target).is_some(), "{name}");
            let d = &tr.directions[0];
            assert!(verify_charge(&t2, &h2, &tr.charge.add(d, 3)));
            // sector sums over the moved region agree on every common edge
            let destroyed: BTreeSet<usize> = corr.destroyed_tets.iter().copied().collect();
            let created: BTreeSet<usize> = corr.created_tets.iter().copied().collect();
            let before = sector_sums(&t, &c, &destroyed);
            let after = sector_sums(&t2, &tr.charge, &created);
            for (old, img) in corr.edge_map.iter().enumerate() {
                if let Some((ne, _)) = *img {
                    assert_eq!(before[old], after[ne], "{name} edge {old}");
                }
            }
            let central_tets: BTreeSet<_> = created.clone();
            assert_eq!(sector_sums(&t2, &tr.charge, &central_tets)[central], 2);
        }
    }

    #[test]
    fn zero_two_and_bubble_transits() {
        let (t, h) = census::s3_double();
        let c = solve_charge(&t, &h).unwrap();
        let e = t.edge_between(0, 0, 2).0;
        let m = MoveSpec::ZeroTwo { edge: e, faces: (0, 1) };
        let (t2, h2, corr) = apply_move(&t, &h, &m).unwrap();
        let tr = charge_transit(&t, &c, &t2, &h2, &corr, &m).unwrap();
        assert!(verify_charge(&t2, &h2, &tr.charge));
        let new: BTreeSet<usize> = corr.created_tets.iter().copied().collect();
        let sums = sector_sums(&t2, &tr.charge, &new);
        let (p, q) = (corr.created_tets[0], corr.created_tets[1]);
        // e_c is the edge shared by the inner faces 0 and 1 of the pillow: labels (2, 3)
        let ec = t2.edge_between(p, 2, 3).0;
        assert_eq!(sums[ec], 2);
        assert_eq!(tr.charge.at(p, 0) + tr.charge.at(q, 0), 2);

        let face = t.face(0, 3);
        let h01 = t.edge_between(0, 0, 1).0;
        let m = MoveSpec::Bubble { face, h_edge: h01 };
        let (t3, h3, corr) = apply_move(&t, &h, &m).unwrap();
        let tr = charge_transit(&t, &c, &t3, &h3, &corr, &m).unwrap();
        assert!(verify_charge(&t3, &h3, &tr.charge));
        let new: BTreeSet<usize> = corr.created_tets.iter().copied().collect();
        let sums = sector_sums(&t3, &tr.charge, &new);
        let (_, reps) = corr.h_replaced.unwrap();
        assert_eq!((sums[reps[0]], sums[reps[1]]), (0, 0));
        assert_eq!(sums[corr.edge_map[h01].unwrap().0], 2);
    }

    #[test]
    fn three_two_round_trip_and_failure() {
        let (t, h) = census::s3_pentachoron();
        let c = solve_charge(&t, &h).unwrap();
        let m = MoveSpec::TwoThree { face: 0 };
        let (t2, h2, corr) = apply_move(&t, &h, &m).unwrap();
        let c2 = charge_transit(&t, &c, &t2, &h2, &corr, &m).unwrap().charge;
        let central = corr.created_edges[0];
        let back = MoveSpec::ThreeTwo { edge: central };
        let (t3, h3, corr3) = apply_move(&t2, &h2, &back).unwrap();
        let c3 = charge_transit(&t2, &c2, &t3, &h3, &corr3, &back).unwrap();
        assert!(verify_charge(&t3, &h3, &c3.charge));
        assert!(c3.directions.is_empty());
        // a sector sum of 3 around the central edge cannot collapse to a face of sum 1
        let bumped = c2.add(&lattice_vector(&t2, central), 0);
        let mut broken = bumped.clone();
        let p = corr.created_tets[0];
        broken.values[p] = [broken.values[p][0] + 1, broken.values[p][1] - 1, broken.values[p][2]];
        let r = charge_transit(&t2, &broken, &t3, &h3, &corr3, &back);
        assert!(matches!(r, Err(ChargeError::ChargeNotTransitable(_))) || !verify_charge(&t2, &h2, &broken));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(250))]
        #[test]
        fn lattice_closure(lams in proptest::collection::vec(-3i64..=3, 16)) {
            for (_, (t, h)) in census::all() {
                let lat = charge_lattice_basis(&t, &h).unwrap();
                let mut c = lat.particular.clone();
                for (e, w) in lat.basis.iter().enumerate() {
                    c = c.add(w, lams[e % lams.len()]);
                }
                prop_assert!(verify_charge(&t, &h, &c));
                prop_assert!(lat.contains(&c));
                prop_assert_eq!(loop_parities(&t, &c), loop_parities(&t, &lat.particular));
            }
        }
    }
}
