//! Edge orientations, branchings and their transits.
//!
//! A branching orients every edge class so that each tetrahedron gets one
//! source and one sink. Ranking the labels of a tetrahedron by in-degree gives
//! its frame `b_Δ`; the frame's orientation against the manifold orientation
//! is the sign of the tetrahedron.

use crate::perm::{self, Perm4};
use crate::triangulation::{apply_move, MoveCorrespondence, MoveSpec, Triangulation, TriangulationError};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashSet, VecDeque};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BranchingError {
    #[error("triangulation is not quasi-regular")]
    NotQuasiRegular,
    #[error("vertex order must be a permutation of the vertex classes")]
    BadOrder,
    #[error("orientation system is not a branching")]
    NotBranching,
    #[error("negative move is not branchable: {0}")]
    NegativeMoveNotBranchable(String),
    #[error("search budget {0} exceeded")]
    SearchBudgetExceeded(usize),
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
}

/// One direction per edge class; `true` means the class's canonical direction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrientationSystem {
    pub forward: Vec<bool>,
}

impl OrientationSystem {
    /// Whether the edge from label `a` to label `b` of `tet` points that way.
    pub fn points(&self, tri: &Triangulation, tet: usize, a: u8, b: u8) -> bool {
        let (e, along) = tri.edge_between(tet, a, b);
        self.forward[e] == along
    }

    /// Orient each edge from its lower to its higher vertex under `rank`.
    pub fn from_vertex_rank(tri: &Triangulation, rank: &[usize]) -> Self {
        let forward = tri.edge_classes().iter().map(|c| rank[c.ends.0] < rank[c.ends.1]).collect();
        OrientationSystem { forward }
    }

    fn in_degrees(&self, tri: &Triangulation, tet: usize) -> [u8; 4] {
        let mut deg = [0u8; 4];
        for &(a, b) in &perm::EDGE_VERTS {
            if self.points(tri, tet, a, b) {
                deg[b as usize] += 1;
            } else {
                deg[a as usize] += 1;
            }
        }
        deg
    }
}

/// A face is fine when its boundary is not a directed cycle.
pub fn is_branching(tri: &Triangulation, g: &OrientationSystem) -> bool {
    (0..tri.tet_count()).all(|t| {
        (0..4u8).all(|f| {
            let [a, b, c] = perm::face_verts(f);
            let ab = g.points(tri, t, a, b);
            let bc = g.points(tri, t, b, c);
            let ca = g.points(tri, t, c, a);
            !(ab == bc && bc == ca)
        })
    })
}

/// Source/sink formulation, used as an oracle for [`is_branching`].
pub fn has_source_and_sink(tri: &Triangulation, g: &OrientationSystem) -> bool {
    (0..tri.tet_count()).all(|t| {
        let mut d = g.in_degrees(tri, t);
        d.sort_unstable();
        d == [0, 1, 2, 3]
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branching {
    pub system: OrientationSystem,
    /// `frames[t][k]` is the label of the b-vertex with `k` incoming edges.
    frames: Vec<Perm4>,
    signs: Vec<i8>,
}

impl Branching {
    pub fn new(tri: &Triangulation, g: OrientationSystem) -> Result<Self, BranchingError> {
        if !is_branching(tri, &g) {
            return Err(BranchingError::NotBranching);
        }
        let mut frames = Vec::with_capacity(tri.tet_count());
        let mut signs = Vec::with_capacity(tri.tet_count());
        for t in 0..tri.tet_count() {
            let d = g.in_degrees(tri, t);
            let mut frame = [0u8; 4];
            for l in 0..4 {
                frame[d[l] as usize] = l as u8;
            }
            signs.push(tri.orientation(t) * perm::sign(&frame));
            frames.push(frame);
        }
        Ok(Branching { system: g, frames, signs })
    }

    /// `(b_Δ, sign)` of tetrahedron `tet`.
    pub fn frame(&self, tet: usize) -> (Perm4, i8) {
        (self.frames[tet], self.signs[tet])
    }

    pub fn sign(&self, tet: usize) -> i8 {
        self.signs[tet]
    }

    pub fn is_forward(&self, e: usize) -> bool {
        self.system.forward[e]
    }
}

pub fn total_order_branching(tri: &Triangulation, order: &[usize]) -> Result<Branching, BranchingError> {
    if !tri.is_quasi_regular() {
        return Err(BranchingError::NotQuasiRegular);
    }
    let n = tri.vertex_count();
    if order.len() != n || order.iter().copied().collect::<BTreeSet<_>>() != (0..n).collect() {
        return Err(BranchingError::BadOrder);
    }
    let mut rank = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i;
    }
    Branching::new(tri, OrientationSystem::from_vertex_rank(tri, &rank))
}

/// Oriented boundary of face `f` of `tet` as a cyclic label triple, by majority of edge directions.
pub fn face_orientation_prevailing(tri: &Triangulation, b: &Branching, tet: usize, f: u8) -> [u8; 3] {
    let [p, q, r] = perm::face_verts(f);
    let agree = [(p, q), (q, r), (r, p)].iter().filter(|&&(x, y)| b.system.points(tri, tet, x, y)).count();
    if agree >= 2 {
        [p, q, r]
    } else {
        [p, r, q]
    }
}

/// Same orientation through the 0-cochain of b-ranks: the cyclic order whose edge coboundary is +1.
pub fn face_orientation_cochain(b: &Branching, tet: usize, f: u8) -> [u8; 3] {
    let (frame, _) = b.frame(tet);
    let rank = |l: u8| frame.iter().position(|&x| x == l).unwrap() as i32;
    let [p, q, r] = perm::face_verts(f);
    let step = |x: u8, y: u8| if rank(y) > rank(x) { 1 } else { -1 };
    if step(p, q) + step(q, r) + step(r, p) == 1 {
        [p, q, r]
    } else {
        [p, r, q]
    }
}

/// All branchings on the moved triangulation that agree with `b` on surviving edges.
pub fn branch_transit(
    new: &Triangulation,
    b: &Branching,
    corr: &MoveCorrespondence,
    m: &MoveSpec,
) -> Result<Vec<Branching>, BranchingError> {
    let mut fixed: Vec<Option<bool>> = vec![None; new.edge_count()];
    for (old, img) in corr.edge_map.iter().enumerate() {
        if let Some((ne, same)) = *img {
            let dir = b.system.forward[old] == same;
            match fixed[ne] {
                Some(d) if d != dir => {
                    return Err(BranchingError::NegativeMoveNotBranchable("merged edges carry opposite orientations".into()))
                }
                _ => fixed[ne] = Some(dir),
            }
        }
    }
    let free: Vec<usize> = (0..new.edge_count()).filter(|&e| fixed[e].is_none()).collect();
    let negative = matches!(m, MoveSpec::ThreeTwo { .. } | MoveSpec::TwoZero { .. });
    let mut out = Vec::new();
    for mask in 0..(1u64 << free.len()) {
        let mut forward: Vec<bool> = fixed.iter().map(|d| d.unwrap_or(true)).collect();
        for (k, &e) in free.iter().enumerate() {
            forward[e] = mask >> k & 1 == 1;
        }
        if let Ok(nb) = Branching::new(new, OrientationSystem { forward }) {
            out.push(nb);
        }
    }
    if negative && out.is_empty() {
        return Err(BranchingError::NegativeMoveNotBranchable("unique candidate has a cyclic face".into()));
    }
    Ok(out)
}

/// Breadth-first search over positive 2→3 transits until `g` becomes a branching.
pub fn search_branching(
    tri: &Triangulation,
    h: &BTreeSet<usize>,
    g: &OrientationSystem,
    budget: usize,
) -> Result<(Vec<MoveSpec>, Triangulation, BTreeSet<usize>, Branching), BranchingError> {
    if let Ok(b) = Branching::new(tri, g.clone()) {
        return Ok((Vec::new(), tri.clone(), h.clone(), b));
    }
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    queue.push_back((Vec::new(), tri.clone(), h.clone(), g.clone()));
    while let Some((moves, t, hh, gg)) = queue.pop_front() {
        if moves.len() >= budget {
            continue;
        }
        for face in 0..t.face_count() {
            let m = MoveSpec::TwoThree { face };
            let Ok((t2, h2, corr)) = apply_move(&t, &hh, &m) else { continue };
            let mut forward = vec![true; t2.edge_count()];
            let mut free = Vec::new();
            for e in 0..t2.edge_count() {
                match corr.edge_map.iter().position(|x| x.map(|(ne, _)| ne) == Some(e)) {
                    Some(old) => forward[e] = gg.forward[old] == corr.edge_map[old].unwrap().1,
                    None => free.push(e),
                }
            }
            for mask in 0..(1u64 << free.len()) {
                for (k, &e) in free.iter().enumerate() {
                    forward[e] = mask >> k & 1 == 1;
                }
                let g2 = OrientationSystem { forward: forward.clone() };
                let mut mv = moves.clone();
                mv.push(m);
                if let Ok(b2) = Branching::new(&t2, g2.clone()) {
                    return Ok((mv, t2, h2, b2));
                }
                let key = (g2.forward.clone(), t2.gluings().to_vec());
                if seen.insert(key) {
                    queue.push_back((mv, t2.clone(), h2.clone(), g2));
                }
            }
        }
    }
    Err(BranchingError::SearchBudgetExceeded(budget))
}
