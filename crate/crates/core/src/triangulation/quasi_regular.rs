//! Greedy removal of loop edges with a checked postcondition.
//!
//! Loops are thinned by 2→3 moves across faces that contain them and removed
//! by 3→2 moves once their degree is three. When every neighbouring vertex is
//! the loop's own endpoint, a bubble move supplies a fresh vertex which is
//! spread towards the loop by further 2→3 moves.

use super::{apply_move, MoveCorrespondence, MoveSpec, Triangulation, TriangulationError};
use crate::perm;
use std::collections::{BTreeSet, VecDeque};

type State = (Triangulation, BTreeSet<usize>);

fn loop_score(t: &Triangulation) -> (usize, usize) {
    let loops = t.loop_edges();
    (loops.len(), loops.iter().map(|&e| t.edge_degree(e)).sum())
}

/// Tetrahedra containing a loop edge.
fn loop_tets(t: &Triangulation) -> BTreeSet<usize> {
    t.loop_edges().iter().flat_map(|&e| t.edge_class(e).germs.iter().map(|g| g.0)).collect()
}

/// Dual-graph distance from `from` to the nearest tetrahedron in `targets`.
fn dual_distance(t: &Triangulation, from: &BTreeSet<usize>, targets: &BTreeSet<usize>) -> usize {
    let mut dist = vec![usize::MAX; t.tet_count()];
    let mut q = VecDeque::new();
    for &s in from {
        dist[s] = 0;
        q.push_back(s);
    }
    while let Some(x) = q.pop_front() {
        if targets.contains(&x) {
            return dist[x];
        }
        for g in t.gluings()[x] {
            if dist[g.tet] == usize::MAX {
                dist[g.tet] = dist[x] + 1;
                q.push_back(g.tet);
            }
        }
    }
    usize::MAX
}

fn try_move(s: &State, m: MoveSpec) -> Option<State> {
    apply_move(&s.0, &s.1, &m).ok().map(|(t, h, _)| (t, h))
}

type Step = (MoveSpec, State);

/// Moves that strictly lower the loop score.
fn improving(s: &State) -> Option<(MoveSpec, State)> {
    let t = &s.0;
    let base = loop_score(t);
    let mut best: Option<((usize, usize), MoveSpec, State)> = None;
    let consider = |m: MoveSpec, best: &mut Option<((usize, usize), MoveSpec, State)>| {
        if let Some(ns) = try_move(s, m) {
            let sc = loop_score(&ns.0);
            if sc < base && best.as_ref().map_or(true, |b| sc < b.0) {
                *best = Some((sc, m, ns));
            }
        }
    };
    for e in t.loop_edges() {
        if t.edge_degree(e) == 3 {
            consider(MoveSpec::ThreeTwo { edge: e }, &mut best);
        }
    }
    for f in 0..t.face_count() {
        let [(a, fa), (b, _)] = t.face_sides(f);
        if a == b {
            continue;
        }
        let fv = perm::face_verts(fa);
        let has_loop = (0..3).any(|i| (i + 1..3).any(|j| {
            let (e, _) = t.edge_between(a, fv[i], fv[j]);
            let c = t.edge_class(e);
            c.ends.0 == c.ends.1
        }));
        if has_loop {
            consider(MoveSpec::TwoThree { face: f }, &mut best);
        }
    }
    best.map(|(_, m, ns)| (m, ns))
}

/// Bubble on the face with an H-edge closest to a loop.
fn fresh_vertex(s: &State) -> Option<(MoveSpec, State)> {
    let t = &s.0;
    let targets = loop_tets(t);
    let mut cands = Vec::new();
    for f in 0..t.face_count() {
        let [(a, fa), _] = t.face_sides(f);
        let fv = perm::face_verts(fa);
        for i in 0..3 {
            for j in i + 1..3 {
                let (e, _) = t.edge_between(a, fv[i], fv[j]);
                if s.1.contains(&e) {
                    let d = dual_distance(t, &[a].into_iter().collect(), &targets);
                    cands.push((d, f, e));
                }
            }
        }
    }
    cands.sort_unstable();
    cands.into_iter().find_map(|(_, face, h_edge)| {
        let m = MoveSpec::Bubble { face, h_edge };
        try_move(s, m).map(|ns| (m, ns))
    })
}

/// Spread the newest vertex towards the loops.
fn spread(s: &State, w: usize) -> Option<(MoveSpec, State)> {
    let t = &s.0;
    let targets = loop_tets(t);
    let with_w: BTreeSet<usize> = (0..t.tet_count()).filter(|&x| (0..4).any(|v| t.vertex(x, v) == w)).collect();
    let d0 = dual_distance(t, &with_w, &targets);
    let mut best: Option<(usize, MoveSpec, State)> = None;
    for f in 0..t.face_count() {
        let [(a, _), (b, _)] = t.face_sides(f);
        if a == b || with_w.contains(&a) == with_w.contains(&b) {
            continue;
        }
        let m = MoveSpec::TwoThree { face: f };
        if let Some(ns) = try_move(s, m) {
            if loop_score(&ns.0).0 > loop_score(t).0 {
                continue;
            }
            let nw: BTreeSet<usize> = (0..ns.0.tet_count()).filter(|&x| (0..4).any(|v| ns.0.vertex(x, v) == w)).collect();
            let d = dual_distance(&ns.0, &nw, &loop_tets(&ns.0));
            if d < d0 && best.as_ref().map_or(true, |b| d < b.0) {
                best = Some((d, m, ns));
            }
        }
    }
    best.map(|(_, m, ns)| (m, ns))
}

/// Returns a quasi-regular distinguished triangulation and the moves used.
pub fn make_quasi_regular(
    tri: &Triangulation,
    h: &BTreeSet<usize>,
    budget: usize,
) -> Result<(Triangulation, BTreeSet<usize>, Vec<MoveSpec>), TriangulationError> {
    let mut s: State = (tri.clone(), h.clone());
    let mut moves = Vec::new();
    let mut fresh: Option<usize> = None;
    while !s.0.is_quasi_regular() {
        if moves.len() >= budget {
            return Err(TriangulationError::SearchBudgetExceeded(budget));
        }
        let step: Option<Step> = improving(&s).or_else(|| fresh.and_then(|w| spread(&s, w))).or_else(|| fresh_vertex(&s));
        let Some((m, _)) = step else {
            return Err(TriangulationError::SearchBudgetExceeded(budget));
        };
        let (t2, h2, corr): (Triangulation, BTreeSet<usize>, MoveCorrespondence) = apply_move(&s.0, &s.1, &m)?;
        fresh = match m {
            MoveSpec::Bubble { .. } => corr.created_vertices.first().copied(),
            _ => fresh.and_then(|w| corr.vertex_map[w]),
        };
        moves.push(m);
        s = (t2, h2);
    }
    Ok((s.0, s.1, moves))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census;

    #[test]
    fn triple_loses_its_loop() {
        let (t, h) = census::s3_triple();
        assert_eq!(t.loop_edges().len(), 1);
        let (t2, h2, moves) = make_quasi_regular(&t, &h, 40).unwrap();
        assert!(t2.is_quasi_regular());
        assert!(t2.is_distinguished(&h2).unwrap());
        assert!(!moves.is_empty());
        assert!(moves.iter().all(|m| !matches!(m, MoveSpec::ZeroTwo { .. } | MoveSpec::TwoZero { .. })));
    }

    #[test]
    fn budget_is_enforced() {
        let (t, h) = census::s3_triple();
        assert_eq!(make_quasi_regular(&t, &h, 0).unwrap_err(), TriangulationError::SearchBudgetExceeded(0));
        let (d, hd) = census::s3_double();
        assert_eq!(make_quasi_regular(&d, &hd, 0).unwrap().2.len(), 0);
    }
}
