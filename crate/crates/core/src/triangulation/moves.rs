//! Elementary moves: 2→3, 3→2, 0→2, 2→0 and the bubble move.
//!
//! 2↔3 moves rebuild a region: old region tetrahedra are described by abstract
//! points, new tetrahedra are point tuples, and boundary gluings are recovered
//! by matching point triples. 0↔2 and bubble moves rewire face slots directly.

use super::{Gluing, Triangulation, TriangulationError};
use crate::perm::{self, Perm4, EDGE_VERTS};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MoveSpec {
    TwoThree { face: usize },
    ThreeTwo { edge: usize },
    /// Insert a pillow along `edge` between the faces at walk positions `faces.0` and `faces.1`.
    ZeroTwo { edge: usize, faces: (usize, usize) },
    TwoZero { edge: usize },
    Bubble { face: usize, h_edge: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MoveCorrespondence {
    pub tet_map: Vec<Option<usize>>,
    /// Old edge class -> (new class, same direction).
    pub edge_map: Vec<Option<(usize, bool)>>,
    pub face_map: Vec<Option<usize>>,
    pub vertex_map: Vec<Option<usize>>,
    pub created_tets: Vec<usize>,
    pub created_edges: Vec<usize>,
    pub created_faces: Vec<usize>,
    pub created_vertices: Vec<usize>,
    pub destroyed_tets: Vec<usize>,
    pub destroyed_edges: Vec<usize>,
    pub destroyed_faces: Vec<usize>,
    /// Bubble move: the replaced H-edge and its two replacements.
    pub h_replaced: Option<(usize, [usize; 2])>,
}

/// One step of the walk around an edge: tetrahedron and labels `[a, b, x, y]`,
/// where `a -> b` is the edge and the walk exits through the face opposite `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct WalkStep {
    pub tet: usize,
    pub labels: Perm4,
}

/// Cyclic sequence of tetrahedra around edge class `e`.
pub(crate) fn walk_around(tri: &Triangulation, e: usize) -> Vec<WalkStep> {
    let (t0, i0) = tri.edge_class(e).germs[0];
    let (a, b) = EDGE_VERTS[i0];
    let (a, b) = if tri.edge_agrees(t0, i0) { (a, b) } else { (b, a) };
    let rest: Vec<u8> = (0..4).filter(|&v| v != a && v != b).collect();
    let mut cur = WalkStep { tet: t0, labels: [a, b, rest[0], rest[1]] };
    let start = cur;
    let mut out = Vec::new();
    loop {
        out.push(cur);
        let [a, b, x, y] = cur.labels;
        let g = tri.gluing(cur.tet, x);
        let p = g.perm;
        cur = WalkStep { tet: g.tet, labels: [p[a as usize], p[b as usize], p[y as usize], p[x as usize]] };
        if cur == start || out.len() > 6 * tri.tet_count() {
            break;
        }
    }
    out
}

struct Rebuild {
    region: Vec<usize>,
    region_points: Vec<Perm4Points>,
    new_points: Vec<Perm4Points>,
}

type Perm4Points = [usize; 4];

fn sorted3(mut v: [usize; 3]) -> [usize; 3] {
    v.sort_unstable();
    v
}

fn face_points(p: &Perm4Points, f: u8) -> [usize; 3] {
    let fv = perm::face_verts(f);
    sorted3([p[fv[0] as usize], p[fv[1] as usize], p[fv[2] as usize]])
}

fn label_of(p: &Perm4Points, point: usize) -> Option<u8> {
    p.iter().position(|&q| q == point).map(|i| i as u8)
}

fn collapse_err(msg: &str) -> TriangulationError {
    TriangulationError::NotCollapsible(msg.into())
}

impl Rebuild {
    /// Returns the new gluing table, the old-to-new tetrahedron map and the index of the first new tetrahedron.
    fn run(&self, old: &Triangulation) -> Result<(Vec<[Gluing; 4]>, Vec<Option<usize>>, usize), TriangulationError> {
        let n_old = old.tet_count();
        let mut tet_map = vec![None; n_old];
        let mut next = 0;
        for t in 0..n_old {
            if !self.region.contains(&t) {
                tet_map[t] = Some(next);
                next += 1;
            }
        }
        let first_new = next;
        let total = first_new + self.new_points.len();
        let dummy = Gluing { tet: usize::MAX, face: 0, perm: perm::IDENTITY };
        let mut glue = vec![[dummy; 4]; total];
        for t in 0..n_old {
            if let Some(nt) = tet_map[t] {
                for f in 0..4u8 {
                    let g = old.gluing(t, f);
                    if let Some(nt2) = tet_map[g.tet] {
                        glue[nt][f as usize] = Gluing { tet: nt2, ..g };
                    }
                }
            }
        }
        let mut new_faces: HashMap<[usize; 3], Vec<(usize, u8)>> = HashMap::new();
        for (k, pts) in self.new_points.iter().enumerate() {
            for f in 0..4u8 {
                new_faces.entry(face_points(pts, f)).or_default().push((k, f));
            }
        }
        let mut old_faces: HashMap<[usize; 3], Vec<(usize, u8)>> = HashMap::new();
        for (r, pts) in self.region_points.iter().enumerate() {
            for f in 0..4u8 {
                old_faces.entry(face_points(pts, f)).or_default().push((r, f));
            }
        }
        for (k, pts) in self.new_points.iter().enumerate() {
            for f in 0..4u8 {
                let key = face_points(pts, f);
                let slots = &new_faces[&key];
                if slots.len() == 2 {
                    let (k2, f2) = if slots[0] == (k, f) { slots[1] } else { slots[0] };
                    let mut p = [0u8; 4];
                    for l in 0..4u8 {
                        p[l as usize] = if l == f { f2 } else { label_of(&self.new_points[k2], pts[l as usize]).unwrap() };
                    }
                    glue[first_new + k][f as usize] = Gluing { tet: first_new + k2, face: f2, perm: p };
                    continue;
                }
                if slots.len() != 1 {
                    return Err(collapse_err("ambiguous interior face"));
                }
                let olds = old_faces.get(&key).ok_or_else(|| collapse_err("boundary face without old slot"))?;
                let olds: Vec<_> = olds
                    .iter()
                    .filter(|&&(r, fo)| {
                        let g = old.gluing(self.region[r], fo);
                        match self.region.iter().position(|&t| t == g.tet) {
                            Some(r2) => face_points(&self.region_points[r2], g.face) != key,
                            None => true,
                        }
                    })
                    .copied()
                    .collect();
                if olds.len() != 1 {
                    return Err(collapse_err("boundary face does not match a unique old slot"));
                }
                let (r, fo) = olds[0];
                let g = old.gluing(self.region[r], fo);
                let to_old = |l: u8| label_of(&self.region_points[r], pts[l as usize]).unwrap();
                match self.region.iter().position(|&t| t == g.tet) {
                    None => {
                        let mut p = [0u8; 4];
                        for l in 0..4u8 {
                            p[l as usize] = if l == f { g.face } else { g.perm[to_old(l) as usize] };
                        }
                        let nt = tet_map[g.tet].unwrap();
                        glue[first_new + k][f as usize] = Gluing { tet: nt, face: g.face, perm: p };
                        glue[nt][g.face as usize] = Gluing { tet: first_new + k, face: f, perm: perm::inverse(&p) };
                    }
                    Some(r2) => {
                        let target_pts = face_points(&self.region_points[r2], g.face);
                        let cand = new_faces.get(&target_pts).ok_or_else(|| collapse_err("partner face vanished"))?;
                        if cand.len() != 1 {
                            return Err(collapse_err("partner face is interior"));
                        }
                        let (k2, f2) = cand[0];
                        let mut p = [0u8; 4];
                        for l in 0..4u8 {
                            p[l as usize] = if l == f {
                                f2
                            } else {
                                let ol = g.perm[to_old(l) as usize];
                                label_of(&self.new_points[k2], self.region_points[r2][ol as usize]).unwrap()
                            };
                        }
                        glue[first_new + k][f as usize] = Gluing { tet: first_new + k2, face: f2, perm: p };
                    }
                }
            }
        }
        if glue.iter().flatten().any(|g| g.tet == usize::MAX) {
            return Err(collapse_err("unfilled slot"));
        }
        Ok((glue, tet_map, first_new))
    }
}

/// Where the points of a rebuilt region went; used for the correspondence.
struct PointInfo<'a> {
    region: &'a [usize],
    region_points: &'a [Perm4Points],
    new_points: &'a [Perm4Points],
    first_new: usize,
}

impl PointInfo<'_> {
    fn region_index(&self, t: usize) -> Option<usize> {
        self.region.iter().position(|&r| r == t)
    }
    /// New tetrahedron and labels containing all given points.
    fn find(&self, pts: &[usize]) -> Option<(usize, Vec<u8>)> {
        for (k, np) in self.new_points.iter().enumerate() {
            let labels: Option<Vec<u8>> = pts.iter().map(|&p| label_of(np, p)).collect();
            if let Some(l) = labels {
                return Some((self.first_new + k, l));
            }
        }
        None
    }
}

fn correspondence(old: &Triangulation, new: &Triangulation, tet_map: Vec<Option<usize>>, info: Option<&PointInfo>) -> MoveCorrespondence {
    let locate = |t: usize, labels: &[u8]| -> Option<(usize, Vec<u8>)> {
        if let Some(nt) = tet_map[t] {
            return Some((nt, labels.to_vec()));
        }
        let info = info?;
        let r = info.region_index(t)?;
        let pts: Vec<usize> = labels.iter().map(|&l| info.region_points[r][l as usize]).collect();
        info.find(&pts)
    };
    let mut edge_map = vec![None; old.edge_count()];
    for (e, cls) in old.edge_classes().iter().enumerate() {
        for &(t, i) in &cls.germs {
            let (a, b) = EDGE_VERTS[i];
            let (u, v) = if old.edge_agrees(t, i) { (a, b) } else { (b, a) };
            if let Some((nt, l)) = locate(t, &[u, v]) {
                edge_map[e] = Some(new.edge_between(nt, l[0], l[1]));
                break;
            }
        }
    }
    let mut face_map = vec![None; old.face_count()];
    for f in 0..old.face_count() {
        for (t, fl) in old.face_sides(f) {
            let fv = perm::face_verts(fl);
            if let Some((nt, l)) = locate(t, &fv) {
                let nf = 6 - l.iter().map(|&x| x as usize).sum::<usize>();
                face_map[f] = Some(new.face(nt, nf as u8));
                break;
            }
        }
    }
    let mut vertex_map = vec![None; old.vertex_count()];
    for t in 0..old.tet_count() {
        for v in 0..4u8 {
            let ov = old.vertex(t, v);
            if vertex_map[ov].is_none() {
                if let Some((nt, l)) = locate(t, &[v]) {
                    vertex_map[ov] = Some(new.vertex(nt, l[0]));
                }
            }
        }
    }
    let image = |m: &[Option<usize>], n: usize| -> Vec<usize> {
        let hit: BTreeSet<usize> = m.iter().flatten().copied().collect();
        (0..n).filter(|x| !hit.contains(x)).collect()
    };
    let edge_img: Vec<Option<usize>> = edge_map.iter().map(|x| x.map(|(e, _)| e)).collect();
    MoveCorrespondence {
        created_tets: image(&tet_map, new.tet_count()),
        created_edges: image(&edge_img, new.edge_count()),
        created_faces: image(&face_map, new.face_count()),
        created_vertices: image(&vertex_map, new.vertex_count()),
        destroyed_tets: (0..old.tet_count()).filter(|&t| tet_map[t].is_none()).collect(),
        destroyed_edges: (0..old.edge_count()).filter(|&e| edge_map[e].is_none()).collect(),
        destroyed_faces: (0..old.face_count()).filter(|&f| face_map[f].is_none()).collect(),
        tet_map,
        edge_map,
        face_map,
        vertex_map,
        h_replaced: None,
    }
}

fn set_pair(glue: &mut [[Gluing; 4]], t: usize, f: u8, t2: usize, p: Perm4) {
    let f2 = p[f as usize];
    glue[t][f as usize] = Gluing { tet: t2, face: f2, perm: p };
    glue[t2][f2 as usize] = Gluing { tet: t, face: f, perm: perm::inverse(&p) };
}

/// Applies a move and maps the Hamiltonian subcomplex across it.
pub fn apply_move(
    tri: &Triangulation,
    h: &BTreeSet<usize>,
    m: &MoveSpec,
) -> Result<(Triangulation, BTreeSet<usize>, MoveCorrespondence), TriangulationError> {
    let (new, corr) = match *m {
        MoveSpec::TwoThree { face } => two_three(tri, face)?,
        MoveSpec::ThreeTwo { edge } => three_two(tri, edge)?,
        MoveSpec::ZeroTwo { edge, faces } => zero_two(tri, edge, faces)?,
        MoveSpec::TwoZero { edge } => two_zero(tri, edge)?,
        MoveSpec::Bubble { face, h_edge } => bubble(tri, h, face, h_edge)?,
    };
    let mut h2 = BTreeSet::new();
    for &e in h {
        if let Some((_, reps)) = corr.h_replaced.filter(|(old, _)| *old == e) {
            h2.extend(reps);
            continue;
        }
        match corr.edge_map[e] {
            Some((ne, _)) => {
                if !h2.insert(ne) {
                    return Err(TriangulationError::InvalidLocation("move merges two H-edges".into()));
                }
            }
            None => return Err(TriangulationError::InvalidLocation("move destroys an H-edge".into())),
        }
    }
    if !new.is_distinguished(&h2)? {
        return Err(TriangulationError::InvalidLocation("H is not Hamiltonian after the move".into()));
    }
    Ok((new, h2, corr))
}

fn two_three(tri: &Triangulation, face: usize) -> Result<(Triangulation, MoveCorrespondence), TriangulationError> {
    if face >= tri.face_count() {
        return Err(TriangulationError::InvalidLocation(format!("no face {face}")));
    }
    let [(t0, f0), (t1, _)] = tri.face_sides(face);
    if t0 == t1 {
        return Err(TriangulationError::InvalidLocation("face is glued to its own tetrahedron".into()));
    }
    let g = tri.gluing(t0, f0);
    let (a, b) = (3usize, 4usize);
    let mut p0 = [0usize; 4];
    let mut p1 = [0usize; 4];
    for (k, &l) in perm::face_verts(f0).iter().enumerate() {
        p0[l as usize] = k;
        p1[g.perm[l as usize] as usize] = k;
    }
    p0[f0 as usize] = a;
    p1[g.face as usize] = b;
    let new_points = vec![[a, b, 1, 2], [a, b, 0, 2], [a, b, 0, 1]];
    let rb = Rebuild { region: vec![t0, t1], region_points: vec![p0, p1], new_points };
    finish_rebuild(tri, rb)
}

fn finish_rebuild(tri: &Triangulation, rb: Rebuild) -> Result<(Triangulation, MoveCorrespondence), TriangulationError> {
    let (glue, tet_map, first_new) = rb.run(tri)?;
    let new = Triangulation::from_complete(glue).map_err(|e| TriangulationError::NotCollapsible(e.to_string()))?;
    let info = PointInfo { region: &rb.region, region_points: &rb.region_points, new_points: &rb.new_points, first_new };
    let corr = correspondence(tri, &new, tet_map, Some(&info));
    Ok((new, corr))
}

fn three_two(tri: &Triangulation, edge: usize) -> Result<(Triangulation, MoveCorrespondence), TriangulationError> {
    if edge >= tri.edge_count() {
        return Err(TriangulationError::InvalidLocation(format!("no edge {edge}")));
    }
    if tri.edge_degree(edge) != 3 {
        return Err(TriangulationError::InvalidLocation(format!("edge {edge} has degree {}", tri.edge_degree(edge))));
    }
    let walk = walk_around(tri, edge);
    let tets: BTreeSet<usize> = walk.iter().map(|s| s.tet).collect();
    if walk.len() != 3 || tets.len() != 3 {
        return Err(collapse_err("edge is not surrounded by three distinct tetrahedra"));
    }
    let mut region_points = Vec::new();
    for (k, s) in walk.iter().enumerate() {
        let [a, b, x, y] = s.labels;
        let mut p = [0usize; 4];
        p[a as usize] = 0;
        p[b as usize] = 1;
        p[x as usize] = 2 + k;
        p[y as usize] = 2 + (k + 1) % 3;
        region_points.push(p);
    }
    let rb = Rebuild {
        region: walk.iter().map(|s| s.tet).collect(),
        region_points,
        new_points: vec![[0, 2, 3, 4], [1, 2, 3, 4]],
    };
    finish_rebuild(tri, rb)
}

fn zero_two(tri: &Triangulation, edge: usize, faces: (usize, usize)) -> Result<(Triangulation, MoveCorrespondence), TriangulationError> {
    if edge >= tri.edge_count() {
        return Err(TriangulationError::InvalidLocation(format!("no edge {edge}")));
    }
    let walk = walk_around(tri, edge);
    let d = walk.len();
    let (j1, j2) = faces;
    if j1 >= d || j2 >= d || j1 == j2 {
        return Err(TriangulationError::InvalidLocation("face positions must be distinct and inside the walk".into()));
    }
    let face_at = |j: usize| {
        let s = walk[j];
        tri.face(s.tet, s.labels[3])
    };
    if face_at(j1) == face_at(j2) {
        return Err(TriangulationError::InvalidLocation("the two faces are the same face class".into()));
    }
    let prev = |j: usize| walk[(j + d - 1) % d];
    let n = tri.tet_count();
    let (pt, qt) = (n, n + 1);
    let mut glue: Vec<[Gluing; 4]> = tri.gluings().to_vec();
    let dummy = glue[0][0];
    glue.push([dummy; 4]);
    glue.push([dummy; 4]);
    // pillow: labels 0=A, 1=B, 2=E_j1, 3=E_j2
    set_pair(&mut glue, pt, 0, qt, perm::IDENTITY);
    set_pair(&mut glue, pt, 1, qt, perm::IDENTITY);
    let s1p = walk[j1];
    let s1m = prev(j1);
    let s2p = prev(j2);
    let s2m = walk[j2];
    let [a, b, x, y] = s1p.labels;
    set_pair(&mut glue, pt, 3, s1p.tet, [a, b, x, y]);
    let [a, b, x, y] = s2p.labels;
    set_pair(&mut glue, pt, 2, s2p.tet, [a, b, x, y]);
    let [a, b, x, y] = s1m.labels;
    set_pair(&mut glue, qt, 3, s1m.tet, [a, b, y, x]);
    let [a, b, x, y] = s2m.labels;
    set_pair(&mut glue, qt, 2, s2m.tet, [a, b, y, x]);
    let new = Triangulation::from_complete(glue).map_err(|e| TriangulationError::InvalidLocation(e.to_string()))?;
    let tet_map = (0..n).map(Some).collect();
    let corr = correspondence(tri, &new, tet_map, None);
    Ok((new, corr))
}

fn two_zero(tri: &Triangulation, edge: usize) -> Result<(Triangulation, MoveCorrespondence), TriangulationError> {
    if edge >= tri.edge_count() {
        return Err(TriangulationError::InvalidLocation(format!("no edge {edge}")));
    }
    if tri.edge_degree(edge) != 2 {
        return Err(TriangulationError::InvalidLocation(format!("edge {edge} has degree {}", tri.edge_degree(edge))));
    }
    let walk = walk_around(tri, edge);
    let (p, q) = (walk[0], walk[1]);
    if walk.len() != 2 || p.tet == q.tet {
        return Err(collapse_err("degree-2 edge does not bound a pillow of two distinct tetrahedra"));
    }
    // both inner faces must glue p to q by the same relabelling
    let gx = tri.gluing(p.tet, p.labels[2]);
    let gy = tri.gluing(p.tet, p.labels[3]);
    if gx.tet != q.tet || gy.tet != q.tet || gx.perm != gy.perm {
        return Err(collapse_err("pillow faces are twisted"));
    }
    let rho = gx.perm;
    // outer faces of p are opposite a and b
    let mut glue: Vec<[Gluing; 4]> = tri.gluings().to_vec();
    let mut outer = Vec::new();
    for &l in &[p.labels[0], p.labels[1]] {
        let gp = tri.gluing(p.tet, l);
        let gq = tri.gluing(q.tet, rho[l as usize]);
        if [gp.tet, gq.tet].iter().any(|&t| t == p.tet || t == q.tet) {
            return Err(collapse_err("outer faces are glued to the pillow itself"));
        }
        // label of partner of p -> p -> q -> partner of q
        let m = perm::compose(&gq.perm, &perm::compose(&rho, &perm::inverse(&gp.perm)));
        outer.push((gp.tet, gp.face, gq.tet, m));
    }
    for (t, f, t2, m) in outer {
        set_pair(&mut glue, t, f, t2, m);
    }
    // drop p and q, renumber
    let n = tri.tet_count();
    let mut tet_map = vec![None; n];
    let mut next = 0;
    for t in 0..n {
        if t != p.tet && t != q.tet {
            tet_map[t] = Some(next);
            next += 1;
        }
    }
    let mut out = Vec::with_capacity(next);
    for t in 0..n {
        if tet_map[t].is_some() {
            let mut row = glue[t];
            for g in row.iter_mut() {
                g.tet = tet_map[g.tet].ok_or_else(|| collapse_err("dangling gluing"))?;
            }
            out.push(row);
        }
    }
    let new = Triangulation::from_complete(out).map_err(|e| TriangulationError::NotCollapsible(e.to_string()))?;
    let corr = correspondence(tri, &new, tet_map, None);
    Ok((new, corr))
}

fn bubble(tri: &Triangulation, h: &BTreeSet<usize>, face: usize, h_edge: usize) -> Result<(Triangulation, MoveCorrespondence), TriangulationError> {
    if face >= tri.face_count() {
        return Err(TriangulationError::InvalidLocation(format!("no face {face}")));
    }
    let [(t, f), _] = tri.face_sides(face);
    let g = tri.gluing(t, f);
    let fv = perm::face_verts(f);
    let on_face = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).find(|&(i, j)| tri.edge_between(t, fv[i], fv[j]).0 == h_edge);
    let (hi, hj) = match on_face {
        Some(ij) if h.contains(&h_edge) => ij,
        _ => return Err(TriangulationError::BubbleNeedsHEdge),
    };
    let n = tri.tet_count();
    let (pt, qt) = (n, n + 1);
    let mut glue: Vec<[Gluing; 4]> = tri.gluings().to_vec();
    let dummy = glue[0][0];
    glue.push([dummy; 4]);
    glue.push([dummy; 4]);
    for l in 0..3u8 {
        set_pair(&mut glue, pt, l, qt, perm::IDENTITY);
    }
    let to_t = [fv[0], fv[1], fv[2], f];
    let to_t2 = [g.perm[fv[0] as usize], g.perm[fv[1] as usize], g.perm[fv[2] as usize], g.face];
    set_pair(&mut glue, pt, 3, t, to_t);
    set_pair(&mut glue, qt, 3, g.tet, to_t2);
    let new = Triangulation::from_complete(glue).map_err(|e| TriangulationError::InvalidLocation(e.to_string()))?;
    let tet_map = (0..n).map(Some).collect();
    let mut corr = correspondence(tri, &new, tet_map, None);
    let w_x = new.edge_between(pt, hi as u8, 3).0;
    let w_y = new.edge_between(pt, hj as u8, 3).0;
    corr.h_replaced = Some((h_edge, [w_x, w_y]));
    Ok((new, corr))
}
