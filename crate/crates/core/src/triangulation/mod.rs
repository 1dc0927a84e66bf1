//! Singular triangulations of closed oriented 3-manifolds.
//!
//! A triangulation is a list of abstract tetrahedra with face pairings.
//! Self-adjacencies and multiple adjacencies are allowed. Edge, vertex and
//! face classes are derived by union-find and numbered by their smallest
//! `(tetrahedron, local index)` representative.

mod iso;
mod moves;
mod quasi_regular;

pub use iso::{canonical_code, is_isomorphic};
pub use moves::{apply_move, MoveCorrespondence, MoveSpec};
pub use quasi_regular::make_quasi_regular;

use crate::perm::{self, Perm4, EDGE_VERTS};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TriangulationError {
    #[error("face {face} of tetrahedron {tet} is not glued")]
    UnmatchedFace { tet: usize, face: u8 },
    #[error("malformed gluing at tetrahedron {tet} face {face}: {reason}")]
    MalformedGluing { tet: usize, face: u8, reason: String },
    #[error("gluings do not induce a consistent orientation (tetrahedron {tet})")]
    OrientationViolation { tet: usize },
    #[error("not a closed 3-manifold: {0}")]
    NotClosed(String),
    #[error("unknown edge class {0}")]
    UnknownEdge(usize),
    #[error("invalid move location: {0}")]
    InvalidLocation(String),
    #[error("configuration is not collapsible: {0}")]
    NotCollapsible(String),
    #[error("bubble move needs an H-edge on the boundary of the chosen face")]
    BubbleNeedsHEdge,
    #[error("search budget of {0} moves exceeded")]
    SearchBudgetExceeded(usize),
}

/// Target of a face pairing: face `face` of tetrahedron `tet`,
/// with `perm` sending local labels of the source to labels of the target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Gluing {
    pub tet: usize,
    pub face: u8,
    pub perm: Perm4,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeClass {
    /// Germs `(tet, local edge)`; the first is the canonical representative.
    pub germs: Vec<(usize, usize)>,
    /// Endpoints `(tail, head)` in the canonical direction.
    pub ends: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangulation {
    glue: Vec<[Gluing; 4]>,
    edge_of: Vec<[usize; 6]>,
    /// true when local direction (low label -> high label) agrees with the class direction.
    edge_dir: Vec<[bool; 6]>,
    vertex_of: Vec<[usize; 4]>,
    face_of: Vec<[usize; 4]>,
    edges: Vec<EdgeClass>,
    vertex_count: usize,
    faces: Vec<[(usize, u8); 2]>,
    orientation: Vec<i8>,
}

struct Uf {
    parent: Vec<usize>,
    /// parity relative to parent
    flip: Vec<bool>,
}

impl Uf {
    fn new(n: usize) -> Self {
        Uf { parent: (0..n).collect(), flip: vec![false; n] }
    }
    fn find(&mut self, x: usize) -> (usize, bool) {
        let p = self.parent[x];
        if p == x {
            return (x, false);
        }
        let (r, f) = self.find(p);
        self.parent[x] = r;
        self.flip[x] ^= f;
        (r, self.flip[x])
    }
    /// Returns false if the union contradicts the recorded parity.
    fn union(&mut self, a: usize, b: usize, flip: bool) -> bool {
        let (ra, fa) = self.find(a);
        let (rb, fb) = self.find(b);
        if ra == rb {
            return fa ^ fb == flip;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        self.flip[hi] = fa ^ fb ^ flip;
        true
    }
}

impl Triangulation {
    /// Builds and validates a triangulation from a complete gluing table.
    pub fn from_gluings(table: Vec<[Option<Gluing>; 4]>) -> Result<Self, TriangulationError> {
        let n = table.len();
        let mut glue = Vec::with_capacity(n);
        for (t, row) in table.iter().enumerate() {
            let mut out = [Gluing { tet: 0, face: 0, perm: perm::IDENTITY }; 4];
            for f in 0..4u8 {
                let g = row[f as usize].ok_or(TriangulationError::UnmatchedFace { tet: t, face: f })?;
                out[f as usize] = g;
            }
            glue.push(out);
        }
        Self::from_complete(glue)
    }

    pub fn from_complete(glue: Vec<[Gluing; 4]>) -> Result<Self, TriangulationError> {
        let n = glue.len();
        if n == 0 {
            return Err(TriangulationError::NotClosed("no tetrahedra".into()));
        }
        for t in 0..n {
            for f in 0..4u8 {
                let g = glue[t][f as usize];
                let bad = |reason: &str| TriangulationError::MalformedGluing { tet: t, face: f, reason: reason.into() };
                if g.tet >= n {
                    return Err(bad("target tetrahedron out of range"));
                }
                if g.face > 3 || !perm::is_perm(&g.perm) || g.perm[f as usize] != g.face {
                    return Err(bad("vertex bijection does not match faces"));
                }
                if g.tet == t && g.face == f {
                    return Err(bad("face glued to itself"));
                }
                let back = glue[g.tet][g.face as usize];
                if back.tet != t || back.face != f || back.perm != perm::inverse(&g.perm) {
                    return Err(bad("pairing is not an involution"));
                }
            }
        }
        let orientation = orient(&glue)?;

        // vertices
        let mut vu = Uf::new(4 * n);
        for t in 0..n {
            for f in 0..4u8 {
                let g = glue[t][f as usize];
                for v in perm::face_verts(f) {
                    vu.union(4 * t + v as usize, 4 * g.tet + g.perm[v as usize] as usize, false);
                }
            }
        }
        let mut vertex_of = vec![[0usize; 4]; n];
        let mut vroot = std::collections::HashMap::new();
        for t in 0..n {
            for v in 0..4 {
                let r = vu.find(4 * t + v).0;
                let next = vroot.len();
                vertex_of[t][v] = *vroot.entry(r).or_insert(next);
            }
        }
        let vertex_count = vroot.len();

        // edges
        let mut eu = Uf::new(6 * n);
        for t in 0..n {
            for f in 0..4u8 {
                let g = glue[t][f as usize];
                let fv = perm::face_verts(f);
                for i in 0..3 {
                    for j in i + 1..3 {
                        let (a, b) = (fv[i], fv[j]);
                        let (pa, pb) = (g.perm[a as usize], g.perm[b as usize]);
                        let flip = pa > pb;
                        if !eu.union(6 * t + perm::edge_index(a, b), 6 * g.tet + perm::edge_index(pa, pb), flip) {
                            return Err(TriangulationError::NotClosed("an edge is identified with itself reversed".into()));
                        }
                    }
                }
            }
        }
        let mut edge_of = vec![[0usize; 6]; n];
        let mut edge_dir = vec![[true; 6]; n];
        let mut edges: Vec<EdgeClass> = Vec::new();
        let mut eroot = std::collections::HashMap::new();
        for t in 0..n {
            for i in 0..6 {
                let (r, fl) = eu.find(6 * t + i);
                let id = match eroot.get(&r) {
                    Some(&(id, _)) => id,
                    None => {
                        let id = edges.len();
                        let (a, b) = EDGE_VERTS[i];
                        edges.push(EdgeClass {
                            germs: Vec::new(),
                            ends: (vertex_of[t][a as usize], vertex_of[t][b as usize]),
                        });
                        eroot.insert(r, (id, fl));
                        id
                    }
                };
                let ref_flip = eroot[&r].1;
                edge_of[t][i] = id;
                edge_dir[t][i] = fl == ref_flip;
                edges[id].germs.push((t, i));
            }
        }

        // faces
        let mut face_of = vec![[usize::MAX; 4]; n];
        let mut faces = Vec::new();
        for t in 0..n {
            for f in 0..4u8 {
                if face_of[t][f as usize] == usize::MAX {
                    let g = glue[t][f as usize];
                    let id = faces.len();
                    faces.push([(t, f), (g.tet, g.face)]);
                    face_of[t][f as usize] = id;
                    face_of[g.tet][g.face as usize] = id;
                }
            }
        }

        let tri = Triangulation { glue, edge_of, edge_dir, vertex_of, face_of, edges, vertex_count, faces, orientation };
        tri.check_closed()?;
        Ok(tri)
    }

    fn check_closed(&self) -> Result<(), TriangulationError> {
        let (r0, r1, r2, r3) = self.counts();
        if r2 != 2 * r3 {
            return Err(TriangulationError::NotClosed(format!("r2 = {r2} but r3 = {r3}")));
        }
        let chi = r0 as i64 - r1 as i64 + r2 as i64 - r3 as i64;
        if chi != 0 {
            return Err(TriangulationError::NotClosed(format!("euler characteristic {chi}")));
        }
        // vertex links must be spheres
        let mut corners = vec![0i64; r0];
        for t in 0..r3 {
            for v in 0..4 {
                corners[self.vertex_of[t][v]] += 1;
            }
        }
        let mut link_edges = vec![0i64; r0];
        for &[(t, f), _] in &self.faces {
            for v in perm::face_verts(f) {
                link_edges[self.vertex_of[t][v as usize]] += 1;
            }
        }
        let mut link_verts = vec![0i64; r0];
        for e in &self.edges {
            link_verts[e.ends.0] += 1;
            link_verts[e.ends.1] += 1;
        }
        for v in 0..r0 {
            let chi = link_verts[v] - link_edges[v] + corners[v];
            if chi != 2 {
                return Err(TriangulationError::NotClosed(format!("link of vertex {v} has euler characteristic {chi}")));
            }
        }
        let mut seen = vec![false; r3];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(t) = stack.pop() {
            for g in &self.glue[t] {
                if !seen[g.tet] {
                    seen[g.tet] = true;
                    stack.push(g.tet);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(TriangulationError::NotClosed("disconnected".into()));
        }
        Ok(())
    }

    /// `(r0, r1, r2, r3)`: vertices, edges, faces, tetrahedra.
    pub fn counts(&self) -> (usize, usize, usize, usize) {
        (self.vertex_count, self.edges.len(), self.faces.len(), self.glue.len())
    }

    pub fn tet_count(&self) -> usize {
        self.glue.len()
    }
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }
    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn gluing(&self, tet: usize, face: u8) -> Gluing {
        self.glue[tet][face as usize]
    }
    pub fn gluings(&self) -> &[[Gluing; 4]] {
        &self.glue
    }

    /// Edge class of local edge `i` of `tet`.
    pub fn edge(&self, tet: usize, i: usize) -> usize {
        self.edge_of[tet][i]
    }
    /// Edge class through local labels `a`, `b`, and whether `a -> b` is the class direction.
    pub fn edge_between(&self, tet: usize, a: u8, b: u8) -> (usize, bool) {
        let i = perm::edge_index(a, b);
        let along = self.edge_dir[tet][i] == (a < b);
        (self.edge_of[tet][i], along)
    }
    pub fn edge_agrees(&self, tet: usize, i: usize) -> bool {
        self.edge_dir[tet][i]
    }
    pub fn edge_class(&self, e: usize) -> &EdgeClass {
        &self.edges[e]
    }
    pub fn edge_classes(&self) -> &[EdgeClass] {
        &self.edges
    }
    pub fn vertex(&self, tet: usize, v: u8) -> usize {
        self.vertex_of[tet][v as usize]
    }
    pub fn face(&self, tet: usize, f: u8) -> usize {
        self.face_of[tet][f as usize]
    }
    /// The two sides of face class `f`.
    pub fn face_sides(&self, f: usize) -> [(usize, u8); 2] {
        self.faces[f]
    }
    /// +1 or -1: whether the label order `0123` is positively oriented.
    pub fn orientation(&self, tet: usize) -> i8 {
        self.orientation[tet]
    }

    pub fn edge_degree(&self, e: usize) -> usize {
        self.edges[e].germs.len()
    }

    pub fn is_quasi_regular(&self) -> bool {
        self.edges.iter().all(|e| e.ends.0 != e.ends.1)
    }

    /// Checks that `h` is a Hamiltonian subcomplex: two H-germs at each vertex,
    /// every vertex covered, union of cycles.
    pub fn is_distinguished(&self, h: &BTreeSet<usize>) -> Result<bool, TriangulationError> {
        for &e in h {
            if e >= self.edges.len() {
                return Err(TriangulationError::UnknownEdge(e));
            }
        }
        let mut germs = vec![0usize; self.vertex_count];
        for &e in h {
            let (a, b) = self.edges[e].ends;
            germs[a] += 1;
            germs[b] += 1;
        }
        // degree 2 everywhere means a disjoint union of cycles
        Ok(germs.iter().all(|&g| g == 2))
    }

    /// Edge classes containing vertex `v` at both ends.
    pub fn loop_edges(&self) -> Vec<usize> {
        (0..self.edges.len()).filter(|&e| self.edges[e].ends.0 == self.edges[e].ends.1).collect()
    }

    /// Local edges of `tet` that lie in `h`.
    pub fn h_edges_of(&self, tet: usize, h: &BTreeSet<usize>) -> Vec<usize> {
        (0..6).filter(|&i| h.contains(&self.edge_of[tet][i])).collect()
    }
}

fn orient(glue: &[[Gluing; 4]]) -> Result<Vec<i8>, TriangulationError> {
    let n = glue.len();
    let mut sigma = vec![0i8; n];
    for start in 0..n {
        if sigma[start] != 0 {
            continue;
        }
        sigma[start] = 1;
        let mut stack = vec![start];
        while let Some(t) = stack.pop() {
            for g in &glue[t] {
                let want = -sigma[t] * perm::sign(&g.perm);
                if sigma[g.tet] == 0 {
                    sigma[g.tet] = want;
                    stack.push(g.tet);
                } else if sigma[g.tet] != want {
                    return Err(TriangulationError::OrientationViolation { tet: g.tet });
                }
            }
        }
    }
    Ok(sigma)
}

/// Glue table helper: `pairs` lists `(t, f, t', perm)`; the reverse side is filled in.
pub fn table_from_pairs(n: usize, pairs: &[(usize, u8, usize, Perm4)]) -> Vec<[Option<Gluing>; 4]> {
    let mut table = vec![[None; 4]; n];
    for &(t, f, t2, p) in pairs {
        let f2 = p[f as usize];
        table[t][f as usize] = Some(Gluing { tet: t2, face: f2, perm: p });
        table[t2][f2 as usize] = Some(Gluing { tet: t, face: f, perm: perm::inverse(&p) });
    }
    table
}
