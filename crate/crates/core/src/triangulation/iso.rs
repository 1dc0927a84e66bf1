//! Isomorphism of triangulations by canonical relabelling.

use super::Triangulation;
use crate::perm::{self, Perm4, EDGE_VERTS};
use std::collections::BTreeSet;

fn code_from(tri: &Triangulation, h: Option<&BTreeSet<usize>>, start: usize, p0: Perm4) -> Vec<usize> {
    let n = tri.tet_count();
    let mut new_of = vec![usize::MAX; n];
    let mut labels: Vec<(usize, Perm4)> = vec![(start, p0)];
    new_of[start] = 0;
    let mut code = Vec::with_capacity(n * 8);
    let mut k = 0;
    while k < labels.len() {
        let (old, lab) = labels[k];
        for j in 0..4u8 {
            let g = tri.gluing(old, lab[j as usize]);
            let idx = if new_of[g.tet] == usize::MAX {
                new_of[g.tet] = labels.len();
                labels.push((g.tet, perm::compose(&g.perm, &lab)));
                labels.len() - 1
            } else {
                new_of[g.tet]
            };
            let lab2 = labels[idx].1;
            let pnew = perm::compose(&perm::inverse(&lab2), &perm::compose(&g.perm, &lab));
            code.push(idx);
            code.push(pnew.iter().fold(0usize, |acc, &x| acc * 4 + x as usize));
        }
        k += 1;
    }
    if let Some(h) = h {
        for &(old, lab) in &labels {
            for &(a, b) in &EDGE_VERTS {
                let e = tri.edge(old, perm::edge_index(lab[a as usize], lab[b as usize]));
                code.push(h.contains(&e) as usize);
            }
        }
    }
    code
}

/// Lexicographically least relabelling code; equal codes mean isomorphic.
pub fn canonical_code(tri: &Triangulation, h: Option<&BTreeSet<usize>>) -> Vec<usize> {
    let mut best: Option<Vec<usize>> = None;
    for start in 0..tri.tet_count() {
        for p in perm::all() {
            let c = code_from(tri, h, start, p);
            if best.as_ref().map_or(true, |b| c < *b) {
                best = Some(c);
            }
        }
    }
    best.unwrap_or_default()
}

pub fn is_isomorphic(a: &Triangulation, b: &Triangulation) -> bool {
    a.counts() == b.counts() && canonical_code(a, None) == canonical_code(b, None)
}
