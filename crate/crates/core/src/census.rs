//! Built-in triangulations of S³ used by tests, examples and the CLI.

use crate::perm::{self, Perm4};
use crate::triangulation::{apply_move, table_from_pairs, MoveSpec, Triangulation};
use std::collections::BTreeSet;

pub type Distinguished = (Triangulation, BTreeSet<usize>);

/// Two tetrahedra glued by the identity on every face; H is the 4-cycle 0-1-2-3.
pub fn s3_double() -> Distinguished {
    let pairs: Vec<_> = (0..4u8).map(|f| (0, f, 1, perm::IDENTITY)).collect();
    let t = Triangulation::from_gluings(table_from_pairs(2, &pairs)).expect("double is valid");
    let e = |a, b| t.edge_between(0, a, b).0;
    let h = [e(0, 1), e(1, 2), e(2, 3), e(0, 3)].into_iter().collect();
    (t, h)
}

/// 2→3 image of the double across face 0. Its central edge is a loop.
pub fn s3_triple() -> Distinguished {
    let (t, h) = s3_double();
    let (t2, h2, _) = apply_move(&t, &h, &MoveSpec::TwoThree { face: 0 }).expect("2→3 on the double");
    (t2, h2)
}

/// Bubble move on the double at face 3 of tetrahedron 0 along the H-edge (01).
pub fn s3_double_bubble() -> Distinguished {
    let (t, h) = s3_double();
    let face = t.face(0, 3);
    let h_edge = t.edge_between(0, 0, 1).0;
    let (t2, h2, _) = apply_move(&t, &h, &MoveSpec::Bubble { face, h_edge }).expect("bubble on the double");
    (t2, h2)
}

/// Boundary of the 4-simplex; H is the 5-cycle 0-1-2-3-4.
pub fn s3_pentachoron() -> Distinguished {
    // tetrahedron i spans the simplex vertices other than i, in increasing order
    let verts = |i: usize| -> Vec<usize> { (0..5).filter(|&v| v != i).collect() };
    let label = |i: usize, v: usize| verts(i).iter().position(|&x| x == v).unwrap() as u8;
    let mut pairs = Vec::new();
    for i in 0..5 {
        for j in i + 1..5 {
            let mut p: Perm4 = [0; 4];
            for (l, &v) in verts(i).iter().enumerate() {
                p[l] = if v == j { label(j, i) } else { label(j, v) };
            }
            pairs.push((i, label(i, j), j, p));
        }
    }
    let t = Triangulation::from_gluings(table_from_pairs(5, &pairs)).expect("pentachoron boundary is valid");
    let edge = |a: usize, b: usize| {
        let i = (0..5).find(|&i| i != a && i != b).unwrap();
        t.edge_between(i, label(i, a), label(i, b)).0
    };
    let h = (0..5).map(|k| edge(k, (k + 1) % 5)).collect();
    (t, h)
}

/// Vertex classes of the pentachoron boundary indexed by simplex vertex.
pub fn pentachoron_vertices(t: &Triangulation) -> [usize; 5] {
    // tetrahedron 0 holds simplex vertices 1..4 at labels 0..3, tetrahedron 1 holds vertex 0 at label 0
    [t.vertex(1, 0), t.vertex(0, 0), t.vertex(0, 1), t.vertex(0, 2), t.vertex(0, 3)]
}

/// Three 2→3 moves and a bubble on the pentachoron that never create a loop edge.
pub fn pentachoron_script() -> Vec<MoveSpec> {
    let (mut t, mut h) = s3_pentachoron();
    let mut script = Vec::new();
    for _ in 0..3 {
        let face = (0..t.face_count())
            .find(|&f| {
                let [(a, fa), (b, fb)] = t.face_sides(f);
                a != b && t.vertex(a, fa) != t.vertex(b, fb)
            })
            .expect("a face with distinct apexes");
        let m = MoveSpec::TwoThree { face };
        (t, h, _) = apply_move(&t, &h, &m).expect("2→3 applies");
        script.push(m);
    }
    let (face, h_edge) = (0..t.face_count())
        .find_map(|f| {
            let [(a, fa), _] = t.face_sides(f);
            let [p, q, _] = perm::face_verts(fa);
            let e = t.edge_between(a, p, q).0;
            h.contains(&e).then_some((f, e))
        })
        .expect("a face with an H-edge");
    script.push(MoveSpec::Bubble { face, h_edge });
    script
}

pub fn all() -> Vec<(&'static str, Distinguished)> {
    vec![
        ("s3_double", s3_double()),
        ("s3_triple", s3_triple()),
        ("s3_double_bubble", s3_double_bubble()),
        ("s3_pentachoron", s3_pentachoron()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(s3_double().0.counts(), (4, 6, 4, 2));
        assert_eq!(s3_triple().0.counts(), (4, 7, 6, 3));
        assert_eq!(s3_double_bubble().0.counts(), (5, 9, 8, 4));
        let (p, h) = s3_pentachoron();
        assert_eq!(p.counts(), (5, 10, 10, 5));
        assert!(p.is_quasi_regular());
        assert!(p.is_distinguished(&h).unwrap());
    }

    #[test]
    fn script_stays_quasi_regular() {
        let (mut t, mut h) = s3_pentachoron();
        for m in pentachoron_script() {
            (t, h, _) = apply_move(&t, &h, &m).unwrap();
            assert!(t.is_quasi_regular(), "{m:?}");
        }
        assert_eq!(t.counts(), (6, 16, 20, 10));
    }

    #[test]
    fn all_distinguished() {
        for (name, (t, h)) in all() {
            assert!(t.is_distinguished(&h).unwrap(), "{name}");
        }
    }
}
