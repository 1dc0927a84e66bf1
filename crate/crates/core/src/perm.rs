//! Permutations of the four vertex labels of a tetrahedron.

/// `p[i]` is the image of label `i`.
pub type Perm4 = [u8; 4];

pub const IDENTITY: Perm4 = [0, 1, 2, 3];

/// Local edge indices in the order (01),(02),(03),(12),(13),(23).
pub const EDGE_VERTS: [(u8, u8); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

pub fn edge_index(a: u8, b: u8) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    match (a, b) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        (2, 3) => 5,
        _ => panic!("bad edge ({a},{b})"),
    }
}

/// The edge opposite to local edge `i`.
pub fn opposite_edge(i: usize) -> usize {
    5 - i
}

/// Labels of face `f` in increasing order.
pub fn face_verts(f: u8) -> [u8; 3] {
    let mut out = [0u8; 3];
    let mut k = 0;
    for v in 0..4u8 {
        if v != f {
            out[k] = v;
            k += 1;
        }
    }
    out
}

pub fn is_perm(p: &Perm4) -> bool {
    let mut seen = [false; 4];
    for &x in p {
        if x > 3 || seen[x as usize] {
            return false;
        }
        seen[x as usize] = true;
    }
    true
}

pub fn inverse(p: &Perm4) -> Perm4 {
    let mut q = [0u8; 4];
    for i in 0..4 {
        q[p[i] as usize] = i as u8;
    }
    q
}

/// `(p ∘ q)(i) = p[q[i]]`.
pub fn compose(p: &Perm4, q: &Perm4) -> Perm4 {
    [p[q[0] as usize], p[q[1] as usize], p[q[2] as usize], p[q[3] as usize]]
}

pub fn sign(p: &Perm4) -> i8 {
    let mut inv = 0;
    for i in 0..4 {
        for j in i + 1..4 {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// All 24 permutations in lexicographic order.
pub fn all() -> Vec<Perm4> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4u8 {
        for b in 0..4u8 {
            for c in 0..4u8 {
                for d in 0..4u8 {
                    let p = [a, b, c, d];
                    if is_perm(&p) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}
