//! Upper-triangular 1-cocycles on branched triangulations.
//!
//! Values live on edge classes and are read along the branching orientation,
//! so on every face `v0 < v1 < v2` of a frame the cocycle condition is
//! `z(v0v2) = z(v0v1) · z(v1v2)`.

use crate::branching::{branch_transit, Branching, BranchingError};
use crate::scalar::Scalar;
use crate::triangulation::{apply_move, MoveCorrespondence, MoveSpec, Triangulation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use thiserror::Error;

/// Default fullness threshold for floating cocycles.
pub const FULL_EPS: f64 = 1e-9;
/// Tolerance of the floating cocycle condition.
pub const VALID_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CocycleError {
    #[error("move does not carry a branching: {0}")]
    NonBranchedMove(String),
    #[error("value on edge {0} is not determined by the move")]
    Underdetermined(usize),
    #[error("transited values violate the cocycle condition")]
    Inconsistent,
    #[error("diagonal entry is not invertible")]
    NotInvertible,
    #[error("triangulation is not quasi-regular")]
    NotQuasiRegular,
    #[error("no full perturbation found after {0} attempts")]
    GenericityFailure(usize),
}

/// The matrix `((t, x), (0, 1/t))`.
#[derive(Debug, Clone, PartialEq)]
pub struct BorelElement<S> {
    pub t: S,
    pub x: S,
}

impl<S: Scalar> BorelElement<S> {
    pub fn new(t: S, x: S) -> Self {
        BorelElement { t, x }
    }

    pub fn identity() -> Self {
        BorelElement { t: S::one(), x: S::zero() }
    }

    pub fn parabolic(x: S) -> Self {
        BorelElement { t: S::one(), x }
    }

    pub fn mul(&self, o: &Self) -> Result<Self, CocycleError> {
        let inv_t2 = o.t.inv().ok_or(CocycleError::NotInvertible)?;
        Ok(BorelElement { t: self.t.mul(&o.t), x: self.t.mul(&o.x).add(&self.x.mul(&inv_t2)) })
    }

    pub fn inverse(&self) -> Result<Self, CocycleError> {
        Ok(BorelElement { t: self.t.inv().ok_or(CocycleError::NotInvertible)?, x: self.x.neg() })
    }

    pub fn approx_eq(&self, o: &Self, tol: f64) -> bool {
        self.t.approx_eq(&o.t, tol) && self.x.approx_eq(&o.x, tol)
    }
}

/// Values per edge class along the branching orientation.
#[derive(Debug, Clone, PartialEq)]
pub struct Cocycle<S> {
    pub values: Vec<BorelElement<S>>,
}

impl<S: Scalar> Cocycle<S> {
    /// Value on the edge from frame vertex `i` to frame vertex `j > i` of `tet`.
    pub fn on_frame_edge(&self, tri: &Triangulation, b: &Branching, tet: usize, i: usize, j: usize) -> &BorelElement<S> {
        &self.values[frame_edge(tri, b, tet, i, j)]
    }

    /// `(z(e0), z(e1), z(e2))` on the face spanned by the first three frame vertices.
    pub fn first_face(&self, tri: &Triangulation, b: &Branching, tet: usize) -> [BorelElement<S>; 3] {
        [(0, 1), (1, 2), (0, 2)].map(|(i, j)| self.on_frame_edge(tri, b, tet, i, j).clone())
    }
}

pub fn frame_edge(tri: &Triangulation, b: &Branching, tet: usize, i: usize, j: usize) -> usize {
    let (frame, _) = b.frame(tet);
    tri.edge_between(tet, frame[i], frame[j]).0
}

const FRAME_FACES: [[usize; 3]; 4] = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];

/// Edge classes `(v0v1, v1v2, v0v2)` of every frame face.
fn frame_faces(tri: &Triangulation, b: &Branching) -> Vec<[usize; 3]> {
    (0..tri.tet_count())
        .flat_map(|t| FRAME_FACES.iter().map(move |&[i, j, k]| [(i, j), (j, k), (i, k)].map(|(p, q)| frame_edge(tri, b, t, p, q))))
        .collect()
}

pub fn validate_cocycle<S: Scalar>(tri: &Triangulation, b: &Branching, z: &Cocycle<S>) -> bool {
    if z.values.len() != tri.edge_count() {
        return false;
    }
    frame_faces(tri, b).iter().all(|&[e0, e1, e2]| match z.values[e0].mul(&z.values[e1]) {
        Ok(p) => p.approx_eq(&z.values[e2], VALID_TOL),
        Err(_) => false,
    })
}

/// `z'(e) = λ(tail)⁻¹ z(e) λ(head)`.
pub fn coboundary_act<S: Scalar>(
    tri: &Triangulation,
    b: &Branching,
    z: &Cocycle<S>,
    lambda: &[BorelElement<S>],
) -> Result<Cocycle<S>, CocycleError> {
    let values = tri
        .edge_classes()
        .iter()
        .enumerate()
        .map(|(e, c)| {
            let (tail, head) = if b.is_forward(e) { c.ends } else { (c.ends.1, c.ends.0) };
            lambda[tail].inverse()?.mul(&z.values[e])?.mul(&lambda[head])
        })
        .collect::<Result<_, _>>()?;
    Ok(Cocycle { values })
}

/// The coboundary of a vertex function, as parabolic values.
pub fn parabolic_coboundary<S: Scalar>(tri: &Triangulation, b: &Branching, u: &[S]) -> Cocycle<S> {
    let values = tri
        .edge_classes()
        .iter()
        .enumerate()
        .map(|(e, c)| {
            let (tail, head) = if b.is_forward(e) { c.ends } else { (c.ends.1, c.ends.0) };
            BorelElement::parabolic(u[head].sub(&u[tail]))
        })
        .collect();
    Cocycle { values }
}

pub fn is_full<S: Scalar>(z: &Cocycle<S>, eps: f64) -> bool {
    z.values.iter().all(|v| !v.x.is_zero_within(eps))
}

/// Transit of `z` along `m`, given the moved triangulation, its branching and the move correspondence.
///
/// Surviving edges keep their values; the rest are solved face by face. The
/// one free value left by a bubble move is set to `bubble`.
pub fn cocycle_transit<S: Scalar>(
    new: &Triangulation,
    new_b: &Branching,
    z: &Cocycle<S>,
    corr: &MoveCorrespondence,
    bubble: Option<&BorelElement<S>>,
) -> Result<Cocycle<S>, CocycleError> {
    let mut known: Vec<Option<BorelElement<S>>> = vec![None; new.edge_count()];
    for (old, img) in corr.edge_map.iter().enumerate() {
        if let Some((ne, _)) = *img {
            known[ne] = Some(z.values[old].clone());
        }
    }
    let faces = frame_faces(new, new_b);
    let mut spare = bubble.cloned();
    loop {
        propagate(&faces, &mut known)?;
        let Some(e) = known.iter().position(Option::is_none) else { break };
        match spare.take() {
            Some(p) => known[e] = Some(p),
            None => return Err(CocycleError::Underdetermined(e)),
        }
    }
    let out = Cocycle { values: known.into_iter().map(Option::unwrap).collect() };
    if validate_cocycle(new, new_b, &out) {
        Ok(out)
    } else {
        Err(CocycleError::Inconsistent)
    }
}

fn propagate<S: Scalar>(faces: &[[usize; 3]], known: &mut [Option<BorelElement<S>>]) -> Result<(), CocycleError> {
    let mut changed = true;
    while changed {
        changed = false;
        for &[e0, e1, e2] in faces {
            let solved = match (&known[e0], &known[e1], &known[e2]) {
                (Some(a), Some(b), None) => Some((e2, a.mul(b)?)),
                (Some(a), None, Some(c)) => Some((e1, a.inverse()?.mul(c)?)),
                (None, Some(b), Some(c)) => Some((e0, c.mul(&b.inverse()?)?)),
                _ => None,
            };
            if let Some((e, v)) = solved {
                known[e] = Some(v);
                changed = true;
            }
        }
    }
    Ok(())
}

/// One decorated step: move, branching and cocycle transit together.
pub fn transit_step<S: Scalar>(
    tri: &Triangulation,
    h: &BTreeSet<usize>,
    b: &Branching,
    z: &Cocycle<S>,
    m: &MoveSpec,
    bubble: Option<&BorelElement<S>>,
) -> Result<(Triangulation, BTreeSet<usize>, Branching, Cocycle<S>), CocycleError> {
    let (t2, h2, corr) = apply_move(tri, h, m).map_err(|e| CocycleError::NonBranchedMove(e.to_string()))?;
    let b2 = branch_transit(&t2, b, &corr, m)
        .map_err(|e: BranchingError| CocycleError::NonBranchedMove(e.to_string()))?
        .into_iter()
        .next()
        .ok_or_else(|| CocycleError::NonBranchedMove("no branching extends".into()))?;
    let z2 = cocycle_transit(&t2, &b2, z, &corr, bubble)?;
    Ok((t2, h2, b2, z2))
}

/// Cohomologous cocycle that stays full along the planned moves.
///
/// Perturbs by the coboundary of seeded random rationals in `[-50, 50]/7`,
/// then replays `moves` and retries until every intermediate cocycle is full.
pub fn perturb_to_full<S: Scalar>(
    tri: &Triangulation,
    h: &BTreeSet<usize>,
    b: &Branching,
    z: &Cocycle<S>,
    moves: &[MoveSpec],
    seed: u64,
    retries: usize,
) -> Result<Cocycle<S>, CocycleError> {
    if !tri.is_quasi_regular() {
        return Err(CocycleError::NotQuasiRegular);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut candidate = z.clone();
    for _ in 0..=retries {
        if replay_full(tri, h, b, &candidate, moves, &mut rng)? {
            return Ok(candidate);
        }
        let lambda: Vec<BorelElement<S>> =
            (0..tri.vertex_count()).map(|_| BorelElement::parabolic(random_rational(&mut rng))).collect();
        candidate = coboundary_act(tri, b, z, &lambda)?;
    }
    Err(CocycleError::GenericityFailure(retries))
}

fn random_rational<S: Scalar>(rng: &mut ChaCha8Rng) -> S {
    S::from_ratio(rng.gen_range(-50..=50), 7)
}

fn replay_full<S: Scalar>(
    tri: &Triangulation,
    h: &BTreeSet<usize>,
    b: &Branching,
    z: &Cocycle<S>,
    moves: &[MoveSpec],
    rng: &mut ChaCha8Rng,
) -> Result<bool, CocycleError> {
    if !is_full(z, FULL_EPS) {
        return Ok(false);
    }
    let (mut t, mut hh, mut bb, mut zz) = (tri.clone(), h.clone(), b.clone(), z.clone());
    for m in moves {
        let param = matches!(m, MoveSpec::Bubble { .. })
            .then(|| BorelElement::new(S::one(), random_rational(rng)));
        (t, hh, bb, zz) = transit_step(&t, &hh, &bb, &zz, m, param.as_ref())?;
        if !is_full(&zz, FULL_EPS) {
            return Ok(false);
        }
    }
    Ok(true)
}
