//! Brute-force state sum over every face-state assignment.

use super::{c6j, ConventionProfile, FaceStates, ModNTriangulation, NegativeRule, StateSumError};
use num_complex::Complex64;

/// Largest state space the brute force accepts.
pub const MAX_STATES: u64 = 1 << 24;

/// Assignments satisfying every tetrahedron's charge-conservation delta.
pub fn admissible_states(m: &ModNTriangulation, profile: &ConventionProfile) -> Vec<Vec<i64>> {
    let n = m.n as i64;
    assignments(m)
        .filter(|s| {
            m.tets.iter().all(|t| {
                let a: [i64; 4] = std::array::from_fn(|k| s[t.faces[profile.face_order[k] as usize]]);
                let a = if t.sign < 0 && profile.negative != NegativeRule::Same { a.map(|v| -v) } else { a };
                let a = if t.sign < 0 && profile.negative == NegativeRule::DualSwapped { [a[1], a[0], a[3], a[2]] } else { a };
                (a[2] + a[0] - a[1]).rem_euclid(n) == 0
            })
        })
        .collect()
}

fn assignments(m: &ModNTriangulation) -> impl Iterator<Item = Vec<i64>> + '_ {
    let n = m.n as u64;
    let total = n.pow(m.face_count as u32);
    (0..total).map(move |mut idx| {
        (0..m.face_count)
            .map(|_| {
                let d = idx % n;
                idx /= n;
                d as i64
            })
            .collect()
    })
}

pub fn psi_brute(m: &ModNTriangulation, profile: &ConventionProfile) -> Result<Complex64, StateSumError> {
    brute(m, |t, states| c6j(&m.tets[t], m, states, profile))
}

/// Enumerates all `N^faces` assignments; panics above [`MAX_STATES`].
pub fn brute<F>(m: &ModNTriangulation, weight: F) -> Result<Complex64, StateSumError>
where
    F: Fn(usize, &FaceStates) -> Result<Complex64, StateSumError>,
{
    assert!((m.n as u64).checked_pow(m.face_count as u32).is_some_and(|s| s <= MAX_STATES), "state space too large");
    let mut total = Complex64::new(0.0, 0.0);
    for s in assignments(m) {
        let mut prod = Complex64::new(1.0, 0.0);
        for (i, t) in m.tets.iter().enumerate() {
            prod *= weight(i, &t.faces.map(|f| s[f]))?;
        }
        total += prod;
    }
    Ok(total)
}
