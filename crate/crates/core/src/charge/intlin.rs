//! Integer linear systems by column Hermite normal form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Solutions of `A x = b` over the integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntSolution {
    /// The preimage with all free coordinates of the normal form set to zero.
    pub particular: Vec<BigInt>,
    /// Basis of the integer kernel of `A`.
    pub kernel: Vec<Vec<BigInt>>,
}

fn col_combine(m: &mut [Vec<BigInt>], p: usize, j: usize, coeffs: [&BigInt; 4]) {
    // (col_p, col_j) <- (s col_p + t col_j, u col_p + v col_j)
    let [s, t, u, v] = coeffs;
    for row in m.iter_mut() {
        let (a, b) = (row[p].clone(), row[j].clone());
        row[p] = s * &a + t * &b;
        row[j] = u * &a + v * &b;
    }
}

fn col_axpy(m: &mut [Vec<BigInt>], dst: usize, src: usize, k: &BigInt) {
    for row in m.iter_mut() {
        let d = &row[src] * k;
        row[dst] -= d;
    }
}

/// `None` when the system has no integer solution.
pub fn solve(a: &[Vec<BigInt>], b: &[BigInt]) -> Option<IntSolution> {
    let rows = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<BigInt>> = a.to_vec();
    // the unimodular transform is tracked as extra rows below the matrix
    for i in 0..n {
        let mut row = vec![BigInt::zero(); n];
        row[i] = BigInt::one();
        m.push(row);
    }
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut pc = 0;
    for r in 0..rows {
        if pc == n {
            break;
        }
        for j in pc + 1..n {
            if m[r][j].is_zero() {
                continue;
            }
            let (x, y) = (m[r][pc].clone(), m[r][j].clone());
            let eg = x.extended_gcd(&y);
            let (g, s, t) = (eg.gcd, eg.x, eg.y);
            let u = -(&y / &g);
            let v = &x / &g;
            col_combine(&mut m, pc, j, [&s, &t, &u, &v]);
        }
        if m[r][pc].is_zero() {
            continue;
        }
        if m[r][pc].is_negative() {
            for row in m.iter_mut() {
                row[pc] = -row[pc].clone();
            }
        }
        for j in 0..pc {
            let q = m[r][j].div_floor(&m[r][pc]);
            if !q.is_zero() {
                col_axpy(&mut m, j, pc, &q);
            }
        }
        pivots.push((r, pc));
        pc += 1;
    }
    let rank = pc;
    let mut y = vec![BigInt::zero(); rank];
    let mut next = 0;
    for r in 0..rows {
        // echelon shape: row r only touches columns up to its pivot
        let acc: BigInt = (0..next).map(|j| &m[r][j] * &y[j]).sum();
        let rest = &b[r] - acc;
        match pivots.get(next) {
            Some(&(pr, p)) if pr == r => {
                if !rest.is_multiple_of(&m[r][p]) {
                    return None;
                }
                y[p] = rest / &m[r][p];
                next += 1;
            }
            _ => {
                if !rest.is_zero() {
                    return None;
                }
            }
        }
    }
    let particular = (0..n).map(|i| (0..rank).map(|j| &m[rows + i][j] * &y[j]).sum()).collect();
    let kernel = (rank..n).map(|j| (0..n).map(|i| m[rows + i][j].clone()).collect()).collect();
    Some(IntSolution { particular, kernel })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn apply(a: &[Vec<BigInt>], x: &[BigInt]) -> Vec<BigInt> {
        a.iter().map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum()).collect()
    }

    #[test]
    fn small_systems() {
        let a = vec![big(&[2, 4]), big(&[0, 3])];
        assert!(solve(&a, &big(&[1, 0])).is_none());
        let s = solve(&a, &big(&[2, 3])).unwrap();
        assert_eq!(apply(&a, &s.particular), big(&[2, 3]));
        assert!(s.kernel.is_empty());
        let a = vec![big(&[1, 1, 1])];
        let s = solve(&a, &big(&[1])).unwrap();
        assert_eq!(s.kernel.len(), 2);
    }

    proptest! {
        #[test]
        fn solutions_and_kernel(entries in proptest::collection::vec(-4i64..5, 12), x in proptest::collection::vec(-5i64..6, 4)) {
            let a: Vec<Vec<BigInt>> = entries.chunks(4).map(big).collect();
            let b = apply(&a, &big(&x));
            let s = solve(&a, &b).unwrap();
            prop_assert_eq!(apply(&a, &s.particular), b);
            for k in &s.kernel {
                prop_assert!(apply(&a, k).iter().all(Zero::is_zero));
            }
            prop_assert_eq!(solve(&a, &apply(&a, &big(&x))).unwrap(), s);
        }
    }
}
