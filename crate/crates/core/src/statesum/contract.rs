//! Tensor contraction of the state sum by variable elimination over face states.

use super::{c6j, ConventionProfile, FaceStates, ModNTriangulation, StateSumError};
use itertools::Itertools;
use num_complex::Complex64;
use std::collections::BTreeSet;

/// A dense table over face variables; `vars[0]` is the fastest index.
#[derive(Debug, Clone)]
struct Factor {
    vars: Vec<usize>,
    table: Vec<Complex64>,
}

/// Elimination order chosen greedily by fill, ties broken by face index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StatePlan {
    pub order: Vec<usize>,
    /// Largest number of variables in an intermediate table.
    pub width: usize,
}

fn tet_scopes(m: &ModNTriangulation) -> Vec<Vec<usize>> {
    m.tets.iter().map(|t| t.faces.iter().copied().collect::<BTreeSet<_>>().into_iter().collect()).collect()
}

pub fn plan(m: &ModNTriangulation) -> StatePlan {
    let mut scopes: Vec<BTreeSet<usize>> = tet_scopes(m).into_iter().map(|s| s.into_iter().collect()).collect();
    let mut left: BTreeSet<usize> = (0..m.face_count).collect();
    let (mut order, mut width) = (Vec::new(), 0);
    while !left.is_empty() {
        let merged = |v: usize, scopes: &[BTreeSet<usize>]| -> BTreeSet<usize> {
            scopes.iter().filter(|s| s.contains(&v)).flatten().copied().collect()
        };
        let v = *left.iter().min_by_key(|&&v| (merged(v, &scopes).len(), v)).expect("nonempty");
        let mut joined = merged(v, &scopes);
        width = width.max(joined.len());
        joined.remove(&v);
        scopes.retain(|s| !s.contains(&v));
        scopes.push(joined);
        left.remove(&v);
        order.push(v);
    }
    StatePlan { order, width }
}

fn tet_factor<F>(m: &ModNTriangulation, t: usize, vars: Vec<usize>, weight: &F) -> Result<Factor, StateSumError>
where
    F: Fn(usize, &FaceStates) -> Result<Complex64, StateSumError>,
{
    let n = m.n as i64;
    let tet = &m.tets[t];
    let size = (n as usize).pow(vars.len() as u32);
    let mut table = Vec::with_capacity(size);
    for idx in 0..size {
        let vals = digits(idx, vars.len(), n);
        let states = tet.faces.map(|f| vals[vars.iter().position(|&v| v == f).expect("scope covers the faces")]);
        table.push(weight(t, &states)?);
    }
    Ok(Factor { vars, table })
}

fn digits(mut idx: usize, len: usize, n: i64) -> Vec<i64> {
    (0..len)
        .map(|_| {
            let d = idx % n as usize;
            idx /= n as usize;
            d as i64
        })
        .collect()
}

fn eliminate(factors: Vec<Factor>, v: usize, n: i64) -> Factor {
    let vars: Vec<usize> = factors.iter().flat_map(|f| f.vars.iter().copied()).filter(|&u| u != v).unique().sorted().collect();
    let nu = n as usize;
    let size = nu.pow(vars.len() as u32);
    let mut table = vec![Complex64::new(0.0, 0.0); size];
    // position of each factor variable in the output, or None for v
    let maps: Vec<Vec<Option<usize>>> =
        factors.iter().map(|f| f.vars.iter().map(|u| vars.iter().position(|w| w == u)).collect()).collect();
    for (idx, slot) in table.iter_mut().enumerate() {
        let vals = digits(idx, vars.len(), n);
        let mut acc = Complex64::new(0.0, 0.0);
        for s in 0..nu {
            let mut prod = Complex64::new(1.0, 0.0);
            for (f, map) in factors.iter().zip(&maps) {
                let mut k = 0usize;
                for pos in map.iter().rev() {
                    k = k * nu + pos.map_or(s, |p| vals[p] as usize);
                }
                prod *= f.table[k];
                if prod == Complex64::new(0.0, 0.0) {
                    break;
                }
            }
            acc += prod;
        }
        *slot = acc;
    }
    Factor { vars, table }
}

/// `Ψ`: the sum over face states of the product of c-6j symbols.
pub fn psi_sum(m: &ModNTriangulation, profile: &ConventionProfile) -> Result<Complex64, StateSumError> {
    contract(m, |t, states| c6j(&m.tets[t], m, states, profile))
}

/// Sum over face states of the product of `weight(tet, states of its frame faces)`.
pub fn contract<F>(m: &ModNTriangulation, weight: F) -> Result<Complex64, StateSumError>
where
    F: Fn(usize, &FaceStates) -> Result<Complex64, StateSumError>,
{
    let n = m.n as i64;
    let mut factors = tet_scopes(m)
        .into_iter()
        .enumerate()
        .map(|(t, vars)| tet_factor(m, t, vars, &weight))
        .collect::<Result<Vec<_>, _>>()?;
    for v in plan(m).order {
        let (touching, rest): (Vec<Factor>, Vec<Factor>) = factors.into_iter().partition(|f| f.vars.contains(&v));
        factors = rest;
        if touching.is_empty() {
            factors.push(Factor { vars: vec![], table: vec![Complex64::new(n as f64, 0.0)] });
        } else {
            factors.push(eliminate(touching, v, n));
        }
    }
    Ok(factors.iter().map(|f| f.table[0]).product())
}
