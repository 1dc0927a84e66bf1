//! Command implementations behind the `qhi` binary; each returns a JSON report.

use super::surgery::{surgery_coefficients, Holonomy, SurgeryError};
use super::{census_document, parse, serialize, CheckRecord, CocycleBlock, DocError, Loaded, Mode, TriangulationDocument};
use crate::branching::total_order_branching;
use crate::charge::{charge_lattice_basis, solve_charge};
use crate::cocycle::{is_full, FULL_EPS};
use crate::dehn::dehn_of_class;
use crate::scissors::{edge_modulus_product, extract_class, is_pre_ideal};
use crate::statesum::calibrate::{asymptotic_probe, calibration_report, search_space, Decorated};
use crate::statesum::{h_from_psi, invariance_check, psi_sum, ConventionProfile, RootBranch, StateSumError};
use crate::triangulation::{is_isomorphic, MoveSpec};
use serde_json::{json, Value};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CommandError {
    #[error(transparent)]
    Document(#[from] DocError),
    #[error(transparent)]
    StateSum(#[from] StateSumError),
    #[error(transparent)]
    Surgery(#[from] SurgeryError),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Compute(String),
}

impl CommandError {
    /// 3 for bad input, 4 for failed computations.
    pub fn exit_code(&self) -> i32 {
        match self {
            CommandError::Document(_) | CommandError::Input(_) => 3,
            _ => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CommandError::Document(DocError::Syntax { .. }) => "syntax",
            CommandError::Document(_) => "semantic",
            CommandError::StateSum(_) => "statesum",
            CommandError::Surgery(_) => "surgery",
            CommandError::Input(_) => "input",
            CommandError::Compute(_) => "compute",
        }
    }

    pub fn record(&self) -> Value {
        json!({ "error": self.kind(), "message": self.to_string() })
    }
}

/// A report and whether every check in it passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub report: Value,
    pub ok: bool,
}

impl Output {
    fn ok(report: Value) -> Self {
        Output { report, ok: true }
    }
}

fn compute(e: impl std::fmt::Display) -> CommandError {
    CommandError::Compute(e.to_string())
}

/// A file path, or the name of a census entry.
pub fn read_document(source: &str, mode: Mode) -> Result<TriangulationDocument, CommandError> {
    if Path::new(source).is_file() {
        let text = std::fs::read_to_string(source).map_err(|e| CommandError::Input(format!("{source}: {e}")))?;
        Ok(parse(&text, mode)?)
    } else {
        Ok(census_document(source)?)
    }
}

/// Odd values from `3,5,7` or the inclusive range `3..13`.
pub fn parse_n_list(s: &str) -> Result<Vec<u32>, CommandError> {
    let bad = || CommandError::Input(format!("bad N list {s:?}"));
    if let Some((a, b)) = s.split_once("..") {
        let (a, b): (u32, u32) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        return Ok((a..=b).filter(|n| n % 2 == 1).collect());
    }
    s.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect()
}

/// `default`, `literal`, or a path to a JSON profile.
pub fn read_profile(name: &str) -> Result<ConventionProfile, CommandError> {
    match name {
        "default" => Ok(ConventionProfile::default()),
        "literal" => Ok(ConventionProfile::literal()),
        path => {
            let text = std::fs::read_to_string(path).map_err(|e| CommandError::Input(format!("{path}: {e}")))?;
            serde_json::from_str(&text).map_err(|e| CommandError::Input(format!("{path}: {e}")))
        }
    }
}

/// Branching, numeric cocycle and charge of a loaded document; missing charges are solved.
pub fn decorate(l: &Loaded, seed: u64) -> Result<Decorated, CommandError> {
    let b = l.require_branching()?.clone();
    let z = l.numeric_cocycle(seed)?;
    let c = match &l.charge {
        Some(c) => c.clone(),
        None => solve_charge(&l.tri, &l.h).map_err(compute)?,
    };
    Ok(Decorated { tri: l.tri.clone(), h: l.h.clone(), b, z, c })
}

pub fn validate(doc: &TriangulationDocument) -> Result<Output, CommandError> {
    let l = doc.load()?;
    let (r0, r1, r2, r3) = l.tri.counts();
    let (r0, r1, r2, r3) = (r0 as i64, r1 as i64, r2 as i64, r3 as i64);
    let records = vec![
        CheckRecord::new("faces_twice_tetrahedra", r2 == 2 * r3, [r2, r3], None),
        CheckRecord::new("tetrahedra_edges_minus_vertices", r3 == r1 - r0, [r3, r1, r0], None),
        CheckRecord::new("euler_characteristic_zero", r0 - r1 + r2 - r3 == 0, r0 - r1 + r2 - r3, None),
        CheckRecord::new("h_distinguished", true, l.h.len(), None),
        CheckRecord::new("branching_valid", l.branching.is_some(), l.branching.is_some(), None),
        CheckRecord::new("cocycle_valid", l.cocycle.is_some(), l.cocycle.is_some(), None),
        CheckRecord::new("charge_valid", l.charge.is_some(), l.charge.is_some(), None),
    ];
    // structural checks gate the exit status; missing decorations are reported only
    let ok = records[..4].iter().all(|r| r.status == super::CheckStatus::Pass);
    let report = json!({
        "name": l.name,
        "counts": { "vertices": r0, "edges": r1, "faces": r2, "tetrahedra": r3 },
        "quasi_regular": l.tri.is_quasi_regular(),
        "loop_edges": l.tri.loop_edges(),
        "checks": records,
    });
    Ok(Output { report, ok })
}

/// The document with the total-order branching of `order`; numeric cocycles are dropped.
pub fn branch(doc: &TriangulationDocument, order: &[usize]) -> Result<Output, CommandError> {
    let l = doc.load()?;
    let b = total_order_branching(&l.tri, order).map_err(compute)?;
    let cocycle = match l.cocycle {
        Some(CocycleBlock::Numeric { .. }) => None,
        other => other,
    };
    let mut out = TriangulationDocument::from_parts(&l.name, &l.tri, &l.h, Some(&b), cocycle, l.charge.as_ref());
    out.notes = doc.notes.clone();
    let text = serialize(&out);
    Ok(Output::ok(serde_json::from_str(&text).expect("canonical text is JSON")))
}

pub fn charges(doc: &TriangulationDocument, lattice: bool) -> Result<Output, CommandError> {
    let l = doc.load()?;
    let c = solve_charge(&l.tri, &l.h).map_err(compute)?;
    let mut report = json!({ "charge": c.values });
    if lattice {
        let basis = charge_lattice_basis(&l.tri, &l.h).map_err(compute)?;
        report["lattice"] = json!(basis.basis);
    }
    Ok(Output::ok(report))
}

pub fn idealize(doc: &TriangulationDocument, seed: u64) -> Result<Output, CommandError> {
    let l = doc.load()?;
    let d = decorate(&l, seed)?;
    if !is_full(&d.z, FULL_EPS) {
        return Err(CommandError::Compute("cocycle is not full".into()));
    }
    let tets = extract_class(&d.tri, &d.b, &d.z, &d.c).idealize();
    let per_tet: Vec<Value> = tets
        .iter()
        .map(|y| json!({ "sign": y.sign, "moduli": y.a, "product_defect": y.product_defect(), "pre_ideal": is_pre_ideal(y) }))
        .collect();
    let edges: Vec<Value> = (0..d.tri.edge_count()).map(|e| json!(edge_modulus_product(&d.tri, &tets, e))).collect();
    Ok(Output::ok(json!({ "tetrahedra": per_tet, "edge_products": edges })))
}

pub fn dehn(doc: &TriangulationDocument) -> Result<Output, CommandError> {
    let l = doc.load()?;
    let z = l.symbolic_cocycle()?;
    let c = match &l.charge {
        Some(c) => c.clone(),
        None => solve_charge(&l.tri, &l.h).map_err(compute)?,
    };
    let w = dehn_of_class(&extract_class(&l.tri, l.require_branching()?, &z, &c));
    let zero = w.is_zero();
    let report = json!({
        "class": w.to_sexpr(),
        "verdict": if zero { "ZERO" } else { "NONZERO" },
        "zero_modulo_i_pi": w.modulo_i_pi().is_zero(),
    });
    Ok(Output { report, ok: zero })
}

pub fn statesum(doc: &TriangulationDocument, ns: &[u32], profile: &ConventionProfile, seed: u64) -> Result<Output, CommandError> {
    let d = decorate(&doc.load()?, seed)?;
    let mut rows = Vec::new();
    for &n in ns {
        let m = d.reduce(n, RootBranch::PRINCIPAL)?;
        let psi = psi_sum(&m, profile)?;
        let h = h_from_psi(&m, psi);
        rows.push(json!({ "N": n, "psi": psi, "H": h, "K": h.powu(n) }));
    }
    Ok(Output::ok(json!({ "profile": profile, "values": rows })))
}

/// Replays `moves` on the decorated document and compares H at every step.
pub fn invariance(
    doc: &TriangulationDocument,
    moves: &[MoveSpec],
    n: u32,
    profile: &ConventionProfile,
    seed: u64,
    target: Option<&TriangulationDocument>,
) -> Result<Output, CommandError> {
    let mut cur = decorate(&doc.load()?, seed)?;
    let start = cur.reduce(n, RootBranch::PRINCIPAL)?;
    let mut steps = Vec::new();
    for m in moves {
        let bubble = matches!(m, MoveSpec::Bubble { .. }).then(|| num_complex::Complex64::new(0.7, -0.3));
        let next = cur.step(m, bubble)?;
        let r = invariance_check(&cur.reduce(n, RootBranch::PRINCIPAL)?, &next.reduce(n, RootBranch::PRINCIPAL)?, profile)?;
        steps.push(json!({ "move": m, "report": r }));
        cur = next;
    }
    let total = invariance_check(&start, &cur.reduce(n, RootBranch::PRINCIPAL)?, profile)?;
    let ok = total.worst() < 1e-6;
    let mut report = json!({ "N": n, "steps": steps, "total": total });
    if let Some(t) = target {
        report["matches_target"] = json!(is_isomorphic(&cur.tri, &t.load()?.tri));
    }
    Ok(Output { report, ok })
}

pub fn calibrate(n: u32, seed: u64, space: Option<Vec<ConventionProfile>>, keep: usize) -> Result<Output, CommandError> {
    let space = space.unwrap_or_else(search_space);
    let report = calibration_report(n, seed, &space, keep)?;
    let ok = report.verdict == "calibrated";
    Ok(Output { report: serde_json::to_value(report).expect("reports serialize"), ok })
}

pub fn probe(doc: &TriangulationDocument, ns: &[u32], profile: &ConventionProfile, seed: u64) -> Result<Output, CommandError> {
    let d = decorate(&doc.load()?, seed)?;
    let r = asymptotic_probe(&d, ns, profile)?;
    Ok(Output::ok(serde_json::to_value(r).expect("reports serialize")))
}

pub fn surgery(alpha: &str, beta: &str, height: i64) -> Result<Output, CommandError> {
    let (a, b): (Holonomy, Holonomy) = (alpha.parse()?, beta.parse()?);
    let c = surgery_coefficients(&a, &b, height)?;
    Ok(Output::ok(serde_json::to_value(c).expect("reports serialize")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census;
    use crate::statesum::h_value;

    fn doc(name: &str) -> TriangulationDocument {
        census_document(name).unwrap()
    }

    #[test]
    fn validate_census() {
        for d in super::super::census_documents() {
            let out = validate(&d).unwrap();
            assert!(out.ok, "{}", d.name);
        }
    }

    #[test]
    fn charges_match_the_solver() {
        let (t, h) = census::s3_double();
        let out = charges(&doc("s3_double"), true).unwrap();
        assert_eq!(out.report["charge"], json!(solve_charge(&t, &h).unwrap().values));
        assert_eq!(out.report["lattice"].as_array().unwrap().len(), t.edge_count());
    }

    #[test]
    fn dehn_of_the_double_is_zero() {
        let out = dehn(&doc("s3_double")).unwrap();
        assert_eq!(out.report["verdict"], "ZERO");
        assert!(out.ok);
    }

    #[test]
    fn statesum_matches_the_library() {
        let d = doc("s3_double");
        let profile = ConventionProfile::default();
        let out = statesum(&d, &[3], &profile, 4).unwrap();
        let dec = decorate(&d.load().unwrap(), 4).unwrap();
        let h = h_value(&dec.reduce(3, RootBranch::PRINCIPAL).unwrap(), &profile).unwrap();
        assert_eq!(out.report["values"][0]["H"], json!(h));
        let err = statesum(&d, &[4], &profile, 4).unwrap_err();
        assert!(matches!(err, CommandError::StateSum(StateSumError::EvenN(4))));
        assert_eq!(err.exit_code(), 4);
    }

    #[test]
    fn branch_reorders_and_stays_valid() {
        let out = branch(&doc("s3_double"), &[3, 2, 1, 0]).unwrap();
        let text = serde_json::to_string(&out.report).unwrap();
        let back = parse(&text, Mode::Strict).unwrap().load().unwrap();
        assert!(back.branching.is_some());
    }

    #[test]
    fn lists_and_errors() {
        assert_eq!(parse_n_list("3..13").unwrap(), vec![3, 5, 7, 9, 11, 13]);
        assert_eq!(parse_n_list("3,5").unwrap(), vec![3, 5]);
        assert!(parse_n_list("x").is_err());
        let e = read_document("no_such_entry", Mode::Strict).unwrap_err();
        assert_eq!(e.exit_code(), 3);
        assert_eq!(e.record()["error"], "semantic");
        assert_eq!(surgery("parabolic:2", "parabolic:3", 100).unwrap().report["s"], 3);
    }

    #[test]
    fn invariance_replays_a_script() {
        let moves = [MoveSpec::TwoThree { face: 0 }];
        let out = invariance(&doc("s3_pentachoron"), &moves, 3, &ConventionProfile::default(), 1, None).unwrap();
        assert_eq!(out.report["steps"].as_array().unwrap().len(), 1);
    }
}
