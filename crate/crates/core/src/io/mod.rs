//! The JSON triangulation document, the decorated census and report records.

pub mod commands;
pub mod surgery;

use crate::branching::{branch_transit, total_order_branching, Branching, OrientationSystem};
use crate::census;
use crate::charge::{charge_transit, solve_charge, verify_charge, Charge};
use crate::cocycle::{parabolic_coboundary, validate_cocycle, BorelElement, Cocycle};
use crate::perm::{self, Perm4, EDGE_VERTS};
use crate::poly::Poly;
use crate::triangulation::{apply_move, table_from_pairs, MoveSpec, Triangulation};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

pub const FORMAT: &str = "qhi-triangulation";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DocError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{location}: {message}")]
    Semantic { location: String, message: String },
    #[error("unknown census entry {0}")]
    UnknownCensus(String),
}

fn semantic(location: impl Into<String>, message: impl Into<String>) -> DocError {
    DocError::Semantic { location: location.into(), message: message.into() }
}

/// Whether unknown top-level fields are rejected or kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Strict,
    Lax,
}

/// `[tet, face, tet', face', perm]`.
pub type GluingRecord = (usize, u8, usize, u8, Perm4);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CocycleBlock {
    /// Parabolic coboundary of one named potential per vertex class.
    Parabolic { potentials: Vec<String> },
    /// `[Re t, Im t, Re x, Im x]` per entry of `branching`.
    Numeric { values: Vec<[f64; 4]> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriangulationDocument {
    pub format: String,
    pub version: u32,
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub notes: String,
    pub tetrahedra: usize,
    pub gluings: Vec<GluingRecord>,
    /// One `[tet, a, b]` per H-edge.
    pub h_edges: Vec<[usize; 3]>,
    /// One `[tet, a, b]` per edge class, pointing along the branching.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branching: Option<Vec<[usize; 3]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cocycle: Option<CocycleBlock>,
    /// Charges per tetrahedron on the pairs `(01)(23)`, `(02)(13)`, `(03)(12)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub charges: Option<Vec<[i64; 3]>>,
    #[serde(flatten)]
    pub extra: BTreeMap<String, Value>,
}

/// A validated document.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub name: String,
    pub tri: Triangulation,
    pub h: BTreeSet<usize>,
    pub branching: Option<Branching>,
    pub cocycle: Option<CocycleBlock>,
    pub charge: Option<Charge>,
}

pub fn parse(text: &str, mode: Mode) -> Result<TriangulationDocument, DocError> {
    let doc: TriangulationDocument = serde_json::from_str(text)
        .map_err(|e| DocError::Syntax { line: e.line(), column: e.column(), message: e.to_string() })?;
    if mode == Mode::Strict {
        if let Some(k) = doc.extra.keys().next() {
            return Err(semantic(k.as_str(), "unknown field"));
        }
    }
    if doc.format != FORMAT {
        return Err(semantic("format", format!("expected {FORMAT}")));
    }
    if doc.version != FORMAT_VERSION {
        return Err(semantic("version", format!("unsupported version {}", doc.version)));
    }
    Ok(doc)
}

/// Canonical text: pretty JSON in field order with a trailing newline.
pub fn serialize(doc: &TriangulationDocument) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

fn local_edge(tri: &Triangulation, loc: &str, [t, a, b]: [usize; 3]) -> Result<(usize, bool), DocError> {
    if t >= tri.tet_count() || a > 3 || b > 3 || a == b {
        return Err(semantic(loc, format!("no edge ({a}{b}) in tetrahedron {t}")));
    }
    Ok(tri.edge_between(t, a as u8, b as u8))
}

impl TriangulationDocument {
    /// Canonical document of a (possibly decorated) triangulation.
    pub fn from_parts(
        name: &str,
        tri: &Triangulation,
        h: &BTreeSet<usize>,
        b: Option<&Branching>,
        cocycle: Option<CocycleBlock>,
        charge: Option<&Charge>,
    ) -> Self {
        let mut gluings = Vec::new();
        for t in 0..tri.tet_count() {
            for f in 0..4u8 {
                let g = tri.gluing(t, f);
                if (t, f) <= (g.tet, g.face) {
                    gluings.push((t, f, g.tet, g.face, g.perm));
                }
            }
        }
        let germ = |e: usize| {
            let (t, i) = tri.edge_class(e).germs[0];
            let (a, bb) = EDGE_VERTS[i];
            (t, a as usize, bb as usize)
        };
        let h_edges = h.iter().map(|&e| {
            let (t, a, bb) = germ(e);
            [t, a, bb]
        });
        let branching = b.map(|b| {
            (0..tri.edge_count())
                .map(|e| {
                    let (t, a, bb) = germ(e);
                    if b.system.points(tri, t, a as u8, bb as u8) {
                        [t, a, bb]
                    } else {
                        [t, bb, a]
                    }
                })
                .collect()
        });
        TriangulationDocument {
            format: FORMAT.into(),
            version: FORMAT_VERSION,
            name: name.into(),
            notes: String::new(),
            tetrahedra: tri.tet_count(),
            gluings,
            h_edges: h_edges.collect(),
            branching,
            cocycle,
            charges: charge.map(|c| c.values.clone()),
            extra: BTreeMap::new(),
        }
    }

    /// Builds and validates every block.
    pub fn load(&self) -> Result<Loaded, DocError> {
        let n = self.tetrahedra;
        let mut pairs = Vec::new();
        for (i, &(t, f, t2, f2, p)) in self.gluings.iter().enumerate() {
            let loc = |k: usize| format!("gluings[{i}][{k}]");
            if t >= n {
                return Err(semantic(loc(0), format!("tetrahedron {t} of {n}")));
            }
            if f > 3 {
                return Err(semantic(loc(1), format!("face {f}")));
            }
            if t2 >= n {
                return Err(semantic(loc(2), format!("tetrahedron {t2} of {n}")));
            }
            if !perm::is_perm(&p) {
                return Err(semantic(loc(4), format!("{p:?} is not a permutation")));
            }
            if p[f as usize] != f2 {
                return Err(semantic(loc(3), format!("perm sends face {f} to {}, not {f2}", p[f as usize])));
            }
            pairs.push((t, f, t2, p));
        }
        let tri = Triangulation::from_gluings(table_from_pairs(n, &pairs)).map_err(|e| semantic("gluings", e.to_string()))?;
        let mut h = BTreeSet::new();
        for (i, &loc) in self.h_edges.iter().enumerate() {
            h.insert(local_edge(&tri, &format!("h_edges[{i}]"), loc)?.0);
        }
        match tri.is_distinguished(&h) {
            Ok(true) => {}
            Ok(false) => return Err(semantic("h_edges", "not a Hamiltonian subcomplex")),
            Err(e) => return Err(semantic("h_edges", e.to_string())),
        }
        let branching = match &self.branching {
            None => None,
            Some(list) => {
                if list.len() != tri.edge_count() {
                    return Err(semantic("branching", format!("{} entries for {} edges", list.len(), tri.edge_count())));
                }
                let mut forward = vec![None; tri.edge_count()];
                for (i, &loc) in list.iter().enumerate() {
                    let l = format!("branching[{i}]");
                    let (e, along) = local_edge(&tri, &l, loc)?;
                    if forward[e].replace(along).is_some() {
                        return Err(semantic(l, format!("edge class {e} listed twice")));
                    }
                }
                let g = OrientationSystem { forward: forward.into_iter().map(|d| d.expect("every class listed")).collect() };
                Some(Branching::new(&tri, g).map_err(|e| semantic("branching", e.to_string()))?)
            }
        };
        if let Some(block) = &self.cocycle {
            let Some(b) = &branching else { return Err(semantic("cocycle", "needs a branching")) };
            match block {
                CocycleBlock::Parabolic { potentials } if potentials.len() != tri.vertex_count() => {
                    return Err(semantic("cocycle.potentials", format!("{} for {} vertices", potentials.len(), tri.vertex_count())))
                }
                CocycleBlock::Numeric { values } => {
                    let list = self.branching.as_ref().expect("branching present");
                    if values.len() != list.len() {
                        return Err(semantic("cocycle.values", format!("{} for {} edges", values.len(), list.len())));
                    }
                    let z = numeric_values(&tri, list, values);
                    if !validate_cocycle(&tri, b, &z) {
                        return Err(semantic("cocycle.values", "face relations fail"));
                    }
                }
                _ => {}
            }
        }
        let charge = match &self.charges {
            None => None,
            Some(v) => {
                let c = Charge { values: v.clone() };
                if !verify_charge(&tri, &h, &c) {
                    return Err(semantic("charges", "charge constraints fail"));
                }
                Some(c)
            }
        };
        Ok(Loaded { name: self.name.clone(), tri, h, branching, cocycle: self.cocycle.clone(), charge })
    }
}

fn numeric_values(tri: &Triangulation, list: &[[usize; 3]], values: &[[f64; 4]]) -> Cocycle<Complex64> {
    let mut out = vec![BorelElement::identity(); tri.edge_count()];
    for (&[t, a, b], v) in list.iter().zip(values) {
        out[tri.edge_between(t, a as u8, b as u8).0] = BorelElement::new(Complex64::new(v[0], v[1]), Complex64::new(v[2], v[3]));
    }
    Cocycle { values: out }
}

impl Loaded {
    pub fn require_branching(&self) -> Result<&Branching, DocError> {
        self.branching.as_ref().ok_or_else(|| semantic("branching", "missing"))
    }

    pub fn require_charge(&self) -> Result<&Charge, DocError> {
        self.charge.as_ref().ok_or_else(|| semantic("charges", "missing"))
    }

    /// The parabolic cocycle with its named potentials as variables.
    pub fn symbolic_cocycle(&self) -> Result<Cocycle<Poly>, DocError> {
        let b = self.require_branching()?;
        match &self.cocycle {
            Some(CocycleBlock::Parabolic { potentials }) => {
                let u: Vec<Poly> = potentials.iter().map(|s| Poly::var(s)).collect();
                Ok(parabolic_coboundary(&self.tri, b, &u))
            }
            Some(CocycleBlock::Numeric { .. }) => Err(semantic("cocycle", "numeric cocycle has no symbolic form")),
            None => Err(semantic("cocycle", "missing")),
        }
    }

    /// Numeric values, or the parabolic potentials drawn from `[-2, 2]²` with `seed`.
    pub fn numeric_cocycle(&self, seed: u64) -> Result<Cocycle<Complex64>, DocError> {
        let b = self.require_branching()?;
        match &self.cocycle {
            Some(CocycleBlock::Parabolic { potentials }) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let u: Vec<Complex64> =
                    potentials.iter().map(|_| Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))).collect();
                Ok(parabolic_coboundary(&self.tri, b, &u))
            }
            Some(CocycleBlock::Numeric { values }) => {
                let list: Vec<[usize; 3]> = (0..self.tri.edge_count())
                    .map(|e| {
                        let (t, i) = self.tri.edge_class(e).germs[0];
                        let (p, q) = EDGE_VERTS[i];
                        if b.system.points(&self.tri, t, p, q) {
                            [t, p as usize, q as usize]
                        } else {
                            [t, q as usize, p as usize]
                        }
                    })
                    .collect();
                Ok(numeric_values(&self.tri, &list, values))
            }
            None => Err(semantic("cocycle", "missing")),
        }
    }
}

fn potentials(n: usize) -> CocycleBlock {
    CocycleBlock::Parabolic { potentials: (0..n).map(|k| format!("u{k}")).collect() }
}

fn decorated(name: &str, tri: &Triangulation, h: &BTreeSet<usize>, b: &Branching, c: &Charge) -> TriangulationDocument {
    TriangulationDocument::from_parts(name, tri, h, Some(b), Some(potentials(tri.vertex_count())), Some(c))
}

/// Transit of the double's decorations along one move.
fn double_image(name: &str, m: &MoveSpec) -> TriangulationDocument {
    let (t, h) = census::s3_double();
    let b = total_order_branching(&t, &[0, 1, 2, 3]).expect("double is quasi-regular");
    let c = solve_charge(&t, &h).expect("double has charges");
    let (t2, h2, corr) = apply_move(&t, &h, m).expect("move applies to the double");
    let b2 = branch_transit(&t2, &b, &corr, m).expect("branching transits").remove(0);
    let c2 = charge_transit(&t, &c, &t2, &h2, &corr, m).expect("charge transits").charge;
    decorated(name, &t2, &h2, &b2, &c2)
}

/// Decorated census documents: identity-order branchings, named parabolic potentials, solved charges.
pub fn census_documents() -> Vec<TriangulationDocument> {
    let (t, h) = census::s3_double();
    let b = total_order_branching(&t, &[0, 1, 2, 3]).expect("double is quasi-regular");
    let c = solve_charge(&t, &h).expect("double has charges");
    let double = decorated("s3_double", &t, &h, &b, &c);
    let triple = double_image("s3_triple", &MoveSpec::TwoThree { face: 0 });
    let bubble = double_image("s3_double_bubble", &MoveSpec::Bubble { face: t.face(0, 3), h_edge: t.edge_between(0, 0, 1).0 });
    let (t, h) = census::s3_pentachoron();
    let b = total_order_branching(&t, &[0, 1, 2, 3, 4]).expect("pentachoron is quasi-regular");
    let c = solve_charge(&t, &h).expect("pentachoron has charges");
    let penta = decorated("s3_pentachoron", &t, &h, &b, &c);
    vec![double, triple, bubble, penta]
}

pub fn census_document(name: &str) -> Result<TriangulationDocument, DocError> {
    census_documents().into_iter().find(|d| d.name == name).ok_or_else(|| DocError::UnknownCensus(name.into()))
}

/// One line of a structured report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    pub status: CheckStatus,
    pub measured: Value,
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
}

impl CheckRecord {
    pub fn new(id: &str, ok: bool, measured: impl Serialize, tolerance: Option<f64>) -> Self {
        CheckRecord {
            id: id.into(),
            status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
            measured: serde_json::to_value(measured).expect("measured values serialize"),
            tolerance,
        }
    }
}
