//! Exact Dehn maps on decorated tetrahedra.
//!
//! `C ∧_Z C` is modelled as the exterior square of the rational span of
//! monomials. Symbols whose name starts with [`INT_PREFIX`] stand for integers
//! (charges, flattenings); they are pulled out of the wedge into its
//! coefficients. The symbol [`I_PI`] stands for `iπ`.

use crate::perm::{self, Perm4};
use crate::poly::{Monomial, Poly, I_PI};
use crate::scissors::{DClass, DTetrahedron, POSITION_EDGES};
use num_rational::BigRational;
use std::collections::BTreeMap;
use std::fmt;

/// Prefix of integer-valued symbols.
pub const INT_PREFIX: char = '#';

pub fn int_var(name: &str) -> Poly {
    Poly::var(&format!("{INT_PREFIX}{name}"))
}

/// Finite sums `Σ k·(m1 ∧ m2)` with `m1 > m2` and `k` a polynomial in integer symbols.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FormalWedge {
    terms: BTreeMap<(Monomial, Monomial), Poly>,
}

fn split(m: &Monomial) -> (Monomial, Monomial) {
    let (ints, geo): (Vec<_>, Vec<_>) = m.0.iter().cloned().partition(|(s, _)| s.starts_with(INT_PREFIX));
    (Monomial(geo), Monomial(ints))
}

fn coefficient(m: Monomial, q: &BigRational) -> Poly {
    let mut p = Poly::zero();
    p.add_term(m, q.clone());
    p
}

impl FormalWedge {
    pub fn zero() -> Self {
        FormalWedge::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Monomial, Monomial), &Poly)> {
        self.terms.iter()
    }

    /// Adds `k·(m1 ∧ m2)`, normalizing the order of the factors.
    pub fn add_term(&mut self, m1: Monomial, m2: Monomial, k: Poly) {
        if m1 == m2 || k.is_zero() {
            return;
        }
        let (key, k) = if m1 > m2 { ((m1, m2), k) } else { ((m2, m1), -&k) };
        let entry = self.terms.entry(key.clone()).or_default();
        *entry = &*entry + &k;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, o: &FormalWedge) -> FormalWedge {
        let mut out = self.clone();
        for ((m1, m2), k) in &o.terms {
            out.add_term(m1.clone(), m2.clone(), k.clone());
        }
        out
    }

    pub fn sub(&self, o: &FormalWedge) -> FormalWedge {
        self.add(&o.scale(&Poly::int(-1)))
    }

    /// Multiplies by an integer-valued coefficient.
    pub fn scale(&self, k: &Poly) -> FormalWedge {
        let mut out = FormalWedge::zero();
        for ((m1, m2), c) in &self.terms {
            out.add_term(m1.clone(), m2.clone(), c * k);
        }
        out
    }

    /// Quotient by every wedge with `iπ`, i.e. the image in `C ∧ (C/iπZ)`.
    pub fn modulo_i_pi(&self) -> FormalWedge {
        let pi = Monomial::var(I_PI);
        let terms = self.terms.iter().filter(|((m1, m2), _)| *m1 != pi && *m2 != pi).map(|(k, v)| (k.clone(), v.clone())).collect();
        FormalWedge { terms }
    }

    /// Canonical s-expression, e.g. `(+ (* 1 (∧ b a)))`.
    pub fn to_sexpr(&self) -> String {
        let body: Vec<String> = self.terms.iter().map(|((m1, m2), k)| format!("(* ({k}) (∧ {m1} {m2}))")).collect();
        format!("(+{}{})", if body.is_empty() { "" } else { " " }, body.join(" "))
    }
}

impl fmt::Display for FormalWedge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sexpr())
    }
}

/// Bilinear expansion of `a ∧ b` over monomials.
pub fn wedge(a: &Poly, b: &Poly) -> FormalWedge {
    let mut out = FormalWedge::zero();
    for (ma, qa) in a.terms() {
        let (ga, ia) = split(ma);
        for (mb, qb) in b.terms() {
            let (gb, ib) = split(mb);
            let k = &coefficient(ia.clone(), qa) * &coefficient(ib, qb);
            out.add_term(ga.clone(), gb, k);
        }
    }
    out
}

/// Combinatorial flattening `(c0, c1, c2 - 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flattening(pub [Poly; 3]);

impl Flattening {
    pub fn of_charge(c: [i64; 3]) -> Self {
        Self::of_symbolic([Poly::int(c[0]), Poly::int(c[1]), Poly::int(c[2])])
    }

    /// Flattening of a symbolic charge; panics unless the charge sums to 1.
    pub fn of_symbolic(c: [Poly; 3]) -> Self {
        let f = Flattening([c[0].clone(), c[1].clone(), &c[2] - &Poly::int(1)]);
        assert!(f.sum().is_zero(), "charge does not sum to 1");
        f
    }

    pub fn sum(&self) -> Poly {
        &(&self.0[0] + &self.0[1]) + &self.0[2]
    }

    /// Flattening carried along the permutation without recomputation.
    pub fn transported(&self, s: &Perm4) -> Self {
        Flattening(slot_permuted(&self.0, s))
    }
}

fn slot_permuted(v: &[Poly; 3], s: &Perm4) -> [Poly; 3] {
    std::array::from_fn(|j| {
        let (a, b) = POSITION_EDGES[j];
        v[crate::scissors::slot_of(s[a] as usize, s[b] as usize)].clone()
    })
}

/// `* (p0 + *iπ f0) ∧ (p1 + *iπ f1)`.
pub fn dehn_dp_parts(sign: i8, p: &[Poly; 3], flat: &Flattening) -> FormalWedge {
    let star = Poly::int(sign as i64);
    let ipi = &Poly::i_pi() * &star;
    let first = &p[0] + &(&ipi * &flat.0[0]);
    let second = &p[1] + &(&ipi * &flat.0[1]);
    wedge(&first, &second).scale(&star)
}

/// `δ_DP` of a parabolic decorated tetrahedron.
pub fn dehn_dp(x: &DTetrahedron<Poly>) -> FormalWedge {
    dehn_dp_parts(x.sign, &x.log_parameters(), &Flattening::of_charge(x.charge))
}

/// Sum of `δ_DP` over a class.
pub fn dehn_of_class(class: &DClass<Poly>) -> FormalWedge {
    class.members.iter().fold(FormalWedge::zero(), |acc, m| acc.add(&dehn_dp(m)))
}

/// `δ_DP(T0) - δ_DP(T1)` vanishes.
pub fn verify_five_term_dp(before: &[FormalWedge], after: &[FormalWedge]) -> bool {
    let sum = |v: &[FormalWedge]| v.iter().fold(FormalWedge::zero(), |acc, w| acc.add(w));
    sum(before).sub(&sum(after)).is_zero()
}

/// Ideal tetrahedron with formal logarithms of its moduli.
///
/// `logs[2]` is eliminated by `log w0 + log w1 + log w2 = -iπ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolicITetrahedron {
    pub sign: i8,
    pub logs: [Poly; 3],
    pub flattening: Flattening,
}

impl SymbolicITetrahedron {
    pub fn new(sign: i8, log_w0: Poly, log_w1: Poly, flattening: Flattening) -> Self {
        let log_w2 = &(&(-&Poly::i_pi()) - &log_w0) - &log_w1;
        SymbolicITetrahedron { sign, logs: [log_w0, log_w1, log_w2], flattening }
    }

    /// `p_I(s, X)`: logarithms follow the edge and change sign with `ε(s)`.
    pub fn act(&self, s: &Perm4) -> Self {
        let eps = Poly::int(perm::sign(s) as i64);
        SymbolicITetrahedron {
            sign: self.sign * perm::sign(s),
            logs: slot_permuted(&self.logs, s).map(|l| &l * &eps),
            flattening: self.flattening.transported(s),
        }
    }

    /// `δ_I` before passing to the quotient.
    pub fn dehn_unreduced(&self) -> FormalWedge {
        dehn_dp_parts(self.sign, &self.logs, &self.flattening)
    }
}

/// `δ_I` with values in `C ∧ (C/iπZ)`.
pub fn dehn_i(x: &SymbolicITetrahedron) -> FormalWedge {
    x.dehn_unreduced().modulo_i_pi()
}
