//! Abstract syntax of `L_PA(I)`, `L_PA(𝓘)` and the `O`-extension.
//!
//! Numerals are held in a compact `Num` form: `Num(n)` abbreviates `n`
//! nested `S(·)` over `0` and the smart constructors normalize
//! `S(Num(n))` to `Num(n+1)`, so structural equality coincides with
//! equality of the fully expanded terms while Theorem-4.1-sized numerals
//! (Gödel numbers of formulas) stay representable.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero as _};

use crate::error::{CoreError, Result};
use crate::ordinal::Ordinal;

/// First-order variable. Canonical names are `v0, v1, …`; any other
/// identifier is admitted by the parser. The total order puts canonical
/// names first (by index), then named variables lexicographically.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Var {
    Canon(u32),
    Named(Arc<str>),
}

impl Var {
    pub fn canon(k: u32) -> Var {
        Var::Canon(k)
    }

    pub fn named(name: &str) -> Var {
        if let Some(rest) = name.strip_prefix('v') {
            if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) && (rest == "0" || !rest.starts_with('0')) {
                if let Ok(k) = rest.parse() {
                    return Var::Canon(k);
                }
            }
        }
        Var::Named(name.into())
    }

    pub fn name(&self) -> String {
        match self {
            Var::Canon(k) => format!("v{k}"),
            Var::Named(s) => s.to_string(),
        }
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Var::Canon(a), Var::Canon(b)) => a.cmp(b),
            (Var::Canon(_), Var::Named(_)) => Ordering::Less,
            (Var::Named(_), Var::Canon(_)) => Ordering::Greater,
            (Var::Named(a), Var::Named(b)) => a.cmp(b),
        }
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl serde::Serialize for Var {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.name())
    }
}

impl<'de> serde::Deserialize<'de> for Var {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        Ok(Var::named(&s))
    }
}

/// Terms of the arithmetic language. `Triple` is the pairing bijection
/// symbol `⟨·,·,·⟩`; `Num(n)` is the compact numeral (n ≥ 1, see module
/// docs; the numeral 0 is `Zero`).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, serde::Serialize, serde::Deserialize)]
pub enum Term {
    Zero,
    Num(BigUint),
    Succ(Box<Term>),
    Plus(Box<Term>, Box<Term>),
    Times(Box<Term>, Box<Term>),
    Triple(Box<Term>, Box<Term>, Box<Term>),
    Var(Var),
}

impl Term {
    /// `S(t)`, normalizing numerals.
    pub fn succ(t: Term) -> Term {
        match t {
            Term::Zero => Term::Num(BigUint::one()),
            Term::Num(n) => Term::Num(n + 1u32),
            other => Term::Succ(Box::new(other)),
        }
    }

    pub fn plus(a: Term, b: Term) -> Term {
        Term::Plus(Box::new(a), Box::new(b))
    }

    pub fn times(a: Term, b: Term) -> Term {
        Term::Times(Box::new(a), Box::new(b))
    }

    pub fn triple(a: Term, b: Term, c: Term) -> Term {
        Term::Triple(Box::new(a), Box::new(b), Box::new(c))
    }

    pub fn var(v: Var) -> Term {
        Term::Var(v)
    }

    /// The numeral `n̄`.
    pub fn numeral(n: impl Into<BigUint>) -> Term {
        let n = n.into();
        if n.is_zero() {
            Term::Zero
        } else {
            Term::Num(n)
        }
    }

    /// Value of a closed numeral, if this term is one.
    pub fn numeral_value(&self) -> Option<BigUint> {
        match self {
            Term::Zero => Some(BigUint::zero()),
            Term::Num(n) => Some(n.clone()),
            _ => None,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Zero | Term::Num(_) => {}
            Term::Succ(t) => t.collect_vars(out),
            Term::Plus(a, b) | Term::Times(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Term::Triple(a, b, c) => {
                a.collect_vars(out);
                b.collect_vars(out);
                c.collect_vars(out);
            }
            Term::Var(v) => {
                out.insert(v.clone());
            }
        }
    }

    /// Substitutes `t` for every occurrence of `x`.
    pub fn substitute(&self, x: &Var, t: &Term) -> Term {
        match self {
            Term::Zero | Term::Num(_) => self.clone(),
            Term::Succ(inner) => Term::succ(inner.substitute(x, t)),
            Term::Plus(a, b) => Term::plus(a.substitute(x, t), b.substitute(x, t)),
            Term::Times(a, b) => Term::times(a.substitute(x, t), b.substitute(x, t)),
            Term::Triple(a, b, c) => {
                Term::triple(a.substitute(x, t), b.substitute(x, t), c.substitute(x, t))
            }
            Term::Var(v) => {
                if v == x {
                    t.clone()
                } else {
                    self.clone()
                }
            }
        }
    }
}

/// Operator symbol: plain `Pr_i` or superscripted `Pr^α_i` with `α < ε₀·ω`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, serde::Serialize, serde::Deserialize)]
pub enum OperatorId {
    Plain(u32),
    Strat(Ordinal, u32),
}

impl OperatorId {
    pub fn index(&self) -> u32 {
        match self {
            OperatorId::Plain(i) | OperatorId::Strat(_, i) => *i,
        }
    }

    pub fn superscript(&self) -> Option<&Ordinal> {
        match self {
            OperatorId::Plain(_) => None,
            OperatorId::Strat(a, _) => Some(a),
        }
    }
}

/// Formulas over the primitive formers `¬`, `→`, `∀` and operators.
/// `∧, ∨, ↔, ∃` exist only as parser sugar with fixed expansions.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, serde::Serialize, serde::Deserialize)]
pub enum Formula {
    Eq(Term, Term),
    /// `x ∈ W_t` primitive membership atom.
    InW(Term, Term),
    /// `O(t)` — only in the `O`-extension dialect.
    OAtom(Term),
    /// `Phi(e, x, y)` — the graph relation `φ_e(x) = y`.
    PhiAtom(Term, Term, Term),
    Not(Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(Var, Box<Formula>),
    Op(OperatorId, Box<Formula>),
}

impl Formula {
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn forall(v: Var, f: Formula) -> Formula {
        Formula::Forall(v, Box::new(f))
    }

    pub fn op(id: OperatorId, f: Formula) -> Formula {
        Formula::Op(id, Box::new(f))
    }

    pub fn op_plain(i: u32, f: Formula) -> Formula {
        Formula::op(OperatorId::Plain(i), f)
    }

    pub fn op_strat(a: Ordinal, i: u32, f: Formula) -> Formula {
        Formula::op(OperatorId::Strat(a, i), f)
    }

    /// Sugar expansion `φ ∧ ψ := ¬(φ → ¬ψ)`.
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::not(Formula::implies(a, Formula::not(b)))
    }

    /// Sugar expansion `φ ∨ ψ := ¬φ → ψ`.
    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::implies(Formula::not(a), b)
    }

    /// Sugar expansion `φ ↔ ψ := (φ → ψ) ∧ (ψ → φ)`.
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(
            Formula::implies(a.clone(), b.clone()),
            Formula::implies(b, a),
        )
    }

    /// Sugar expansion `∃x φ := ¬∀x ¬φ`.
    pub fn exists(v: Var, f: Formula) -> Formula {
        Formula::not(Formula::forall(v, Formula::not(f)))
    }

    pub fn is_atom(&self) -> bool {
        matches!(
            self,
            Formula::Eq(..) | Formula::InW(..) | Formula::OAtom(..) | Formula::PhiAtom(..)
        )
    }

    /// Standard free variables, with `FV(Pr_i φ) = FV(φ)`.
    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut BTreeSet::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut BTreeSet<Var>, out: &mut BTreeSet<Var>) {
        match self {
            Formula::Eq(a, b) | Formula::InW(a, b) => {
                for v in a.free_vars().union(&b.free_vars()) {
                    if !bound.contains(v) {
                        out.insert(v.clone());
                    }
                }
            }
            Formula::OAtom(t) => {
                for v in t.free_vars() {
                    if !bound.contains(&v) {
                        out.insert(v);
                    }
                }
            }
            Formula::PhiAtom(a, b, c) => {
                for t in [a, b, c] {
                    for v in t.free_vars() {
                        if !bound.contains(&v) {
                            out.insert(v);
                        }
                    }
                }
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(v, f) => {
                let fresh = bound.insert(v.clone());
                f.collect_free(bound, out);
                if fresh {
                    bound.remove(v);
                }
            }
            Formula::Op(_, f) => f.collect_free(bound, out),
        }
    }

    /// Capture-avoiding substitution `φ(x|t)`. With `rename` set, bound
    /// variables that would capture are renamed to alphabetic variants;
    /// otherwise capture is an error.
    pub fn substitute(&self, x: &Var, t: &Term, rename: bool) -> Result<Formula> {
        if !self.free_vars().contains(x) {
            return Ok(self.clone());
        }
        let t_vars = t.free_vars();
        self.subst_inner(x, t, &t_vars, rename)
    }

    fn subst_inner(
        &self,
        x: &Var,
        t: &Term,
        t_vars: &BTreeSet<Var>,
        rename: bool,
    ) -> Result<Formula> {
        Ok(match self {
            Formula::Eq(a, b) => Formula::Eq(a.substitute(x, t), b.substitute(x, t)),
            Formula::InW(a, b) => Formula::InW(a.substitute(x, t), b.substitute(x, t)),
            Formula::OAtom(a) => Formula::OAtom(a.substitute(x, t)),
            Formula::PhiAtom(a, b, c) => Formula::PhiAtom(
                a.substitute(x, t),
                b.substitute(x, t),
                c.substitute(x, t),
            ),
            Formula::Not(f) => Formula::not(f.subst_inner(x, t, t_vars, rename)?),
            Formula::Implies(a, b) => Formula::implies(
                a.subst_inner(x, t, t_vars, rename)?,
                b.subst_inner(x, t, t_vars, rename)?,
            ),
            Formula::Forall(v, f) => {
                if v == x {
                    // Bound occurrence; substitution stops here.
                    return Ok(self.clone());
                }
                if !f.free_vars().contains(x) {
                    return Ok(self.clone());
                }
                if t_vars.contains(v) {
                    if !rename {
                        return Err(CoreError::Capture { var: v.name() });
                    }
                    let mut avoid = f.free_vars();
                    avoid.extend(t_vars.iter().cloned());
                    avoid.insert(x.clone());
                    let fresh = fresh_var(&avoid);
                    let renamed = f.substitute(v, &Term::var(fresh.clone()), true)?;
                    Formula::forall(fresh, renamed.subst_inner(x, t, t_vars, rename)?)
                } else {
                    Formula::forall(v.clone(), f.subst_inner(x, t, t_vars, rename)?)
                }
            }
            Formula::Op(id, f) => Formula::op(id.clone(), f.subst_inner(x, t, t_vars, rename)?),
        })
    }

    /// `φ^s`: replaces every free variable simultaneously by the numeral
    /// of its `s`-value. Errors when `s` is undefined on a free variable.
    pub fn assign_substitute(&self, s: &Assignment) -> Result<Sentence> {
        let mut out = self.clone();
        for v in self.free_vars() {
            let value = s
                .get(&v)
                .ok_or_else(|| CoreError::UnassignedVar(v.name()))?;
            // Numerals are closed, so iterated substitution in any order
            // agrees with the simultaneous one.
            out = out.substitute(&v, &Term::numeral(value.clone()), false)?;
        }
        Ok(Sentence(out))
    }

    /// Deterministic representative of the generic universal closure:
    /// `∀x₁…∀xₙ φ` with the free variables in canonical order.
    pub fn universal_closure(&self) -> Sentence {
        let mut out = self.clone();
        for v in self.free_vars().into_iter().rev() {
            out = Formula::forall(v, out);
        }
        Sentence(out)
    }

    /// Alphabetic-variant equality (bound renaming respecting binding).
    pub fn alpha_equal(&self, other: &Formula) -> bool {
        alpha_eq(self, other, &mut Vec::new())
    }

    /// Canonical alphabetic variant: bound variables renamed, in traversal
    /// order, to the first canonical names not free in the formula.
    pub fn alpha_normalize(&self) -> Formula {
        let free = self.free_vars();
        let mut counter = 0u32;
        self.normalize_inner(&free, &mut counter, &BTreeMap::new())
    }

    fn normalize_inner(
        &self,
        free: &BTreeSet<Var>,
        counter: &mut u32,
        env: &BTreeMap<Var, Var>,
    ) -> Formula {
        let subst_term = |t: &Term| rename_term(t, env);
        match self {
            Formula::Eq(a, b) => Formula::Eq(subst_term(a), subst_term(b)),
            Formula::InW(a, b) => Formula::InW(subst_term(a), subst_term(b)),
            Formula::OAtom(a) => Formula::OAtom(subst_term(a)),
            Formula::PhiAtom(a, b, c) => {
                Formula::PhiAtom(subst_term(a), subst_term(b), subst_term(c))
            }
            Formula::Not(f) => Formula::not(f.normalize_inner(free, counter, env)),
            Formula::Implies(a, b) => Formula::implies(
                a.normalize_inner(free, counter, env),
                b.normalize_inner(free, counter, env),
            ),
            Formula::Forall(v, f) => {
                let fresh = loop {
                    let cand = Var::Canon(*counter);
                    *counter += 1;
                    if !free.contains(&cand) {
                        break cand;
                    }
                };
                let mut env2 = env.clone();
                env2.insert(v.clone(), fresh.clone());
                Formula::forall(fresh, f.normalize_inner(free, counter, &env2))
            }
            Formula::Op(id, f) => Formula::op(id.clone(), f.normalize_inner(free, counter, env)),
        }
    }
}

/// Simultaneous variable renaming on terms (each occurrence mapped once).
fn rename_term(t: &Term, env: &BTreeMap<Var, Var>) -> Term {
    match t {
        Term::Zero | Term::Num(_) => t.clone(),
        Term::Succ(inner) => Term::succ(rename_term(inner, env)),
        Term::Plus(a, b) => Term::plus(rename_term(a, env), rename_term(b, env)),
        Term::Times(a, b) => Term::times(rename_term(a, env), rename_term(b, env)),
        Term::Triple(a, b, c) => Term::triple(
            rename_term(a, env),
            rename_term(b, env),
            rename_term(c, env),
        ),
        Term::Var(v) => Term::var(env.get(v).cloned().unwrap_or_else(|| v.clone())),
    }
}

/// Smallest canonical variable outside `avoid`.
pub fn fresh_var(avoid: &BTreeSet<Var>) -> Var {
    let mut k = 0;
    loop {
        let cand = Var::Canon(k);
        if !avoid.contains(&cand) {
            return cand;
        }
        k += 1;
    }
}

fn alpha_eq(a: &Formula, b: &Formula, pairs: &mut Vec<(Var, Var)>) -> bool {
    match (a, b) {
        (Formula::Eq(a1, a2), Formula::Eq(b1, b2))
        | (Formula::InW(a1, a2), Formula::InW(b1, b2)) => {
            term_alpha_eq(a1, b1, pairs) && term_alpha_eq(a2, b2, pairs)
        }
        (Formula::OAtom(a1), Formula::OAtom(b1)) => term_alpha_eq(a1, b1, pairs),
        (Formula::PhiAtom(a1, a2, a3), Formula::PhiAtom(b1, b2, b3)) => {
            term_alpha_eq(a1, b1, pairs)
                && term_alpha_eq(a2, b2, pairs)
                && term_alpha_eq(a3, b3, pairs)
        }
        (Formula::Not(f), Formula::Not(g)) => alpha_eq(f, g, pairs),
        (Formula::Implies(a1, a2), Formula::Implies(b1, b2)) => {
            alpha_eq(a1, b1, pairs) && alpha_eq(a2, b2, pairs)
        }
        (Formula::Forall(v, f), Formula::Forall(w, g)) => {
            pairs.push((v.clone(), w.clone()));
            let r = alpha_eq(f, g, pairs);
            pairs.pop();
            r
        }
        (Formula::Op(i, f), Formula::Op(j, g)) => i == j && alpha_eq(f, g, pairs),
        _ => false,
    }
}

fn term_alpha_eq(a: &Term, b: &Term, pairs: &[(Var, Var)]) -> bool {
    match (a, b) {
        (Term::Zero, Term::Zero) => true,
        (Term::Num(m), Term::Num(n)) => m == n,
        (Term::Succ(x), Term::Succ(y)) => term_alpha_eq(x, y, pairs),
        (Term::Plus(x1, x2), Term::Plus(y1, y2))
        | (Term::Times(x1, x2), Term::Times(y1, y2)) => {
            term_alpha_eq(x1, y1, pairs) && term_alpha_eq(x2, y2, pairs)
        }
        (Term::Triple(x1, x2, x3), Term::Triple(y1, y2, y3)) => {
            term_alpha_eq(x1, y1, pairs)
                && term_alpha_eq(x2, y2, pairs)
                && term_alpha_eq(x3, y3, pairs)
        }
        (Term::Var(v), Term::Var(w)) => {
            // The innermost binder correspondence decides; free variables
            // must match exactly and must not be captured by the pairing.
            for (bv, bw) in pairs.iter().rev() {
                match (v == bv, w == bw) {
                    (true, true) => return true,
                    (true, false) | (false, true) => return false,
                    (false, false) => {}
                }
            }
            v == w
        }
        _ => false,
    }
}

/// A formula with no free variables.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, serde::Serialize)]
pub struct Sentence(Formula);

impl<'de> serde::Deserialize<'de> for Sentence {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let f = Formula::deserialize(de)?;
        Sentence::new(f).map_err(serde::de::Error::custom)
    }
}

impl Sentence {
    pub fn new(f: Formula) -> Result<Sentence> {
        if f.free_vars().is_empty() {
            Ok(Sentence(f))
        } else {
            Err(CoreError::Precondition(format!(
                "sentence has free variables {:?}",
                f.free_vars()
            )))
        }
    }

    pub fn formula(&self) -> &Formula {
        &self.0
    }

    pub fn into_formula(self) -> Formula {
        self.0
    }

    pub fn alpha_equal(&self, other: &Sentence) -> bool {
        self.0.alpha_equal(&other.0)
    }
}

impl AsRef<Formula> for Sentence {
    fn as_ref(&self) -> &Formula {
        &self.0
    }
}

/// Finite map from variables to naturals; `φ^s` needs it total on `FV(φ)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    map: BTreeMap<Var, BigUint>,
}

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, BigUint)>) -> Assignment {
        Assignment { map: pairs.into_iter().collect() }
    }

    pub fn get(&self, v: &Var) -> Option<&BigUint> {
        self.map.get(v)
    }

    /// `s(x|u)`: the updated copy; the original is untouched.
    pub fn update(&self, x: Var, u: BigUint) -> Assignment {
        let mut map = self.map.clone();
        map.insert(x, u);
        Assignment { map }
    }

    pub fn set(&mut self, x: Var, u: BigUint) {
        self.map.insert(x, u);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &BigUint)> {
        self.map.iter()
    }
}

/// Syntax dialect: `plain` is `L_PA(ω)`, `strat` adds superscripted
/// operators, `o-ext` additionally admits `O(·)` and `Phi(·,·,·)` atoms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Dialect {
    Plain,
    Strat,
    OExt,
}

impl Dialect {
    pub fn allows_strat(self) -> bool {
        self != Dialect::Plain
    }

    pub fn allows_o(self) -> bool {
        self == Dialect::OExt
    }
}

/// Checks that `f` stays inside the dialect.
pub fn check_dialect(f: &Formula, dialect: Dialect) -> Result<()> {
    match f {
        Formula::Eq(..) | Formula::InW(..) => Ok(()),
        Formula::OAtom(..) | Formula::PhiAtom(..) => {
            if dialect.allows_o() {
                Ok(())
            } else {
                Err(CoreError::Dialect("O-atom outside the O-extension".into()))
            }
        }
        Formula::Not(g) => check_dialect(g, dialect),
        Formula::Implies(a, b) => {
            check_dialect(a, dialect)?;
            check_dialect(b, dialect)
        }
        Formula::Forall(_, g) => check_dialect(g, dialect),
        Formula::Op(id, g) => {
            if matches!(id, OperatorId::Strat(..)) && !dialect.allows_strat() {
                return Err(CoreError::Dialect(
                    "superscripted operator outside the stratified dialect".into(),
                ));
            }
            check_dialect(g, dialect)
        }
    }
}

/// True when the formula is a plain `L_PA(ω)` formula (no superscripts,
/// no `O`-extension atoms).
pub fn is_plain(f: &Formula) -> bool {
    check_dialect(f, Dialect::Plain).is_ok()
}
