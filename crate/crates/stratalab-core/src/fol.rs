//! Reduction of the base logic to first-order logic.
//!
//! Every operator subformula `Op(k, ψ)` with free variables `x₁ < … < xₘ`
//! becomes an uninterpreted atom applied to `(x₁, …, xₘ)`, keyed by the
//! operator together with the canonical alphabetic-variant normal form of
//! `ψ` (free variables renamed to the first `m` canonical names, bound
//! variables normalized). The key set is in bijection with the Gödel codes
//! the spec names, and the three base-logic requirements — assignment
//! irrelevance outside `FV`, alphabetic-variant invariance, variable
//! renaming — hold by construction.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;

use crate::formula::{godel, Formula, OperatorId, Term, Var};

/// Terms of the tableau layer: object terms plus free (meta) variables
/// and Skolem applications.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, serde::Serialize, serde::Deserialize)]
pub enum FTerm {
    Zero,
    Num(BigUint),
    Succ(Box<FTerm>),
    Plus(Box<FTerm>, Box<FTerm>),
    Times(Box<FTerm>, Box<FTerm>),
    Triple(Box<FTerm>, Box<FTerm>, Box<FTerm>),
    Var(Var),
    Meta(u32),
    Sk(u32, Vec<FTerm>),
}

impl FTerm {
    pub fn succ(t: FTerm) -> FTerm {
        match t {
            FTerm::Zero => FTerm::Num(BigUint::one()),
            FTerm::Num(n) => FTerm::Num(n + 1u32),
            other => FTerm::Succ(Box::new(other)),
        }
    }

    pub fn from_term(t: &Term) -> FTerm {
        match t {
            Term::Zero => FTerm::Zero,
            Term::Num(n) => FTerm::Num(n.clone()),
            Term::Succ(x) => FTerm::succ(FTerm::from_term(x)),
            Term::Plus(a, b) => {
                FTerm::Plus(Box::new(FTerm::from_term(a)), Box::new(FTerm::from_term(b)))
            }
            Term::Times(a, b) => {
                FTerm::Times(Box::new(FTerm::from_term(a)), Box::new(FTerm::from_term(b)))
            }
            Term::Triple(a, b, c) => FTerm::Triple(
                Box::new(FTerm::from_term(a)),
                Box::new(FTerm::from_term(b)),
                Box::new(FTerm::from_term(c)),
            ),
            Term::Var(v) => FTerm::Var(v.clone()),
        }
    }

    fn collect_metas(&self, out: &mut BTreeSet<u32>) {
        match self {
            FTerm::Zero | FTerm::Num(_) | FTerm::Var(_) => {}
            FTerm::Succ(t) => t.collect_metas(out),
            FTerm::Plus(a, b) | FTerm::Times(a, b) => {
                a.collect_metas(out);
                b.collect_metas(out);
            }
            FTerm::Triple(a, b, c) => {
                a.collect_metas(out);
                b.collect_metas(out);
                c.collect_metas(out);
            }
            FTerm::Meta(m) => {
                out.insert(*m);
            }
            FTerm::Sk(_, args) => {
                for a in args {
                    a.collect_metas(out);
                }
            }
        }
    }

    fn contains_meta(&self, m: u32) -> bool {
        let mut set = BTreeSet::new();
        self.collect_metas(&mut set);
        set.contains(&m)
    }
}

/// Identity of an operator atom: the operator plus the canonical variant
/// of its operand. Equality on keys matches equality of the spec's Gödel
/// codes (the numbering is injective on canonical forms).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, serde::Serialize, serde::Deserialize)]
pub struct OpKey {
    pub op: OperatorId,
    pub canon: Arc<Formula>,
}

impl OpKey {
    /// The Gödel code `c` of the canonical variant, materialized on demand.
    pub fn code(&self) -> BigUint {
        godel(&self.canon)
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, serde::Serialize, serde::Deserialize)]
pub enum FolAtom {
    Eq(FTerm, FTerm),
    InW(FTerm, FTerm),
    O(FTerm),
    Phi(FTerm, FTerm, FTerm),
    Op(OpKey, Vec<FTerm>),
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, serde::Serialize, serde::Deserialize)]
pub enum FolFormula {
    Atom(FolAtom),
    Not(Box<FolFormula>),
    Implies(Box<FolFormula>, Box<FolFormula>),
    Forall(Var, Box<FolFormula>),
}

impl FolFormula {
    pub fn not(f: FolFormula) -> FolFormula {
        FolFormula::Not(Box::new(f))
    }

    pub fn implies(a: FolFormula, b: FolFormula) -> FolFormula {
        FolFormula::Implies(Box::new(a), Box::new(b))
    }

    pub fn forall(v: Var, f: FolFormula) -> FolFormula {
        FolFormula::Forall(v, Box::new(f))
    }

    /// Substitutes `t` for the object variable `v` (stops at shadowing
    /// binders; operator-atom keys are untouched).
    pub fn subst_var(&self, v: &Var, t: &FTerm) -> FolFormula {
        match self {
            FolFormula::Atom(a) => FolFormula::Atom(a.subst_var(v, t)),
            FolFormula::Not(f) => FolFormula::not(f.subst_var(v, t)),
            FolFormula::Implies(a, b) => {
                FolFormula::implies(a.subst_var(v, t), b.subst_var(v, t))
            }
            FolFormula::Forall(w, f) => {
                if w == v {
                    self.clone()
                } else {
                    FolFormula::forall(w.clone(), f.subst_var(v, t))
                }
            }
        }
    }

    pub fn apply_subst(&self, s: &Subst) -> FolFormula {
        match self {
            FolFormula::Atom(a) => FolFormula::Atom(a.apply_subst(s)),
            FolFormula::Not(f) => FolFormula::not(f.apply_subst(s)),
            FolFormula::Implies(a, b) => {
                FolFormula::implies(a.apply_subst(s), b.apply_subst(s))
            }
            FolFormula::Forall(w, f) => FolFormula::forall(w.clone(), f.apply_subst(s)),
        }
    }

    pub fn collect_metas(&self, out: &mut BTreeSet<u32>) {
        match self {
            FolFormula::Atom(a) => a.for_each_term(&mut |t| t.collect_metas(out)),
            FolFormula::Not(f) => f.collect_metas(out),
            FolFormula::Implies(a, b) => {
                a.collect_metas(out);
                b.collect_metas(out);
            }
            FolFormula::Forall(_, f) => f.collect_metas(out),
        }
    }
}

impl FolAtom {
    fn for_each_term(&self, f: &mut impl FnMut(&FTerm)) {
        match self {
            FolAtom::Eq(a, b) | FolAtom::InW(a, b) => {
                f(a);
                f(b);
            }
            FolAtom::O(a) => f(a),
            FolAtom::Phi(a, b, c) => {
                f(a);
                f(b);
                f(c);
            }
            FolAtom::Op(_, args) => {
                for a in args {
                    f(a);
                }
            }
        }
    }

    fn map_terms(&self, f: &mut impl FnMut(&FTerm) -> FTerm) -> FolAtom {
        match self {
            FolAtom::Eq(a, b) => FolAtom::Eq(f(a), f(b)),
            FolAtom::InW(a, b) => FolAtom::InW(f(a), f(b)),
            FolAtom::O(a) => FolAtom::O(f(a)),
            FolAtom::Phi(a, b, c) => FolAtom::Phi(f(a), f(b), f(c)),
            FolAtom::Op(k, args) => FolAtom::Op(k.clone(), args.iter().map(f).collect()),
        }
    }

    fn subst_var(&self, v: &Var, t: &FTerm) -> FolAtom {
        self.map_terms(&mut |term| subst_var_term(term, v, t))
    }

    pub fn apply_subst(&self, s: &Subst) -> FolAtom {
        self.map_terms(&mut |term| s.resolve(term))
    }
}

fn subst_var_term(term: &FTerm, v: &Var, t: &FTerm) -> FTerm {
    match term {
        FTerm::Zero | FTerm::Num(_) | FTerm::Meta(_) => term.clone(),
        FTerm::Var(w) => {
            if w == v {
                t.clone()
            } else {
                term.clone()
            }
        }
        FTerm::Succ(x) => FTerm::succ(subst_var_term(x, v, t)),
        FTerm::Plus(a, b) => FTerm::Plus(
            Box::new(subst_var_term(a, v, t)),
            Box::new(subst_var_term(b, v, t)),
        ),
        FTerm::Times(a, b) => FTerm::Times(
            Box::new(subst_var_term(a, v, t)),
            Box::new(subst_var_term(b, v, t)),
        ),
        FTerm::Triple(a, b, c) => FTerm::Triple(
            Box::new(subst_var_term(a, v, t)),
            Box::new(subst_var_term(b, v, t)),
            Box::new(subst_var_term(c, v, t)),
        ),
        FTerm::Sk(id, args) => {
            FTerm::Sk(*id, args.iter().map(|a| subst_var_term(a, v, t)).collect())
        }
    }
}

/// Meta-variable substitution with fully-resolved lookup.
#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Subst {
    bindings: BTreeMap<u32, FTerm>,
}

impl Subst {
    pub fn new() -> Subst {
        Subst::default()
    }

    pub fn bindings(&self) -> &BTreeMap<u32, FTerm> {
        &self.bindings
    }

    pub fn lookup(&self, m: u32) -> Option<&FTerm> {
        self.bindings.get(&m)
    }

    /// Resolves a term through the bindings (deep walk).
    pub fn resolve(&self, t: &FTerm) -> FTerm {
        match t {
            FTerm::Zero | FTerm::Num(_) | FTerm::Var(_) => t.clone(),
            FTerm::Succ(x) => FTerm::succ(self.resolve(x)),
            FTerm::Plus(a, b) => FTerm::Plus(Box::new(self.resolve(a)), Box::new(self.resolve(b))),
            FTerm::Times(a, b) => {
                FTerm::Times(Box::new(self.resolve(a)), Box::new(self.resolve(b)))
            }
            FTerm::Triple(a, b, c) => FTerm::Triple(
                Box::new(self.resolve(a)),
                Box::new(self.resolve(b)),
                Box::new(self.resolve(c)),
            ),
            FTerm::Meta(m) => match self.bindings.get(m) {
                Some(bound) => self.resolve(bound),
                None => t.clone(),
            },
            FTerm::Sk(id, args) => {
                FTerm::Sk(*id, args.iter().map(|a| self.resolve(a)).collect())
            }
        }
    }

    fn bind(&mut self, m: u32, t: FTerm) {
        self.bindings.insert(m, t);
    }

    /// Unifies two terms, extending the substitution; undoes nothing on
    /// failure (callers clone or track a trail).
    pub fn unify(&mut self, a: &FTerm, b: &FTerm) -> bool {
        let a = self.resolve(a);
        let b = self.resolve(b);
        self.unify_resolved(&a, &b)
    }

    fn unify_resolved(&mut self, a: &FTerm, b: &FTerm) -> bool {
        match (a, b) {
            (FTerm::Meta(m), FTerm::Meta(n)) if m == n => true,
            (FTerm::Meta(m), other) | (other, FTerm::Meta(m)) => {
                if other.contains_meta(*m) {
                    return false;
                }
                self.bind(*m, other.clone());
                true
            }
            (FTerm::Zero, FTerm::Zero) => true,
            (FTerm::Num(x), FTerm::Num(y)) => x == y,
            (FTerm::Num(n), FTerm::Succ(t)) | (FTerm::Succ(t), FTerm::Num(n)) => {
                // S(t) ~ n̄ requires n ≥ 1 and t ~ (n-1)‾.
                if n.is_one() {
                    self.unify(t, &FTerm::Zero)
                } else {
                    self.unify(t, &FTerm::Num(n - 1u32))
                }
            }
            (FTerm::Zero, FTerm::Num(_)) | (FTerm::Num(_), FTerm::Zero) => false,
            (FTerm::Succ(x), FTerm::Succ(y)) => self.unify(x, y),
            (FTerm::Plus(a1, a2), FTerm::Plus(b1, b2))
            | (FTerm::Times(a1, a2), FTerm::Times(b1, b2)) => {
                self.unify(a1, b1) && self.unify(a2, b2)
            }
            (FTerm::Triple(a1, a2, a3), FTerm::Triple(b1, b2, b3)) => {
                self.unify(a1, b1) && self.unify(a2, b2) && self.unify(a3, b3)
            }
            (FTerm::Var(v), FTerm::Var(w)) => v == w,
            (FTerm::Sk(i, xs), FTerm::Sk(j, ys)) => {
                i == j
                    && xs.len() == ys.len()
                    && xs.iter().zip(ys).all(|(x, y)| self.unify(x, y))
            }
            _ => false,
        }
    }

    /// Unifies two atoms with the same shape.
    pub fn unify_atoms(&mut self, a: &FolAtom, b: &FolAtom) -> bool {
        match (a, b) {
            (FolAtom::Eq(a1, a2), FolAtom::Eq(b1, b2))
            | (FolAtom::InW(a1, a2), FolAtom::InW(b1, b2)) => {
                self.unify(a1, b1) && self.unify(a2, b2)
            }
            (FolAtom::O(a1), FolAtom::O(b1)) => self.unify(a1, b1),
            (FolAtom::Phi(a1, a2, a3), FolAtom::Phi(b1, b2, b3)) => {
                self.unify(a1, b1) && self.unify(a2, b2) && self.unify(a3, b3)
            }
            (FolAtom::Op(k1, xs), FolAtom::Op(k2, ys)) => {
                k1 == k2
                    && xs.len() == ys.len()
                    && xs.iter().zip(ys).all(|(x, y)| self.unify(x, y))
            }
            _ => false,
        }
    }
}

/// Reduces a base-logic formula to first-order logic over the operator
/// atom signature.
pub fn reduce_to_fol(f: &Formula) -> FolFormula {
    match f {
        Formula::Eq(a, b) => {
            FolFormula::Atom(FolAtom::Eq(FTerm::from_term(a), FTerm::from_term(b)))
        }
        Formula::InW(a, b) => {
            FolFormula::Atom(FolAtom::InW(FTerm::from_term(a), FTerm::from_term(b)))
        }
        Formula::OAtom(a) => FolFormula::Atom(FolAtom::O(FTerm::from_term(a))),
        Formula::PhiAtom(a, b, c) => FolFormula::Atom(FolAtom::Phi(
            FTerm::from_term(a),
            FTerm::from_term(b),
            FTerm::from_term(c),
        )),
        Formula::Not(g) => FolFormula::not(reduce_to_fol(g)),
        Formula::Implies(a, b) => FolFormula::implies(reduce_to_fol(a), reduce_to_fol(b)),
        Formula::Forall(v, g) => FolFormula::forall(v.clone(), reduce_to_fol(g)),
        Formula::Op(id, g) => {
            let fv: Vec<Var> = g.free_vars().into_iter().collect();
            let canon = canonical_variant(g, &fv);
            let key = OpKey { op: id.clone(), canon: Arc::new(canon) };
            let args = fv.into_iter().map(|v| FTerm::Var(v)).collect();
            FolFormula::Atom(FolAtom::Op(key, args))
        }
    }
}

/// Canonical alphabetic-variant normal form: the given free variables
/// (in canonical order) are renamed to `v0..v(m-1)` and bound variables
/// to `vm, v(m+1), …` in traversal order ─ one pass, capture-free since
/// the two target ranges are disjoint.
pub fn canonical_variant(f: &Formula, free_sorted: &[Var]) -> Formula {
    let free_env: BTreeMap<Var, Var> = free_sorted
        .iter()
        .enumerate()
        .map(|(j, v)| (v.clone(), Var::Canon(j as u32)))
        .collect();
    let mut counter = free_sorted.len() as u32;
    rename_formula(f, &free_env, &mut counter)
}

fn rename_formula(f: &Formula, env: &BTreeMap<Var, Var>, counter: &mut u32) -> Formula {
    match f {
        Formula::Eq(a, b) => Formula::Eq(rename_term(a, env), rename_term(b, env)),
        Formula::InW(a, b) => Formula::InW(rename_term(a, env), rename_term(b, env)),
        Formula::OAtom(a) => Formula::OAtom(rename_term(a, env)),
        Formula::PhiAtom(a, b, c) => {
            Formula::PhiAtom(rename_term(a, env), rename_term(b, env), rename_term(c, env))
        }
        Formula::Not(g) => Formula::not(rename_formula(g, env, counter)),
        Formula::Implies(a, b) => Formula::implies(
            rename_formula(a, env, counter),
            rename_formula(b, env, counter),
        ),
        Formula::Forall(v, g) => {
            let fresh = Var::Canon(*counter);
            *counter += 1;
            let mut env2 = env.clone();
            env2.insert(v.clone(), fresh.clone());
            Formula::forall(fresh, rename_formula(g, &env2, counter))
        }
        Formula::Op(id, g) => Formula::op(id.clone(), rename_formula(g, env, counter)),
    }
}

fn rename_term(t: &Term, env: &BTreeMap<Var, Var>) -> Term {
    match t {
        Term::Zero | Term::Num(_) => t.clone(),
        Term::Succ(x) => Term::succ(rename_term(x, env)),
        Term::Plus(a, b) => Term::plus(rename_term(a, env), rename_term(b, env)),
        Term::Times(a, b) => Term::times(rename_term(a, env), rename_term(b, env)),
        Term::Triple(a, b, c) => {
            Term::triple(rename_term(a, env), rename_term(b, env), rename_term(c, env))
        }
        Term::Var(v) => Term::var(env.get(v).cloned().unwrap_or_else(|| v.clone())),
    }
}

/// Which symbols occur in a root set; drives equality-axiom injection.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct SymbolSet {
    pub has_eq: bool,
    pub has_succ: bool,
    pub has_plus: bool,
    pub has_times: bool,
    pub has_triple: bool,
    pub has_inw: bool,
    pub has_o: bool,
    pub has_phi: bool,
    pub op_arities: BTreeMap<OpKey, usize>,
}

pub fn collect_symbols(fs: &[FolFormula]) -> SymbolSet {
    let mut s = SymbolSet::default();
    for f in fs {
        collect_symbols_formula(f, &mut s);
    }
    s
}

fn collect_symbols_formula(f: &FolFormula, s: &mut SymbolSet) {
    match f {
        FolFormula::Atom(a) => {
            match a {
                FolAtom::Eq(..) => s.has_eq = true,
                FolAtom::InW(..) => s.has_inw = true,
                FolAtom::O(..) => s.has_o = true,
                FolAtom::Phi(..) => s.has_phi = true,
                FolAtom::Op(k, args) => {
                    s.op_arities.insert(k.clone(), args.len());
                }
            }
            a.for_each_term(&mut |t| collect_symbols_term(t, s));
        }
        FolFormula::Not(g) => collect_symbols_formula(g, s),
        FolFormula::Implies(a, b) => {
            collect_symbols_formula(a, s);
            collect_symbols_formula(b, s);
        }
        FolFormula::Forall(_, g) => collect_symbols_formula(g, s),
    }
}

fn collect_symbols_term(t: &FTerm, s: &mut SymbolSet) {
    match t {
        FTerm::Zero | FTerm::Var(_) | FTerm::Meta(_) => {}
        FTerm::Num(_) => s.has_succ = true,
        FTerm::Succ(x) => {
            s.has_succ = true;
            collect_symbols_term(x, s);
        }
        FTerm::Plus(a, b) => {
            s.has_plus = true;
            collect_symbols_term(a, s);
            collect_symbols_term(b, s);
        }
        FTerm::Times(a, b) => {
            s.has_times = true;
            collect_symbols_term(a, s);
            collect_symbols_term(b, s);
        }
        FTerm::Triple(a, b, c) => {
            s.has_triple = true;
            collect_symbols_term(a, s);
            collect_symbols_term(b, s);
            collect_symbols_term(c, s);
        }
        FTerm::Sk(_, args) => {
            for a in args {
                collect_symbols_term(a, s);
            }
        }
    }
}

/// Equality axioms (reflexivity, symmetry, transitivity, and one-position
/// congruence instances) for the symbols in `s`; empty without equality.
pub fn equality_axioms(s: &SymbolSet) -> Vec<FolFormula> {
    if !s.has_eq {
        return Vec::new();
    }
    let v = |k: u32| FTerm::Var(Var::Canon(k));
    let x = || v(0);
    let y = || v(1);
    let z = || v(2);
    let eq = |a: FTerm, b: FTerm| FolFormula::Atom(FolAtom::Eq(a, b));
    let fa = |k: u32, f: FolFormula| FolFormula::forall(Var::Canon(k), f);

    let mut out = Vec::new();
    // ∀x(x=x)
    out.push(fa(0, eq(x(), x())));
    // ∀x∀y(x=y → y=x)
    out.push(fa(0, fa(1, FolFormula::implies(eq(x(), y()), eq(y(), x())))));
    // ∀x∀y∀z(x=y → (y=z → x=z))
    out.push(fa(
        0,
        fa(
            1,
            fa(
                2,
                FolFormula::implies(
                    eq(x(), y()),
                    FolFormula::implies(eq(y(), z()), eq(x(), z())),
                ),
            ),
        ),
    ));

    if s.has_succ {
        fn_congruence(&mut out, 1, &|mut a| FTerm::Succ(Box::new(a.remove(0))));
    }
    if s.has_plus {
        fn_congruence(&mut out, 2, &|mut a| {
            FTerm::Plus(Box::new(a.remove(0)), Box::new(a.remove(0)))
        });
    }
    if s.has_times {
        fn_congruence(&mut out, 2, &|mut a| {
            FTerm::Times(Box::new(a.remove(0)), Box::new(a.remove(0)))
        });
    }
    if s.has_triple {
        fn_congruence(&mut out, 3, &|mut a| {
            FTerm::Triple(
                Box::new(a.remove(0)),
                Box::new(a.remove(0)),
                Box::new(a.remove(0)),
            )
        });
    }
    if s.has_inw {
        pred_congruence(&mut out, 2, &|mut a| FolAtom::InW(a.remove(0), a.remove(0)));
    }
    if s.has_o {
        pred_congruence(&mut out, 1, &|mut a| FolAtom::O(a.remove(0)));
    }
    if s.has_phi {
        pred_congruence(&mut out, 3, &|mut a| {
            FolAtom::Phi(a.remove(0), a.remove(0), a.remove(0))
        });
    }
    for (key, arity) in &s.op_arities {
        if *arity == 0 {
            continue;
        }
        let key = key.clone();
        pred_congruence(&mut out, *arity, &move |a| FolAtom::Op(key.clone(), a));
    }
    out
}

/// One-position congruence slots: `x` is v0, the replacement `y` is v1,
/// the untouched argument slots use v2, v3, ….
fn congruence_slots(arity: usize, pos: usize) -> (Vec<FTerm>, Vec<FTerm>, Vec<u32>) {
    let mut args: Vec<FTerm> = Vec::new();
    let mut quantified = vec![0u32, 1];
    let mut next = 2u32;
    for slot in 0..arity {
        if slot == pos {
            args.push(FTerm::Var(Var::Canon(0)));
        } else {
            args.push(FTerm::Var(Var::Canon(next)));
            quantified.push(next);
            next += 1;
        }
    }
    let mut args2 = args.clone();
    args2[pos] = FTerm::Var(Var::Canon(1));
    (args, args2, quantified)
}

fn fn_congruence(out: &mut Vec<FolFormula>, arity: usize, build: &dyn Fn(Vec<FTerm>) -> FTerm) {
    for pos in 0..arity {
        let (args, args2, quantified) = congruence_slots(arity, pos);
        let eq_xy = FolFormula::Atom(FolAtom::Eq(
            FTerm::Var(Var::Canon(0)),
            FTerm::Var(Var::Canon(1)),
        ));
        let body = FolFormula::implies(
            eq_xy,
            FolFormula::Atom(FolAtom::Eq(build(args), build(args2))),
        );
        let mut f = body;
        for q in quantified.into_iter().rev() {
            f = FolFormula::forall(Var::Canon(q), f);
        }
        out.push(f);
    }
}

fn pred_congruence(out: &mut Vec<FolFormula>, arity: usize, build: &dyn Fn(Vec<FTerm>) -> FolAtom) {
    for pos in 0..arity {
        let (args, args2, quantified) = congruence_slots(arity, pos);
        let eq_xy = FolFormula::Atom(FolAtom::Eq(
            FTerm::Var(Var::Canon(0)),
            FTerm::Var(Var::Canon(1)),
        ));
        let body = FolFormula::implies(
            eq_xy,
            FolFormula::implies(
                FolFormula::Atom(build(args)),
                FolFormula::Atom(build(args2)),
            ),
        );
        let mut f = body;
        for q in quantified.into_iter().rev() {
            f = FolFormula::forall(Var::Canon(q), f);
        }
        out.push(f);
    }
}

/// True when `f` is one of the equality axioms for some symbol set —
/// exactly membership in [`equality_axioms`] computed over `f`'s own
/// symbols (used by the certificate checker to validate stored roots).
pub fn is_equality_axiom(f: &FolFormula) -> bool {
    let syms = collect_symbols(std::slice::from_ref(f));
    equality_axioms(&syms).contains(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_formula, Dialect};

    fn pf(s: &str) -> Formula {
        parse_formula(s, Dialect::OExt).unwrap()
    }

    fn reduce(s: &str) -> FolFormula {
        reduce_to_fol(&pf(s))
    }

    #[test]
    fn operator_atoms_take_free_vars() {
        // K[1](x=0) → atom with one argument x and canon "v0=0".
        match reduce("K[1] x=0") {
            FolFormula::Atom(FolAtom::Op(key, args)) => {
                assert_eq!(key.op, OperatorId::Plain(1));
                assert_eq!(*key.canon, pf("v0=0"));
                assert_eq!(args, vec![FTerm::Var(Var::named("x"))]);
            }
            other => panic!("unexpected reduction {other:?}"),
        }
    }

    #[test]
    fn alphabetic_variants_share_the_atom() {
        let a = reduce("K[1] (forall y. y=x)");
        let b = reduce("K[1] (forall z. z=x)");
        assert_eq!(a, b);
    }

    #[test]
    fn distinct_operands_get_distinct_atoms() {
        assert_ne!(reduce("K[1] 0=0"), reduce("K[1] S(0)=0"));
        assert_ne!(reduce("K[1] 0=0"), reduce("K[2] 0=0"));
        assert_ne!(reduce("K[1]^{e0*1} 0=0"), reduce("K[1]^{e0*2} 0=0"));
    }

    #[test]
    fn atomic_passthrough() {
        assert_eq!(
            reduce("x=0"),
            FolFormula::Atom(FolAtom::Eq(FTerm::Var(Var::named("x")), FTerm::Zero))
        );
    }

    #[test]
    fn op_code_matches_goedel_of_canon() {
        if let FolFormula::Atom(FolAtom::Op(key, _)) = reduce("K[1] x=0") {
            assert_eq!(key.code(), crate::formula::godel(&pf("v0=0")));
        } else {
            panic!();
        }
    }

    #[test]
    fn renaming_substitution_requirement() {
        // Pr φ(x|y) must hit the same predicate key with the renamed arg.
        let a = reduce("K[1] x=z");
        let b = reduce("K[1] y=z");
        match (a, b) {
            (FolFormula::Atom(FolAtom::Op(k1, a1)), FolFormula::Atom(FolAtom::Op(k2, a2))) => {
                assert_eq!(k1, k2);
                assert_eq!(a1, vec![FTerm::Var(Var::named("x")), FTerm::Var(Var::named("z"))]);
                assert_eq!(a2, vec![FTerm::Var(Var::named("y")), FTerm::Var(Var::named("z"))]);
            }
            _ => panic!(),
        }
    }

    #[test]
    fn unify_numerals_with_succ() {
        let mut s = Subst::new();
        // S(M0) ~ 2̄ binds M0 to 1̄.
        assert!(s.unify(
            &FTerm::Succ(Box::new(FTerm::Meta(0))),
            &FTerm::Num(BigUint::from(2u32))
        ));
        assert_eq!(s.resolve(&FTerm::Meta(0)), FTerm::Num(BigUint::one()));

        let mut s2 = Subst::new();
        assert!(!s2.unify(&FTerm::Zero, &FTerm::Num(BigUint::one())));
    }

    #[test]
    fn unify_occurs_check() {
        let mut s = Subst::new();
        assert!(!s.unify(
            &FTerm::Meta(0),
            &FTerm::Succ(Box::new(FTerm::Meta(0)))
        ));
    }

    #[test]
    fn equality_axioms_track_symbols() {
        let roots = vec![reduce("S(x)=0")];
        let axs = equality_axioms(&collect_symbols(&roots));
        // refl + sym + trans + S-congruence.
        assert_eq!(axs.len(), 4);
        for a in &axs {
            assert!(is_equality_axiom(a), "{a:?}");
        }

        let no_eq = vec![reduce("x in W[y]")];
        assert!(equality_axioms(&collect_symbols(&no_eq)).is_empty());

        let with_op = vec![reduce("(K[1] x=0 -> 0=0)")];
        let axs = equality_axioms(&collect_symbols(&with_op));
        // refl+sym+trans + Op congruence (arity 1).
        assert_eq!(axs.len(), 4);
    }

    #[test]
    fn non_axiom_rejected() {
        let junk = reduce("forall x. x=S(x)");
        assert!(!is_equality_axiom(&junk));
    }
}
