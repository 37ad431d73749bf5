//! Superscript analysis, `i`-stratified checks, ordinal-map application,
//! erasure, validity lifting, stratifiers and theory cuts.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{CoreError, Result};
use crate::formula::{is_plain, Formula, OperatorId, Sentence};
use crate::ordinal::{OrdMap, Ordinal};

/// `On(φ)`: the set of superscripts appearing in `φ`.
pub fn superscripts(f: &Formula) -> BTreeSet<Ordinal> {
    let mut out = BTreeSet::new();
    collect_on(f, &mut out);
    out
}

fn collect_on(f: &Formula, out: &mut BTreeSet<Ordinal>) {
    match f {
        Formula::Eq(..) | Formula::InW(..) | Formula::OAtom(..) | Formula::PhiAtom(..) => {}
        Formula::Not(g) | Formula::Forall(_, g) => collect_on(g, out),
        Formula::Implies(a, b) => {
            collect_on(a, out);
            collect_on(b, out);
        }
        Formula::Op(id, g) => {
            if let OperatorId::Strat(a, _) = id {
                out.insert(a.clone());
            }
            collect_on(g, out);
        }
    }
}

/// `α > On(φ)`, vacuously true when `On(φ)` is empty.
pub fn above_all_superscripts(alpha: &Ordinal, f: &Formula) -> bool {
    superscripts(f).iter().all(|b| b < alpha)
}

/// Single-pass check of the four conditions characterizing `i`-stratified
/// formulas: only index-`i` superscripts; every plain `Pr_i` inside some
/// `Pr_j` (`j ≠ i`); no superscripted operator inside a plain one; nested
/// index-`i` superscripts strictly decreasing inward.
pub fn is_i_stratified(f: &Formula, i: u32) -> bool {
    // `inner_bound`: the least superscript enclosing the position, if any.
    // `under_plain`: inside the scope of some plain operator.
    fn walk(f: &Formula, i: u32, bound: Option<&Ordinal>, under_plain: bool) -> bool {
        match f {
            Formula::Eq(..) | Formula::InW(..) | Formula::OAtom(..) | Formula::PhiAtom(..) => true,
            Formula::Not(g) | Formula::Forall(_, g) => walk(g, i, bound, under_plain),
            Formula::Implies(a, b) => {
                walk(a, i, bound, under_plain) && walk(b, i, bound, under_plain)
            }
            Formula::Op(OperatorId::Plain(j), g) => {
                if *j == i && !under_plain {
                    return false;
                }
                walk(g, i, bound, true)
            }
            Formula::Op(OperatorId::Strat(a, j), g) => {
                if *j != i || under_plain {
                    return false;
                }
                if let Some(b) = bound {
                    if a >= b {
                        return false;
                    }
                }
                walk(g, i, Some(a), under_plain)
            }
        }
    }
    walk(f, i, None, false)
}

/// The recursive definition of `i`-stratified, kept as a cross-checking
/// oracle for [`is_i_stratified`].
pub fn is_i_stratified_by_definition(f: &Formula, i: u32) -> bool {
    match f {
        Formula::Eq(..) | Formula::InW(..) | Formula::OAtom(..) | Formula::PhiAtom(..) => true,
        Formula::Not(g) | Formula::Forall(_, g) => is_i_stratified_by_definition(g, i),
        Formula::Implies(a, b) => {
            is_i_stratified_by_definition(a, i) && is_i_stratified_by_definition(b, i)
        }
        Formula::Op(OperatorId::Plain(j), g) => {
            if *j == i {
                false
            } else {
                is_plain(g)
            }
        }
        Formula::Op(OperatorId::Strat(a, j), g) => {
            *j == i && is_i_stratified_by_definition(g, i) && above_all_superscripts(a, g)
        }
    }
}

/// `i`-stratified with all superscripts positive multiples of `ε₀`.
pub fn is_very_i_stratified(f: &Formula, i: u32) -> bool {
    is_i_stratified(f, i) && superscripts(f).iter().all(Ordinal::is_positive_eps_multiple)
}

/// Applies an order-preserving ordinal map to a formula: superscripts in
/// the domain are mapped, others kept; subformulas under plain operators
/// are untouched entirely.
pub fn apply_ordmap(h: &OrdMap, f: &Formula) -> Formula {
    match f {
        Formula::Eq(..) | Formula::InW(..) | Formula::OAtom(..) | Formula::PhiAtom(..) => f.clone(),
        Formula::Not(g) => Formula::not(apply_ordmap(h, g)),
        Formula::Implies(a, b) => Formula::implies(apply_ordmap(h, a), apply_ordmap(h, b)),
        Formula::Forall(v, g) => Formula::forall(v.clone(), apply_ordmap(h, g)),
        Formula::Op(OperatorId::Plain(_), _) => f.clone(),
        Formula::Op(OperatorId::Strat(a, j), g) => {
            let mapped = h.get(a).cloned().unwrap_or_else(|| a.clone());
            Formula::op_strat(mapped, *j, apply_ordmap(h, g))
        }
    }
}

/// `φ⁻`: erases every superscript, `Pr^α_i ↦ Pr_i`.
pub fn erase(f: &Formula) -> Formula {
    match f {
        Formula::Eq(..) | Formula::InW(..) | Formula::OAtom(..) | Formula::PhiAtom(..) => f.clone(),
        Formula::Not(g) => Formula::not(erase(g)),
        Formula::Implies(a, b) => Formula::implies(erase(a), erase(b)),
        Formula::Forall(v, g) => Formula::forall(v.clone(), erase(g)),
        Formula::Op(id, g) => Formula::op_plain(id.index(), erase(g)),
    }
}

pub fn erase_sentence(s: &Sentence) -> Sentence {
    Sentence::new(erase(s.formula())).expect("erasure preserves closedness")
}

/// The `ψ ↦ ψ⁺` validity lift: `Pr_i ψ₀` becomes `Pr^{ε₀·n}_i ψ₀⁺` with
/// `n = min{m ≥ 1 : ε₀·m > On(ψ₀⁺)}`; other operators and atoms are kept.
/// The result is very `i`-stratified and erases back to the input.
pub fn lift_valid(f: &Formula, i: u32) -> Result<Formula> {
    if !is_plain(f) {
        return Err(CoreError::Precondition(
            "lift_valid expects a plain L_PA(ω) formula".into(),
        ));
    }
    Ok(lift_inner(f, i))
}

fn lift_inner(f: &Formula, i: u32) -> Formula {
    match f {
        Formula::Eq(..) | Formula::InW(..) | Formula::OAtom(..) | Formula::PhiAtom(..) => f.clone(),
        Formula::Not(g) => Formula::not(lift_inner(g, i)),
        Formula::Implies(a, b) => Formula::implies(lift_inner(a, i), lift_inner(b, i)),
        Formula::Forall(v, g) => Formula::forall(v.clone(), lift_inner(g, i)),
        Formula::Op(OperatorId::Plain(j), g) if *j != i => f.clone(),
        Formula::Op(_, g) => {
            let lifted = lift_inner(g, i);
            let n = min_eps_above(&superscripts(&lifted));
            Formula::op_strat(Ordinal::eps_times(n), i, lifted)
        }
    }
}

/// Least `m ≥ 1` with `ε₀·m` above every ordinal in the set.
fn min_eps_above(on: &BTreeSet<Ordinal>) -> u64 {
    let mut m = 1;
    while on.iter().any(|a| *a >= Ordinal::eps_times(m)) {
        m += 1;
    }
    m
}

/// An `i`-stratifier: decorates plain `Pr_i` with increasing superscripts
/// drawn from an infinite set `X ⊆ ε₀·ω`, per the three defining clauses.
#[derive(Clone)]
pub struct Stratifier {
    index: u32,
    source: StratSource,
}

#[derive(Clone)]
enum StratSource {
    /// `X = {ε₀·1, ε₀·2, …}`.
    Veristratifier,
    Explicit(ExplicitSet),
}

/// Procedural representation of an infinite `X`: membership plus the
/// least element of `X` strictly above a given ordinal. The successor
/// search witnesses that `X` is infinite.
#[derive(Clone)]
pub struct ExplicitSet {
    pub contains: Arc<dyn Fn(&Ordinal) -> bool + Send + Sync>,
    pub next_above: Arc<dyn Fn(&Ordinal) -> Ordinal + Send + Sync>,
}

impl Stratifier {
    pub fn veristratifier(i: u32) -> Stratifier {
        Stratifier { index: i, source: StratSource::Veristratifier }
    }

    pub fn explicit(i: u32, set: ExplicitSet) -> Stratifier {
        Stratifier { index: i, source: StratSource::Explicit(set) }
    }

    /// The `i`-stratifier given by the ε₀-multiple tail `{ε₀·k : k ≥ t}`.
    pub fn eps_tail(i: u32, t: u64) -> Stratifier {
        let t = t.max(1);
        Stratifier::explicit(
            i,
            ExplicitSet {
                contains: Arc::new(move |o| {
                    o.eps_multiplier().is_some_and(|k| k >= t)
                }),
                next_above: Arc::new(move |o| {
                    let mut k = t;
                    while Ordinal::eps_times(k) <= *o {
                        k += 1;
                    }
                    Ordinal::eps_times(k)
                }),
            },
        )
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn is_veristratifier(&self) -> bool {
        matches!(self.source, StratSource::Veristratifier)
    }

    /// Least element of `X` strictly above every ordinal in `on`.
    fn pick(&self, on: &BTreeSet<Ordinal>) -> Result<Ordinal> {
        let floor = on.iter().max().cloned().unwrap_or_else(Ordinal::zero);
        let candidate = match &self.source {
            StratSource::Veristratifier => {
                let mut k = 1;
                while Ordinal::eps_times(k) <= floor {
                    k += 1;
                }
                Ordinal::eps_times(k)
            }
            StratSource::Explicit(set) => {
                let c = (set.next_above)(&floor);
                if !(set.contains)(&c) {
                    return Err(CoreError::Precondition(
                        "stratifier successor search left its own set".into(),
                    ));
                }
                c
            }
        };
        if on.iter().any(|a| *a >= candidate) {
            return Err(CoreError::Precondition(
                "stratifier successor search failed to clear the superscripts".into(),
            ));
        }
        Ok(candidate)
    }
}

/// Applies an `i`-stratifier to a plain formula (Definition 6.1's clauses).
pub fn apply_stratifier(st: &Stratifier, f: &Formula) -> Result<Formula> {
    if !is_plain(f) {
        return Err(CoreError::Precondition(
            "stratifiers apply to plain L_PA(ω) formulas".into(),
        ));
    }
    apply_strat_inner(st, f)
}

fn apply_strat_inner(st: &Stratifier, f: &Formula) -> Result<Formula> {
    Ok(match f {
        Formula::Eq(..) | Formula::InW(..) | Formula::OAtom(..) | Formula::PhiAtom(..) => f.clone(),
        Formula::Not(g) => Formula::not(apply_strat_inner(st, g)?),
        Formula::Implies(a, b) => {
            Formula::implies(apply_strat_inner(st, a)?, apply_strat_inner(st, b)?)
        }
        Formula::Forall(v, g) => Formula::forall(v.clone(), apply_strat_inner(st, g)?),
        Formula::Op(OperatorId::Plain(j), _) if *j != st.index => f.clone(),
        Formula::Op(_, g) => {
            let inner = apply_strat_inner(st, g)?;
            let alpha = st.pick(&superscripts(&inner))?;
            Formula::op_strat(alpha, st.index, inner)
        }
    })
}

/// The computable stratifier `•*` with `θ* ≡ h(θ⁺)`: its set is
/// `X₀ ∪ {α : α > X₀}` where `X₀ = h[On(θ⁺)]`.
pub fn compose_stratifier(h: &OrdMap, st: &Stratifier, theta: &Formula) -> Result<Stratifier> {
    if !h.is_order_preserving() {
        return Err(CoreError::Precondition("ordinal map must be order preserving".into()));
    }
    let lifted = apply_stratifier(st, theta)?;
    let on = superscripts(&lifted);
    for a in &on {
        if h.get(a).is_none() {
            return Err(CoreError::Precondition(format!(
                "ordinal map domain misses superscript {a}"
            )));
        }
    }
    let x0: BTreeSet<Ordinal> = on.iter().map(|a| h.get(a).unwrap().clone()).collect();
    let max_x0 = x0.iter().max().cloned();
    let x0_move = x0.clone();
    let max_for_contains = max_x0.clone();
    let contains = Arc::new(move |o: &Ordinal| {
        // X = X₀ ∪ {α : α > X₀}; for empty X₀ the tail is everything.
        x0_move.contains(o)
            || match &max_for_contains {
                Some(m) => o > m,
                None => true,
            }
    });
    let next_above = Arc::new(move |o: &Ordinal| {
        // Least element of X₀ above o, else the least ordinal above both
        // o and max(X₀) (the tail of X covers everything up there).
        if let Some(c) = x0.iter().find(|c| *c > o) {
            return c.clone();
        }
        o.succ()
    });
    Ok(Stratifier::explicit(st.index, ExplicitSet { contains, next_above }))
}

/// Finite set of stratifiers with pairwise distinct indices.
pub struct StratifierSet {
    members: Vec<Stratifier>,
}

impl StratifierSet {
    pub fn new(members: Vec<Stratifier>) -> Result<StratifierSet> {
        let mut seen = BTreeSet::new();
        for st in &members {
            if !seen.insert(st.index()) {
                return Err(CoreError::DuplicateStratifierIndex(st.index()));
            }
        }
        Ok(StratifierSet { members })
    }

    pub fn indices(&self) -> BTreeSet<u32> {
        self.members.iter().map(Stratifier::index).collect()
    }

    pub fn members(&self) -> &[Stratifier] {
        &self.members
    }

    /// `I` is above `i` when every member index is strictly above `i`
    /// in the given order (vacuously true for the empty set).
    pub fn is_above(&self, i: u32, strictly_below: impl Fn(u32, u32) -> bool) -> bool {
        self.members.iter().all(|st| strictly_below(i, st.index()))
    }
}

/// `T ∩ α`: keeps sentences whose superscripts all lie below `α`.
pub fn theory_cut<I>(stream: I, alpha: Ordinal) -> impl Iterator<Item = Sentence>
where
    I: Iterator<Item = Sentence>,
{
    stream.filter(move |s| superscripts(s.formula()).iter().all(|b| *b < alpha))
}

/// Maps the sorted superscripts `α₁ < … < αₙ` of an `i`-stratified formula
/// to `ε₀·1, …, ε₀·n`, producing a very `i`-stratified formula with the
/// same erasure.
pub fn canonical_veristratified(f: &Formula, i: u32) -> Result<Formula> {
    if !is_i_stratified(f, i) {
        return Err(CoreError::NotStratified { index: i });
    }
    let on = superscripts(f);
    let h = OrdMap::from_pairs(
        on.iter()
            .enumerate()
            .map(|(j, a)| (a.clone(), Ordinal::eps_times(j as u64 + 1))),
    );
    Ok(apply_ordmap(&h, f))
}
