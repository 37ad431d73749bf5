//! Building-block schema streams, `Pr_i`-closure, the two fixed-point
//! family constructions, bounded intended-structure model checking, and
//! the `F_U` arithmetic translation.
//!
//! "Smallest `Pr_i`-closed theory containing …" is realized as a fair
//! least-fixed-point enumeration: components are interleaved round-robin
//! and closure is dovetailed with the inputs, deduplicating modulo
//! alphabetic variants.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::entail::{entails, entails_counting, prove_valid, ProveVerdict};
use crate::enumerate::{assignment_nth, FormulaSupply, SingleVarSupply, ValidSupply};
use crate::error::{CoreError, Result};
use crate::formula::{
    godel, is_plain, triple, ungodel, unpair, untriple, Assignment, Formula, OperatorId,
    Sentence, Term, Var,
};
use crate::kleene::basic_o_axiom_stream;
use crate::ordinal::{le1, Le1Verdict, Ordinal};
use crate::rec::{fixpoint, Descriptor, Evaluator, StepOutcome, WeMember};
use crate::session::Session;
use crate::strat::{
    apply_stratifier, erase, is_i_stratified, lift_valid, superscripts, Stratifier,
};

/// Strict well-founded order scaffold: explicit edge list (transitively
/// closed, checked strict) or a programmatic decider index.
#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub enum OrderSpec {
    ExplicitFinite(Vec<(u32, u32)>),
    /// Index of a decider: `φ_e(⟨a,b⟩₂) = 1` iff `a ≺ b`.
    Programmatic(BigUint),
}

impl OrderSpec {
    /// Validates irreflexivity and acyclicity, storing the transitive
    /// closure of the edges (`(a, b)` means `a ≺ b`).
    pub fn explicit(edges: Vec<(u32, u32)>) -> Result<OrderSpec> {
        let mut rel: BTreeSet<(u32, u32)> = edges.into_iter().collect();
        loop {
            let mut grew = false;
            let snapshot: Vec<(u32, u32)> = rel.iter().cloned().collect();
            for &(a, b) in &snapshot {
                for &(c, d) in &snapshot {
                    if b == c && rel.insert((a, d)) {
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        if let Some((a, _)) = rel.iter().find(|(a, b)| a == b) {
            return Err(CoreError::Precondition(format!(
                "order is not strict: {a} ≺ {a}"
            )));
        }
        Ok(OrderSpec::ExplicitFinite(rel.into_iter().collect()))
    }

    /// `a ≺ b`; `None` when a programmatic decider runs out of fuel.
    pub fn less(&self, a: u32, b: u32, ev: Option<&Evaluator>, fuel: u64) -> Option<bool> {
        match self {
            OrderSpec::ExplicitFinite(edges) => Some(edges.contains(&(a, b))),
            OrderSpec::Programmatic(e) => {
                let ev = ev?;
                let packed = crate::formula::pair(&BigUint::from(a), &BigUint::from(b));
                match ev.eval_step(e, &packed, fuel) {
                    StepOutcome::Halted(v) => Some(v == BigUint::from(1u32)),
                    StepOutcome::OutOfFuel => None,
                }
            }
        }
    }

    /// `a ⪯ b` (reflexive closure of `≺`).
    pub fn leq(&self, a: u32, b: u32, ev: Option<&Evaluator>, fuel: u64) -> Option<bool> {
        if a == b {
            return Some(true);
        }
        self.less(a, b, ev, fuel)
    }
}

/// Building-block schema kinds. `i` is the index whose theory holds the
/// block (`[S]_i`), `j` the parameter index where the kind takes one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum BlockKind {
    JDeduction,
    ModifiedJDeduction,
    AssignedValidity,
    IValidity,
    IIntrospection,
    PaAxioms,
    JSmt,
    ClosureOf,
    IStratideduction,
    IAssignedStrativalidity,
    IStrativalidity,
    IStratrospection,
    IStratiSmt,
    ICollapse,
    BasicO,
}

#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct BlockSpec {
    pub kind: BlockKind,
    /// Holder index (the family member that contains the schema).
    pub i: u32,
    /// Parameter index of the kind (subject of `Pr_j`), when it has one.
    #[serde(default)]
    pub j: u32,
    /// Cap parameter for finite kinds (Basic-O axioms).
    #[serde(default = "default_block_budget")]
    pub budget: u64,
}

fn default_block_budget() -> u64 {
    8
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum FamilyMode {
    /// Theorem-4.1 shape: exact codes for everyone, truth below.
    Plain,
    /// Theorem-7.x shape: self-truth, codes strictly below.
    SelfTruth,
}

#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct Budgets {
    /// Per-item validity filter inside schema generators.
    pub prove_budget: u64,
    /// Entailment budget for model checking and coherence checks.
    pub entail_budget: u64,
    /// Substrate fuel for `InW`/`Phi` evaluation.
    pub fuel: u64,
    /// Sample width for unbounded quantifiers.
    pub quant_samples: u64,
    /// Superscript/stratifier variety for stratified kinds.
    pub ordinal_supply: u64,
}

impl Default for Budgets {
    fn default() -> Budgets {
        Budgets {
            prove_budget: 2_000,
            entail_budget: 30_000,
            fuel: 200_000,
            quant_samples: 3,
            ordinal_supply: 2,
        }
    }
}

/// Finite description of a family `T = (T_i)`: order edges, index
/// universe, per-index block lists, mode and budgets. Deterministic given
/// this value (the config file is its JSON form).
#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct FamilySpec {
    /// `(j, i)` means `j ≺ i`.
    pub order_edges: Vec<(u32, u32)>,
    pub indices: Vec<u32>,
    #[serde(default)]
    pub blocks: BTreeMap<u32, Vec<BlockSpec>>,
    pub mode: FamilyMode,
    #[serde(default)]
    pub budgets: Budgets,
}

impl FamilySpec {
    pub fn validate(&self) -> Result<OrderSpec> {
        if self.indices.is_empty() {
            return Err(CoreError::InvalidFamily("empty index universe".into()));
        }
        let mut uniq = self.indices.clone();
        uniq.sort_unstable();
        uniq.dedup();
        if uniq.len() != self.indices.len() {
            return Err(CoreError::InvalidFamily("duplicate indices".into()));
        }
        for (a, b) in &self.order_edges {
            if !self.indices.contains(a) || !self.indices.contains(b) {
                return Err(CoreError::InvalidFamily(format!(
                    "order edge ({a},{b}) leaves the index universe"
                )));
            }
        }
        let order = OrderSpec::explicit(self.order_edges.clone())?;
        for (holder, specs) in &self.blocks {
            if !self.indices.contains(holder) {
                return Err(CoreError::InvalidFamily(format!(
                    "block holder {holder} outside the index universe"
                )));
            }
            for b in specs {
                if b.i != *holder {
                    return Err(CoreError::InvalidFamily(
                        "block holder field must match its map key".into(),
                    ));
                }
                self.validate_block(b, &order)?;
            }
        }
        Ok(order)
    }

    fn validate_block(&self, b: &BlockSpec, order: &OrderSpec) -> Result<()> {
        let less = |a, c| order.less(a, c, None, 0).unwrap_or(false);
        match b.kind {
            BlockKind::ModifiedJDeduction => {
                if !less(b.i, b.j) {
                    return Err(CoreError::InvalidFamily(
                        "Modified j-Deduction requires i ≺ j".into(),
                    ));
                }
            }
            BlockKind::JDeduction => {
                if self.mode == FamilyMode::SelfTruth && !(b.j == b.i || less(b.j, b.i)) {
                    return Err(CoreError::InvalidFamily(
                        "in self-truth mode j-Deduction requires j ⪯ i (use Modified j-Deduction above)"
                            .into(),
                    ));
                }
            }
            BlockKind::ClosureOf => {
                if let Some(list) = self.blocks.get(&b.j) {
                    if list.iter().any(|x| x.kind == BlockKind::ClosureOf) {
                        return Err(CoreError::InvalidFamily(
                            "nested Closure-of blocks are not supported".into(),
                        ));
                    }
                }
                if self.mode == FamilyMode::SelfTruth && !less(b.j, b.i) {
                    return Err(CoreError::InvalidFamily(
                        "in self-truth mode Closure-of requires j ≺ i".into(),
                    ));
                }
            }
            BlockKind::IStratideduction
            | BlockKind::IAssignedStrativalidity
            | BlockKind::IStrativalidity
            | BlockKind::IStratrospection
            | BlockKind::IStratiSmt
            | BlockKind::ICollapse => {
                if self.mode == FamilyMode::Plain {
                    return Err(CoreError::InvalidFamily(
                        "stratified blocks belong to self-truth mode".into(),
                    ));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

/// An emitted axiom with its provenance tag.
#[derive(Clone, Debug)]
pub struct Emitted {
    pub sentence: Sentence,
    pub provenance: String,
}

pub type EStream = Box<dyn Iterator<Item = Emitted> + Send>;

/// Lazy axiom enumerator for one theory of a family; streams regenerate
/// deterministically from the factory.
pub struct TheoryHandle {
    pub index: u32,
    make: Arc<dyn Fn() -> EStream + Send + Sync>,
}

impl TheoryHandle {
    pub fn new(index: u32, make: Arc<dyn Fn() -> EStream + Send + Sync>) -> TheoryHandle {
        TheoryHandle { index, make }
    }

    pub fn stream(&self) -> EStream {
        (self.make)()
    }

    pub fn sentences(&self) -> Box<dyn Iterator<Item = Sentence> + Send> {
        Box::new(self.stream().map(|e| e.sentence))
    }
}

fn v0() -> Var {
    Var::Canon(0)
}

/// Round-robin interleave skipping exhausted components.
struct RoundRobin {
    streams: Vec<Option<EStream>>,
    pos: usize,
}

impl Iterator for RoundRobin {
    type Item = Emitted;
    fn next(&mut self) -> Option<Emitted> {
        let n = self.streams.len();
        for _ in 0..n {
            let idx = self.pos % n.max(1);
            self.pos += 1;
            if let Some(slot) = self.streams.get_mut(idx) {
                if let Some(s) = slot {
                    match s.next() {
                        Some(e) => return Some(e),
                        None => *slot = None,
                    }
                }
            }
        }
        None
    }
}

fn round_robin(streams: Vec<EStream>) -> EStream {
    Box::new(RoundRobin { streams: streams.into_iter().map(Some).collect(), pos: 0 })
}

/// Fair least-fixed-point `Pr_i`-closure: interleaves the input with
/// `Pr_i`-prefixed copies of everything emitted, deduplicating modulo
/// alphabetic variants.
pub fn pr_close(input: EStream, i: u32) -> EStream {
    struct PrClose {
        input: Option<EStream>,
        i: u32,
        emitted: VecDeque<Sentence>,
        seen: HashSet<Formula>,
        from_input: bool,
    }
    impl Iterator for PrClose {
        type Item = Emitted;
        fn next(&mut self) -> Option<Emitted> {
            loop {
                self.from_input = !self.from_input;
                if self.from_input {
                    if let Some(inp) = &mut self.input {
                        match inp.next() {
                            Some(e) => {
                                let key = e.sentence.formula().alpha_normalize();
                                if self.seen.insert(key) {
                                    self.emitted.push_back(e.sentence.clone());
                                    return Some(e);
                                }
                                continue;
                            }
                            None => self.input = None,
                        }
                    }
                }
                match self.emitted.pop_front() {
                    Some(s) => {
                        let boxed = Formula::op_plain(self.i, s.formula().clone());
                        let key = boxed.alpha_normalize();
                        let out = Sentence::new(boxed).expect("boxing preserves closedness");
                        if self.seen.insert(key) {
                            self.emitted.push_back(out.clone());
                            return Some(Emitted {
                                sentence: out,
                                provenance: "closure".into(),
                            });
                        }
                        continue;
                    }
                    None => {
                        if self.input.is_none() {
                            return None;
                        }
                        continue;
                    }
                }
            }
        }
    }
    Box::new(PrClose {
        input: Some(input),
        i,
        emitted: VecDeque::new(),
        seen: HashSet::new(),
        from_input: false,
    })
}

/// Straticlosure: boxes emitted sentences with `Pr^α_i` for ascending ε₀
/// multiples `α` above their superscripts, keeping only `i`-stratified
/// results. Each sentence is revisited with the next offset fairly.
fn straticlose(input: EStream, i: u32, offsets: u64) -> EStream {
    struct StratiClose {
        input: Option<EStream>,
        i: u32,
        offsets: u64,
        queue: VecDeque<(Sentence, u64)>,
        seen: HashSet<Formula>,
        from_input: bool,
    }
    impl StratiClose {
        fn admit(&mut self, s: Sentence, provenance: String) -> Option<Emitted> {
            let key = s.formula().alpha_normalize();
            if self.seen.insert(key) {
                self.queue.push_back((s.clone(), 0));
                Some(Emitted { sentence: s, provenance })
            } else {
                None
            }
        }
    }
    impl Iterator for StratiClose {
        type Item = Emitted;
        fn next(&mut self) -> Option<Emitted> {
            loop {
                self.from_input = !self.from_input;
                if self.from_input {
                    if let Some(inp) = &mut self.input {
                        match inp.next() {
                            Some(e) => {
                                if !is_i_stratified(e.sentence.formula(), self.i) {
                                    continue;
                                }
                                match self.admit(e.sentence, e.provenance) {
                                    Some(out) => return Some(out),
                                    None => continue,
                                }
                            }
                            None => self.input = None,
                        }
                    }
                }
                match self.queue.pop_front() {
                    Some((s, k)) => {
                        if k + 1 < self.offsets.max(1) {
                            self.queue.push_back((s.clone(), k + 1));
                        }
                        let on = superscripts(s.formula());
                        let mut m = 1;
                        while on.iter().any(|a| *a >= Ordinal::eps_times(m)) {
                            m += 1;
                        }
                        let alpha = Ordinal::eps_times(m + k);
                        let boxed = Formula::op_strat(alpha, self.i, s.formula().clone());
                        if !is_i_stratified(&boxed, self.i) {
                            continue;
                        }
                        let out = Sentence::new(boxed).expect("boxing preserves closedness");
                        match self.admit(out, "straticlosure".into()) {
                            Some(out) => return Some(out),
                            None => continue,
                        }
                    }
                    None => {
                        if self.input.is_none() {
                            return None;
                        }
                        continue;
                    }
                }
            }
        }
    }
    Box::new(StratiClose {
        input: Some(input),
        i,
        offsets,
        queue: VecDeque::new(),
        seen: HashSet::new(),
        from_input: false,
    })
}

fn unpair_u64(t: u64) -> (u64, u64) {
    let (a, b) = unpair(&BigUint::from(t));
    (a.to_u64().unwrap_or(0), b.to_u64().unwrap_or(0))
}

fn untriple_u64(t: u64) -> (u64, u64, u64) {
    let (a, b, c) = untriple(&BigUint::from(t));
    (
        a.to_u64().unwrap_or(0),
        b.to_u64().unwrap_or(0),
        c.to_u64().unwrap_or(0),
    )
}

fn emit(core: Formula, provenance: String) -> Emitted {
    Emitted { sentence: core.universal_closure(), provenance }
}

/// Least `m ≥ 1` with `ε₀·m > On(f)`, plus an offset.
fn eps_above(f: &Formula, offset: u64) -> Ordinal {
    let on = superscripts(f);
    let mut m = 1;
    while on.iter().any(|a| *a >= Ordinal::eps_times(m)) {
        m += 1;
    }
    Ordinal::eps_times(m + offset)
}

/// Fair deterministic stream of instances of one building-block schema.
pub fn block_instances(b: &BlockSpec, indices: &[u32], budgets: &Budgets) -> Result<EStream> {
    let tagbase = format!("block:{:?}[i={},j={}]", b.kind, b.i, b.j);
    let idxs = indices.to_vec();
    let prove_budget = budgets.prove_budget;
    let supply_offsets = budgets.ordinal_supply.max(1);
    Ok(match b.kind {
        BlockKind::JDeduction => {
            let j = b.j;
            let mut supply = FormulaSupply::new(&idxs);
            let mut t = 0u64;
            stream(move || {
                let (a, c) = unpair_u64(t);
                t += 1;
                let phi = supply.nth(a as usize);
                let psi = supply.nth(c as usize);
                let core = Formula::implies(
                    Formula::op_plain(j, Formula::implies(phi.clone(), psi.clone())),
                    Formula::implies(
                        Formula::op_plain(j, phi),
                        Formula::op_plain(j, psi),
                    ),
                );
                Some(emit(core, tagbase.clone()))
            })
        }
        BlockKind::ModifiedJDeduction => {
            let j = b.j;
            let mut supply = FormulaSupply::new(&idxs);
            let mut t = 0u64;
            stream(move || {
                let (a, c) = unpair_u64(t);
                t += 1;
                let phi = supply.nth(a as usize);
                let psi = supply.nth(c as usize);
                let core = Formula::implies(
                    Formula::op_plain(j, Formula::implies(phi.clone(), psi.clone())),
                    Formula::implies(
                        Formula::op_plain(j, phi.clone()),
                        Formula::op_plain(j, Formula::and(psi, phi)),
                    ),
                );
                Some(emit(core, tagbase.clone()))
            })
        }
        BlockKind::AssignedValidity => {
            let mut valid = ValidSupply::new(&idxs, prove_budget);
            let mut t = 0u64;
            stream(move || {
                let (a, c) = unpair_u64(t);
                t += 1;
                let phi = valid.nth(a as usize);
                let fv: Vec<Var> = phi.free_vars().into_iter().collect();
                let s = assignment_nth(&fv, c);
                let inst = phi.assign_substitute(&s).expect("assignment covers FV");
                Some(Emitted { sentence: inst, provenance: tagbase.clone() })
            })
        }
        BlockKind::IValidity => {
            let i = b.j;
            let mut valid = ValidSupply::new(&idxs, prove_budget);
            let mut t = 0u64;
            stream(move || {
                let phi = valid.nth(t as usize);
                t += 1;
                Some(emit(Formula::op_plain(i, phi), tagbase.clone()))
            })
        }
        BlockKind::IIntrospection => {
            let i = b.j;
            let mut supply = FormulaSupply::new(&idxs);
            let mut t = 0u64;
            stream(move || {
                let phi = supply.nth(t as usize);
                t += 1;
                let core = Formula::implies(
                    Formula::op_plain(i, phi.clone()),
                    Formula::op_plain(i, Formula::op_plain(i, phi)),
                );
                Some(emit(core, tagbase.clone()))
            })
        }
        BlockKind::PaAxioms => pa_stream(&idxs, tagbase, false, 0),
        BlockKind::JSmt => {
            let j = b.j;
            let mut supply = FormulaSupply::new(&idxs);
            let mut t = 0u64;
            stream(move || {
                let phi = supply.nth(t as usize);
                t += 1;
                Some(emit(smt_core(OperatorId::Plain(j), &phi), tagbase.clone()))
            })
        }
        BlockKind::ClosureOf => {
            return Err(CoreError::InvalidFamily(
                "Closure-of streams are built by the family (they need the neighbor blocks)"
                    .into(),
            ))
        }
        BlockKind::IStratideduction => {
            let i = b.j;
            let mut supply = FormulaSupply::new(&idxs);
            let mut t = 0u64;
            stream(move || loop {
                let (a, c, off) = untriple_u64(t);
                t += 1;
                let off = off % supply_offsets;
                let phi = supply.nth(a as usize);
                let psi = supply.nth(c as usize);
                let (Ok(phi_l), Ok(psi_l)) = (apply_lift(&phi, i), apply_lift(&psi, i)) else {
                    continue;
                };
                let imp = Formula::implies(phi_l.clone(), psi_l.clone());
                let alpha = eps_above(&imp, off);
                let core = Formula::implies(
                    Formula::op_strat(alpha.clone(), i, imp),
                    Formula::implies(
                        Formula::op_strat(alpha.clone(), i, phi_l),
                        Formula::op_strat(alpha, i, psi_l),
                    ),
                );
                if !is_i_stratified(&core, i) {
                    continue;
                }
                return Some(emit(core, tagbase.clone()));
            })
        }
        BlockKind::IAssignedStrativalidity => {
            let i = b.j;
            let mut valid = ValidSupply::new(&idxs, prove_budget);
            let mut t = 0u64;
            stream(move || loop {
                let (a, c) = unpair_u64(t);
                t += 1;
                let phi = valid.nth(a as usize);
                let Ok(lifted) = lift_valid(&phi, i) else { continue };
                let fv: Vec<Var> = lifted.free_vars().into_iter().collect();
                let s = assignment_nth(&fv, c);
                let inst = lifted.assign_substitute(&s).expect("assignment covers FV");
                return Some(Emitted { sentence: inst, provenance: tagbase.clone() });
            })
        }
        BlockKind::IStrativalidity => {
            let i = b.j;
            let mut valid = ValidSupply::new(&idxs, prove_budget);
            let mut t = 0u64;
            stream(move || loop {
                let (a, off) = unpair_u64(t);
                t += 1;
                let off = off % supply_offsets;
                let phi = valid.nth(a as usize);
                let Ok(lifted) = lift_valid(&phi, i) else { continue };
                let alpha = eps_above(&lifted, off);
                let core = Formula::op_strat(alpha, i, lifted);
                if !is_i_stratified(&core, i) {
                    continue;
                }
                return Some(emit(core, tagbase.clone()));
            })
        }
        BlockKind::IStratrospection => {
            let i = b.j;
            let mut supply = FormulaSupply::new(&idxs);
            let mut t = 0u64;
            stream(move || loop {
                let (a, off1, off2) = untriple_u64(t);
                t += 1;
                let phi = supply.nth(a as usize);
                let Ok(lifted) = apply_lift(&phi, i) else { continue };
                let alpha = eps_above(&lifted, off1 % supply_offsets);
                let inner = Formula::op_strat(alpha.clone(), i, lifted);
                let beta = eps_above(&inner, off2 % supply_offsets);
                let core = Formula::implies(
                    inner.clone(),
                    Formula::op_strat(beta, i, inner),
                );
                if !is_i_stratified(&core, i) {
                    continue;
                }
                return Some(emit(core, tagbase.clone()));
            })
        }
        BlockKind::IStratiSmt => {
            let i = b.j;
            let mut supply = FormulaSupply::new(&idxs);
            let mut t = 0u64;
            stream(move || loop {
                let (a, off) = unpair_u64(t);
                t += 1;
                let phi = supply.nth(a as usize);
                let Ok(lifted) = apply_lift(&phi, i) else { continue };
                let alpha = eps_above(&lifted, off % supply_offsets);
                let core = smt_core(OperatorId::Strat(alpha, i), &lifted);
                if !is_i_stratified(&core, i) {
                    continue;
                }
                return Some(emit(core, tagbase.clone()));
            })
        }
        BlockKind::ICollapse => {
            let i = b.j;
            let mut supply = FormulaSupply::new(&idxs);
            let mut t = 0u64;
            stream(move || loop {
                let (a, off1, off2) = untriple_u64(t);
                t += 1;
                let phi = supply.nth(a as usize);
                let Ok(lifted) = apply_lift(&phi, i) else { continue };
                let alpha = eps_above(&lifted, off1 % supply_offsets);
                let beta = eps_above(&lifted, off1 % supply_offsets + 1 + off2 % supply_offsets);
                debug_assert_eq!(le1(&alpha, &beta), Le1Verdict::Yes);
                let core = Formula::iff(
                    Formula::op_strat(alpha, i, lifted.clone()),
                    Formula::op_strat(beta, i, lifted),
                );
                if !is_i_stratified(&core, i) {
                    continue;
                }
                return Some(emit(core, tagbase.clone()));
            })
        }
        BlockKind::BasicO => basic_o_axiom_stream(b.budget, tagbase),
    })
}

fn stream(f: impl FnMut() -> Option<Emitted> + Send + 'static) -> EStream {
    Box::new(std::iter::from_fn(f))
}

/// The veristratified counterpart of a plain formula (total: plain
/// formulas always lift).
fn apply_lift(phi: &Formula, i: u32) -> std::result::Result<Formula, ()> {
    apply_stratifier(&Stratifier::veristratifier(i), phi).map_err(|_| ())
}

/// `ucl(∃e∀x(Op φ ↔ x ∈ W_e))` with `e ∉ FV(φ)`.
fn smt_core(op: OperatorId, phi: &Formula) -> Formula {
    let x = v0();
    let mut avoid = phi.free_vars();
    avoid.insert(x.clone());
    let e = crate::formula::fresh_var(&avoid);
    Formula::exists(
        e.clone(),
        Formula::forall(
            x.clone(),
            Formula::iff(
                Formula::op(op, phi.clone()),
                Formula::InW(Term::var(x), Term::var(e)),
            ),
        ),
    )
}

/// PA for the operator language: the six base axioms then induction over
/// the formula supply (veristratified for index `strat_for` when asked,
/// so every instance stays `i`-stratified).
fn pa_stream(indices: &[u32], tag: String, stratified: bool, strat_for: u32) -> EStream {
    let base: Vec<Formula> = pa_base_axioms();
    let mut supply = FormulaSupply::new(indices);
    let mut t = 0usize;
    let mut base_iter = base.into_iter();
    let tag2 = tag.clone();
    stream(move || {
        if let Some(b) = base_iter.next() {
            return Some(emit(b, tag2.clone()));
        }
        loop {
            let phi0 = supply.nth(t);
            t += 1;
            let phi = if stratified {
                match apply_lift(&phi0, strat_for) {
                    Ok(f) => f,
                    Err(()) => continue,
                }
            } else {
                phi0
            };
            let x = v0();
            let zero_case = match phi.substitute(&x, &Term::Zero, true) {
                Ok(f) => f,
                Err(_) => continue,
            };
            let succ_case = match phi.substitute(&x, &Term::succ(Term::var(x.clone())), true) {
                Ok(f) => f,
                Err(_) => continue,
            };
            let core = Formula::implies(
                zero_case,
                Formula::implies(
                    Formula::forall(x.clone(), Formula::implies(phi.clone(), succ_case)),
                    Formula::forall(x.clone(), phi.clone()),
                ),
            );
            if stratified && !is_i_stratified(&core, strat_for) {
                continue;
            }
            return Some(emit(core, tag2.clone()));
        }
    })
}

pub fn pa_base_axioms() -> Vec<Formula> {
    let x = || Term::var(Var::Canon(0));
    let y = || Term::var(Var::Canon(1));
    vec![
        // ∀x ¬(S(x)=0)
        Formula::not(Formula::Eq(Term::succ(x()), Term::Zero)),
        // S injective
        Formula::implies(
            Formula::Eq(Term::succ(x()), Term::succ(y())),
            Formula::Eq(x(), y()),
        ),
        Formula::Eq(Term::plus(x(), Term::Zero), x()),
        Formula::Eq(
            Term::plus(x(), Term::succ(y())),
            Term::succ(Term::plus(x(), y())),
        ),
        Formula::Eq(Term::times(x(), Term::Zero), Term::Zero),
        Formula::Eq(
            Term::times(x(), Term::succ(y())),
            Term::plus(Term::times(x(), y()), x()),
        ),
    ]
}

/// Item-2 biconditional stream: `∀x(Pr_j φ ↔ ⟨⌜φ⌝, j̄, x⟩ ∈ W_n̄)` over
/// the `FV ⊆ {x}` formula supply.
fn item2_stream(indices: &[u32], j: u32, n: &BigUint) -> EStream {
    let mut supply = SingleVarSupply::new(indices);
    let n = n.clone();
    let mut t = 0usize;
    stream(move || {
        let phi = supply.nth(t);
        t += 1;
        let x = v0();
        let code = godel(&phi);
        let body = Formula::iff(
            Formula::op_plain(j, phi),
            Formula::InW(
                Term::triple(
                    Term::numeral(code),
                    Term::numeral(BigUint::from(j)),
                    Term::var(x.clone()),
                ),
                Term::numeral(n.clone()),
            ),
        );
        Some(Emitted {
            sentence: Sentence::new(Formula::forall(x, body)).expect("item-2 closes"),
            provenance: format!("item2:j={j}"),
        })
    })
}

/// Truth schema stream: `ucl(Pr_j φ → φ)` over the formula supply.
fn truth_stream(indices: &[u32], j: u32) -> EStream {
    let mut supply = FormulaSupply::new(indices);
    let mut t = 0usize;
    stream(move || {
        let phi = supply.nth(t);
        t += 1;
        let core = Formula::implies(Formula::op_plain(j, phi.clone()), phi);
        Some(emit(core, format!("truth:j={j}")))
    })
}

/// Stratified truth stream (item 3 of the `U` construction):
/// `ucl(Pr^α_i φ′ → φ′)` with `φ′` the veristratified lift.
fn strat_truth_stream(indices: &[u32], i: u32, offsets: u64) -> EStream {
    let mut supply = FormulaSupply::new(indices);
    let mut t = 0u64;
    stream(move || loop {
        let (a, off) = unpair_u64(t);
        t += 1;
        let phi = supply.nth(a as usize);
        let Ok(lifted) = apply_lift(&phi, i) else { continue };
        let alpha = eps_above(&lifted, off % offsets.max(1));
        let core = Formula::implies(
            Formula::op_strat(alpha, i, lifted.clone()),
            lifted,
        );
        if !is_i_stratified(&core, i) {
            continue;
        }
        return Some(emit(core, format!("u-truth:i={i}")));
    })
}

/// Item-4 stream of the `U` construction: `ucl(Pr_j φ → φ⁺)` for the
/// given `i`-stratifier.
fn u_item4_stream(indices: &[u32], j: u32, st: Stratifier, label: String) -> EStream {
    let mut supply = FormulaSupply::new(indices);
    let mut t = 0usize;
    stream(move || loop {
        let phi = supply.nth(t);
        t += 1;
        let Ok(lifted) = apply_stratifier(&st, &phi) else { continue };
        let core = Formula::implies(Formula::op_plain(j, phi), lifted);
        if !is_i_stratified(&core, st.index()) {
            continue;
        }
        return Some(emit(core, format!("u-item4:j={j},{label}")));
    })
}

/// Self-truth counterpart of a configured plain block for the `U` side.
fn counterpart(b: &BlockSpec) -> Option<BlockSpec> {
    let mut out = b.clone();
    match b.kind {
        BlockKind::JDeduction if b.j == b.i => {
            out.kind = BlockKind::IStratideduction;
            out.j = b.i;
        }
        BlockKind::AssignedValidity => {
            out.kind = BlockKind::IAssignedStrativalidity;
            out.j = b.i;
        }
        BlockKind::IValidity if b.j == b.i => {
            out.kind = BlockKind::IStrativalidity;
        }
        BlockKind::IIntrospection if b.j == b.i => {
            out.kind = BlockKind::IStratrospection;
        }
        BlockKind::JSmt if b.j == b.i => {
            out.kind = BlockKind::IStratiSmt;
        }
        BlockKind::ClosureOf if b.j == b.i => return None, // covered by straticlosure
        BlockKind::PaAxioms => {} // handled specially (stratified induction)
        _ => {}
    }
    Some(out)
}

/// A family fixed at parameter `n`: per index `i`, `T_i(n)` enumerates
/// the configured blocks, the item-2 biconditionals, the truth schemas
/// and the `Pr_i` closure.
pub struct Family {
    pub spec: Arc<FamilySpec>,
    session: Arc<Session>,
    n: BigUint,
    order: OrderSpec,
}

/// Builds the family at an explicit parameter `n`.
pub fn build_t_of_n(
    spec: Arc<FamilySpec>,
    session: Arc<Session>,
    n: BigUint,
) -> Result<Family> {
    let order = spec.validate()?;
    Ok(Family { spec, session, n, order })
}

impl Family {
    pub fn session(&self) -> &Arc<Session> {
        &self.session
    }

    pub fn n(&self) -> &BigUint {
        &self.n
    }

    pub fn order(&self) -> &OrderSpec {
        &self.order
    }

    pub fn less(&self, a: u32, b: u32) -> bool {
        self.order.less(a, b, None, 0).unwrap_or(false)
    }

    /// Handle for `T_i(n)`.
    pub fn theory(&self, i: u32) -> TheoryHandle {
        let spec = Arc::clone(&self.spec);
        let n = self.n.clone();
        TheoryHandle::new(
            i,
            Arc::new(move || t_stream(&spec, i, &n)),
        )
    }

    /// Handle for the stratified companion `U_i` (self-truth mode).
    pub fn u_theory(&self, i: u32) -> Result<TheoryHandle> {
        if self.spec.mode != FamilyMode::SelfTruth {
            return Err(CoreError::InvalidFamily(
                "U companions exist only in self-truth mode".into(),
            ));
        }
        let spec = Arc::clone(&self.spec);
        let n = self.n.clone();
        Ok(TheoryHandle::new(
            i,
            Arc::new(move || u_stream(&spec, i, &n)),
        ))
    }

    /// Stratification handle `S_i = U_i⁻` (erased stream).
    pub fn stratified_erased(&self, i: u32) -> Result<TheoryHandle> {
        let u = self.u_theory(i)?;
        let make = u.make.clone();
        Ok(TheoryHandle::new(
            i,
            Arc::new(move || {
                let inner = make();
                Box::new(inner.map(|e| Emitted {
                    sentence: Sentence::new(erase(e.sentence.formula()))
                        .expect("erasure preserves closedness"),
                    provenance: format!("erase({})", e.provenance),
                }))
            }),
        ))
    }

    /// Stratification handle `S_{(α,i)} = U_i ∩ α`.
    pub fn stratified_cut(&self, i: u32, alpha: Ordinal) -> Result<TheoryHandle> {
        let u = self.u_theory(i)?;
        let make = u.make.clone();
        Ok(TheoryHandle::new(
            i,
            Arc::new(move || {
                let alpha = alpha.clone();
                let inner = make();
                Box::new(inner.filter(move |e| {
                    superscripts(e.sentence.formula()).iter().all(|b| *b < alpha)
                }))
            }),
        ))
    }
}

/// The `T_i(n)` stream.
fn t_stream(spec: &Arc<FamilySpec>, i: u32, n: &BigUint) -> EStream {
    let idxs = &spec.indices;
    let budgets = &spec.budgets;
    let order = spec.validate().expect("validated at construction");
    let mut comps: Vec<EStream> = Vec::new();

    for b in spec.blocks.get(&i).cloned().unwrap_or_default() {
        match b.kind {
            BlockKind::ClosureOf => comps.push(closure_of_stream(spec, b.j)),
            _ => comps.push(block_instances(&b, idxs, budgets).expect("validated blocks")),
        }
    }

    match spec.mode {
        FamilyMode::Plain => {
            for &j in idxs {
                comps.push(item2_stream(idxs, j, n));
            }
            for &j in idxs {
                if order.less(j, i, None, 0).unwrap_or(false) {
                    comps.push(truth_stream(idxs, j));
                }
            }
        }
        FamilyMode::SelfTruth => {
            // Item 2: Assigned Validity, i-Validity, i-Deduction.
            comps.push(
                block_instances(
                    &BlockSpec { kind: BlockKind::AssignedValidity, i, j: 0, budget: 0 },
                    idxs,
                    budgets,
                )
                .unwrap(),
            );
            comps.push(
                block_instances(
                    &BlockSpec { kind: BlockKind::IValidity, i, j: i, budget: 0 },
                    idxs,
                    budgets,
                )
                .unwrap(),
            );
            comps.push(
                block_instances(
                    &BlockSpec { kind: BlockKind::JDeduction, i, j: i, budget: 0 },
                    idxs,
                    budgets,
                )
                .unwrap(),
            );
            // Item 3: truth for j ⪯ i; item 4: codes for j ≺ i.
            for &j in idxs {
                if j == i || order.less(j, i, None, 0).unwrap_or(false) {
                    comps.push(truth_stream(idxs, j));
                }
            }
            for &j in idxs {
                if order.less(j, i, None, 0).unwrap_or(false) {
                    comps.push(item2_stream(idxs, j, n));
                }
            }
            // Companion: erasures of U_i's i-Collapse instances are valid
            // sentences, hence Assigned-Validity members; enumerating them
            // here keeps U_i⁻ ⊆ T_i checkable at desk scale.
            let collapse = block_instances(
                &BlockSpec { kind: BlockKind::ICollapse, i, j: i, budget: 0 },
                idxs,
                budgets,
            )
            .unwrap();
            comps.push(Box::new(collapse.map(|e| Emitted {
                sentence: Sentence::new(erase(e.sentence.formula()))
                    .expect("erasure preserves closedness"),
                provenance: "av-erase-companion".into(),
            })));
        }
    }

    pr_close(round_robin(comps), i)
}

/// `Pr_j`-closure block: boxes the configured background blocks of `j`.
fn closure_of_stream(spec: &Arc<FamilySpec>, j: u32) -> EStream {
    let idxs = &spec.indices;
    let budgets = &spec.budgets;
    let mut comps: Vec<EStream> = Vec::new();
    for b in spec.blocks.get(&j).cloned().unwrap_or_default() {
        if b.kind != BlockKind::ClosureOf {
            comps.push(block_instances(&b, idxs, budgets).expect("validated blocks"));
        }
    }
    let inner = round_robin(comps);
    Box::new(inner.map(move |e| Emitted {
        sentence: Sentence::new(Formula::op_plain(j, e.sentence.into_formula()))
            .expect("boxing preserves closedness"),
        provenance: format!("closure-of:{j}"),
    }))
}

/// The `U_i` stream (Theorem-7.x companion).
fn u_stream(spec: &Arc<FamilySpec>, i: u32, n: &BigUint) -> EStream {
    let idxs = &spec.indices;
    let budgets = &spec.budgets;
    let order = spec.validate().expect("validated at construction");
    let offsets = budgets.ordinal_supply.max(1);
    let mut comps: Vec<EStream> = Vec::new();

    // Item 1: stratified counterparts of the configured blocks.
    for b in spec.blocks.get(&i).cloned().unwrap_or_default() {
        match b.kind {
            BlockKind::PaAxioms => {
                comps.push(pa_stream(idxs, format!("block:PaAxioms[strat,i={i}]"), true, i))
            }
            BlockKind::ClosureOf => {
                if b.j != i {
                    comps.push(closure_of_stream(spec, b.j));
                }
            }
            _ => {
                if let Some(c) = counterpart(&b) {
                    comps.push(block_instances(&c, idxs, budgets).expect("validated blocks"));
                }
            }
        }
    }

    // Item 2: the four stratified schemas.
    for kind in [
        BlockKind::IAssignedStrativalidity,
        BlockKind::IStrativalidity,
        BlockKind::IStratideduction,
        BlockKind::ICollapse,
    ] {
        comps.push(
            block_instances(&BlockSpec { kind, i, j: i, budget: 0 }, idxs, budgets).unwrap(),
        );
    }

    // Item 3: stratified truth.
    comps.push(strat_truth_stream(idxs, i, offsets));

    // Item 4: Pr_j φ → φ⁺ over the stratifier supply (veristratifier plus
    // the canonical ε₀-multiple tails).
    for &j in idxs {
        if order.less(j, i, None, 0).unwrap_or(false) {
            comps.push(u_item4_stream(
                idxs,
                j,
                Stratifier::veristratifier(i),
                "veristratifier".into(),
            ));
            for t in 2..2 + budgets.ordinal_supply {
                comps.push(u_item4_stream(
                    idxs,
                    j,
                    Stratifier::eps_tail(i, t),
                    format!("eps-tail:{t}"),
                ));
            }
        }
    }

    // Item 5: codes for j ≺ i (plain biconditionals, i-stratified as-is).
    for &j in idxs {
        if order.less(j, i, None, 0).unwrap_or(false) {
            comps.push(item2_stream(idxs, j, n));
        }
    }

    // Item 6: straticlosure.
    straticlose(round_robin(comps), i, offsets)
}

/// Ties the self-referential knot: registers the family enumerator as a
/// native, curries it with S-m-n, takes the Recursion-Theorem fixed point
/// and returns the family built at that index.
pub fn fixed_point_theory(
    spec: Arc<FamilySpec>,
    session: Arc<Session>,
) -> Result<(BigUint, Family)> {
    spec.validate()?;
    let name = theory_native_name(&spec);
    if !session.registry().is_registered(&name) {
        let spec_for_native = Arc::clone(&spec);
        session.registry().register(
            &name,
            0,
            1,
            Arc::new(move |_ev, _args, y, fuel| {
                let (param_n, x) = unpair(y);
                let (code, i_big, m) = untriple(&x);
                let Some(i) = i_big.to_u32() else {
                    return StepOutcome::OutOfFuel;
                };
                if !spec_for_native.indices.contains(&i) {
                    return StepOutcome::OutOfFuel;
                }
                let Some(phi) = ungodel(&code) else {
                    return StepOutcome::OutOfFuel;
                };
                if !is_plain(&phi) {
                    return StepOutcome::OutOfFuel;
                }
                let fv = phi.free_vars();
                let x_var = v0();
                if !(fv.is_empty() || (fv.len() == 1 && fv.contains(&x_var))) {
                    return StepOutcome::OutOfFuel;
                }
                let goal = match phi.substitute(&x_var, &Term::numeral(m), false) {
                    Ok(g) => g,
                    Err(_) => return StepOutcome::OutOfFuel,
                };
                let budget = *fuel;
                let stream = t_stream(&spec_for_native, i, &param_n).map(|e| e.sentence);
                let (verdict, spent) = entails_counting(stream, &goal, budget);
                *fuel = fuel.saturating_sub(spent.max(1));
                match verdict {
                    ProveVerdict::Proved(_) => StepOutcome::Halted(BigUint::from(0u32)),
                    ProveVerdict::Unknown { .. } => StepOutcome::OutOfFuel,
                }
            }),
        )?;
    }
    let e_base = Descriptor::Native(name, vec![]).index();
    let f = Descriptor::Native("curry".into(), vec![Descriptor::NatLit(e_base)]).index();
    let n = fixpoint(&f);
    let family = build_t_of_n(spec, session, n.clone())?;
    Ok((n, family))
}

/// Deterministic native name for a family spec.
pub fn theory_native_name(spec: &FamilySpec) -> String {
    let json = serde_json::to_string(spec).expect("spec serializes");
    format!("theory-enum-{:016x}", fnv1a(json.as_bytes()))
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= *b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Three-valued verdict of bounded intended-structure checking.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum IntendedVerdict {
    True,
    False,
    Unknown,
}

impl IntendedVerdict {
    fn negate(self) -> IntendedVerdict {
        match self {
            IntendedVerdict::True => IntendedVerdict::False,
            IntendedVerdict::False => IntendedVerdict::True,
            IntendedVerdict::Unknown => IntendedVerdict::Unknown,
        }
    }
}

/// Bounded evaluation in the intended structure `M_T`: arithmetic atoms
/// exactly, `InW` through the substrate, operators through entailment.
/// `False` only arises from exact evaluation or certified sub-results.
pub fn model_check(
    fam: &Family,
    f: &Formula,
    s: &Assignment,
    budget: u64,
) -> IntendedVerdict {
    eval_formula(fam, f, s, budget)
}

fn eval_term(t: &Term, s: &Assignment) -> Option<BigUint> {
    match t {
        Term::Zero => Some(BigUint::from(0u32)),
        Term::Num(n) => Some(n.clone()),
        Term::Succ(x) => Some(eval_term(x, s)? + 1u32),
        Term::Plus(a, b) => Some(eval_term(a, s)? + eval_term(b, s)?),
        Term::Times(a, b) => Some(eval_term(a, s)? * eval_term(b, s)?),
        Term::Triple(a, b, c) => Some(triple(
            &eval_term(a, s)?,
            &eval_term(b, s)?,
            &eval_term(c, s)?,
        )),
        Term::Var(v) => s.get(v).cloned(),
    }
}

fn eval_formula(fam: &Family, f: &Formula, s: &Assignment, budget: u64) -> IntendedVerdict {
    match f {
        Formula::Eq(a, b) => match (eval_term(a, s), eval_term(b, s)) {
            (Some(x), Some(y)) => {
                if x == y {
                    IntendedVerdict::True
                } else {
                    IntendedVerdict::False
                }
            }
            _ => IntendedVerdict::Unknown,
        },
        Formula::InW(x, e) => match (eval_term(x, s), eval_term(e, s)) {
            (Some(vx), Some(ve)) => {
                match fam.session.evaluator().we_member(&ve, &vx, fam.spec.budgets.fuel.min(budget.max(1_000))) {
                    WeMember::Yes => IntendedVerdict::True,
                    WeMember::Unknown => IntendedVerdict::Unknown,
                }
            }
            _ => IntendedVerdict::Unknown,
        },
        Formula::OAtom(t) => match eval_term(t, s) {
            Some(v) => {
                if fam.session.ocerts.read().expect("ocert table").contains_key(&v) {
                    IntendedVerdict::True
                } else {
                    IntendedVerdict::Unknown
                }
            }
            None => IntendedVerdict::Unknown,
        },
        Formula::PhiAtom(e, x, y) => {
            match (eval_term(e, s), eval_term(x, s), eval_term(y, s)) {
                (Some(ve), Some(vx), Some(vy)) => {
                    match fam
                        .session
                        .evaluator()
                        .eval_step(&ve, &vx, fam.spec.budgets.fuel.min(budget.max(1_000)))
                    {
                        StepOutcome::Halted(v) => {
                            if v == vy {
                                IntendedVerdict::True
                            } else {
                                IntendedVerdict::False
                            }
                        }
                        StepOutcome::OutOfFuel => IntendedVerdict::Unknown,
                    }
                }
                _ => IntendedVerdict::Unknown,
            }
        }
        Formula::Not(g) => eval_formula(fam, g, s, budget).negate(),
        Formula::Implies(a, b) => {
            // Consequent first: exact arithmetic truths settle the
            // implication without spending proof budget on the antecedent.
            match eval_formula(fam, b, s, budget) {
                IntendedVerdict::True => IntendedVerdict::True,
                consequent => match (eval_formula(fam, a, s, budget), consequent) {
                    (IntendedVerdict::False, _) => IntendedVerdict::True,
                    (IntendedVerdict::True, IntendedVerdict::False) => IntendedVerdict::False,
                    _ => IntendedVerdict::Unknown,
                },
            }
        }
        Formula::Forall(x, body) => {
            if let Some((bound, inner)) = bounded_pattern(x, body) {
                let mut out = IntendedVerdict::True;
                let mut k = BigUint::from(0u32);
                while k <= bound {
                    let s2 = s.update(x.clone(), k.clone());
                    match eval_formula(fam, inner, &s2, budget) {
                        IntendedVerdict::False => return IntendedVerdict::False,
                        IntendedVerdict::Unknown => out = IntendedVerdict::Unknown,
                        IntendedVerdict::True => {}
                    }
                    k += 1u32;
                }
                out
            } else {
                for k in 0..fam.spec.budgets.quant_samples {
                    let s2 = s.update(x.clone(), BigUint::from(k));
                    if eval_formula(fam, body, &s2, budget) == IntendedVerdict::False {
                        return IntendedVerdict::False;
                    }
                }
                IntendedVerdict::Unknown
            }
        }
        Formula::Op(OperatorId::Plain(i), psi) => {
            if !fam.spec.indices.contains(i) {
                return IntendedVerdict::Unknown;
            }
            let restricted = restrict(s, psi);
            let Ok(inst) = psi.assign_substitute(&restricted) else {
                return IntendedVerdict::Unknown;
            };
            let handle = fam.theory(*i);
            match entails(handle.sentences(), inst.formula(), budget) {
                ProveVerdict::Proved(_) => IntendedVerdict::True,
                ProveVerdict::Unknown { .. } => IntendedVerdict::Unknown,
            }
        }
        Formula::Op(OperatorId::Strat(alpha, i), psi) => {
            if fam.spec.mode != FamilyMode::SelfTruth || !fam.spec.indices.contains(i) {
                return IntendedVerdict::Unknown;
            }
            let restricted = restrict(s, psi);
            let Ok(inst) = psi.assign_substitute(&restricted) else {
                return IntendedVerdict::Unknown;
            };
            let Ok(handle) = fam.stratified_cut(*i, alpha.clone()) else {
                return IntendedVerdict::Unknown;
            };
            match entails(handle.sentences(), inst.formula(), budget) {
                ProveVerdict::Proved(_) => IntendedVerdict::True,
                ProveVerdict::Unknown { .. } => IntendedVerdict::Unknown,
            }
        }
    }
}

fn restrict(s: &Assignment, f: &Formula) -> Assignment {
    Assignment::from_pairs(
        f.free_vars()
            .into_iter()
            .filter_map(|v| s.get(&v).map(|n| (v.clone(), n.clone()))),
    )
}

/// Recognizes `x ≤ n̄` / `x < n̄` guards: `¬∀z¬(x+z = n̄)` variants and the
/// successor form for strict bounds. Returns the inclusive bound and body.
fn bounded_pattern<'a>(x: &Var, body: &'a Formula) -> Option<(BigUint, &'a Formula)> {
    let Formula::Implies(guard, inner) = body else {
        return None;
    };
    let Formula::Not(g1) = &**guard else { return None };
    let Formula::Forall(z, g2) = &**g1 else { return None };
    let Formula::Not(g3) = &**g2 else { return None };
    let Formula::Eq(lhs, rhs) = &**g3 else { return None };
    let bound = rhs.numeral_value()?;
    // Some(strict?) when t is x+z / z+x (≤) or S(x+z) / S(z+x) (<).
    fn guard_shape(t: &Term, x: &Var, z: &Var) -> Option<bool> {
        match t {
            Term::Plus(a, b) => {
                let (ta, tb) = (&**a, &**b);
                let xz = (*ta == Term::var(x.clone()) && *tb == Term::var(z.clone()))
                    || (*ta == Term::var(z.clone()) && *tb == Term::var(x.clone()));
                xz.then_some(false)
            }
            Term::Succ(inner) => guard_shape(inner, x, z).map(|_| true),
            _ => None,
        }
    }
    let strict = guard_shape(lhs, x, z)?;
    let inclusive = if strict {
        if bound == BigUint::from(0u32) {
            return None;
        }
        bound - 1u32
    } else {
        bound
    };
    Some((inclusive, inner))
}

/// `F_U` translation: operator-free arithmetic rendering of a plain
/// formula, spelling provability with the artifact's own `InW`/`Phi`
/// vocabulary. `code_map` gives the enumerator index per operator index.
pub fn fu_translate(
    f: &Formula,
    code_map: &BTreeMap<u32, BigUint>,
    session: &Arc<Session>,
) -> Result<Formula> {
    if !is_plain(f) {
        return Err(CoreError::Precondition("F_U applies to plain formulas".into()));
    }
    fu_inner(f, code_map, session)
}

fn fu_inner(
    f: &Formula,
    code_map: &BTreeMap<u32, BigUint>,
    session: &Arc<Session>,
) -> Result<Formula> {
    Ok(match f {
        Formula::Eq(..) | Formula::InW(..) | Formula::OAtom(..) | Formula::PhiAtom(..) => {
            f.clone()
        }
        Formula::Not(g) => Formula::not(fu_inner(g, code_map, session)?),
        Formula::Implies(a, b) => Formula::implies(
            fu_inner(a, code_map, session)?,
            fu_inner(b, code_map, session)?,
        ),
        Formula::Forall(v, g) => Formula::forall(v.clone(), fu_inner(g, code_map, session)?),
        Formula::Op(OperatorId::Strat(..), _) => unreachable!("plain formulas only"),
        Formula::Op(OperatorId::Plain(i), psi) => {
            let e_i = code_map.get(i).ok_or_else(|| {
                CoreError::Precondition(format!("code map misses index {i}"))
            })?;
            let fv: Vec<Var> = psi.free_vars().into_iter().collect();
            let canon = crate::fol::canonical_variant(psi, &fv);
            match fv.len() {
                0 => prov_atom(&godel(&canon), *i, Term::Zero, e_i),
                1 => prov_atom(&godel(&canon), *i, Term::var(fv[0].clone()), e_i),
                _ => {
                    // Register (idempotently) the per-formula substitution
                    // native computing the instance code from packed args.
                    let name = format!("fu-subst-{:016x}", fnv1a(&godel(&canon).to_bytes_be()));
                    if !session.registry().is_registered(&name) {
                        let canon2 = canon.clone();
                        let k = fv.len();
                        session.registry().register(
                            &name,
                            0,
                            1,
                            Arc::new(move |_, _, packed, _| {
                                let values = unpack_args(packed, k);
                                let mut inst = canon2.clone();
                                for (pos, val) in values.iter().enumerate() {
                                    match inst.substitute(
                                        &Var::Canon(pos as u32),
                                        &Term::numeral(val.clone()),
                                        false,
                                    ) {
                                        Ok(next) => inst = next,
                                        Err(_) => return StepOutcome::OutOfFuel,
                                    }
                                }
                                StepOutcome::Halted(godel(&inst))
                            }),
                        )?;
                    }
                    let e_sub = Descriptor::Native(name, vec![]).index();
                    let avoid: BTreeSet<Var> = fv.iter().cloned().collect();
                    let y = crate::formula::fresh_var(&avoid);
                    // ∃y(Phi(ē_sub, pack(x̄), y) ∧ ⟨y, ī, 0̄⟩ ∈ W[ē_i])
                    let packed = pack_terms(&fv);
                    Formula::exists(
                        y.clone(),
                        Formula::and(
                            Formula::PhiAtom(
                                Term::numeral(e_sub),
                                packed,
                                Term::var(y.clone()),
                            ),
                            Formula::InW(
                                Term::triple(
                                    Term::var(y),
                                    Term::numeral(BigUint::from(*i)),
                                    Term::Zero,
                                ),
                                Term::numeral(e_i.clone()),
                            ),
                        ),
                    )
                }
            }
        }
    })
}

/// `⟨⌜ψ⌝, ī, m⟩ ∈ W[ē]` with `m` the given term.
fn prov_atom(code: &BigUint, i: u32, m: Term, e: &BigUint) -> Formula {
    Formula::InW(
        Term::triple(
            Term::numeral(code.clone()),
            Term::numeral(BigUint::from(i)),
            m,
        ),
        Term::numeral(e.clone()),
    )
}

/// Right-nested packing `⟨x₁, ⟨x₂, …⟩, 0⟩` of ≥2 argument variables.
fn pack_terms(fv: &[Var]) -> Term {
    if fv.len() == 1 {
        return Term::var(fv[0].clone());
    }
    Term::triple(
        Term::var(fv[0].clone()),
        pack_terms(&fv[1..]),
        Term::Zero,
    )
}

fn unpack_args(packed: &BigUint, k: usize) -> Vec<BigUint> {
    if k == 1 {
        return vec![packed.clone()];
    }
    let (a, rest, _zero) = untriple(packed);
    let mut out = vec![a];
    out.extend(unpack_args(&rest, k - 1));
    out
}

/// Syntactic (and, where the schema demands validity, semi-decidable)
/// recognition of block instances. `neighbor_blocks` resolves Closure-of
/// membership one level deep (the holder's configured blocks for index `j`).
pub fn is_block_instance(
    sentence: &Sentence,
    b: &BlockSpec,
    indices: &[u32],
    budgets: &Budgets,
    neighbor_blocks: &[BlockSpec],
) -> IntendedVerdict {
    let core = peel_ucl(sentence.formula());
    let yes = IntendedVerdict::True;
    let no = IntendedVerdict::False;
    let unknown = IntendedVerdict::Unknown;
    match b.kind {
        BlockKind::JDeduction => {
            let j = b.j;
            match core {
                Formula::Implies(p, q) => match (&**p, &**q) {
                    (Formula::Op(OperatorId::Plain(j1), imp), Formula::Implies(qa, qb)) => {
                        match (&**imp, &**qa, &**qb) {
                            (
                                Formula::Implies(phi, psi),
                                Formula::Op(OperatorId::Plain(j2), phi2),
                                Formula::Op(OperatorId::Plain(j3), psi2),
                            ) if *j1 == j && *j2 == j && *j3 == j => {
                                if phi.alpha_equal(phi2) && psi.alpha_equal(psi2) {
                                    yes
                                } else {
                                    no
                                }
                            }
                            _ => no,
                        }
                    }
                    _ => no,
                },
                _ => no,
            }
        }
        BlockKind::ModifiedJDeduction => {
            let j = b.j;
            match core {
                Formula::Implies(p, q) => match (&**p, &**q) {
                    (Formula::Op(OperatorId::Plain(j1), imp), Formula::Implies(qa, qb)) => {
                        match (&**imp, &**qa, &**qb) {
                            (
                                Formula::Implies(phi, psi),
                                Formula::Op(OperatorId::Plain(j2), phi2),
                                Formula::Op(OperatorId::Plain(j3), conj),
                            ) if *j1 == j && *j2 == j && *j3 == j => {
                                let expect = Formula::and((**psi).clone(), (**phi).clone());
                                if phi.alpha_equal(phi2) && conj.alpha_equal(&expect) {
                                    yes
                                } else {
                                    no
                                }
                            }
                            _ => no,
                        }
                    }
                    _ => no,
                },
                _ => no,
            }
        }
        BlockKind::AssignedValidity => {
            // Instances are exactly the valid sentences `φ^s`.
            match prove_valid(sentence.formula(), budgets.prove_budget) {
                ProveVerdict::Proved(_) => yes,
                ProveVerdict::Unknown { .. } => unknown,
            }
        }
        BlockKind::IValidity => match core {
            Formula::Op(OperatorId::Plain(i), phi) if *i == b.j => {
                match prove_valid(phi, budgets.prove_budget) {
                    ProveVerdict::Proved(_) => yes,
                    ProveVerdict::Unknown { .. } => unknown,
                }
            }
            _ => no,
        },
        BlockKind::IIntrospection => match core {
            Formula::Implies(p, q) => match (&**p, &**q) {
                (Formula::Op(OperatorId::Plain(i1), phi), Formula::Op(OperatorId::Plain(i2), kk)) => {
                    match &**kk {
                        Formula::Op(OperatorId::Plain(i3), phi2)
                            if *i1 == b.j && *i2 == b.j && *i3 == b.j =>
                        {
                            if phi.alpha_equal(phi2) {
                                yes
                            } else {
                                no
                            }
                        }
                        _ => no,
                    }
                }
                _ => no,
            },
            _ => no,
        },
        BlockKind::PaAxioms => {
            if pa_base_axioms().iter().any(|a| core.alpha_equal(a)) {
                return yes;
            }
            if is_induction_instance(core) {
                yes
            } else {
                no
            }
        }
        BlockKind::JSmt => match_smt(core, |op| *op == OperatorId::Plain(b.j)),
        BlockKind::IStratiSmt => {
            if !is_i_stratified(sentence.formula(), b.j) {
                return no;
            }
            match_smt(core, |op| matches!(op, OperatorId::Strat(_, i) if *i == b.j))
        }
        BlockKind::ClosureOf => match core {
            Formula::Op(OperatorId::Plain(j), inner) if *j == b.j => {
                let Ok(sent) = Sentence::new((**inner).clone()) else {
                    return no;
                };
                let mut verdict = no;
                for nb in neighbor_blocks {
                    if nb.kind == BlockKind::ClosureOf {
                        continue;
                    }
                    match is_block_instance(&sent, nb, indices, budgets, &[]) {
                        IntendedVerdict::True => return yes,
                        IntendedVerdict::Unknown => verdict = unknown,
                        IntendedVerdict::False => {}
                    }
                }
                verdict
            }
            _ => no,
        },
        BlockKind::IStratideduction => {
            if !is_i_stratified(sentence.formula(), b.j) {
                return no;
            }
            match core {
                Formula::Implies(p, q) => match (&**p, &**q) {
                    (
                        Formula::Op(OperatorId::Strat(a1, i1), imp),
                        Formula::Implies(qa, qb),
                    ) => match (&**imp, &**qa, &**qb) {
                        (
                            Formula::Implies(phi, psi),
                            Formula::Op(OperatorId::Strat(a2, i2), phi2),
                            Formula::Op(OperatorId::Strat(a3, i3), psi2),
                        ) if *i1 == b.j
                            && *i2 == b.j
                            && *i3 == b.j
                            && a1 == a2
                            && a1 == a3 =>
                        {
                            if phi.alpha_equal(phi2) && psi.alpha_equal(psi2) {
                                yes
                            } else {
                                no
                            }
                        }
                        _ => no,
                    },
                    _ => no,
                },
                _ => no,
            }
        }
        BlockKind::IAssignedStrativalidity => {
            if !is_i_stratified(sentence.formula(), b.j) {
                return no;
            }
            match prove_valid(sentence.formula(), budgets.prove_budget) {
                ProveVerdict::Proved(_) => yes,
                ProveVerdict::Unknown { .. } => unknown,
            }
        }
        BlockKind::IStrativalidity => match core {
            Formula::Op(OperatorId::Strat(_, i), phi) if *i == b.j => {
                if !is_i_stratified(core, b.j) {
                    return no;
                }
                match prove_valid(phi, budgets.prove_budget) {
                    ProveVerdict::Proved(_) => yes,
                    ProveVerdict::Unknown { .. } => unknown,
                }
            }
            _ => no,
        },
        BlockKind::IStratrospection => {
            if !is_i_stratified(sentence.formula(), b.j) {
                return no;
            }
            match core {
                Formula::Implies(p, q) => match (&**p, &**q) {
                    (
                        Formula::Op(OperatorId::Strat(a1, i1), phi),
                        Formula::Op(OperatorId::Strat(_b1, i2), inner),
                    ) => match &**inner {
                        Formula::Op(OperatorId::Strat(a2, i3), phi2)
                            if *i1 == b.j && *i2 == b.j && *i3 == b.j && a1 == a2 =>
                        {
                            if phi.alpha_equal(phi2) {
                                yes
                            } else {
                                no
                            }
                        }
                        _ => no,
                    },
                    _ => no,
                },
                _ => no,
            }
        }
        BlockKind::ICollapse => {
            if !is_i_stratified(sentence.formula(), b.j) {
                return no;
            }
            // ucl(Pr^α_i φ ↔ Pr^β_i φ) with α ≤₁ β.
            let Some((l, r)) = match_iff(core) else { return no };
            match (l, r) {
                (
                    Formula::Op(OperatorId::Strat(a1, i1), phi),
                    Formula::Op(OperatorId::Strat(a2, i2), phi2),
                ) if *i1 == b.j && *i2 == b.j => {
                    if !phi.alpha_equal(phi2) {
                        return no;
                    }
                    match le1(a1, a2) {
                        Le1Verdict::Yes => yes,
                        Le1Verdict::No => no,
                        Le1Verdict::Unknown => unknown,
                    }
                }
                _ => no,
            }
        }
        BlockKind::BasicO => crate::kleene::is_basic_o_axiom(sentence),
    }
}

fn peel_ucl(f: &Formula) -> &Formula {
    let mut cur = f;
    while let Formula::Forall(_, inner) = cur {
        cur = inner;
    }
    cur
}

fn is_induction_instance(core: &Formula) -> bool {
    let Formula::Implies(zero_case, rest) = core else { return false };
    let Formula::Implies(step, conclusion) = &**rest else { return false };
    let Formula::Forall(x, phi) = &**conclusion else { return false };
    let Ok(expect_zero) = phi.substitute(x, &Term::Zero, true) else {
        return false;
    };
    if !zero_case.alpha_equal(&expect_zero) {
        return false;
    }
    let Formula::Forall(x2, step_body) = &**step else { return false };
    let Formula::Implies(sphi, ssucc) = &**step_body else { return false };
    let Ok(expect_succ) = sphi.substitute(x2, &Term::succ(Term::var(x2.clone())), true) else {
        return false;
    };
    // The step quantifier may rename the induction variable.
    let phi_renamed = match phi.substitute(x, &Term::var(x2.clone()), true) {
        Ok(f) => f,
        Err(_) => return false,
    };
    sphi.alpha_equal(&phi_renamed) && ssucc.alpha_equal(&expect_succ)
}

fn match_iff(core: &Formula) -> Option<(&Formula, &Formula)> {
    // iff expands to ¬((a→b) → ¬(b→a)); recover (a, b).
    let Formula::Not(outer) = core else { return None };
    let Formula::Implies(fwd, rest) = &**outer else { return None };
    let Formula::Not(bwd) = &**rest else { return None };
    let Formula::Implies(a1, b1) = &**fwd else { return None };
    let Formula::Implies(b2, a2) = &**bwd else { return None };
    if a1.alpha_equal(a2) && b1.alpha_equal(b2) {
        Some((a1, b1))
    } else {
        None
    }
}

fn match_smt(core: &Formula, op_ok: impl Fn(&OperatorId) -> bool) -> IntendedVerdict {
    // exists e forall x (Op φ ↔ x ∈ W[e]), e ∉ FV(φ).
    let no = IntendedVerdict::False;
    let Formula::Not(o1) = core else { return no };
    let Formula::Forall(e, o2) = &**o1 else { return no };
    let Formula::Not(o3) = &**o2 else { return no };
    let Formula::Forall(x, body) = &**o3 else { return no };
    let Some((l, r)) = match_iff(body) else { return no };
    let (Formula::Op(op, phi), Formula::InW(tx, te)) = (l, r) else {
        return no;
    };
    if !op_ok(op) {
        return no;
    }
    if *tx != Term::var(x.clone()) || *te != Term::var(e.clone()) {
        return no;
    }
    if phi.free_vars().contains(e) {
        return no;
    }
    IntendedVerdict::True
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_formula, parse_sentence, print_formula, Dialect};

    fn pf(s: &str) -> Formula {
        parse_formula(s, Dialect::OExt).unwrap()
    }

    fn ps(s: &str) -> Sentence {
        parse_sentence(s, Dialect::OExt).unwrap()
    }

    fn toy_spec(mode: FamilyMode) -> Arc<FamilySpec> {
        Arc::new(FamilySpec {
            order_edges: vec![(1, 0)],
            indices: vec![0, 1],
            blocks: BTreeMap::from([(
                0,
                vec![
                    BlockSpec { kind: BlockKind::PaAxioms, i: 0, j: 0, budget: 0 },
                    BlockSpec { kind: BlockKind::JDeduction, i: 0, j: 0, budget: 0 },
                    BlockSpec { kind: BlockKind::AssignedValidity, i: 0, j: 0, budget: 0 },
                ],
            )]),
            mode,
            budgets: Budgets::default(),
        })
    }

    #[test]
    fn order_spec_checks() {
        assert!(OrderSpec::explicit(vec![(1, 0)]).is_ok());
        assert!(OrderSpec::explicit(vec![(0, 0)]).is_err());
        assert!(OrderSpec::explicit(vec![(0, 1), (1, 0)]).is_err());
        let o = OrderSpec::explicit(vec![(2, 1), (1, 0)]).unwrap();
        assert_eq!(o.less(2, 0, None, 0), Some(true));
        assert_eq!(o.less(0, 2, None, 0), Some(false));
        assert_eq!(o.leq(1, 1, None, 0), Some(true));
    }

    #[test]
    fn pr_close_orbit() {
        let sigma = ps("0=0");
        let input: EStream = Box::new(
            vec![Emitted { sentence: sigma.clone(), provenance: "seed".into() }].into_iter(),
        );
        let got: Vec<Sentence> = pr_close(input, 3).map(|e| e.sentence).take(3).collect();
        assert_eq!(got[0], ps("0=0"));
        assert_eq!(got[1], ps("K[3] 0=0"));
        assert_eq!(got[2], ps("K[3] K[3] 0=0"));

        let empty: EStream = Box::new(std::iter::empty());
        assert_eq!(pr_close(empty, 3).count(), 0);
    }

    #[test]
    fn pr_close_boxes_everything_eventually() {
        let input: EStream = Box::new(
            vec![
                Emitted { sentence: ps("0=0"), provenance: "a".into() },
                Emitted { sentence: ps("S(0)=S(0)"), provenance: "b".into() },
            ]
            .into_iter(),
        );
        let got: Vec<Sentence> = pr_close(input, 1).map(|e| e.sentence).take(12).collect();
        for s in [ps("0=0"), ps("S(0)=S(0)")] {
            assert!(got.contains(&s));
            let boxed = Sentence::new(Formula::op_plain(1, s.formula().clone())).unwrap();
            assert!(got.contains(&boxed), "{boxed:?} missing from {got:?}");
        }
        // Duplicate-free modulo alpha.
        for (a, x) in got.iter().enumerate() {
            for y in got.iter().skip(a + 1) {
                assert!(!x.formula().alpha_equal(y.formula()));
            }
        }
    }

    #[test]
    fn block_streams_recognized_by_matcher() {
        let budgets = Budgets::default();
        let idxs = [0u32, 1];
        for kind in [
            BlockKind::JDeduction,
            BlockKind::ModifiedJDeduction,
            BlockKind::IIntrospection,
            BlockKind::JSmt,
            BlockKind::PaAxioms,
            BlockKind::IStratideduction,
            BlockKind::IStratrospection,
            BlockKind::IStratiSmt,
            BlockKind::ICollapse,
        ] {
            let b = BlockSpec { kind, i: 0, j: 1, budget: 4 };
            let stream = block_instances(&b, &idxs, &budgets).unwrap();
            for e in stream.take(6) {
                let v = is_block_instance(&e.sentence, &b, &idxs, &budgets, &[]);
                assert!(
                    v != IntendedVerdict::False,
                    "{kind:?} emitted unrecognized {}",
                    print_formula(e.sentence.formula())
                );
            }
        }
    }

    #[test]
    fn stratified_blocks_emit_stratified_sentences() {
        let budgets = Budgets::default();
        let idxs = [0u32, 1];
        for kind in [
            BlockKind::IStratideduction,
            BlockKind::IAssignedStrativalidity,
            BlockKind::IStrativalidity,
            BlockKind::IStratrospection,
            BlockKind::IStratiSmt,
            BlockKind::ICollapse,
        ] {
            let b = BlockSpec { kind, i: 1, j: 1, budget: 4 };
            let stream = block_instances(&b, &idxs, &budgets).unwrap();
            for e in stream.take(5) {
                assert!(
                    is_i_stratified(e.sentence.formula(), 1),
                    "{kind:?}: {}",
                    print_formula(e.sentence.formula())
                );
            }
        }
    }

    #[test]
    fn non_instances_rejected() {
        let budgets = Budgets::default();
        let idxs = [0u32, 1];
        let zero = ps("0=0");
        let smt = BlockSpec { kind: BlockKind::JSmt, i: 0, j: 1, budget: 0 };
        assert_eq!(
            is_block_instance(&zero, &smt, &idxs, &budgets, &[]),
            IntendedVerdict::False
        );
        let ded = BlockSpec { kind: BlockKind::JDeduction, i: 0, j: 1, budget: 0 };
        assert_eq!(
            is_block_instance(&zero, &ded, &idxs, &budgets, &[]),
            IntendedVerdict::False
        );
        // Assigned validity of an unprovable sentence stays Unknown.
        let av = BlockSpec { kind: BlockKind::AssignedValidity, i: 0, j: 0, budget: 0 };
        assert_eq!(
            is_block_instance(&ps("K[1] 0=0"), &av, &idxs, &budgets, &[]),
            IntendedVerdict::Unknown
        );
        assert_eq!(
            is_block_instance(&ps("(0=0 -> 0=0)"), &av, &idxs, &budgets, &[]),
            IntendedVerdict::True
        );
    }

    #[test]
    fn family_validation() {
        let spec = toy_spec(FamilyMode::Plain);
        assert!(spec.validate().is_ok());

        let mut bad = (*spec).clone();
        bad.order_edges = vec![(0, 0)];
        assert!(bad.validate().is_err());

        let mut bad2 = (*spec).clone();
        bad2.blocks.insert(
            0,
            vec![BlockSpec { kind: BlockKind::ModifiedJDeduction, i: 0, j: 1, budget: 0 }],
        );
        // 0 ≺ 1 does not hold, so Modified j-Deduction is misplaced.
        assert!(bad2.validate().is_err());

        let mut strat_in_plain = (*spec).clone();
        strat_in_plain.blocks.insert(
            0,
            vec![BlockSpec { kind: BlockKind::ICollapse, i: 0, j: 0, budget: 0 }],
        );
        assert!(strat_in_plain.validate().is_err());
    }

    #[test]
    fn plain_family_streams() {
        let session = Session::new();
        let spec = toy_spec(FamilyMode::Plain);
        let fam = build_t_of_n(spec, session, BigUint::from(7u32)).unwrap();

        // T_0 carries truth-of-1 instances; T_1 must not.
        let t0: Vec<Emitted> = fam.theory(0).stream().take(400).collect();
        assert!(t0.iter().any(|e| e.provenance == "truth:j=1"));
        let t1: Vec<Emitted> = fam.theory(1).stream().take(400).collect();
        assert!(t1.iter().all(|e| e.provenance != "truth:j=1"));
        assert!(t1.iter().all(|e| e.provenance != "truth:j=0"));

        // Both carry item-2 biconditionals for every index.
        for idx in [0u32, 1] {
            assert!(t0.iter().any(|e| e.provenance == format!("item2:j={idx}")));
            assert!(t1.iter().any(|e| e.provenance == format!("item2:j={idx}")));
        }

        // Closure law on a prefix: some emitted sentence reappears boxed.
        let first = t0[0].sentence.clone();
        let boxed = Formula::op_plain(0, first.formula().clone());
        assert!(t0.iter().any(|e| e.sentence.formula().alpha_equal(&boxed)));
    }

    #[test]
    fn item2_shape() {
        let session = Session::new();
        let spec = toy_spec(FamilyMode::Plain);
        let n = BigUint::from(7u32);
        let fam = build_t_of_n(spec, session, n.clone()).unwrap();
        let item2 = fam
            .theory(0)
            .stream()
            .take(200)
            .find(|e| e.provenance == "item2:j=1")
            .expect("item2 present");
        // ∀x(K[1]φ ↔ ⟨⌜φ⌝, 1̄, x⟩ ∈ W[n̄])
        let Formula::Forall(_, body) = item2.sentence.formula() else {
            panic!("item2 must be a ∀");
        };
        let s = print_formula(body);
        assert!(s.contains("in W["), "{s}");
    }

    #[test]
    fn model_check_arithmetic() {
        let session = Session::new();
        let spec = toy_spec(FamilyMode::Plain);
        let fam = build_t_of_n(spec, session, BigUint::from(7u32)).unwrap();
        let s = Assignment::new();
        assert_eq!(
            model_check(&fam, &pf("(S(0)+S(0))=S(S(0))"), &s, 2_000),
            IntendedVerdict::True
        );
        assert_eq!(
            model_check(&fam, &pf("S(0)=0"), &s, 2_000),
            IntendedVerdict::False
        );
        assert_eq!(
            model_check(&fam, &pf("<0,0,0>=0"), &s, 2_000),
            IntendedVerdict::True
        );
        // Unbounded quantifier: sampled, Unknown when no counterexample.
        assert_eq!(
            model_check(&fam, &pf("forall x. x=x"), &s, 2_000),
            IntendedVerdict::Unknown
        );
        // ... but a certified counterexample refutes.
        assert_eq!(
            model_check(&fam, &pf("forall x. x=0"), &s, 2_000),
            IntendedVerdict::False
        );
    }

    #[test]
    fn model_check_bounded_quantifier() {
        let session = Session::new();
        let spec = toy_spec(FamilyMode::Plain);
        let fam = build_t_of_n(spec, session, BigUint::from(7u32)).unwrap();
        let s = Assignment::new();
        // ∀x(∃z(x+z=3̄) → x=x) is exactly true.
        let f = pf("forall x. ((exists z. (x+z)=3) -> x=x)");
        assert_eq!(model_check(&fam, &f, &s, 2_000), IntendedVerdict::True);
        // Strict form with a false body at the bound.
        let g = pf("forall x. ((exists z. S((x+z))=3) -> x=0)");
        assert_eq!(model_check(&fam, &g, &s, 2_000), IntendedVerdict::False);
    }

    #[test]
    fn model_check_operator_axiom() {
        let session = Session::new();
        let spec = toy_spec(FamilyMode::Plain);
        let fam = build_t_of_n(spec, session, BigUint::from(7u32)).unwrap();
        let s = Assignment::new();
        // 0=0 is an Assigned-Validity axiom of T_0, so K[0](0=0) is True.
        assert_eq!(
            model_check(&fam, &pf("K[0] 0=0"), &s, 60_000),
            IntendedVerdict::True
        );
        // No refutation capability.
        assert_eq!(
            model_check(&fam, &pf("K[0] S(0)=0"), &s, 2_000),
            IntendedVerdict::Unknown
        );
    }

    #[test]
    fn self_truth_family_and_u() {
        let session = Session::new();
        let spec = toy_spec(FamilyMode::SelfTruth);
        let fam = build_t_of_n(spec, session, BigUint::from(7u32)).unwrap();

        // U_0 emissions are all 0-stratified.
        let u0: Vec<Emitted> = fam.u_theory(0).unwrap().stream().take(150).collect();
        assert!(!u0.is_empty());
        for e in &u0 {
            assert!(
                is_i_stratified(e.sentence.formula(), 0),
                "unstratified U emission: {}",
                print_formula(e.sentence.formula())
            );
        }
        // Straticlosure appears.
        assert!(u0.iter().any(|e| e.provenance == "straticlosure"));

        // The erased stream matches erase() of the U stream.
        let s0: Vec<Sentence> = fam
            .stratified_erased(0)
            .unwrap()
            .stream()
            .take(50)
            .map(|e| e.sentence)
            .collect();
        for (a, b) in s0.iter().zip(u0.iter()) {
            assert_eq!(a.formula(), &erase(b.sentence.formula()));
        }

        // Cuts keep only low superscripts and nest.
        let alpha = Ordinal::eps_times(2);
        let cut: Vec<Sentence> = fam
            .stratified_cut(0, alpha.clone())
            .unwrap()
            .stream()
            .take(40)
            .map(|e| e.sentence)
            .collect();
        for s in &cut {
            assert!(superscripts(s.formula()).iter().all(|b| *b < alpha));
        }
    }

    #[test]
    fn fixed_point_is_deterministic() {
        let session = Session::new();
        let spec = toy_spec(FamilyMode::Plain);
        let (n1, _) = fixed_point_theory(Arc::clone(&spec), Arc::clone(&session)).unwrap();
        let (n2, _) = fixed_point_theory(spec, session).unwrap();
        assert_eq!(n1, n2);
    }

    #[test]
    fn fu_translate_clauses() {
        let session = Session::new();
        let mut codes = BTreeMap::new();
        codes.insert(0u32, BigUint::from(99u32));
        codes.insert(1u32, BigUint::from(99u32));

        // Atomic formulas pass through.
        let atom = pf("x=0");
        assert_eq!(fu_translate(&atom, &codes, &session).unwrap(), atom);

        // Negation is homomorphic.
        let neg = pf("~K[1] x=0");
        let out = fu_translate(&neg, &codes, &session).unwrap();
        assert!(matches!(out, Formula::Not(_)));

        // K[i](x=0) becomes a Prov-shaped InW atom with FV preserved.
        let k = pf("K[1] x=0");
        let out = fu_translate(&k, &codes, &session).unwrap();
        assert_eq!(out.free_vars(), k.free_vars());
        assert!(matches!(out, Formula::InW(..)));

        // Sentences use the m = 0 slot.
        let sent = pf("K[0] 0=0");
        let out = fu_translate(&sent, &codes, &session).unwrap();
        assert!(out.free_vars().is_empty());

        // Two free variables route through the substitution native.
        let two = pf("K[0] x=y");
        let out = fu_translate(&two, &codes, &session).unwrap();
        assert_eq!(out.free_vars(), two.free_vars());

        // Not plain: rejected.
        assert!(fu_translate(&pf("K[0]^{e0*1} 0=0"), &codes, &session).is_err());
    }
}
