//! Bounded entailment with checkable certificates.
//!
//! `entails` dovetails axiom-stream consumption with tableau search (one
//! axiom consumed per 16 expansions by default) and returns either a
//! certificate — the finite axiom list `σ₁…σₙ` plus a closed tableau for
//! `¬(σ₁→⋯→σₙ→goal)` — or Unknown. Negative answers are never emitted.
//!
//! Certificates survive the two structural transformers the stratification
//! machinery needs: superscript erasure and order-preserving ordinal maps.
//! Both rewrite formulas and operator-atom keys but keep the derivation
//! tree and substitution; the checker revalidates from scratch.

use std::collections::BTreeSet;

use crate::error::{CoreError, Result};
use crate::fol::{
    collect_symbols, equality_axioms, is_equality_axiom, reduce_to_fol, FolAtom, FolFormula,
    OpKey, Subst,
};
use crate::formula::{Formula, OperatorId, Sentence};
use crate::ordinal::{pattern_collapse, OrdMap, Ordinal};
use crate::strat::{apply_ordmap, erase, is_i_stratified, superscripts};
use crate::tableau::{check_tableau, refute, used_roots, DerivNode, Refutation};

/// How many expansions buy one axiom from the stream.
pub const AXIOMS_PER_EXPANSIONS: u64 = 16;

/// Checkable proof object: `σ₁→⋯→σₙ→goal` is valid, witnessed by a closed
/// tableau over the listed roots plus the recorded equality axioms.
///
/// On the wire, `goal` and `axioms_used` are canonical prints; the
/// derivation tree, equality roots and substitution are structural.
#[derive(Clone, Debug, PartialEq)]
pub struct ProofCertificate {
    pub goal: Formula,
    pub axioms_used: Vec<Sentence>,
    pub eq_roots: Vec<FolFormula>,
    pub tree: DerivNode,
    pub subst: Subst,
}

#[derive(serde::Serialize, serde::Deserialize)]
struct CertWire {
    goal: String,
    axioms_used: Vec<String>,
    eq_roots: Vec<FolFormula>,
    tree: DerivNode,
    subst: Subst,
}

impl serde::Serialize for ProofCertificate {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        use crate::formula::print_formula;
        CertWire {
            goal: print_formula(&self.goal),
            axioms_used: self
                .axioms_used
                .iter()
                .map(|s| print_formula(s.formula()))
                .collect(),
            eq_roots: self.eq_roots.clone(),
            tree: self.tree.clone(),
            subst: self.subst.clone(),
        }
        .serialize(ser)
    }
}

impl<'de> serde::Deserialize<'de> for ProofCertificate {
    fn deserialize<D: serde::Deserializer<'de>>(
        de: D,
    ) -> std::result::Result<Self, D::Error> {
        use crate::formula::{parse_formula, parse_sentence, Dialect};
        use serde::de::Error;
        let wire = CertWire::deserialize(de)?;
        let goal = parse_formula(&wire.goal, Dialect::OExt).map_err(D::Error::custom)?;
        let axioms_used = wire
            .axioms_used
            .iter()
            .map(|s| parse_sentence(s, Dialect::OExt))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Ok(ProofCertificate {
            goal,
            axioms_used,
            eq_roots: wire.eq_roots,
            tree: wire.tree,
            subst: wire.subst,
        })
    }
}

impl ProofCertificate {
    /// The tableau root list: reduced axioms, negated closed goal, then
    /// the equality axioms.
    pub fn roots(&self) -> Vec<FolFormula> {
        let mut roots: Vec<FolFormula> = self
            .axioms_used
            .iter()
            .map(|s| reduce_to_fol(s.formula()))
            .collect();
        roots.push(FolFormula::not(reduce_to_fol(
            self.goal.universal_closure().formula(),
        )));
        roots.extend(self.eq_roots.iter().cloned());
        roots
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize")
    }

    pub fn from_json(text: &str) -> Result<ProofCertificate> {
        serde_json::from_str(text)
            .map_err(|e| CoreError::MalformedCertificate(e.to_string()))
    }
}

/// Outcome of a proof search: sound success or budget exhaustion.
#[derive(Clone, Debug)]
pub enum ProveVerdict {
    Proved(Box<ProofCertificate>),
    Unknown { spent: u64 },
}

impl ProveVerdict {
    pub fn proved(&self) -> Option<&ProofCertificate> {
        match self {
            ProveVerdict::Proved(c) => Some(c),
            ProveVerdict::Unknown { .. } => None,
        }
    }

    pub fn is_proved(&self) -> bool {
        self.proved().is_some()
    }
}

/// Validity of a single formula (free variables read universally).
pub fn prove_valid(goal: &Formula, budget: u64) -> ProveVerdict {
    entails(std::iter::empty(), goal, budget)
}

/// Bounded entailment from an axiom stream.
pub fn entails(
    axioms: impl Iterator<Item = Sentence>,
    goal: &Formula,
    budget: u64,
) -> ProveVerdict {
    entails_counting(axioms, goal, budget).0
}

/// Like [`entails`] but also reports the expansions spent (fuel
/// accounting for natives that run proof search inside the substrate).
pub fn entails_counting(
    axioms: impl Iterator<Item = Sentence>,
    goal: &Formula,
    budget: u64,
) -> (ProveVerdict, u64) {
    let neg_goal = FolFormula::not(reduce_to_fol(goal.universal_closure().formula()));
    let mut stream = axioms;
    let mut exhausted = false;
    let mut consumed: Vec<Sentence> = Vec::new();
    let mut remaining = budget;
    let mut spent: u64 = 0;

    loop {
        // Dovetail: the axiom allowance tracks expansions already spent.
        let target = (spent / AXIOMS_PER_EXPANSIONS + 1) as usize;
        while consumed.len() < target && !exhausted {
            match stream.next() {
                Some(s) => consumed.push(s),
                None => exhausted = true,
            }
        }

        let mut roots: Vec<FolFormula> = consumed
            .iter()
            .map(|s| reduce_to_fol(s.formula()))
            .collect();
        roots.push(neg_goal.clone());
        let eq = equality_axioms(&collect_symbols(&roots));
        roots.extend(eq.iter().cloned());

        let slice = remaining.min(64_u64.max(spent));
        if slice == 0 {
            return (ProveVerdict::Unknown { spent }, spent);
        }
        let mut slice_left = slice;
        let outcome = refute(&roots, &mut slice_left);
        let used_now = slice - slice_left;
        spent += used_now;
        remaining -= used_now;

        match outcome {
            Refutation::Closed { tree, subst } => {
                let cert = finish_certificate(goal, &consumed, roots, eq, tree, subst, budget);
                return (ProveVerdict::Proved(Box::new(cert)), spent);
            }
            Refutation::Open => {
                if exhausted {
                    // Saturated with the whole stream consumed: nothing
                    // left to try, but semi-decidability forbids a No.
                    return (ProveVerdict::Unknown { spent }, spent);
                }
            }
            Refutation::OutOfBudget => {
                if remaining == 0 {
                    return (ProveVerdict::Unknown { spent }, spent);
                }
            }
        }
    }
}

/// Prunes the axiom list to the roots the closed tableau actually used,
/// re-running the search against the pruned list (deterministic and cheap
/// since the proof exists). Falls back to the unpruned certificate.
fn finish_certificate(
    goal: &Formula,
    consumed: &[Sentence],
    full_roots: Vec<FolFormula>,
    full_eq: Vec<FolFormula>,
    tree: DerivNode,
    subst: Subst,
    rerun_budget: u64,
) -> ProofCertificate {
    let used = used_roots(&full_roots, &tree);
    let used_axioms: Vec<Sentence> = consumed
        .iter()
        .enumerate()
        .filter(|(i, _)| used.contains(i))
        .map(|(_, s)| s.clone())
        .collect();

    if used_axioms.len() < consumed.len() {
        let mut roots: Vec<FolFormula> = used_axioms
            .iter()
            .map(|s| reduce_to_fol(s.formula()))
            .collect();
        roots.push(FolFormula::not(reduce_to_fol(
            goal.universal_closure().formula(),
        )));
        let eq = equality_axioms(&collect_symbols(&roots));
        roots.extend(eq.iter().cloned());
        let mut b = rerun_budget.max(4096);
        if let Refutation::Closed { tree, subst } = refute(&roots, &mut b) {
            return ProofCertificate {
                goal: goal.clone(),
                axioms_used: used_axioms,
                eq_roots: eq,
                tree,
                subst,
            };
        }
    }
    ProofCertificate {
        goal: goal.clone(),
        axioms_used: consumed.to_vec(),
        eq_roots: full_eq,
        tree,
        subst,
    }
}

/// Independent re-validation: equality roots must match the fixed schemas
/// and the derivation must replay. Never runs search.
pub fn check_certificate(cert: &ProofCertificate) -> bool {
    if !cert.eq_roots.iter().all(is_equality_axiom) {
        return false;
    }
    let roots = cert.roots();
    check_tableau(&roots, &cert.tree, &cert.subst)
}

/// Rewrites every formula of the certificate with `f` (and operator-atom
/// keys with the matching fol-level map). The derivation tree is kept.
fn map_certificate(
    cert: &ProofCertificate,
    f: &impl Fn(&Formula) -> Formula,
    key_map: &impl Fn(&OpKey) -> OpKey,
) -> ProofCertificate {
    ProofCertificate {
        goal: f(&cert.goal),
        axioms_used: cert
            .axioms_used
            .iter()
            .map(|s| Sentence::new(f(s.formula())).expect("transform preserves closedness"))
            .collect(),
        eq_roots: cert.eq_roots.iter().map(|r| map_fol(r, key_map)).collect(),
        tree: cert.tree.clone(),
        subst: cert.subst.clone(),
    }
}

fn map_fol(f: &FolFormula, key_map: &impl Fn(&OpKey) -> OpKey) -> FolFormula {
    match f {
        FolFormula::Atom(FolAtom::Op(k, args)) => {
            FolFormula::Atom(FolAtom::Op(key_map(k), args.clone()))
        }
        FolFormula::Atom(other) => FolFormula::Atom(other.clone()),
        FolFormula::Not(g) => FolFormula::not(map_fol(g, key_map)),
        FolFormula::Implies(a, b) => {
            FolFormula::implies(map_fol(a, key_map), map_fol(b, key_map))
        }
        FolFormula::Forall(v, g) => FolFormula::forall(v.clone(), map_fol(g, key_map)),
    }
}

/// Superscript erasure on a whole certificate (validity transfers to the
/// erased implication chain).
pub fn erase_certificate(cert: &ProofCertificate) -> ProofCertificate {
    map_certificate(cert, &erase, &|k| OpKey {
        op: OperatorId::Plain(k.op.index()),
        canon: std::sync::Arc::new(erase(&k.canon)),
    })
}

/// Order-preserving ordinal map applied to a whole certificate.
pub fn ordmap_certificate(cert: &ProofCertificate, h: &OrdMap) -> ProofCertificate {
    map_certificate(cert, &|f| apply_ordmap(h, f), &|k| {
        let op = match &k.op {
            OperatorId::Strat(a, i) => {
                OperatorId::Strat(h.get(a).cloned().unwrap_or_else(|| a.clone()), *i)
            }
            plain => plain.clone(),
        };
        OpKey { op, canon: std::sync::Arc::new(apply_ordmap(h, &k.canon)) }
    })
}

/// Collapse-Theorem certificate transformer: collapses superscripts `≥ ε₀·n`
/// in the proof into fresh ones below, via the finite pattern search.
/// Returns `None` when the `≤₁` fragment cannot certify a pattern.
pub fn collapse_certificate(
    cert: &ProofCertificate,
    n: u64,
    _i: u32,
) -> Result<Option<ProofCertificate>> {
    if n == 0 {
        return Err(CoreError::Precondition("collapse bound needs n ≥ 1".into()));
    }
    let bound = Ordinal::eps_times(n);
    if !superscripts(&cert.goal).iter().all(|a| *a < bound) {
        return Err(CoreError::Precondition(
            "goal superscripts must lie below ε₀·n".into(),
        ));
    }
    let mut on: BTreeSet<Ordinal> = superscripts(&cert.goal);
    for s in &cert.axioms_used {
        on.extend(superscripts(s.formula()));
    }
    let (xs, ys): (Vec<Ordinal>, Vec<Ordinal>) =
        on.into_iter().partition(|a| *a < bound);
    if ys.is_empty() {
        return Ok(Some(cert.clone()));
    }
    match pattern_collapse(&xs, &ys, &bound)? {
        None => Ok(None),
        Some((_, h)) => Ok(Some(ordmap_certificate(cert, &h))),
    }
}

/// Membership test for the theory supplying schema instances.
pub trait SchemaSupply {
    fn contains(&self, s: &Sentence) -> bool;
}

impl<F: Fn(&Sentence) -> bool> SchemaSupply for F {
    fn contains(&self, s: &Sentence) -> bool {
        self(s)
    }
}

/// The implication chain `σ₁→⋯→σₙ→φ`.
pub fn implication_chain(axioms: &[Sentence], goal: &Formula) -> Formula {
    let mut out = goal.clone();
    for s in axioms.iter().rev() {
        out = Formula::implies(s.formula().clone(), out);
    }
    out
}

/// Proof-internalization transformer: from a certificate for
/// `T∩α ⊨ φ` builds a certificate for `T∩β ⊨ Pr^α_i φ` out of one
/// Strativalidity instance, `n` Stratideduction steps and the boxed
/// axioms supplied by straticlosure.
pub fn internalize(
    cert: &ProofCertificate,
    alpha: &Ordinal,
    beta: &Ordinal,
    i: u32,
    supply: &dyn SchemaSupply,
) -> Result<ProofCertificate> {
    if beta <= alpha {
        return Err(CoreError::Precondition("internalize needs β > α".into()));
    }
    if !cert.goal.free_vars().is_empty() {
        return Err(CoreError::Precondition("internalize needs a sentence goal".into()));
    }
    let boxed_goal = Formula::op_strat(alpha.clone(), i, cert.goal.clone());
    if !is_i_stratified(&boxed_goal, i) {
        return Err(CoreError::NotStratified { index: i });
    }

    let box_at = |f: &Formula| Formula::op_strat(alpha.clone(), i, f.clone());
    let mut instances: Vec<Sentence> = Vec::new();
    let need = |f: Formula, what: &str| -> Result<Sentence> {
        if !is_i_stratified(&f, i) {
            return Err(CoreError::NotStratified { index: i });
        }
        let s = Sentence::new(f)?;
        if !supply.contains(&s) {
            return Err(CoreError::MissingSchemaInstance(what.into()));
        }
        Ok(s)
    };

    // Strativalidity instance for the full chain.
    let chain = implication_chain(&cert.axioms_used, &cert.goal);
    instances.push(need(box_at(&chain), "i-Strativalidity for the proof chain")?);

    // Stratideduction steps peel one axiom at a time; boxed axioms come
    // from straticlosure.
    for (j, sigma) in cert.axioms_used.iter().enumerate() {
        let tail_now = implication_chain(&cert.axioms_used[j..], &cert.goal);
        let tail_next = implication_chain(&cert.axioms_used[j + 1..], &cert.goal);
        let ded = Formula::implies(
            box_at(&tail_now),
            Formula::implies(box_at(sigma.formula()), box_at(&tail_next)),
        );
        instances.push(need(ded, "i-Stratideduction step")?);
        instances.push(need(box_at(sigma.formula()), "boxed axiom from straticlosure")?);
    }

    let budget = 20_000 + 8_000 * cert.axioms_used.len() as u64;
    match entails(instances.into_iter(), &boxed_goal, budget) {
        ProveVerdict::Proved(c) => Ok(*c),
        ProveVerdict::Unknown { spent } => Err(CoreError::Precondition(format!(
            "internalization chain did not close within {spent} expansions"
        ))),
    }
}

/// Box-congruence transformer (Claim 0): from a certificate for
/// `T ⊨ Pr^α_i(ρ↔σ)` builds one for `T ⊨ Pr^α_i ρ ↔ Pr^α_i σ`.
pub fn box_iff(
    cert: &ProofCertificate,
    rho: &Formula,
    sigma: &Formula,
    alpha: &Ordinal,
    i: u32,
    supply: &dyn SchemaSupply,
) -> Result<ProofCertificate> {
    let iff = Formula::iff(rho.clone(), sigma.clone());
    let expected_goal = Formula::op_strat(alpha.clone(), i, iff.clone());
    if cert.goal != expected_goal {
        return Err(CoreError::Precondition(
            "certificate goal is not Pr^α_i(ρ↔σ) for the given ρ, σ".into(),
        ));
    }
    if !is_i_stratified(&expected_goal, i) {
        return Err(CoreError::NotStratified { index: i });
    }
    let box_at = |f: &Formula| Formula::op_strat(alpha.clone(), i, f.clone());
    let mut instances: Vec<Sentence> = Vec::new();
    let need = |f: Formula, what: &str| -> Result<Sentence> {
        if !is_i_stratified(&f, i) {
            return Err(CoreError::NotStratified { index: i });
        }
        let s = Sentence::new(f)?;
        if !supply.contains(&s) {
            return Err(CoreError::MissingSchemaInstance(what.into()));
        }
        Ok(s)
    };

    let fwd = Formula::implies(rho.clone(), sigma.clone());
    let bwd = Formula::implies(sigma.clone(), rho.clone());
    // Strativalidity: Pr^α_i((ρ↔σ) → (ρ→σ)) and the converse direction.
    instances.push(need(
        box_at(&Formula::implies(iff.clone(), fwd.clone())),
        "i-Strativalidity (iff→fwd)",
    )?);
    instances.push(need(
        box_at(&Formula::implies(iff.clone(), bwd.clone())),
        "i-Strativalidity (iff→bwd)",
    )?);
    // Stratideduction instances distributing the box.
    for (x, y) in [
        (iff.clone(), fwd.clone()),
        (iff.clone(), bwd.clone()),
        (rho.clone(), sigma.clone()),
        (sigma.clone(), rho.clone()),
    ] {
        let ded = Formula::implies(
            box_at(&Formula::implies(x.clone(), y.clone())),
            Formula::implies(box_at(&x), box_at(&y)),
        );
        instances.push(need(ded, "i-Stratideduction")?);
    }

    let goal = Formula::iff(box_at(rho), box_at(sigma));
    let axioms: Vec<Sentence> = cert
        .axioms_used
        .iter()
        .cloned()
        .chain(instances)
        .collect();
    match entails(axioms.into_iter(), &goal, 120_000) {
        ProveVerdict::Proved(c) => Ok(*c),
        ProveVerdict::Unknown { spent } => Err(CoreError::Precondition(format!(
            "box-congruence chain did not close within {spent} expansions"
        ))),
    }
}
