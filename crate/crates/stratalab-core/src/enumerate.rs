//! Canonical deterministic enumerations feeding the schema generators:
//! plain formulas by representation size, assignments by Cantor
//! diagonal, and a certified-valid formula supply (templates first,
//! then the general enumeration filtered through the prover).

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::entail::prove_valid;
use crate::formula::{unpair, Assignment, Formula, Term, Var};

/// Lazily grown, memoized enumeration of plain `L_PA(ω)` formulas over a
/// fixed operator-index universe. Two seed variables keep the quantifier
/// and free-variable structure small but non-degenerate.
pub struct FormulaSupply {
    indices: Vec<u32>,
    terms_by_size: Vec<Vec<Term>>,
    by_size: Vec<Vec<Formula>>,
    flat: Vec<Formula>,
}

fn seed_vars() -> Vec<Var> {
    vec![Var::Canon(0), Var::Canon(1)]
}

impl FormulaSupply {
    pub fn new(indices: &[u32]) -> FormulaSupply {
        FormulaSupply {
            indices: indices.to_vec(),
            terms_by_size: vec![Vec::new()],
            by_size: vec![Vec::new()],
            flat: Vec::new(),
        }
    }

    /// The `i`-th formula of the enumeration.
    pub fn nth(&mut self, i: usize) -> Formula {
        while self.flat.len() <= i {
            self.grow();
        }
        self.flat[i].clone()
    }

    /// Prefix iterator handle (regenerates deterministically).
    pub fn prefix(&mut self, len: usize) -> Vec<Formula> {
        (0..len).map(|i| self.nth(i)).collect()
    }

    fn terms(&mut self, size: usize) -> &[Term] {
        while self.terms_by_size.len() <= size {
            let s = self.terms_by_size.len();
            let mut level: Vec<Term> = Vec::new();
            if s == 1 {
                level.push(Term::Zero);
                for v in seed_vars() {
                    level.push(Term::var(v));
                }
            }
            for t in self.terms_by_size[s - 1].clone() {
                level.push(Term::succ(t));
            }
            for a_size in 1..s.saturating_sub(1) {
                let b_size = s - 1 - a_size;
                if b_size < 1 {
                    continue;
                }
                for a in self.terms_by_size[a_size].clone() {
                    for b in self.terms_by_size[b_size].clone() {
                        level.push(Term::plus(a.clone(), b.clone()));
                        level.push(Term::times(a.clone(), b.clone()));
                    }
                }
            }
            level.dedup();
            self.terms_by_size.push(level);
        }
        &self.terms_by_size[size]
    }

    fn grow(&mut self) {
        let s = self.by_size.len();
        let mut level: Vec<Formula> = Vec::new();
        // Atoms split the size between both term slots.
        if s >= 3 {
            for a_size in 1..(s - 1) {
                let b_size = s - 1 - a_size;
                let left = self.terms(a_size).to_vec();
                let right = self.terms(b_size).to_vec();
                for a in &left {
                    for b in &right {
                        level.push(Formula::Eq(a.clone(), b.clone()));
                    }
                }
                for a in &left {
                    for b in &right {
                        level.push(Formula::InW(a.clone(), b.clone()));
                    }
                }
            }
        }
        if s >= 2 {
            for f in self.by_size[s - 1].clone() {
                level.push(Formula::not(f));
            }
            for f in self.by_size[s - 1].clone() {
                for v in seed_vars() {
                    level.push(Formula::forall(v.clone(), f.clone()));
                }
            }
            for f in self.by_size[s - 1].clone() {
                for j in &self.indices {
                    level.push(Formula::op_plain(*j, f.clone()));
                }
            }
        }
        if s >= 3 {
            for a_size in 1..(s - 1) {
                let b_size = s - 1 - a_size;
                for a in self.by_size[a_size].clone() {
                    for b in self.by_size[b_size].clone() {
                        level.push(Formula::implies(a.clone(), b.clone()));
                    }
                }
            }
        }
        level.dedup();
        self.flat.extend(level.iter().cloned());
        self.by_size.push(level);
    }
}

/// Formulas whose free variables lie in `{v0}` (the fixed-point item-2
/// candidate shape); indexes into a filtered view of the supply.
pub struct SingleVarSupply {
    supply: FormulaSupply,
    kept: Vec<Formula>,
    scanned: usize,
}

impl SingleVarSupply {
    pub fn new(indices: &[u32]) -> SingleVarSupply {
        SingleVarSupply { supply: FormulaSupply::new(indices), kept: Vec::new(), scanned: 0 }
    }

    pub fn nth(&mut self, i: usize) -> Formula {
        while self.kept.len() <= i {
            let cand = self.supply.nth(self.scanned);
            self.scanned += 1;
            let fv = cand.free_vars();
            if fv.is_empty() || (fv.len() == 1 && fv.contains(&Var::Canon(0))) {
                self.kept.push(cand);
            }
        }
        self.kept[i].clone()
    }
}

/// The `t`-th assignment of naturals to the given variables (Cantor
/// diagonal over value tuples).
pub fn assignment_nth(fv: &[Var], t: u64) -> Assignment {
    let mut s = Assignment::new();
    let mut rest = BigUint::from(t);
    for (pos, v) in fv.iter().enumerate() {
        let value = if pos + 1 == fv.len() {
            std::mem::take(&mut rest)
        } else {
            let (a, b) = unpair(&rest);
            rest = b;
            a
        };
        s.set(v.clone(), value);
    }
    s
}

/// Certified-valid formula supply: propositional/equality templates over
/// the base enumeration interleaved with prover-filtered candidates, each
/// admitted only after `prove_valid` succeeds within the per-item budget.
pub struct ValidSupply {
    supply: FormulaSupply,
    per_item_budget: u64,
    kept: Vec<Formula>,
    cursor: u64,
}

impl ValidSupply {
    pub fn new(indices: &[u32], per_item_budget: u64) -> ValidSupply {
        ValidSupply {
            supply: FormulaSupply::new(indices),
            per_item_budget,
            kept: Vec::new(),
            cursor: 0,
        }
    }

    pub fn nth(&mut self, i: usize) -> Formula {
        while self.kept.len() <= i {
            let t = self.cursor;
            self.cursor += 1;
            let cand = self.candidate(t);
            let already = self.kept.contains(&cand);
            if !already && prove_valid(&cand, self.per_item_budget).is_proved() {
                self.kept.push(cand);
            }
        }
        self.kept[i].clone()
    }

    /// Deterministic candidate stream: four template shapes rotate with
    /// the raw enumeration.
    fn candidate(&mut self, t: u64) -> Formula {
        let slot = t % 5;
        let idx = (t / 5) as usize;
        match slot {
            0 => {
                let f = self.supply.nth(idx);
                Formula::implies(f.clone(), f)
            }
            1 => {
                let (a, b) = unpair(&BigUint::from(idx as u64));
                let fa = self.supply.nth(a.to_usize().unwrap_or(0));
                let fb = self.supply.nth(b.to_usize().unwrap_or(0));
                Formula::implies(fa.clone(), Formula::implies(fb, fa))
            }
            2 => {
                let f = self.supply.nth(idx);
                Formula::implies(Formula::not(Formula::not(f.clone())), f)
            }
            3 => {
                // x = x over the term supply, universally read.
                let tterm = self.supply.terms(1 + idx % 3).to_vec();
                let t0 = tterm[idx % tterm.len()].clone();
                Formula::Eq(t0.clone(), t0)
            }
            _ => self.supply.nth(idx),
        }
    }
}
