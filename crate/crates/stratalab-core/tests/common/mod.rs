#![allow(dead_code)]

//! Shared test support: a deterministic RNG and the finite-structure
//! evaluation oracle for prover soundness.
//!
//! The oracle evaluates reduced first-order formulas in random two-element
//! structures whose operator atoms are Boolean tables keyed by (operator,
//! canonical operand, argument values) — exactly the shape the base-logic
//! requirements admit — and stays fully independent of the tableau path.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use stratalab_core::fol::{FolAtom, FolFormula, FTerm, OpKey};
use stratalab_core::formula::Var;

/// splitmix64: deterministic, seedable, dependency-free.
#[derive(Clone)]
pub struct Rng(pub u64);

impl Rng {
    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next() % n.max(1)
    }

    pub fn flip(&mut self) -> bool {
        self.next() & 1 == 1
    }
}

fn mix(h: u64, x: u64) -> u64 {
    let mut z = h ^ x.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z ^ (z >> 31)
}

/// A random structure with universe `{0, 1}`: random function tables,
/// random predicate tables, and operator atoms drawn from the seed hash
/// of (key, argument values) — assignment-irrelevance, alphabetic-variant
/// invariance and renaming-substitution hold by construction.
pub struct TwoElementStructure {
    seed: u64,
    succ: [u8; 2],
    plus: [[u8; 2]; 2],
    times: [[u8; 2]; 2],
    triple: [[[u8; 2]; 2]; 2],
    inw: [[bool; 2]; 2],
    o: [bool; 2],
    phi: [[[bool; 2]; 2]; 2],
}

impl TwoElementStructure {
    pub fn random(rng: &mut Rng) -> TwoElementStructure {
        let mut s = TwoElementStructure {
            seed: rng.next(),
            succ: [0; 2],
            plus: [[0; 2]; 2],
            times: [[0; 2]; 2],
            triple: [[[0; 2]; 2]; 2],
            inw: [[false; 2]; 2],
            o: [false; 2],
            phi: [[[false; 2]; 2]; 2],
        };
        for a in 0..2 {
            s.succ[a] = rng.below(2) as u8;
            s.o[a] = rng.flip();
            for b in 0..2 {
                s.plus[a][b] = rng.below(2) as u8;
                s.times[a][b] = rng.below(2) as u8;
                s.inw[a][b] = rng.flip();
                for c in 0..2 {
                    s.triple[a][b][c] = rng.below(2) as u8;
                    s.phi[a][b][c] = rng.flip();
                }
            }
        }
        s
    }

    /// Value of the numeral `n̄ = Sⁿ(0)` under the random S-table: the
    /// trajectory from 0 enters a cycle within two steps, so any `n`
    /// evaluates in O(1).
    fn numeral_value(&self, n: &BigUint) -> u8 {
        let zero = 0u8;
        let s1 = self.succ[zero as usize];
        let s2 = self.succ[s1 as usize];
        match n.to_u64() {
            Some(0) => zero,
            Some(1) => s1,
            Some(k) => {
                // After the first step the orbit cycles between s1 and s2
                // (or is fixed at s1 = s2); parity decides.
                if k % 2 == 0 {
                    s2
                } else {
                    s1
                }
            }
            None => {
                // Huge numerals: parity decides as above.
                if n.bit(0) {
                    s1
                } else {
                    s2
                }
            }
        }
    }

    fn term(&self, t: &FTerm, env: &[(Var, u8)]) -> Option<u8> {
        Some(match t {
            FTerm::Zero => 0,
            FTerm::Num(n) => self.numeral_value(n),
            FTerm::Succ(x) => self.succ[self.term(x, env)? as usize],
            FTerm::Plus(a, b) => {
                self.plus[self.term(a, env)? as usize][self.term(b, env)? as usize]
            }
            FTerm::Times(a, b) => {
                self.times[self.term(a, env)? as usize][self.term(b, env)? as usize]
            }
            FTerm::Triple(a, b, c) => {
                self.triple[self.term(a, env)? as usize][self.term(b, env)? as usize]
                    [self.term(c, env)? as usize]
            }
            FTerm::Var(v) => env.iter().rev().find(|(w, _)| w == v)?.1,
            // The evaluated formulas are reduced originals: no tableau
            // metavariables or Skolem terms belong here.
            FTerm::Meta(_) | FTerm::Sk(..) => return None,
        })
    }

    fn op_atom(&self, key: &OpKey, args: &[u8]) -> bool {
        // Boolean table keyed by the structural hash of the operator key
        // and the argument values; depends on nothing else.
        let mut h = self.seed;
        let mut hasher_input = format!("{:?}", key.op).into_bytes();
        hasher_input.extend_from_slice(format!("{:?}", key.canon).as_bytes());
        for b in hasher_input {
            h = mix(h, b as u64);
        }
        for a in args {
            h = mix(h, *a as u64 + 7);
        }
        h & 1 == 1
    }

    pub fn eval(&self, f: &FolFormula, env: &mut Vec<(Var, u8)>) -> Option<bool> {
        Some(match f {
            FolFormula::Atom(a) => match a {
                FolAtom::Eq(x, y) => self.term(x, env)? == self.term(y, env)?,
                FolAtom::InW(x, y) => {
                    self.inw[self.term(x, env)? as usize][self.term(y, env)? as usize]
                }
                FolAtom::O(x) => self.o[self.term(x, env)? as usize],
                FolAtom::Phi(x, y, z) => {
                    self.phi[self.term(x, env)? as usize][self.term(y, env)? as usize]
                        [self.term(z, env)? as usize]
                }
                FolAtom::Op(key, args) => {
                    let mut vals = Vec::with_capacity(args.len());
                    for a in args {
                        vals.push(self.term(a, env)?);
                    }
                    self.op_atom(key, &vals)
                }
            },
            FolFormula::Not(g) => !self.eval(g, env)?,
            FolFormula::Implies(a, b) => !self.eval(a, env)? || self.eval(b, env)?,
            FolFormula::Forall(v, g) => {
                let mut all = true;
                for u in 0..2u8 {
                    env.push((v.clone(), u));
                    let r = self.eval(g, env);
                    env.pop();
                    all &= r?;
                }
                all
            }
        })
    }

    /// Evaluates a closed reduced formula.
    pub fn eval_closed(&self, f: &FolFormula) -> Option<bool> {
        let mut metas = BTreeSet::new();
        f.collect_metas(&mut metas);
        if !metas.is_empty() {
            return None;
        }
        self.eval(f, &mut Vec::new())
    }
}
