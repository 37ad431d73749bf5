//! Canonical concrete syntax. Gödel numbering is defined over these exact
//! bytes, so spacing and parenthesization are fixed:
//!
//! * terms: `0`, `S(t)`, `(t+u)`, `(t*u)`, `<t,u,v>`, variable names;
//! * atoms: `t=u`, `t in W[u]`, `O(t)`, `Phi(t,u,v)`;
//! * formulas: `~f`, `(f -> g)`, `forall x. f`, `K[i] f`, `K[i]^{ord} f`.
//!
//! The operand of `~` and `K[...]` is printed bare when it is an atom or
//! another prefix, and parenthesized when it is a quantifier (implications
//! carry their own parentheses).

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::ast::{Formula, OperatorId, Term};

/// Canonical text of a formula.
pub fn print_formula(f: &Formula) -> String {
    let mut out = String::with_capacity(64);
    write_formula(f, &mut out);
    out
}

/// Canonical text of a term.
pub fn print_term(t: &Term) -> String {
    let mut out = String::with_capacity(16);
    write_term(t, &mut out);
    out
}

/// Byte length of the canonical print, without building the string.
/// Numerals of value `n` contribute `3n + 1` bytes.
pub fn print_len(f: &Formula) -> BigUint {
    match f {
        Formula::Eq(a, b) => term_len(a) + term_len(b) + 1u32,
        Formula::InW(a, b) => term_len(a) + term_len(b) + 7u32,
        Formula::OAtom(t) => term_len(t) + 3u32,
        Formula::PhiAtom(a, b, c) => term_len(a) + term_len(b) + term_len(c) + 7u32,
        Formula::Not(g) => operand_len(g) + 1u32,
        Formula::Implies(a, b) => operand_len(a) + print_len(b) + 6u32,
        Formula::Forall(v, g) => {
            BigUint::from(7usize + v.name().len() + 2) + print_len(g)
        }
        Formula::Op(id, g) => BigUint::from(op_text(id).len() + 1) + operand_len(g),
    }
}

fn operand_len(f: &Formula) -> BigUint {
    if matches!(f, Formula::Forall(..)) {
        print_len(f) + 2u32
    } else {
        print_len(f)
    }
}

fn term_len(t: &Term) -> BigUint {
    match t {
        Term::Zero => BigUint::from(1u32),
        Term::Num(n) => n * 3u32 + 1u32,
        Term::Succ(inner) => term_len(inner) + 3u32,
        Term::Plus(a, b) | Term::Times(a, b) => term_len(a) + term_len(b) + 3u32,
        Term::Triple(a, b, c) => term_len(a) + term_len(b) + term_len(c) + 4u32,
        Term::Var(v) => BigUint::from(v.name().len()),
    }
}

fn op_text(id: &OperatorId) -> String {
    match id {
        OperatorId::Plain(i) => format!("K[{i}]"),
        OperatorId::Strat(a, i) => format!("K[{i}]^{{{a}}}"),
    }
}

fn write_formula(f: &Formula, out: &mut String) {
    match f {
        Formula::Eq(a, b) => {
            write_term(a, out);
            out.push('=');
            write_term(b, out);
        }
        Formula::InW(a, b) => {
            write_term(a, out);
            out.push_str(" in W[");
            write_term(b, out);
            out.push(']');
        }
        Formula::OAtom(t) => {
            out.push_str("O(");
            write_term(t, out);
            out.push(')');
        }
        Formula::PhiAtom(a, b, c) => {
            out.push_str("Phi(");
            write_term(a, out);
            out.push(',');
            write_term(b, out);
            out.push(',');
            write_term(c, out);
            out.push(')');
        }
        Formula::Not(g) => {
            out.push('~');
            write_operand(g, out);
        }
        Formula::Implies(a, b) => {
            out.push('(');
            // A bare quantifier on the left would swallow the arrow.
            write_operand(a, out);
            out.push_str(" -> ");
            write_formula(b, out);
            out.push(')');
        }
        Formula::Forall(v, g) => {
            out.push_str("forall ");
            out.push_str(&v.name());
            out.push_str(". ");
            write_formula(g, out);
        }
        Formula::Op(id, g) => {
            out.push_str(&op_text(id));
            out.push(' ');
            write_operand(g, out);
        }
    }
}

fn write_operand(f: &Formula, out: &mut String) {
    if matches!(f, Formula::Forall(..)) {
        out.push('(');
        write_formula(f, out);
        out.push(')');
    } else {
        write_formula(f, out);
    }
}

fn write_term(t: &Term, out: &mut String) {
    match t {
        Term::Zero => out.push('0'),
        Term::Num(n) => {
            let n = n
                .to_usize()
                .expect("numeral too large for canonical printing");
            out.reserve(3 * n + 1);
            for _ in 0..n {
                out.push_str("S(");
            }
            out.push('0');
            for _ in 0..n {
                out.push(')');
            }
        }
        Term::Succ(inner) => {
            out.push_str("S(");
            write_term(inner, out);
            out.push(')');
        }
        Term::Plus(a, b) => {
            out.push('(');
            write_term(a, out);
            out.push('+');
            write_term(b, out);
            out.push(')');
        }
        Term::Times(a, b) => {
            out.push('(');
            write_term(a, out);
            out.push('*');
            write_term(b, out);
            out.push(')');
        }
        Term::Triple(a, b, c) => {
            out.push('<');
            write_term(a, out);
            out.push(',');
            write_term(b, out);
            out.push(',');
            write_term(c, out);
            out.push('>');
        }
        Term::Var(v) => out.push_str(&v.name()),
    }
}
