//! Recursive-descent parser for the concrete syntax, with byte positions
//! in errors. Whitespace is free between tokens; the canonical printer's
//! output always reparses to the same AST.
//!
//! Sugar (`&`, `|`, `<->` inside parentheses, `exists v. f`, decimal
//! numerals) expands into the primitive formers at parse time.

use num_bigint::BigUint;

use super::ast::{check_dialect, Dialect, Formula, OperatorId, Sentence, Term, Var};
use crate::error::{CoreError, Result};
use crate::ordinal::parse_ordinal;

/// Parses a formula in the given dialect.
pub fn parse_formula(text: &str, dialect: Dialect) -> Result<Formula> {
    let mut p = Parser { bytes: text.as_bytes(), pos: 0, dialect };
    p.ws();
    let f = p.formula()?;
    p.ws();
    if p.pos != p.bytes.len() {
        return Err(p.err_at(p.pos, "trailing input"));
    }
    check_dialect(&f, dialect)?;
    Ok(f)
}

/// Parses a closed formula.
pub fn parse_sentence(text: &str, dialect: Dialect) -> Result<Sentence> {
    Sentence::new(parse_formula(text, dialect)?)
}

/// Parses a bare term.
pub fn parse_term(text: &str) -> Result<Term> {
    let mut p = Parser { bytes: text.as_bytes(), pos: 0, dialect: Dialect::OExt };
    p.ws();
    let t = p.term()?;
    p.ws();
    if p.pos != p.bytes.len() {
        return Err(p.err_at(p.pos, "trailing input"));
    }
    Ok(t)
}

const RESERVED: &[&str] = &["forall", "exists", "in", "S", "K", "W", "O", "Phi"];

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    dialect: Dialect,
}

impl<'a> Parser<'a> {
    fn err_at(&self, pos: usize, msg: &str) -> CoreError {
        CoreError::Syntax { pos, msg: msg.into() }
    }

    fn ws(&mut self) {
        while self.bytes.get(self.pos).is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_str(&mut self, s: &str) -> bool {
        if self.bytes[self.pos..].starts_with(s.as_bytes()) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        if self.eat(b) {
            Ok(())
        } else {
            Err(self.err_at(self.pos, &format!("expected {:?}", b as char)))
        }
    }

    /// Keyword match: the text must not continue as an identifier.
    fn keyword(&mut self, kw: &str) -> bool {
        if self.bytes[self.pos..].starts_with(kw.as_bytes()) {
            let after = self.pos + kw.len();
            let cont = self
                .bytes
                .get(after)
                .is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_');
            if !cont {
                self.pos = after;
                return true;
            }
        }
        false
    }

    fn ident(&mut self) -> Option<String> {
        let start = self.pos;
        let first = self.peek()?;
        if !(first.is_ascii_alphabetic() || first == b'_') {
            return None;
        }
        let mut end = self.pos + 1;
        while self
            .bytes
            .get(end)
            .is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_')
        {
            end += 1;
        }
        let s = std::str::from_utf8(&self.bytes[start..end]).unwrap().to_string();
        if RESERVED.contains(&s.as_str()) {
            return None;
        }
        self.pos = end;
        Some(s)
    }

    fn digits(&mut self) -> Option<BigUint> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        let s = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        Some(s.parse().unwrap())
    }

    fn formula(&mut self) -> Result<Formula> {
        let lhs = self.unary()?;
        self.ws();
        let save = self.pos;
        if self.eat_str("->") {
            // Guard against "<->" being half-consumed upstream.
            self.ws();
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        self.pos = save;
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        self.ws();
        if self.eat(b'~') {
            return Ok(Formula::not(self.unary()?));
        }
        if self.keyword("K") {
            self.expect(b'[')?;
            self.ws();
            let idx_pos = self.pos;
            let idx = self
                .digits()
                .ok_or_else(|| self.err_at(idx_pos, "expected an operator index"))?;
            let idx: u32 = idx
                .try_into()
                .map_err(|_| self.err_at(idx_pos, "operator index out of range"))?;
            self.ws();
            self.expect(b']')?;
            self.ws();
            let op = if self.eat_str("^{") {
                let start = self.pos;
                let end = start
                    + self.bytes[start..]
                        .iter()
                        .position(|b| *b == b'}')
                        .ok_or_else(|| self.err_at(start, "unterminated superscript"))?;
                let text = std::str::from_utf8(&self.bytes[start..end])
                    .map_err(|_| self.err_at(start, "superscript is not UTF-8"))?;
                let ord = parse_ordinal(text).map_err(|e| match e {
                    CoreError::Syntax { pos, msg } => CoreError::Syntax { pos: start + pos, msg },
                    other => other,
                })?;
                self.pos = end + 1;
                if !self.dialect.allows_strat() {
                    return Err(CoreError::Dialect(
                        "superscripted operator outside the stratified dialect".into(),
                    ));
                }
                OperatorId::Strat(ord, idx)
            } else {
                OperatorId::Plain(idx)
            };
            self.ws();
            return Ok(Formula::op(op, self.unary()?));
        }
        if self.keyword("forall") {
            let (v, body) = self.binder()?;
            return Ok(Formula::forall(v, body));
        }
        if self.keyword("exists") {
            let (v, body) = self.binder()?;
            return Ok(Formula::exists(v, body));
        }
        self.primary()
    }

    fn binder(&mut self) -> Result<(Var, Formula)> {
        self.ws();
        let vpos = self.pos;
        let name = self
            .ident()
            .ok_or_else(|| self.err_at(vpos, "expected a variable after the quantifier"))?;
        self.ws();
        self.expect(b'.')?;
        self.ws();
        let body = self.formula()?;
        Ok((Var::named(&name), body))
    }

    fn primary(&mut self) -> Result<Formula> {
        self.ws();
        if self.peek() == Some(b'(') {
            // Could be a parenthesized term of an atom, e.g. "(x+y)=z",
            // or a parenthesized formula. Try the atom reading first.
            let save = self.pos;
            if let Ok(atom) = self.atom() {
                return Ok(atom);
            }
            self.pos = save;
            self.expect(b'(')?;
            self.ws();
            let first = self.formula()?;
            self.ws();
            let out = if self.eat_str("<->") {
                self.ws();
                let second = self.formula()?;
                Formula::iff(first, second)
            } else if self.eat(b'&') {
                let mut acc = first;
                loop {
                    self.ws();
                    let next = self.formula()?;
                    acc = Formula::and(acc, next);
                    self.ws();
                    if !self.eat(b'&') {
                        break;
                    }
                }
                acc
            } else if self.eat(b'|') {
                let mut acc = first;
                loop {
                    self.ws();
                    let next = self.formula()?;
                    acc = Formula::or(acc, next);
                    self.ws();
                    if !self.eat(b'|') {
                        break;
                    }
                }
                acc
            } else {
                first
            };
            self.ws();
            self.expect(b')')?;
            return Ok(out);
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula> {
        self.ws();
        let start = self.pos;
        if self.keyword("O") {
            if !self.dialect.allows_o() {
                return Err(CoreError::Dialect("O-atom outside the O-extension".into()));
            }
            self.expect(b'(')?;
            self.ws();
            let t = self.term()?;
            self.ws();
            self.expect(b')')?;
            return Ok(Formula::OAtom(t));
        }
        if self.keyword("Phi") {
            if !self.dialect.allows_o() {
                return Err(CoreError::Dialect("Phi-atom outside the O-extension".into()));
            }
            self.expect(b'(')?;
            let a = self.comma_term(false)?;
            let b = self.comma_term(false)?;
            let c = self.comma_term(true)?;
            self.expect(b')')?;
            return Ok(Formula::PhiAtom(a, b, c));
        }
        let lhs = self.term()?;
        self.ws();
        if self.eat(b'=') {
            self.ws();
            let rhs = self.term()?;
            return Ok(Formula::Eq(lhs, rhs));
        }
        if self.keyword("in") {
            self.ws();
            if !self.keyword("W") {
                return Err(self.err_at(self.pos, "expected W[...] after 'in'"));
            }
            self.expect(b'[')?;
            self.ws();
            let rhs = self.term()?;
            self.ws();
            self.expect(b']')?;
            return Ok(Formula::InW(lhs, rhs));
        }
        Err(self.err_at(start, "expected an atom (t=u, t in W[u], O(t), Phi(..))"))
    }

    fn comma_term(&mut self, last: bool) -> Result<Term> {
        self.ws();
        let t = self.term()?;
        self.ws();
        if !last {
            self.expect(b',')?;
        }
        Ok(t)
    }

    fn term(&mut self) -> Result<Term> {
        self.ws();
        let start = self.pos;
        if let Some(n) = self.digits() {
            return Ok(Term::numeral(n));
        }
        if self.keyword("S") {
            self.expect(b'(')?;
            let t = self.term()?;
            self.ws();
            self.expect(b')')?;
            return Ok(Term::succ(t));
        }
        if self.eat(b'<') {
            let a = self.comma_term(false)?;
            let b = self.comma_term(false)?;
            let c = self.comma_term(true)?;
            self.expect(b'>')?;
            return Ok(Term::triple(a, b, c));
        }
        if self.eat(b'(') {
            self.ws();
            let a = self.term()?;
            self.ws();
            let op = self
                .peek()
                .filter(|b| *b == b'+' || *b == b'*')
                .ok_or_else(|| self.err_at(self.pos, "expected '+' or '*'"))?;
            self.pos += 1;
            self.ws();
            let b = self.term()?;
            self.ws();
            self.expect(b')')?;
            return Ok(match op {
                b'+' => Term::plus(a, b),
                _ => Term::times(a, b),
            });
        }
        if let Some(name) = self.ident() {
            return Ok(Term::var(Var::named(&name)));
        }
        Err(self.err_at(start, "expected a term"))
    }
}
