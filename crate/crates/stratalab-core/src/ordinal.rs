//! Ordinals below `ε₀·ω` in Cantor normal form, the `≤₁` relation fragment,
//! coverings, and the finite pattern-collapse search.
//!
//! A value denotes `ε₀·k + Σ ωᵉ·c` where the tail exponents are themselves
//! ordinals below `ε₀` with strictly decreasing exponents and positive
//! coefficients. No general ordinal arithmetic is exposed; construction,
//! comparison, successor and the pattern machinery are all the callers need.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{CoreError, Result};

/// Ordinal below `ε₀·ω` in Cantor normal form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Ordinal {
    eps_mult: u64,
    /// `(exponent, coefficient)` pairs, exponents strictly decreasing,
    /// coefficients ≥ 1, exponents have `eps_mult == 0`.
    tail: Vec<(Ordinal, u64)>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { eps_mult: 0, tail: Vec::new() }
    }

    /// The finite ordinal `n` (`ω⁰·n`).
    pub fn from_nat(n: u64) -> Self {
        if n == 0 {
            Self::zero()
        } else {
            Ordinal { eps_mult: 0, tail: vec![(Self::zero(), n)] }
        }
    }

    /// `ε₀·k`.
    pub fn eps_times(k: u64) -> Self {
        Ordinal { eps_mult: k, tail: Vec::new() }
    }

    /// `ω`.
    pub fn omega() -> Self {
        Self::omega_pow(Self::from_nat(1), 1)
    }

    /// `ωᵉ·c`. Panics if `e` has an ε₀ part or `c == 0`.
    pub fn omega_pow(e: Ordinal, c: u64) -> Self {
        assert!(e.eps_mult == 0, "tail exponents live below ε₀");
        assert!(c >= 1);
        Ordinal { eps_mult: 0, tail: vec![(e, c)] }
    }

    /// Builds `ε₀·k + terms`; terms must have strictly decreasing exponents.
    pub fn new(eps_mult: u64, tail: Vec<(Ordinal, u64)>) -> Result<Self> {
        for (i, (e, c)) in tail.iter().enumerate() {
            if e.eps_mult != 0 {
                return Err(CoreError::OrdinalRange(
                    "tail exponent has an ε₀ part".into(),
                ));
            }
            if *c == 0 {
                return Err(CoreError::OrdinalRange("zero coefficient".into()));
            }
            if i + 1 < tail.len() && tail[i + 1].0 >= *e {
                return Err(CoreError::OrdinalRange(
                    "tail exponents must strictly decrease".into(),
                ));
            }
        }
        Ok(Ordinal { eps_mult, tail })
    }

    pub fn is_zero(&self) -> bool {
        self.eps_mult == 0 && self.tail.is_empty()
    }

    /// True for `ε₀·k` with `k ≥ 1`.
    pub fn is_positive_eps_multiple(&self) -> bool {
        self.eps_mult >= 1 && self.tail.is_empty()
    }

    /// For `ε₀·k` (tail-free) returns `k`.
    pub fn eps_multiplier(&self) -> Option<u64> {
        if self.tail.is_empty() {
            Some(self.eps_mult)
        } else {
            None
        }
    }

    /// Finite value if this ordinal is below `ω`.
    pub fn as_nat(&self) -> Option<u64> {
        if self.eps_mult != 0 {
            return None;
        }
        match self.tail.as_slice() {
            [] => Some(0),
            [(e, c)] if e.is_zero() => Some(*c),
            _ => None,
        }
    }

    /// Successor ordinal `self + 1`.
    pub fn succ(&self) -> Ordinal {
        let mut out = self.clone();
        if let Some(last) = out.tail.last_mut() {
            if last.0.is_zero() {
                last.1 += 1;
                return out;
            }
        }
        out.tail.push((Ordinal::zero(), 1));
        out
    }

    /// Representation size used by [`enum_ordinals`]:
    /// `size(0)=0`, `size(ε₀·k + Σ ωᵉ·c) = k + Σ (c + size(e))`.
    pub fn size(&self) -> u64 {
        self.eps_mult
            + self
                .tail
                .iter()
                .map(|(e, c)| c + e.size())
                .sum::<u64>()
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        ord_cmp(self, other)
    }
}

/// The ordinal order on Cantor normal forms.
pub fn ord_cmp(a: &Ordinal, b: &Ordinal) -> Ordering {
    match a.eps_mult.cmp(&b.eps_mult) {
        Ordering::Equal => {}
        ne => return ne,
    }
    let mut i = 0;
    loop {
        match (a.tail.get(i), b.tail.get(i)) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some((ea, ca)), Some((eb, cb))) => {
                match ea.cmp(eb) {
                    Ordering::Equal => {}
                    ne => return ne,
                }
                match ca.cmp(cb) {
                    Ordering::Equal => {}
                    ne => return ne,
                }
            }
        }
        i += 1;
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = Vec::new();
        if self.eps_mult > 0 {
            parts.push(format!("e0*{}", self.eps_mult));
        }
        for (e, c) in &self.tail {
            if e.is_zero() {
                parts.push(format!("{c}"));
            } else if e.as_nat() == Some(1) {
                if *c == 1 {
                    parts.push("w".into());
                } else {
                    parts.push(format!("w*{c}"));
                }
            } else if *c == 1 {
                parts.push(format!("w^({e})"));
            } else {
                parts.push(format!("w^({e})*{c}"));
            }
        }
        write!(f, "{}", parts.join("+"))
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Ordinal {
    type Err = CoreError;
    fn from_str(s: &str) -> Result<Self> {
        parse_ordinal(s)
    }
}

impl serde::Serialize for Ordinal {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Ordinal {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parses the ordinal literal grammar:
/// `0 | e0*<k> | w | w*<c> | w^(<ord>) | w^(<ord>)*<c> | <n>`, joined by `+`.
pub fn parse_ordinal(text: &str) -> Result<Ordinal> {
    let mut p = OrdParser { bytes: text.as_bytes(), pos: 0 };
    p.skip_ws();
    let o = p.ordinal()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.err("trailing input after ordinal"));
    }
    Ok(o)
}

struct OrdParser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> OrdParser<'a> {
    fn err(&self, msg: &str) -> CoreError {
        CoreError::Syntax { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.bytes.get(self.pos).is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.bytes.get(self.pos) == Some(&b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        if self.eat(b) {
            Ok(())
        } else {
            Err(self.err(&format!("expected {:?}", b as char)))
        }
    }

    fn number(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("number out of range"))
    }

    fn ordinal(&mut self) -> Result<Ordinal> {
        let mut eps_mult = 0u64;
        let mut tail: Vec<(Ordinal, u64)> = Vec::new();
        let mut first = true;
        loop {
            self.skip_ws();
            let (e, c) = self.term(first)?;
            first = false;
            match e {
                TermKind::Eps => {
                    if eps_mult != 0 || !tail.is_empty() {
                        return Err(self.err("ε₀ part must come first"));
                    }
                    eps_mult = c;
                }
                TermKind::Omega(exp) => {
                    if let Some((prev, _)) = tail.last() {
                        if *prev <= exp {
                            return Err(self.err("tail exponents must strictly decrease"));
                        }
                    }
                    if c > 0 {
                        tail.push((exp, c));
                    }
                }
            }
            self.skip_ws();
            if !self.eat(b'+') {
                break;
            }
        }
        Ordinal::new(eps_mult, tail)
    }

    fn term(&mut self, allow_zero: bool) -> Result<(TermKind, u64)> {
        if self.bytes[self.pos..].starts_with(b"e0") {
            self.pos += 2;
            self.skip_ws();
            let k = if self.eat(b'*') {
                self.skip_ws();
                self.number()?
            } else {
                1
            };
            return Ok((TermKind::Eps, k));
        }
        if self.eat(b'w') {
            let exp = if self.eat(b'^') {
                self.expect(b'(')?;
                let e = self.ordinal()?;
                self.expect(b')')?;
                if e.eps_mult != 0 {
                    return Err(self.err("exponent must be below ε₀"));
                }
                e
            } else {
                Ordinal::from_nat(1)
            };
            self.skip_ws();
            let c = if self.eat(b'*') {
                self.skip_ws();
                self.number()?
            } else {
                1
            };
            if c == 0 {
                return Err(self.err("zero coefficient"));
            }
            return Ok((TermKind::Omega(exp), c));
        }
        let n = self.number()?;
        if n == 0 && !allow_zero {
            return Err(self.err("zero term inside a sum"));
        }
        Ok((TermKind::Omega(Ordinal::zero()), n))
    }
}

enum TermKind {
    Eps,
    Omega(Ordinal),
}

/// Three-valued answer of the `≤₁` fragment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Le1Verdict {
    Yes,
    No,
    Unknown,
}

/// Pluggable decision procedure for `≤₁`; the fragment below is the default.
pub trait Le1Oracle {
    fn le1(&self, a: &Ordinal, b: &Ordinal) -> Le1Verdict;
}

/// The implemented `≤₁` fragment: reflexivity, `ε₀·m ≤₁ ε₀·n` for
/// `1 ≤ m ≤ n`, and refutation when `β < α`. Everything else is Unknown
/// (including `0 ≤₁ β`, deliberately unasserted).
pub struct FragmentOracle;

impl Le1Oracle for FragmentOracle {
    fn le1(&self, a: &Ordinal, b: &Ordinal) -> Le1Verdict {
        le1(a, b)
    }
}

/// `≤₁` on the implemented fragment.
pub fn le1(a: &Ordinal, b: &Ordinal) -> Le1Verdict {
    if a == b {
        return Le1Verdict::Yes;
    }
    if b < a {
        return Le1Verdict::No;
    }
    match (a.eps_multiplier(), b.eps_multiplier()) {
        (Some(m), Some(n)) if 1 <= m && m <= n => Le1Verdict::Yes,
        _ => Le1Verdict::Unknown,
    }
}

/// Finite ordinal map; `is_covering` checks strict order preservation plus
/// `≤₁` preservation on certified pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OrdMap {
    map: BTreeMap<Ordinal, Ordinal>,
}

impl OrdMap {
    pub fn new() -> Self {
        OrdMap { map: BTreeMap::new() }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Ordinal, Ordinal)>) -> Self {
        OrdMap { map: pairs.into_iter().collect() }
    }

    pub fn identity_on(domain: impl IntoIterator<Item = Ordinal>) -> Self {
        OrdMap { map: domain.into_iter().map(|o| (o.clone(), o)).collect() }
    }

    pub fn insert(&mut self, from: Ordinal, to: Ordinal) {
        self.map.insert(from, to);
    }

    pub fn get(&self, o: &Ordinal) -> Option<&Ordinal> {
        self.map.get(o)
    }

    pub fn domain(&self) -> impl Iterator<Item = &Ordinal> {
        self.map.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Ordinal, &Ordinal)> {
        self.map.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Strictly order preserving on its domain.
    pub fn is_order_preserving(&self) -> bool {
        let vals: Vec<&Ordinal> = self.map.values().collect();
        vals.windows(2).all(|w| w[0] < w[1])
    }
}

/// Checks the covering property of `h` under the `≤₁` fragment.
///
/// A pair `(x, y)` of the domain is resolved when it maps to itself (the
/// preservation claim is then a tautology), when the image pair is a
/// certified Yes, or when the source pair is a certified No. A certified
/// Yes source mapping onto a certified No image refutes the covering.
pub fn is_covering(h: &OrdMap) -> Le1Verdict {
    is_covering_with(h, &FragmentOracle)
}

pub fn is_covering_with(h: &OrdMap, oracle: &dyn Le1Oracle) -> Le1Verdict {
    if !h.is_order_preserving() {
        return Le1Verdict::No;
    }
    let entries: Vec<(&Ordinal, &Ordinal)> = h.map.iter().collect();
    let mut pending = false;
    for (i, (x, hx)) in entries.iter().enumerate() {
        for (y, hy) in entries.iter().skip(i + 1) {
            if x == hx && y == hy {
                continue;
            }
            let src = oracle.le1(x, y);
            let img = oracle.le1(hx, hy);
            match (src, img) {
                (Le1Verdict::Yes, Le1Verdict::No) => return Le1Verdict::No,
                (_, Le1Verdict::Yes) | (Le1Verdict::No, _) => {}
                _ => pending = true,
            }
        }
    }
    if pending {
        Le1Verdict::Unknown
    } else {
        Le1Verdict::Yes
    }
}

/// Searches for `Ỹ` with `X < Ỹ < bound` and a `(≤, ≤₁)`-isomorphism
/// `X ∪ Y → X ∪ Ỹ` fixing `X`, certifying every comparison through the
/// `≤₁` fragment. Returns `None` when the fragment cannot certify a
/// result — never a wrong answer.
pub fn pattern_collapse(
    xs: &[Ordinal],
    ys: &[Ordinal],
    bound: &Ordinal,
) -> Result<Option<(Vec<Ordinal>, OrdMap)>> {
    let n = match bound.eps_multiplier() {
        Some(n) if n >= 1 => n,
        _ => {
            return Err(CoreError::Precondition(
                "pattern_collapse bound must be ε₀·n with n ≥ 1".into(),
            ))
        }
    };
    let mut xs: Vec<Ordinal> = xs.to_vec();
    xs.sort();
    xs.dedup();
    let mut ys: Vec<Ordinal> = ys.to_vec();
    ys.sort();
    ys.dedup();
    if xs.iter().any(|x| x >= bound) {
        return Err(CoreError::Precondition("X must lie below the bound".into()));
    }
    if ys.iter().any(|y| y < bound) {
        return Err(CoreError::Precondition("Y must lie at or above the bound".into()));
    }

    if ys.is_empty() {
        return Ok(Some((Vec::new(), OrdMap::identity_on(xs))));
    }

    // With Y nonempty, every (x, y) and (y, y′) pair must be certified.
    // In the fragment, Yes for a strict pair needs both sides to be
    // positive ε₀-multiples, so the certifiable case is exactly
    // X ∪ Y ⊆ {ε₀·1, ε₀·2, …}.
    if xs.iter().chain(ys.iter()).any(|o| !o.is_positive_eps_multiple()) {
        return Ok(None);
    }
    let x_max = xs.iter().filter_map(|x| x.eps_multiplier()).max().unwrap_or(0);
    let k = ys.len() as u64;
    // Slots ε₀·(n-k) .. ε₀·(n-1), all strictly above max(X).
    if n <= k || n - k <= x_max {
        return Ok(None);
    }
    let fresh: Vec<Ordinal> = (n - k..n).map(Ordinal::eps_times).collect();
    let mut h = OrdMap::identity_on(xs.clone());
    for (y, t) in ys.iter().zip(fresh.iter()) {
        h.insert(y.clone(), t.clone());
    }
    debug_assert_eq!(is_covering(&h), Le1Verdict::Yes);
    Ok(Some((fresh, h)))
}

/// Deterministic, duplicate-free enumeration of all ordinals of
/// representation size ≤ `budget`, ε₀-multiples first.
pub fn enum_ordinals(budget: u64) -> impl Iterator<Item = Ordinal> {
    let mut out: Vec<Ordinal> = Vec::new();
    out.push(Ordinal::zero());
    for k in 1..=budget {
        out.push(Ordinal::eps_times(k));
    }
    let mut rest: Vec<Ordinal> = Vec::new();
    for s in 1..=budget {
        let mut level: Vec<Ordinal> = Vec::new();
        for tail in tails_of_size(s) {
            let o = Ordinal { eps_mult: 0, tail };
            level.push(o);
        }
        for k in 1..s {
            for tail in tails_of_size(s - k) {
                level.push(Ordinal { eps_mult: k, tail });
            }
        }
        level.sort();
        level.dedup();
        level.retain(|o| !o.is_positive_eps_multiple() && !o.is_zero());
        rest.extend(level);
    }
    out.extend(rest);
    out.into_iter()
}

/// All nonempty CNF tails of exactly the given size (exponents strictly
/// decreasing, all below ε₀).
fn tails_of_size(size: u64) -> Vec<Vec<(Ordinal, u64)>> {
    let mut exps: Vec<Ordinal> = vec![Ordinal::zero()];
    if size >= 1 {
        for s in 1..size {
            for tail in tails_of_size(s) {
                exps.push(Ordinal { eps_mult: 0, tail });
            }
        }
    }
    exps.sort();
    exps.dedup();
    let mut out = Vec::new();
    build_tails(&exps, size, None, &mut Vec::new(), &mut out);
    out
}

fn build_tails(
    exps: &[Ordinal],
    remaining: u64,
    max_exp: Option<&Ordinal>,
    acc: &mut Vec<(Ordinal, u64)>,
    out: &mut Vec<Vec<(Ordinal, u64)>>,
) {
    if remaining == 0 {
        if !acc.is_empty() {
            out.push(acc.clone());
        }
        return;
    }
    for e in exps {
        if let Some(m) = max_exp {
            if e >= m {
                continue;
            }
        }
        let es = e.size();
        if es + 1 > remaining {
            continue;
        }
        for c in 1..=(remaining - es) {
            acc.push((e.clone(), c));
            build_tails(exps, remaining - es - c, Some(e), acc, out);
            acc.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ord(s: &str) -> Ordinal {
        parse_ordinal(s).unwrap()
    }

    #[test]
    fn cmp_basics() {
        assert!(ord("w") < ord("w+1"));
        assert!(ord("e0*1") > ord("w^(w)*5"));
        assert_eq!(ord("w*2+1").cmp(&ord("w*2+1")), Ordering::Equal);
        assert!(ord("5") < ord("w"));
        assert!(ord("w^(2)") > ord("w*9+3"));
        assert!(ord("e0*1+w") < ord("e0*2"));
    }

    #[test]
    fn print_parse_roundtrip() {
        for s in ["0", "5", "w", "w*2+1", "w^(w)", "e0*1", "e0*3+w^(2)*4+7", "w^(w+1)*2"] {
            let o = ord(s);
            assert_eq!(o.to_string(), s);
            assert_eq!(ord(&o.to_string()), o);
        }
    }

    #[test]
    fn parse_rejects_bad_forms() {
        assert!(parse_ordinal("w+w").is_err());
        assert!(parse_ordinal("1+w").is_err());
        assert!(parse_ordinal("w+e0*1").is_err());
        assert!(parse_ordinal("w^(e0*1)").is_err());
        assert!(parse_ordinal("").is_err());
    }

    #[test]
    fn le1_fragment() {
        assert_eq!(le1(&ord("e0*1"), &ord("e0*2")), Le1Verdict::Yes);
        assert_eq!(le1(&ord("w"), &ord("w")), Le1Verdict::Yes);
        assert_eq!(le1(&ord("e0*2"), &ord("e0*1")), Le1Verdict::No);
        assert_eq!(le1(&ord("w"), &ord("w*2")), Le1Verdict::Unknown);
        assert_eq!(le1(&ord("0"), &ord("e0*1")), Le1Verdict::Unknown);
    }

    #[test]
    fn le1_laws_on_enumeration() {
        let ords: Vec<Ordinal> = enum_ordinals(4).collect();
        for a in &ords {
            assert_eq!(le1(a, a), Le1Verdict::Yes);
            for b in &ords {
                if le1(a, b) == Le1Verdict::Yes {
                    assert!(a <= b, "{a} ≤₁ {b} but not ≤");
                    if le1(b, a) == Le1Verdict::Yes {
                        assert_eq!(a, b);
                    }
                    for c in &ords {
                        if le1(b, c) == Le1Verdict::Yes {
                            assert_eq!(le1(a, c), Le1Verdict::Yes, "{a},{b},{c}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn covering_examples() {
        let h = OrdMap::from_pairs([(ord("e0*1"), ord("e0*2")), (ord("e0*2"), ord("e0*5"))]);
        assert_eq!(is_covering(&h), Le1Verdict::Yes);

        let id = OrdMap::identity_on([ord("w"), ord("w*2"), ord("e0*1")]);
        assert_eq!(is_covering(&id), Le1Verdict::Yes);

        let flip = OrdMap::from_pairs([(ord("e0*1"), ord("e0*2")), (ord("e0*2"), ord("e0*1"))]);
        assert_eq!(is_covering(&flip), Le1Verdict::No);

        let unk = OrdMap::from_pairs([(ord("w"), ord("w*2")), (ord("w*3"), ord("w*4"))]);
        assert_eq!(is_covering(&unk), Le1Verdict::Unknown);
    }

    #[test]
    fn collapse_empty_pattern() {
        let (fresh, h) = pattern_collapse(&[], &[], &ord("e0*1")).unwrap().unwrap();
        assert!(fresh.is_empty());
        assert!(h.is_empty());
    }

    #[test]
    fn collapse_no_room() {
        // ε₀·1 < ỹ < ε₀·2 has no certified candidates.
        let r = pattern_collapse(&[ord("e0*1")], &[ord("e0*2")], &ord("e0*2")).unwrap();
        assert!(r.is_none());
        let r = pattern_collapse(&[ord("e0*1")], &[ord("e0*3")], &ord("e0*2")).unwrap();
        assert!(r.is_none());
        let r = pattern_collapse(&[ord("e0*1"), ord("e0*2")], &[ord("e0*4")], &ord("e0*3")).unwrap();
        assert!(r.is_none());
    }

    #[test]
    fn collapse_success() {
        let (fresh, h) =
            pattern_collapse(&[ord("e0*1")], &[ord("e0*3")], &ord("e0*3")).unwrap().unwrap();
        assert_eq!(fresh, vec![ord("e0*2")]);
        assert_eq!(h.get(&ord("e0*1")), Some(&ord("e0*1")));
        assert_eq!(h.get(&ord("e0*3")), Some(&ord("e0*2")));
        assert_eq!(is_covering(&h), Le1Verdict::Yes);

        let (fresh, h) = pattern_collapse(
            &[ord("e0*1")],
            &[ord("e0*4"), ord("e0*6")],
            &ord("e0*4"),
        )
        .unwrap()
        .unwrap();
        assert_eq!(fresh, vec![ord("e0*2"), ord("e0*3")]);
        assert_eq!(is_covering(&h), Le1Verdict::Yes);
    }

    #[test]
    fn collapse_uncertified_inputs() {
        // ω is not an ε₀-multiple, so nonempty-Y patterns cannot certify.
        let r = pattern_collapse(&[ord("w")], &[ord("e0*3")], &ord("e0*3")).unwrap();
        assert!(r.is_none());
    }

    #[test]
    fn collapse_precondition() {
        assert!(pattern_collapse(&[], &[], &ord("w")).is_err());
        assert!(pattern_collapse(&[ord("e0*2")], &[], &ord("e0*1")).is_err());
    }

    #[test]
    fn enumeration_shape() {
        let zero_budget: Vec<Ordinal> = enum_ordinals(0).collect();
        assert_eq!(zero_budget, vec![Ordinal::zero()]);

        let ords: Vec<Ordinal> = enum_ordinals(3).collect();
        assert_eq!(&ords[..4], &[ord("0"), ord("e0*1"), ord("e0*2"), ord("e0*3")]);
        let mut dedup = ords.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), ords.len(), "enumeration must be duplicate-free");

        let again: Vec<Ordinal> = enum_ordinals(3).collect();
        assert_eq!(ords, again, "enumeration must be stable");

        let target = ord("e0*1+w");
        let found: Vec<Ordinal> = enum_ordinals(target.size()).collect();
        assert!(found.contains(&target));
    }

    #[test]
    fn sizes() {
        assert_eq!(ord("0").size(), 0);
        assert_eq!(ord("e0*2").size(), 2);
        assert_eq!(ord("1").size(), 1);
        assert_eq!(ord("w").size(), 2);
        assert_eq!(ord("e0*1+w").size(), 3);
    }

    #[test]
    fn succ_examples() {
        assert_eq!(ord("0").succ(), ord("1"));
        assert_eq!(ord("w").succ(), ord("w+1"));
        assert_eq!(ord("w+1").succ(), ord("w+2"));
        assert_eq!(ord("e0*1").succ(), ord("e0*1+1"));
    }
}
