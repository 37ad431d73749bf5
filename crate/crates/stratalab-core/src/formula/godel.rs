//! Gödel numbering and the pairing bijection.
//!
//! `godel(φ)` is the natural number whose big-endian base-256 digits are
//! the byte `0x01` followed by the UTF-8 of the canonical print; the
//! leading `0x01` makes small numbers (including 0) non-codes and the
//! scheme trivially invertible.
//!
//! The pairing is Cantor's `π(a,b) = (a+b)(a+b+1)/2 + b`, iterated for
//! triples as `⟨a,b,c⟩ = π(π(a,b),c)`.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::ast::{Dialect, Formula};
use super::parse::parse_formula;
use super::print::print_formula;

/// Gödel number of a formula (bit-exact byte scheme).
pub fn godel(f: &Formula) -> BigUint {
    let text = print_formula(f);
    godel_of_bytes(text.as_bytes())
}

/// Gödel number of a raw byte string (used for descriptor indices too).
pub fn godel_of_bytes(bytes: &[u8]) -> BigUint {
    let mut buf = Vec::with_capacity(bytes.len() + 1);
    buf.push(0x01);
    buf.extend_from_slice(bytes);
    BigUint::from_bytes_be(&buf)
}

/// Inverse of [`godel`]; absent on non-codes (wrong prefix, bad UTF-8,
/// unparseable or non-canonical text).
pub fn ungodel(n: &BigUint) -> Option<Formula> {
    let bytes = ungodel_bytes(n)?;
    let text = std::str::from_utf8(&bytes).ok()?;
    let f = parse_formula(text, Dialect::OExt).ok()?;
    if print_formula(&f) == text {
        Some(f)
    } else {
        None
    }
}

/// Strips the `0x01` prefix, or absent when `n` is not a code.
pub fn ungodel_bytes(n: &BigUint) -> Option<Vec<u8>> {
    if n.is_zero() {
        return None;
    }
    let bytes = n.to_bytes_be();
    if bytes[0] != 0x01 {
        return None;
    }
    Some(bytes[1..].to_vec())
}

/// Cantor pairing `π(a,b) = (a+b)(a+b+1)/2 + b`.
pub fn pair(a: &BigUint, b: &BigUint) -> BigUint {
    let s = a + b;
    (&s * (&s + BigUint::one())) / 2u32 + b
}

/// Inverse of [`pair`].
pub fn unpair(n: &BigUint) -> (BigUint, BigUint) {
    // w = ⌊(√(8n+1) − 1) / 2⌋
    let w = ((n * 8u32 + BigUint::one()).sqrt() - BigUint::one()) / 2u32;
    let t = (&w * (&w + BigUint::one())) / 2u32;
    let b = n - t;
    let a = &w - &b;
    (a, b)
}

/// `⟨a,b,c⟩ = π(π(a,b),c)`.
pub fn triple(a: &BigUint, b: &BigUint, c: &BigUint) -> BigUint {
    pair(&pair(a, b), c)
}

/// Inverse of [`triple`].
pub fn untriple(n: &BigUint) -> (BigUint, BigUint, BigUint) {
    let (ab, c) = unpair(n);
    let (a, b) = unpair(&ab);
    (a, b, c)
}
