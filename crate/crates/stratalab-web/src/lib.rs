//! Browser demo bindings: three interactive operations over the core
//! workbench, each taking and returning strings so the page stays a
//! single static HTML file.
//!
//! The crate builds for wasm32 via wasm-bindgen (see the README for the
//! packaging step) and as a normal host library for testing.

use wasm_bindgen::prelude::*;

use stratalab_core::entail::{entails, prove_valid, ProveVerdict};
use stratalab_core::formula::{
    godel, parse_formula, parse_sentence, print_formula, Dialect, Sentence,
};
use stratalab_core::ordinal::{le1, ord_cmp, parse_ordinal, Le1Verdict};
use stratalab_core::strat::{
    apply_stratifier, canonical_veristratified, erase, is_i_stratified, lift_valid,
    superscripts, Stratifier,
};

fn err_json(msg: impl std::fmt::Display) -> String {
    serde_json::json!({ "error": msg.to_string() }).to_string()
}

/// Formula playground: parse the input and apply one transformation.
///
/// `op` is one of `parse`, `erase`, `stratify` (veristratifier for `i`),
/// `veristratify` (canonical very-stratified form), `lift`, `godel`.
#[wasm_bindgen]
pub fn transform(formula: &str, op: &str, i: u32) -> String {
    let parsed = match parse_formula(formula, Dialect::OExt) {
        Ok(f) => f,
        Err(e) => return err_json(e),
    };
    let result = match op {
        "parse" => Ok(print_formula(&parsed)),
        "erase" => Ok(print_formula(&erase(&parsed))),
        "stratify" => apply_stratifier(&Stratifier::veristratifier(i), &parsed)
            .map(|f| print_formula(&f))
            .map_err(|e| e.to_string()),
        "veristratify" => canonical_veristratified(&parsed, i)
            .map(|f| print_formula(&f))
            .map_err(|e| e.to_string()),
        "lift" => lift_valid(&parsed, i)
            .map(|f| print_formula(&f))
            .map_err(|e| e.to_string()),
        "godel" => Ok(godel(&parsed).to_string()),
        other => Err(format!("unknown operation {other:?}")),
    };
    match result {
        Ok(text) => {
            let supers: Vec<String> =
                superscripts(&parsed).iter().map(|o| o.to_string()).collect();
            serde_json::json!({
                "result": text,
                "canonical_input": print_formula(&parsed),
                "stratified_for_i": is_i_stratified(&parsed, i),
                "superscripts": supers,
            })
            .to_string()
        }
        Err(e) => err_json(e),
    }
}

/// Ordinal playground: compare two ordinal literals under the order and
/// the `≤₁` fragment.
#[wasm_bindgen]
pub fn ordinals(a: &str, b: &str) -> String {
    let (x, y) = match (parse_ordinal(a), parse_ordinal(b)) {
        (Ok(x), Ok(y)) => (x, y),
        (Err(e), _) | (_, Err(e)) => return err_json(e),
    };
    let cmp = match ord_cmp(&x, &y) {
        std::cmp::Ordering::Less => "LT",
        std::cmp::Ordering::Greater => "GT",
        std::cmp::Ordering::Equal => "EQ",
    };
    let le = match le1(&x, &y) {
        Le1Verdict::Yes => "yes",
        Le1Verdict::No => "no",
        Le1Verdict::Unknown => "unknown",
    };
    serde_json::json!({
        "canonical_a": x.to_string(),
        "canonical_b": y.to_string(),
        "order": cmp,
        "le1": le,
    })
    .to_string()
}

/// Prover playground: bounded entailment of `goal` from newline-separated
/// axioms. Returns the verdict, the axioms the proof used, and the
/// certificate size.
#[wasm_bindgen]
pub fn prove(goal: &str, axioms: &str, budget: u32) -> String {
    let goal = match parse_formula(goal, Dialect::OExt) {
        Ok(f) => f,
        Err(e) => return err_json(e),
    };
    let mut parsed_axioms: Vec<Sentence> = Vec::new();
    for (k, line) in axioms.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match parse_sentence(line, Dialect::OExt) {
            Ok(s) => parsed_axioms.push(s),
            Err(e) => return err_json(format!("axiom line {}: {e}", k + 1)),
        }
    }
    let budget = u64::from(budget).clamp(64, 400_000);
    let verdict = if parsed_axioms.is_empty() {
        prove_valid(&goal, budget)
    } else {
        entails(parsed_axioms.into_iter(), &goal, budget)
    };
    match verdict {
        ProveVerdict::Proved(cert) => {
            let used: Vec<String> = cert
                .axioms_used
                .iter()
                .map(|s| print_formula(s.formula()))
                .collect();
            serde_json::json!({
                "verdict": "proved",
                "axioms_used": used,
                "certificate_json_bytes": cert.to_json().len(),
            })
            .to_string()
        }
        ProveVerdict::Unknown { spent } => {
            serde_json::json!({ "verdict": "unknown", "spent": spent }).to_string()
        }
    }
}
