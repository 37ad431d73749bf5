//! Host-side tests of the demo API (the wasm-bindgen exports are plain
//! functions off wasm32).

use stratalab_web::{ordinals, prove, transform};

fn as_json(s: &str) -> serde_json::Value {
    serde_json::from_str(s).expect("API returns JSON")
}

#[test]
fn transform_operations() {
    let v = as_json(&transform("K[2] K[1] S(0)=0 -> K[1] K[1] S(0)=0", "stratify", 1));
    assert_eq!(
        v["result"],
        "(K[2] K[1] S(0)=0 -> K[1]^{e0*2} K[1]^{e0*1} S(0)=0)"
    );

    let v = as_json(&transform("K[5]^{w} S(0)=0", "erase", 5));
    assert_eq!(v["result"], "K[5] S(0)=0");
    assert_eq!(v["superscripts"][0], "w");

    let v = as_json(&transform("K[7]^{w} K[7]^{5} 0=0", "veristratify", 7));
    assert_eq!(v["result"], "K[7]^{e0*2} K[7]^{e0*1} 0=0");
    assert_eq!(v["stratified_for_i"], true);

    let v = as_json(&transform("0=0", "godel", 0));
    assert_eq!(v["result"], "19938608");

    let v = as_json(&transform("K[7]^{5} oops", "parse", 0));
    assert!(v["error"].is_string());
}

#[test]
fn ordinal_comparisons() {
    let v = as_json(&ordinals("e0*1", "e0*2"));
    assert_eq!(v["order"], "LT");
    assert_eq!(v["le1"], "yes");

    let v = as_json(&ordinals("w*2+1", "w*2+1"));
    assert_eq!(v["order"], "EQ");

    let v = as_json(&ordinals("w", "w*2"));
    assert_eq!(v["le1"], "unknown");

    let v = as_json(&ordinals("e0*1", "nonsense"));
    assert!(v["error"].is_string());
}

#[test]
fn prover_playground() {
    let v = as_json(&prove("K[2] 0=0", "(K[1] 0=0 -> K[2] 0=0)\nK[1] 0=0", 50_000));
    assert_eq!(v["verdict"], "proved");
    assert_eq!(v["axioms_used"].as_array().unwrap().len(), 2);

    let v = as_json(&prove("forall x. x=x", "", 50_000));
    assert_eq!(v["verdict"], "proved");

    let v = as_json(&prove("K[1] 0=0", "", 5_000));
    assert_eq!(v["verdict"], "unknown");
}
