//! Property tests for the spec'd invariants: substitution simultaneity,
//! alpha-equivalence congruence, numbering round trips, ordinal-map and
//! stratifier laws, and substrate determinism.

mod common;

use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::BigUint;
use proptest::prelude::*;
use stratalab_core::entail::{check_certificate, entails, ProveVerdict};
use stratalab_core::enumerate::FormulaSupply;
use stratalab_core::formula::{
    godel, parse_formula, print_formula, triple, ungodel, untriple, Assignment, Dialect,
    Formula, Sentence, Term, Var,
};
use stratalab_core::ordinal::{enum_ordinals, OrdMap, Ordinal};
use stratalab_core::rec::{Descriptor, Evaluator, Registry, StepOutcome};
use stratalab_core::strat::{
    apply_ordmap, apply_stratifier, canonical_veristratified, compose_stratifier, erase,
    is_i_stratified, is_i_stratified_by_definition, is_very_i_stratified, lift_valid,
    superscripts, theory_cut, Stratifier,
};

fn term_strategy() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        Just(Term::Zero),
        (0u32..3).prop_map(|k| Term::var(Var::Canon(k))),
        (0u64..5).prop_map(|n| Term::numeral(BigUint::from(n))),
    ];
    leaf.prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(Term::succ),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::plus(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::times(a, b)),
            (inner.clone(), inner.clone(), inner).prop_map(|(a, b, c)| Term::triple(a, b, c)),
        ]
    })
}

fn plain_formula_strategy() -> impl Strategy<Value = Formula> {
    let atom = prop_oneof![
        (term_strategy(), term_strategy()).prop_map(|(a, b)| Formula::Eq(a, b)),
        (term_strategy(), term_strategy()).prop_map(|(a, b)| Formula::InW(a, b)),
    ];
    atom.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            ((0u32..3), inner.clone()).prop_map(|(v, f)| Formula::forall(Var::Canon(v), f)),
            ((0u32..3), inner).prop_map(|(i, f)| Formula::op_plain(i, f)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn print_parse_identity(f in plain_formula_strategy()) {
        let text = print_formula(&f);
        let back = parse_formula(&text, Dialect::OExt).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(print_formula(&back), text);
    }

    #[test]
    fn assign_substitute_is_simultaneous(f in plain_formula_strategy(), seed in 0u64..1000) {
        let fv: Vec<Var> = f.free_vars().into_iter().collect();
        let mut s = Assignment::new();
        for (k, v) in fv.iter().enumerate() {
            s.set(v.clone(), BigUint::from(seed.wrapping_mul(k as u64 + 1) % 7));
        }
        let simultaneous = f.assign_substitute(&s).unwrap();
        prop_assert!(simultaneous.formula().free_vars().is_empty());

        // Iterated substitution in reverse canonical order must agree.
        let mut iterated = f.clone();
        for v in fv.iter().rev() {
            iterated = iterated
                .substitute(v, &Term::numeral(s.get(v).unwrap().clone()), false)
                .unwrap();
        }
        prop_assert_eq!(simultaneous.formula(), &iterated);
    }

    #[test]
    fn alpha_normalize_respects_alpha_classes(f in plain_formula_strategy()) {
        let n = f.alpha_normalize();
        prop_assert!(n.alpha_equal(&f));
        prop_assert_eq!(n.alpha_normalize(), n.clone());
        // Congruence under the formers.
        let g = Formula::not(f.clone());
        prop_assert!(g.alpha_equal(&Formula::not(n.clone())));
        let op = Formula::op_plain(1, f.clone());
        prop_assert!(op.alpha_equal(&Formula::op_plain(1, n)));
    }

    #[test]
    fn goedel_roundtrip(f in plain_formula_strategy()) {
        prop_assert_eq!(ungodel(&godel(&f)), Some(f));
    }

    #[test]
    fn triple_roundtrip_sampled(a in 0u64..u64::MAX / 4, b in 0u64..u64::MAX / 4, c in 0u64..u64::MAX / 4) {
        let (x, y, z) = (BigUint::from(a), BigUint::from(b), BigUint::from(c));
        prop_assert_eq!(untriple(&triple(&x, &y, &z)), (x, y, z));
    }

    #[test]
    fn stratifier_laws(f in plain_formula_strategy(), i in 0u32..3, tail in 1u64..4) {
        for st in [Stratifier::veristratifier(i), Stratifier::eps_tail(i, tail)] {
            let out = apply_stratifier(&st, &f).unwrap();
            prop_assert_eq!(erase(&out), f.clone());
            prop_assert!(is_i_stratified(&out, i));
            prop_assert_eq!(is_i_stratified(&out, i), is_i_stratified_by_definition(&out, i));
        }
    }

    #[test]
    fn lift_valid_laws(f in plain_formula_strategy(), i in 0u32..3) {
        let lifted = lift_valid(&f, i).unwrap();
        prop_assert!(is_very_i_stratified(&lifted, i));
        prop_assert_eq!(erase(&lifted), f);
    }

    #[test]
    fn canonical_veristratified_laws(f in plain_formula_strategy(), i in 0u32..2) {
        // Generate i-stratified inputs through the veristratifier and an
        // order-preserving distortion.
        let st = Stratifier::veristratifier(i);
        let base = apply_stratifier(&st, &f).unwrap();
        let on = superscripts(&base);
        let h = OrdMap::from_pairs(on.iter().map(|a| {
            let k = a.eps_multiplier().unwrap();
            (a.clone(), Ordinal::eps_times(k * 2 + 1))
        }));
        let distorted = apply_ordmap(&h, &base);
        prop_assert!(is_i_stratified(&distorted, i));
        let canon = canonical_veristratified(&distorted, i).unwrap();
        prop_assert!(is_very_i_stratified(&canon, i));
        prop_assert_eq!(erase(&canon), erase(&distorted));
    }

    #[test]
    fn ordmap_identity_and_composition(f in plain_formula_strategy(), i in 0u32..2) {
        let st = Stratifier::veristratifier(i);
        let base = apply_stratifier(&st, &f).unwrap();
        let on = superscripts(&base);
        let id = OrdMap::identity_on(on.iter().cloned());
        prop_assert_eq!(apply_ordmap(&id, &base), base.clone());

        let h = OrdMap::from_pairs(on.iter().map(|a| {
            (a.clone(), Ordinal::eps_times(a.eps_multiplier().unwrap() + 3))
        }));
        let g = OrdMap::from_pairs(on.iter().map(|a| {
            let k = a.eps_multiplier().unwrap() + 3;
            (Ordinal::eps_times(k), Ordinal::eps_times(k + 5))
        }));
        let composed = OrdMap::from_pairs(on.iter().map(|a| {
            (a.clone(), Ordinal::eps_times(a.eps_multiplier().unwrap() + 8))
        }));
        prop_assert_eq!(
            apply_ordmap(&g, &apply_ordmap(&h, &base)),
            apply_ordmap(&composed, &base)
        );
    }

    #[test]
    fn compose_stratifier_defining_equation(f in plain_formula_strategy()) {
        let st = Stratifier::veristratifier(1);
        let lifted = apply_stratifier(&st, &f).unwrap();
        let on = superscripts(&lifted);
        let h = OrdMap::from_pairs(on.iter().map(|a| {
            (a.clone(), Ordinal::eps_times(a.eps_multiplier().unwrap() + 2))
        }));
        let starred = compose_stratifier(&h, &st, &f).unwrap();
        prop_assert_eq!(
            apply_stratifier(&starred, &f).unwrap(),
            apply_ordmap(&h, &lifted)
        );
    }

    #[test]
    fn theory_cut_composes(f in plain_formula_strategy(), lo in 1u64..3, hi in 3u64..6) {
        let st = Stratifier::veristratifier(1);
        let s = apply_stratifier(&st, &f).unwrap().universal_closure();
        let alpha = Ordinal::eps_times(lo);
        let beta = Ordinal::eps_times(hi);
        let stream = vec![s.clone(), s.clone()];
        let double_cut: Vec<Sentence> = theory_cut(
            theory_cut(stream.clone().into_iter(), beta.clone()),
            alpha.clone(),
        )
        .collect();
        let single_cut: Vec<Sentence> =
            theory_cut(stream.into_iter(), alpha.clone()).collect();
        prop_assert_eq!(double_cut, single_cut);
    }

    #[test]
    fn descriptor_roundtrip(a in 0u64..10_000, b in 0u64..10_000) {
        for d in [
            Descriptor::NatLit(BigUint::from(a)),
            Descriptor::Partial(BigUint::from(a), BigUint::from(b)),
            Descriptor::Diag(BigUint::from(a)),
            Descriptor::Native("id".into(), vec![Descriptor::NatLit(BigUint::from(b))]),
        ] {
            prop_assert_eq!(Descriptor::decode(&d.index()), Some(d));
        }
    }

    #[test]
    fn eval_fuel_monotone(x in 0u64..50, lo in 1u64..50, extra in 0u64..200) {
        let ev = Evaluator::new(Arc::new(Registry::new()));
        let id = Descriptor::Native("succ".into(), vec![]).index();
        let small = ev.eval_step(&id, &BigUint::from(x), lo);
        let big = ev.eval_step(&id, &BigUint::from(x), lo + extra);
        if let StepOutcome::Halted(v) = small {
            prop_assert_eq!(big, StepOutcome::Halted(v));
        }
    }
}

#[test]
fn goedel_injective_on_large_corpus() {
    let mut supply = FormulaSupply::new(&[0, 1]);
    let mut seen: HashSet<BigUint> = HashSet::new();
    for t in 0..10_000 {
        let f = supply.nth(t);
        assert!(seen.insert(godel(&f)), "Gödel collision at index {t}");
    }
}

#[test]
fn ordinal_enumeration_properties() {
    let ords: Vec<Ordinal> = enum_ordinals(5).collect();
    let rerun: Vec<Ordinal> = enum_ordinals(5).collect();
    assert_eq!(ords, rerun);
    let mut dedup = ords.clone();
    dedup.sort();
    dedup.dedup();
    assert_eq!(dedup.len(), ords.len());
    // Total order sanity on the enumerated sample.
    for a in &ords {
        for b in &ords {
            let ab = a.cmp(b);
            let ba = b.cmp(a);
            assert_eq!(ab, ba.reverse());
        }
    }
}

#[test]
fn triple_roundtrip_exhaustive_small() {
    for a in 0u32..=200 {
        for b in (0u32..=200).step_by(40) {
            for c in (0u32..=200).step_by(40) {
                let (x, y, z) = (BigUint::from(a), BigUint::from(b), BigUint::from(c));
                assert_eq!(untriple(&triple(&x, &y, &z)), (x, y, z));
            }
        }
    }
}

#[test]
fn entails_monotone_under_extension() {
    let a = parse_formula("K[1] 0=0", Dialect::Plain).unwrap();
    let b = parse_formula("K[2] 0=0", Dialect::Plain).unwrap();
    let sa = Sentence::new(a.clone()).unwrap();
    let sb = Sentence::new(b.clone()).unwrap();
    let small = entails([sa.clone()].into_iter(), &a, 20_000);
    let big = entails([sa, sb].into_iter(), &a, 20_000);
    match (small, big) {
        (ProveVerdict::Proved(c1), ProveVerdict::Proved(c2)) => {
            assert!(check_certificate(&c1) && check_certificate(&c2));
            assert_eq!(c1.axioms_used, c2.axioms_used, "same pruned certificate");
        }
        other => panic!("both must prove: {other:?}"),
    }
}
