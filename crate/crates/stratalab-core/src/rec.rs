//! A small computability substrate: descriptors denote partial functions
//! `φ_e : ℕ → ℕ`, indices are Gödel numbers of canonical descriptor
//! serializations, and evaluation is budgeted by fuel.
//!
//! Natives may be full host procedures (including the theorem prover);
//! that is what lets the theory enumerator of the fixed-point
//! construction literally run inside `W_e` at desk scale. `Diag` carries
//! Kleene's diagonal semantics, making the Recursion Theorem a two-line
//! construction.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, RwLock};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{CoreError, Result};
use crate::formula::{godel_of_bytes, pair, ungodel_bytes, unpair};

/// Program syntax of the substrate.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Descriptor {
    /// Constant function.
    NatLit(BigUint),
    /// Registered host procedure applied to descriptor parameters.
    Native(String, Vec<Descriptor>),
    /// `φ_{Partial(e,a)}(x) = φ_e(⟨a,x⟩₂)` (the S-m-n combinator).
    Partial(BigUint, BigUint),
    /// `φ_{Diag(e)}(x) = φ_{φ_e(e)}(x)` (Kleene's diagonal).
    Diag(BigUint),
}

const TAG_NATLIT: u8 = 0x00;
const TAG_NATIVE: u8 = 0x10; // low nibble carries the arity (≤ 15)
const TAG_PARTIAL: u8 = 0x20;
const TAG_DIAG: u8 = 0x30;

impl Descriptor {
    /// Canonical length-prefixed tagged-tree serialization (bit-exact;
    /// the argument of Gödel numbering for indices).
    pub fn serialize(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.write(&mut out);
        out
    }

    fn write(&self, out: &mut Vec<u8>) {
        match self {
            Descriptor::NatLit(n) => {
                out.push(TAG_NATLIT);
                write_nat(n, out);
            }
            Descriptor::Native(name, args) => {
                assert!(args.len() <= 15, "native arity above 15");
                assert!(name.len() <= 255, "native name above 255 bytes");
                out.push(TAG_NATIVE | args.len() as u8);
                out.push(name.len() as u8);
                out.extend_from_slice(name.as_bytes());
                for a in args {
                    a.write(out);
                }
            }
            Descriptor::Partial(e, a) => {
                out.push(TAG_PARTIAL);
                write_nat(e, out);
                write_nat(a, out);
            }
            Descriptor::Diag(e) => {
                out.push(TAG_DIAG);
                write_nat(e, out);
            }
        }
    }

    /// The index of this descriptor.
    pub fn index(&self) -> BigUint {
        godel_of_bytes(&self.serialize())
    }

    /// Inverse of [`Descriptor::index`]; absent on non-codes.
    pub fn decode(index: &BigUint) -> Option<Descriptor> {
        let bytes = ungodel_bytes(index)?;
        let mut pos = 0;
        let d = parse_descriptor(&bytes, &mut pos)?;
        if pos == bytes.len() {
            Some(d)
        } else {
            None
        }
    }
}

/// LEB128 length prefix followed by big-endian magnitude bytes (empty for 0).
fn write_nat(n: &BigUint, out: &mut Vec<u8>) {
    let bytes = if n.is_zero() { Vec::new() } else { n.to_bytes_be() };
    let mut len = bytes.len();
    loop {
        let mut b = (len & 0x7f) as u8;
        len >>= 7;
        if len != 0 {
            b |= 0x80;
        }
        out.push(b);
        if len == 0 {
            break;
        }
    }
    out.extend_from_slice(&bytes);
}

fn read_nat(bytes: &[u8], pos: &mut usize) -> Option<BigUint> {
    let mut len: usize = 0;
    let mut shift = 0;
    loop {
        let b = *bytes.get(*pos)?;
        *pos += 1;
        len |= ((b & 0x7f) as usize) << shift;
        if b & 0x80 == 0 {
            break;
        }
        shift += 7;
        if shift > 28 {
            return None;
        }
    }
    if *pos + len > bytes.len() {
        return None;
    }
    let slice = &bytes[*pos..*pos + len];
    if !slice.is_empty() && slice[0] == 0 {
        return None; // leading zero: non-canonical
    }
    *pos += len;
    Some(BigUint::from_bytes_be(slice))
}

fn parse_descriptor(bytes: &[u8], pos: &mut usize) -> Option<Descriptor> {
    let tag = *bytes.get(*pos)?;
    *pos += 1;
    if tag == TAG_NATLIT {
        return Some(Descriptor::NatLit(read_nat(bytes, pos)?));
    }
    if tag & 0xf0 == TAG_NATIVE {
        let argc = (tag & 0x0f) as usize;
        let name_len = *bytes.get(*pos)? as usize;
        *pos += 1;
        if *pos + name_len > bytes.len() {
            return None;
        }
        let name = std::str::from_utf8(&bytes[*pos..*pos + name_len])
            .ok()?
            .to_string();
        *pos += name_len;
        let mut args = Vec::with_capacity(argc);
        for _ in 0..argc {
            args.push(parse_descriptor(bytes, pos)?);
        }
        return Some(Descriptor::Native(name, args));
    }
    if tag == TAG_PARTIAL {
        let e = read_nat(bytes, pos)?;
        let a = read_nat(bytes, pos)?;
        return Some(Descriptor::Partial(e, a));
    }
    if tag == TAG_DIAG {
        return Some(Descriptor::Diag(read_nat(bytes, pos)?));
    }
    None
}

/// Result of a budgeted evaluation step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepOutcome {
    Halted(BigUint),
    OutOfFuel,
}

impl StepOutcome {
    pub fn halted(&self) -> Option<&BigUint> {
        match self {
            StepOutcome::Halted(v) => Some(v),
            StepOutcome::OutOfFuel => None,
        }
    }
}

/// Host procedure behind a native descriptor. Receives the evaluator (for
/// reentrant sub-evaluation), the descriptor parameters, the input, and
/// the fuel cell it must account its work against.
pub type NativeImpl =
    Arc<dyn Fn(&Evaluator, &[Descriptor], &BigUint, &mut u64) -> StepOutcome + Send + Sync>;

struct NativeEntry {
    arity: usize,
    call_cost: u64,
    imp: NativeImpl,
}

/// Append-only native registry; registration is synchronized, evaluation
/// reads concurrently.
pub struct Registry {
    natives: RwLock<HashMap<String, NativeEntry>>,
}

impl Registry {
    pub fn new() -> Registry {
        let reg = Registry { natives: RwLock::new(HashMap::new()) };
        reg.register_builtins();
        reg
    }

    pub fn register(
        &self,
        name: &str,
        arity: usize,
        call_cost: u64,
        imp: NativeImpl,
    ) -> Result<()> {
        if name.len() > 255 || arity > 15 {
            return Err(CoreError::Precondition(
                "native name ≤ 255 bytes and arity ≤ 15".into(),
            ));
        }
        let mut map = self.natives.write().expect("registry lock");
        if map.contains_key(name) {
            return Err(CoreError::DuplicateNative(name.to_string()));
        }
        map.insert(name.to_string(), NativeEntry { arity, call_cost, imp });
        Ok(())
    }

    pub fn is_registered(&self, name: &str) -> bool {
        self.natives.read().expect("registry lock").contains_key(name)
    }

    fn register_builtins(&self) {
        self.register("id", 0, 1, Arc::new(|_, _, x, _| StepOutcome::Halted(x.clone())))
            .unwrap();
        self.register("succ", 0, 1, Arc::new(|_, _, x, _| StepOutcome::Halted(x + 1u32)))
            .unwrap();
        self.register(
            "fst",
            0,
            1,
            Arc::new(|_, _, x, _| StepOutcome::Halted(unpair(x).0)),
        )
        .unwrap();
        self.register(
            "snd",
            0,
            1,
            Arc::new(|_, _, x, _| StepOutcome::Halted(unpair(x).1)),
        )
        .unwrap();
        self.register(
            "diverge",
            0,
            1,
            Arc::new(|_, _, _, fuel| {
                *fuel = 0;
                StepOutcome::OutOfFuel
            }),
        )
        .unwrap();
        // φ(n) = index of Partial(e, n): the total S-m-n currying map.
        self.register(
            "curry",
            1,
            1,
            Arc::new(|_, args, n, _| {
                let Descriptor::NatLit(e) = &args[0] else {
                    return StepOutcome::OutOfFuel;
                };
                StepOutcome::Halted(Descriptor::Partial(e.clone(), n.clone()).index())
            }),
        )
        .unwrap();
        // φ(y) = φ_f(index of Diag(y)) — the composition the Recursion
        // Theorem needs.
        self.register(
            "fdiag",
            1,
            1,
            Arc::new(|ev, args, y, fuel| {
                let Descriptor::NatLit(f_idx) = &args[0] else {
                    return StepOutcome::OutOfFuel;
                };
                let dy = Descriptor::Diag(y.clone()).index();
                ev.eval_index(f_idx, &dy, fuel)
            }),
        )
        .unwrap();
        // φ(t): with (a, b) = unpair(t), run φ_n(a) for exactly b fuel;
        // the t-th dovetail step yields its discovered element or the
        // padding witness. Total, fuel-monotone, range = W_n ∪ {witness}.
        self.register(
            "range-enum",
            2,
            1,
            Arc::new(|ev, args, t, fuel| {
                let (Descriptor::NatLit(n_idx), Descriptor::NatLit(witness)) =
                    (&args[0], &args[1])
                else {
                    return StepOutcome::OutOfFuel;
                };
                let (a, b) = unpair(t);
                let Some(b) = b.to_u64() else {
                    return StepOutcome::OutOfFuel;
                };
                if *fuel < b {
                    return StepOutcome::OutOfFuel;
                }
                let mut inner = b;
                let out = ev.eval_index(n_idx, &a, &mut inner);
                *fuel -= b - inner;
                match out {
                    StepOutcome::Halted(_) => StepOutcome::Halted(a),
                    StepOutcome::OutOfFuel => StepOutcome::Halted(witness.clone()),
                }
            }),
        )
        .unwrap();
    }
}

impl Default for Registry {
    fn default() -> Self {
        Registry::new()
    }
}

/// Budgeted evaluator over a frozen-ish registry (append-only).
#[derive(Clone)]
pub struct Evaluator {
    registry: Arc<Registry>,
}

impl Evaluator {
    pub fn new(registry: Arc<Registry>) -> Evaluator {
        Evaluator { registry }
    }

    pub fn registry(&self) -> &Arc<Registry> {
        &self.registry
    }

    /// `φ_e(x)` with a fuel budget. Non-codes diverge (OutOfFuel forever).
    pub fn eval_step(&self, e: &BigUint, x: &BigUint, fuel: u64) -> StepOutcome {
        let mut fuel = fuel;
        self.eval_index(e, x, &mut fuel)
    }

    pub fn eval_index(&self, e: &BigUint, x: &BigUint, fuel: &mut u64) -> StepOutcome {
        match Descriptor::decode(e) {
            Some(d) => self.eval(&d, x, fuel),
            None => StepOutcome::OutOfFuel,
        }
    }

    pub fn eval(&self, d: &Descriptor, x: &BigUint, fuel: &mut u64) -> StepOutcome {
        if *fuel == 0 {
            return StepOutcome::OutOfFuel;
        }
        *fuel -= 1;
        match d {
            Descriptor::NatLit(n) => StepOutcome::Halted(n.clone()),
            Descriptor::Native(name, args) => {
                let reg = self.registry.natives.read().expect("registry lock");
                let Some(entry) = reg.get(name) else {
                    return StepOutcome::OutOfFuel;
                };
                if entry.arity != args.len() {
                    return StepOutcome::OutOfFuel;
                }
                if *fuel < entry.call_cost {
                    return StepOutcome::OutOfFuel;
                }
                *fuel -= entry.call_cost;
                let imp = Arc::clone(&entry.imp);
                drop(reg);
                imp(self, args, x, fuel)
            }
            Descriptor::Partial(e, a) => {
                let y = pair(a, x);
                self.eval_index(e, &y, fuel)
            }
            Descriptor::Diag(e) => match self.eval_index(e, e, fuel) {
                StepOutcome::Halted(v) => self.eval_index(&v, x, fuel),
                StepOutcome::OutOfFuel => StepOutcome::OutOfFuel,
            },
        }
    }

    /// `x ∈ W_e`? Yes when `φ_e(x)` halts within fuel; Unknown otherwise.
    pub fn we_member(&self, e: &BigUint, x: &BigUint, fuel: u64) -> WeMember {
        match self.eval_step(e, x, fuel) {
            StepOutcome::Halted(_) => WeMember::Yes,
            StepOutcome::OutOfFuel => WeMember::Unknown,
        }
    }

    /// Deterministic duplicate-free prefix of `W_e` under the canonical
    /// dovetailing order: step `s` unpairs to `(input, fuel)`.
    pub fn we_enumerate(&self, e: &BigUint, steps: u64) -> Vec<BigUint> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for s in 0..steps {
            let (a, b) = unpair(&BigUint::from(s));
            let fuel = b.to_u64().unwrap_or(u64::MAX);
            if let StepOutcome::Halted(_) = self.eval_step(e, &a, fuel) {
                if seen.insert(a.clone()) {
                    out.push(a);
                }
            }
        }
        out
    }
}

/// Three-valued membership in an r.e. set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeMember {
    Yes,
    Unknown,
}

/// S-m-n: `φ_{smn(e,a)}(x) = φ_e(⟨a,x⟩₂)`, purely syntactic.
pub fn smn(e: &BigUint, a: &BigUint) -> BigUint {
    Descriptor::Partial(e.clone(), a.clone()).index()
}

/// Recursion-Theorem fixed point: for a total index transformer `f`,
/// returns `n` with `φ_n = φ_{f(n)}` extensionally.
pub fn fixpoint(f: &BigUint) -> BigUint {
    let g = Descriptor::Native("fdiag".into(), vec![Descriptor::NatLit(f.clone())]);
    Descriptor::Diag(g.index()).index()
}

/// Total enumerator of `W_n` padded with a certified witness:
/// `φ_k(t)` inspects dovetail step `t` and yields either the element
/// discovered there or the witness; `range(φ_k) = W_n`.
pub fn range_enumerator(
    ev: &Evaluator,
    n: &BigUint,
    witness: &BigUint,
    certify_fuel: u64,
) -> Result<BigUint> {
    if ev.we_member(n, witness, certify_fuel) != WeMember::Yes {
        return Err(CoreError::Precondition(
            "witness not certified to lie in W_n".into(),
        ));
    }
    Ok(Descriptor::Native(
        "range-enum".into(),
        vec![Descriptor::NatLit(n.clone()), Descriptor::NatLit(witness.clone())],
    )
    .index())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bu(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn setup() -> Evaluator {
        Evaluator::new(Arc::new(Registry::new()))
    }

    #[test]
    fn serialization_roundtrip() {
        let samples = [
            Descriptor::NatLit(bu(0)),
            Descriptor::NatLit(bu(123456789)),
            Descriptor::Native("id".into(), vec![]),
            Descriptor::Native("fdiag".into(), vec![Descriptor::NatLit(bu(7))]),
            Descriptor::Partial(bu(99), bu(3)),
            Descriptor::Diag(bu(42)),
            Descriptor::Native(
                "range-enum".into(),
                vec![Descriptor::NatLit(bu(5)), Descriptor::NatLit(bu(0))],
            ),
        ];
        for d in samples {
            assert_eq!(Descriptor::decode(&d.index()), Some(d.clone()), "{d:?}");
        }
        assert_eq!(Descriptor::decode(&bu(0)), None);
        assert_eq!(Descriptor::decode(&bu(7)), None);
    }

    #[test]
    fn eval_basics() {
        let ev = setup();
        let id = Descriptor::Native("id".into(), vec![]).index();
        assert_eq!(ev.eval_step(&id, &bu(5), 100), StepOutcome::Halted(bu(5)));

        let div = Descriptor::Native("diverge".into(), vec![]).index();
        assert_eq!(ev.eval_step(&div, &bu(5), 10_000), StepOutcome::OutOfFuel);

        let unknown = Descriptor::Native("no-such".into(), vec![]).index();
        assert_eq!(ev.eval_step(&unknown, &bu(5), 10_000), StepOutcome::OutOfFuel);

        let konst = Descriptor::NatLit(bu(9)).index();
        assert_eq!(ev.eval_step(&konst, &bu(5), 100), StepOutcome::Halted(bu(9)));
    }

    #[test]
    fn fuel_monotone_and_deterministic() {
        let ev = setup();
        let id = Descriptor::Native("id".into(), vec![]).index();
        for x in 0..20u64 {
            let lo = ev.eval_step(&id, &bu(x), 3);
            let hi = ev.eval_step(&id, &bu(x), 1000);
            if let StepOutcome::Halted(v) = &lo {
                assert_eq!(StepOutcome::Halted(v.clone()), hi);
            }
            assert_eq!(ev.eval_step(&id, &bu(x), 1000), hi);
        }
        assert_eq!(ev.eval_step(&id, &bu(1), 0), StepOutcome::OutOfFuel);
    }

    #[test]
    fn smn_law_on_samples() {
        let ev = setup();
        // e = snd: φ_e(⟨a,x⟩) = x, so φ_{smn(e,a)} = identity.
        let snd = Descriptor::Native("snd".into(), vec![]).index();
        let curried = smn(&snd, &bu(3));
        for x in 0..30u64 {
            assert_eq!(ev.eval_step(&curried, &bu(x), 100), StepOutcome::Halted(bu(x)));
        }
        // e = fst: φ_{smn(e,a)} is constantly a.
        let fst = Descriptor::Native("fst".into(), vec![]).index();
        let c7 = smn(&fst, &bu(7));
        for x in 0..30u64 {
            assert_eq!(ev.eval_step(&c7, &bu(x), 100), StepOutcome::Halted(bu(7)));
        }
        // Determinism of the index itself.
        assert_eq!(smn(&snd, &bu(3)), smn(&snd, &bu(3)));

        // Direct law: φ_{smn(e,a)}(x) = φ_e(⟨a,x⟩₂).
        for a in 0..6u64 {
            for x in 0..6u64 {
                let lhs = ev.eval_step(&smn(&snd, &bu(a)), &bu(x), 1000);
                let rhs = ev.eval_step(&snd, &pair(&bu(a), &bu(x)), 1000);
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn fixpoint_identity_transformer() {
        let ev = setup();
        // f = id: any n with φ_n = φ_{f(n)} works trivially; sampled
        // membership must agree between n and f(n) = n.
        let id = Descriptor::Native("id".into(), vec![]).index();
        let n = fixpoint(&id);
        for x in 0..10u64 {
            let a = ev.we_member(&n, &bu(x), 4000);
            let b = ev.we_member(&n, &bu(x), 8000);
            if a == WeMember::Yes {
                assert_eq!(b, WeMember::Yes);
            }
        }
    }

    #[test]
    fn fixpoint_constant_empty_transformer() {
        let ev = setup();
        // f(n) = index of diverge: W_{fix} must be empty.
        let div_idx = Descriptor::Native("diverge".into(), vec![]).index();
        let f = Descriptor::NatLit(div_idx).index();
        let n = fixpoint(&f);
        assert!(ev.we_enumerate(&n, 400).is_empty());
        // And W_{f(n)} is empty too: sampled agreement.
        for x in 0..5u64 {
            assert_eq!(ev.we_member(&n, &bu(x), 2000), WeMember::Unknown);
        }
    }

    #[test]
    fn fixpoint_law_nontrivial() {
        let ev = setup();
        // f(n) = smn(snd-as-2arg?, ...) — use a transformer that maps any
        // index to the identity program: φ_{f(n)} = id. The fixed point
        // must then also behave as the identity on samples.
        let id_idx = Descriptor::Native("id".into(), vec![]).index();
        let f = Descriptor::NatLit(id_idx).index();
        let n = fixpoint(&f);
        for x in 0..10u64 {
            assert_eq!(
                ev.eval_step(&n, &bu(x), 10_000),
                StepOutcome::Halted(bu(x)),
                "fixed point must agree with φ_{{f(n)}} = id on {x}"
            );
        }
    }

    #[test]
    fn we_enumerate_prefix() {
        let ev = setup();
        let id = Descriptor::Native("id".into(), vec![]).index();
        let got = ev.we_enumerate(&id, 2000);
        // Identity is total: the prefix should include small naturals.
        assert!(got.contains(&bu(0)));
        assert!(got.contains(&bu(1)));
        let mut dedup = got.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), got.len());

        let div = Descriptor::Native("diverge".into(), vec![]).index();
        assert!(ev.we_enumerate(&div, 2000).is_empty());

        // Consistency: enumerated elements are Yes-members at some fuel.
        for x in &got {
            assert_eq!(ev.we_member(&id, x, 1000), WeMember::Yes);
        }
    }

    #[test]
    fn range_enumerator_behavior() {
        let ev = setup();
        let id = Descriptor::Native("id".into(), vec![]).index();
        let k = range_enumerator(&ev, &id, &bu(0), 1000).unwrap();

        // Totality on a sampled prefix under a linear fuel schedule.
        let mut hits = BTreeSet::new();
        for t in 0..200u64 {
            match ev.eval_step(&k, &bu(t), 4000) {
                StepOutcome::Halted(v) => {
                    hits.insert(v);
                }
                StepOutcome::OutOfFuel => panic!("φ_k must be total at step {t}"),
            }
        }
        // The range covers an initial chunk of W_id = ℕ.
        assert!(hits.contains(&bu(0)));
        assert!(hits.contains(&bu(1)));
        assert!(hits.contains(&bu(2)));

        // Diverging W: only the witness may appear, and the witness must
        // itself be certified.
        let div = Descriptor::Native("diverge".into(), vec![]).index();
        assert!(range_enumerator(&ev, &div, &bu(0), 1000).is_err());
    }

    #[test]
    fn register_native_contract() {
        let reg = Registry::new();
        assert!(reg
            .register("custom", 0, 1, Arc::new(|_, _, x, _| StepOutcome::Halted(x + 2u32)))
            .is_ok());
        assert!(matches!(
            reg.register("custom", 0, 1, Arc::new(|_, _, x, _| StepOutcome::Halted(x.clone()))),
            Err(CoreError::DuplicateNative(_))
        ));
        let ev = Evaluator::new(Arc::new(reg));
        let c = Descriptor::Native("custom".into(), vec![]).index();
        assert_eq!(ev.eval_step(&c, &bu(3), 100), StepOutcome::Halted(bu(5)));
    }

    #[test]
    fn wrong_arity_diverges() {
        let ev = setup();
        let bad = Descriptor::Native("id".into(), vec![Descriptor::NatLit(bu(1))]).index();
        assert_eq!(ev.eval_step(&bad, &bu(3), 1000), StepOutcome::OutOfFuel);
    }
}
