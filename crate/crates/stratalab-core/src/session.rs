//! Session context: the native registry and evaluator, the table of
//! certified `O`-notations, and a supply of fresh short native names
//! (descent registers closure natives whose serialized descriptors must
//! stay tiny so `3·5^e` remains materializable).

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, RwLock};

use num_bigint::BigUint;

use crate::kleene::OCert;
use crate::rec::{Evaluator, Registry};

pub struct Session {
    registry: Arc<Registry>,
    evaluator: Evaluator,
    pub(crate) ocerts: RwLock<BTreeMap<BigUint, OCert>>,
    short_names: Mutex<u32>,
    /// Bit cap for materializing notation values such as `3·5^e`.
    pub notation_bit_cap: u64,
}

impl Session {
    pub fn new() -> Arc<Session> {
        let registry = Arc::new(Registry::new());
        let evaluator = Evaluator::new(Arc::clone(&registry));
        Arc::new(Session {
            registry,
            evaluator,
            ocerts: RwLock::new(BTreeMap::new()),
            short_names: Mutex::new(0),
            notation_bit_cap: 64_000_000,
        })
    }

    pub fn registry(&self) -> &Arc<Registry> {
        &self.registry
    }

    pub fn evaluator(&self) -> &Evaluator {
        &self.evaluator
    }

    /// Fresh base-26 name ("a", "b", …, "z", "aa", …) unused in the
    /// registry. One-byte names keep closure-native indices below 2^26.
    pub fn fresh_short_name(&self) -> String {
        let mut counter = self.short_names.lock().expect("name counter");
        loop {
            let mut k = *counter;
            *counter += 1;
            let mut name = String::new();
            loop {
                name.push((b'a' + (k % 26) as u8) as char);
                k /= 26;
                if k == 0 {
                    break;
                }
                k -= 1;
            }
            if !self.registry.is_registered(&name) {
                return name;
            }
        }
    }
}
