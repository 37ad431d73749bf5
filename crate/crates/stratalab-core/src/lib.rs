//! Workbench for building, transforming and desk-scale-verifying families of
//! self-referential r.e. theories in operator-extended arithmetic.
//!
//! The crate is organized around seven subsystems:
//!
//! * [`formula`] — syntax of `L_PA(I)`, `L_PA(𝓘)` and the `O`-extension:
//!   terms, formulas, substitution, alpha-equivalence, Gödel numbering.
//! * [`ordinal`] — Cantor-normal-form ordinals below `ε₀·ω`, the `≤₁`
//!   fragment, coverings and the finite pattern-collapse search.
//! * [`strat`] — superscript analysis, `i`-stratified checks, ordinal maps
//!   on formulas, erasure, validity lifting, stratifiers, theory cuts.
//! * [`entail`] — bounded entailment by reduction to first-order logic,
//!   tableau proof search, checkable certificates and the certificate
//!   transformers (collapse, internalization, box-congruence).
//! * [`rec`] — a small computability substrate: descriptors, indices,
//!   budgeted evaluation, S-m-n and Recursion-Theorem fixed points.
//! * [`theory`] — building-block schema streams, `Pr_i`-closure, the two
//!   fixed-point family constructions, bounded model checking and the
//!   `F_U` arithmetic translation.
//! * [`kleene`] — the Kleene-`O` variant: certified notations, basic `O`
//!   axioms, theory norms, ordinal descent and well-foundedness probing.

pub mod entail;
pub mod enumerate;
pub mod error;
pub mod tableau;
pub mod fol;
pub mod strat;
pub mod formula;
pub mod kleene;
pub mod ordinal;
pub mod rec;
pub mod session;
pub mod theory;

pub use error::CoreError;
pub use session::Session;
