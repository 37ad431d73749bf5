//! Syntax of `L_PA(I)`, `L_PA(𝓘)` and the `O`-extension `L^O_PA(I)`:
//! abstract syntax, concrete syntax, substitution and Gödel numbering.

mod ast;
mod godel;
mod parse;
mod print;

pub use ast::{
    check_dialect, fresh_var, is_plain, Assignment, Dialect, Formula, OperatorId, Sentence, Term,
    Var,
};
pub use godel::{godel, godel_of_bytes, pair, triple, ungodel, ungodel_bytes, unpair, untriple};
pub use parse::{parse_formula, parse_sentence, parse_term};
pub use print::{print_formula, print_len, print_term};
