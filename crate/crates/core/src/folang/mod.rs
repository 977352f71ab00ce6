//! First-order formulas over `{N, =}`: syntax, depth, evaluation and builders.
//!
//! Grammar (ASCII):
//!
//! ```text
//! formula := ("exists" | "forall") var formula | impl
//! impl    := or ("->" impl)?
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "!" unary | "(" formula ")" | atom | quantified formula
//! atom    := "N(" var ("," var)* ")" | var "=" var | var "!=" var | "true" | "false"
//! ```
//!
//! A quantifier's scope extends as far right as possible.

mod ast;
mod build;
mod eval;
mod parser;
mod random;

pub use ast::Formula;
pub use build::{
    build_cycle_pair_property, build_dist_at_most, build_dist_exact, build_dist_pair,
    build_double_path_property, check_cycle_params, FormulaBuilder,
};
pub use eval::{evaluate, holds, Assignment, ModelChecker};
pub use parser::{parse, parse_with_arity};
pub use random::{random_formula, RandomFormulaConfig};
