//! Function-free first-order logic over finite relational examples with
//! closed-world semantics.

mod example;
mod formula;
mod omega;
mod parser;
mod vocab;

pub use example::{Constant, GroundAtom, RelationalExample};
pub use formula::{evaluate, evaluate_theory, Formula, Term, Theory, Var};
pub use omega::{enumerate_omega, omega_size, OmegaUniverse, DEFAULT_OMEGA_CAP};
pub use parser::{parse_formula, parse_theory};
pub use vocab::Vocabulary;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LogicError {
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("predicate `{name}` has arity {expected}, used with {found} arguments")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("variable `{0}` is bound twice along one path")]
    ShadowedVariable(String),
    #[error("duplicate atom `{0}`")]
    DuplicateAtom(String),
    #[error("duplicate constant `{0}`")]
    DuplicateConstant(String),
    #[error("atom `{atom}` mentions `{constant}`, which is not in the domain")]
    ConstantOutsideDomain { atom: String, constant: String },
    #[error("constant `{0}` is not in the example's domain")]
    NotASubset(String),
    #[error("example text line {line}: {message}")]
    ExampleFormat { line: usize, message: String },
    #[error("enumeration of {size} elements exceeds the cap of {cap}")]
    CapExceeded { size: String, cap: u128 },
}
