use thiserror::Error;

use crate::dominance::SearchStats;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("unknown value `{value}` for variable `{variable}`")]
    UnknownValue { variable: String, value: String },

    #[error("variable `{0}` assigned more than once")]
    DuplicateAssignment(String),

    #[error("missing {0}")]
    MissingVariable(String),

    #[error("parent context for `{variable}` has {got} values, expected {expected}")]
    ContextShape {
        variable: String,
        expected: usize,
        got: usize,
    },

    #[error("assignment covers {got} variables, net has {expected}")]
    AssignmentShape { expected: usize, got: usize },

    /// The net lacks a structural property the operation requires.
    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("unsupported for extended nets: {0}")]
    Unsupported(String),

    #[error("outcomes must be distinct")]
    EqualOutcomes,

    #[error("duplicate outcome at position {0}")]
    DuplicateOutcome(usize),

    #[error("oracle scale exceeded: {nodes} outcomes, cap {cap}")]
    ScaleExceeded { nodes: u128, cap: u64 },

    #[error("entailment undefined: the net is not satisfiable")]
    Unsatisfiable,

    #[error("search budget of {budget} nodes exhausted before an answer was found")]
    BudgetExhausted { budget: u64, stats: SearchStats },

    #[error("unknown operator `{0}`")]
    UnknownOperator(String),

    #[error("invalid generator parameters: {0}")]
    Generator(String),
}
