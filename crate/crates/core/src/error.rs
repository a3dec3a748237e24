use thiserror::Error;

use crate::matrix_power::CaseTag;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("result would need about {estimate} decimal digits, budget is {budget}")]
    DigitBudgetExceeded { estimate: u64, budget: u64 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("radicand {0} is the square of a rational")]
    SquareRadicand(String),

    #[error("operands live in different quadratic extensions")]
    RadicandMismatch,

    #[error("operation requires case {expected}, parameters are {found}")]
    CaseMismatch { expected: CaseTag, found: CaseTag },

    #[error("degenerate parameters: a = b = 0 or c = d = 0")]
    DegenerateParameters,

    #[error("solution is eventually trivial: u_n or v_n vanishes at n = {index}")]
    TrivialSolutionEncountered { index: u64 },

    #[error("no zero found within horizon {horizon} and none could be ruled out")]
    UnknownWithinHorizon { horizon: u64 },

    #[error("invalid rational literal {0:?}")]
    ParseRational(String),

    #[error("coefficient sequence entry {0} is zero")]
    ZeroCoefficient(usize),

    #[error("requested {requested} terms but the coefficient sequence has {available}")]
    SequenceTooShort { requested: u64, available: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
