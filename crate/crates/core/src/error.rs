//! Error types shared across the library.

use thiserror::Error;

/// Everything that can go wrong while building or analysing systems.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("duplicate letter `{0}`")]
    DuplicateLetter(String),
    #[error("independence pair ({0},{0}) is reflexive")]
    ReflexivePair(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("action table defines `{state}`·`{letter}` more than once")]
    DuplicateAction { state: String, letter: String },
    #[error("operands live over different alphabets")]
    AlphabetMismatch,
    #[error("independence relation is not a subset of the target relation")]
    NotIndependenceSubset,
    #[error("trace is not a left divisor of the target")]
    NotAPrefix,
    #[error("letters of `{0}` are not pairwise independent")]
    NotAClique(String),
    #[error("clique sequence violates normality at position {0}")]
    NotNormal(usize),
    #[error("cycle of an eventually periodic trace must be nonempty")]
    EmptyCycle,
    #[error(
        "action is not commutation-consistent at state `{state}`: \
         ({a},{b}) independent but `{state}`·{a}{b} = {left} while `{state}`·{b}{a} = {right}"
    )]
    CommutationViolation {
        state: String,
        a: String,
        b: String,
        left: String,
        right: String,
    },
    #[error("valuation is invalid: {0:?}")]
    InvalidValuation(Vec<ValuationViolation>),
    #[error("valuation is not probabilistic at state `{state}`, clique `{clique}` (value {value})")]
    NotProbabilistic {
        state: String,
        clique: String,
        value: String,
    },
    #[error("system is not deterministic: letters {a},{b} conflict at state `{state}`")]
    NotDeterministic { state: String, a: String, b: String },
    #[error("chain is trapped in dead node ({state},{clique}) with no outgoing mass")]
    DeadNode { state: String, clique: String },
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("polynomial vanishes at 0; smallest-root search requires p(0) != 0")]
    RootAtZero,
    #[error("cannot parse rational `{0}`")]
    BadRational(String),
    #[error("cannot parse trace text `{0}`")]
    BadTraceText(String),
    #[error("duplicate transition `{0}`")]
    DuplicateTransition(String),
    #[error("unknown place `{0}`")]
    UnknownPlace(String),
    #[error("duplicate place `{0}`")]
    DuplicatePlace(String),
    #[error("net is not 1-safe: firing `{transition}` from marking {marking} doubles a token")]
    UnsafeNet { marking: String, transition: String },
    #[error("invalid input: {0}")]
    Input(String),
    #[error("json: {0}")]
    Json(String),
}

/// A single violated condition found while validating a valuation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValuationViolation {
    Negative {
        state: String,
        letter: String,
        value: String,
    },
    WeightOnDisabled {
        state: String,
        letter: String,
        value: String,
    },
    /// f_α(a)·f_{α·a}(b) != f_α(b)·f_{α·b}(a) for an independent pair (a,b).
    CommutationInconsistency {
        state: String,
        a: String,
        b: String,
        lhs: String,
        rhs: String,
    },
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
