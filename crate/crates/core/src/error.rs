// SPDX-License-Identifier: Apache-2.0
use thiserror::Error;

/// Errors reported by the automata toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet must contain at least one symbol")]
    EmptyAlphabet,
    #[error("duplicate alphabet symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("invalid alphabet symbol `{0}`")]
    InvalidSymbol(String),
    #[error("letter index {letter} out of range for an alphabet of size {size}")]
    LetterOutOfRange { letter: usize, size: usize },
    #[error("state {state} out of range (automaton has {count} states)")]
    StateOutOfRange { state: usize, count: usize },
    #[error("automaton has no initial state")]
    NoInitialState,
    #[error("automata do not share a common alphabet")]
    AlphabetMismatch,
    #[error("instance contains no automata")]
    EmptyInstance,
    #[error("automaton is not deterministic: {0}")]
    NotDeterministic(String),
    #[error("automaton is not partially ordered")]
    NotPartiallyOrdered,
    #[error("DFA is not minimal; minimize it first")]
    NotMinimal,
    #[error("{what} exceeded the cap of {cap}")]
    CapExceeded { what: &'static str, cap: usize },
    #[error("promise violated: {0}")]
    PromiseViolation(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
