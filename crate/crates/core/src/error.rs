use std::fmt;

use thiserror::Error;

/// Property of a density matrix that failed validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Property {
    Hermiticity,
    Trace,
    Positivity,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::Hermiticity => "hermiticity",
            Property::Trace => "trace",
            Property::Positivity => "positivity",
        })
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("invalid density matrix, {property} violated: {detail}")]
    InvalidState { property: Property, detail: String },

    #[error("{name} = {value} is outside [{min}, {max}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("not a valid POVM element: {0}")]
    InvalidPovm(String),

    #[error("invalid hidden-variable model: {0}")]
    InvalidModel(String),

    #[error("model form {found} cannot be used for {expected}")]
    WrongModelForm {
        expected: &'static str,
        found: &'static str,
    },

    #[error("criterion {criterion} cannot certify scenario {scenario}")]
    IncompatibleCriterion { criterion: String, scenario: String },

    #[error("criterion never fires on [0, 1] (margin at p = 1 is {margin_at_one:.3e})")]
    NeverFires { margin_at_one: f64 },

    #[error("criterion always fires on [0, 1] (margin at p = 0 is {margin_at_zero:.3e})")]
    AlwaysFires { margin_at_zero: f64 },

    #[error("criterion margin is not monotone in p; detection flips inside {}", format_intervals(.intervals))]
    NonMonotone { intervals: Vec<(f64, f64)> },

    #[error("tolerance {0} is below the minimum 1e-8")]
    ToleranceTooSmall(f64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn format_intervals(intervals: &[(f64, f64)]) -> String {
    intervals
        .iter()
        .map(|(a, b)| format!("[{a:.6}, {b:.6}]"))
        .collect::<Vec<_>>()
        .join(", ")
}

pub type Result<T> = std::result::Result<T, Error>;
