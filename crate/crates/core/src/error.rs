use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point ({x}, {y}, {z}) is not on the unit sphere (|x| = {norm})")]
    NotUnit { x: f64, y: f64, z: f64, norm: f64 },

    #[error("surface gradient is undefined at a pole (z = {z})")]
    PoleGradient { z: f64 },

    #[error("length mismatch: expected {expected} values, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("degree mismatch: expected N = {expected}, got N = {actual}")]
    DegreeMismatch { expected: usize, actual: usize },

    #[error("arithmetic overflow evaluating {what}")]
    Overflow { what: &'static str },

    #[error("quadrature rule is empty")]
    EmptyRule,

    #[error("invalid quadrature rule: {0}")]
    InvalidRule(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{name} = {value} is outside its domain: {reason}")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid solver configuration: {0}")]
    Config(String),

    #[error("non-finite coefficients after step {step}")]
    BlowUp { step: usize },
}
