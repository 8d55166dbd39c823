//! Error type shared by all stages.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty point set")]
    EmptyPointSet,
    #[error("dimension mismatch")]
    DimensionMismatch,
    #[error("role mismatch")]
    RoleMismatch,
    #[error("polar undefined")]
    PolarUndefined,
    #[error("polyhedron is unbounded")]
    Unbounded,
    #[error("input is not a valid nef-partition: {0}")]
    InvalidNefPartition(String),
    #[error("subdivision not central")]
    NotCentral,
    #[error("weight function: {0}")]
    Weight(String),
    #[error("origin not interior")]
    OriginNotInterior,
    #[error("not a lower-hull cell for these weights")]
    NotLowerHullCell,
    #[error("invalid input: {0}")]
    Input(String),
    /// A checkable claim failed; the payload is a human-readable certificate.
    #[error("claim falsified: {0}")]
    Falsified(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
