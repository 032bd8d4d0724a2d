use thiserror::Error;

/// Errors surfaced by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported: {0}")]
    Capability(String),

    #[error("resource limit: {what} (partial result: {partial})")]
    Resource { what: String, partial: bool },

    #[error("insufficient precision: {0}")]
    Precision(String),

    #[error("invalid certificate: {reason} (worst offender at t = {location}, value {value:e})")]
    InvalidCertificate {
        reason: String,
        location: f64,
        value: f64,
    },

    #[error("invalid auxiliary function: {reason} (at r = {location}, value {value:e})")]
    InvalidFunction {
        reason: String,
        location: f64,
        value: f64,
    },

    #[error("linear program: {0}")]
    Lp(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown name: {0}")]
    UnknownName(String),
}

pub type Result<T> = std::result::Result<T, Error>;
