use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("containment violated: {0}")]
    ContainmentViolated(String),
    #[error("not a homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("matrix is not unimodular: {0}")]
    NotUnimodular(String),
    #[error("not a group law: {0}")]
    NotAGroup(String),
    #[error("subgroup is not invariant under the component group action")]
    NonInvariant,
    #[error("torus subgroup context mismatch: {0} vs {1}")]
    ContextMismatch(String, String),
    #[error("cohomological degree {0} out of supported range 0..=3")]
    DegreeOutOfRange(usize),
    #[error("map is not equivariant")]
    NotEquivariant,
    #[error("desk-scale cap exceeded: {0}")]
    CapExceeded(String),
    #[error("enumeration request is unbounded: {0}")]
    Unbounded(String),
    #[error("subgroup does not support the extension class")]
    Unsupported,
    #[error("family is not eventually monotone: {0}")]
    NonMonotone(String),
    #[error("catalog limit structure is not closed: {0}")]
    LimitNotClosed(String),
    #[error("classification undecided: {0}")]
    Undecided(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
