use thiserror::Error;

/// Errors surfaced by the workbench.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("ordinal out of range: {0}")]
    OrdinalRange(String),

    #[error("dialect violation: {0}")]
    Dialect(String),

    #[error("variable capture substituting for {var}")]
    Capture { var: String },

    #[error("assignment undefined on free variable {0}")]
    UnassignedVar(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("formula is not {index}-stratified")]
    NotStratified { index: u32 },

    #[error("duplicate stratifier index {0}")]
    DuplicateStratifierIndex(u32),

    #[error("duplicate native name {0:?}")]
    DuplicateNative(String),

    #[error("invalid family configuration: {0}")]
    InvalidFamily(String),

    #[error("schema supply is missing a needed instance: {0}")]
    MissingSchemaInstance(String),

    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),

    #[error("malformed notation certificate: {0}")]
    MalformedOCert(String),

    #[error("notation exceeds the session size cap: {0}")]
    NotationTooLarge(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
