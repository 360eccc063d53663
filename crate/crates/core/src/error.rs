use thiserror::Error;

/// Errors raised by the algebra and the verification routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("bracket inverse [0]^-1 requested")]
    ZeroBracket,
    #[error("alpha is not defined on an expression containing q^-1")]
    NotDefined,
    #[error("not a unit: {0}")]
    NotAUnit(String),
    #[error("operator is not invertible: {0}")]
    NotInvertible(String),
    #[error("empty window [{lo}..{hi}]")]
    EmptyWindow { lo: i32, hi: i32 },
    #[error("degree {degree} is outside the known window [{lo}..{hi}]")]
    WindowMiss { degree: i32, lo: i32, hi: i32 },
    #[error("incompatible operators: {0}")]
    Incompatible(String),
    #[error("depth {depth} is too small for index {needed}")]
    DepthExhausted { depth: usize, needed: usize },
    #[error("no action given for generator {0}")]
    MissingGenerator(String),
    #[error("expression is not regular in eps: {0}")]
    NotRegular(String),
    #[error("uncancelled t^-1 term: {0}")]
    TPoleDetected(String),
    #[error("constraint solve failed: {0}")]
    SolveFailed(String),
    #[error("check failed: {0}")]
    CheckFailed(Mismatch),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

/// First offending coefficient of a failed identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub check: String,
    /// Λ-degree, when the identity is between operators.
    pub degree: Option<i32>,
    pub eps_degree: Option<i32>,
    pub monomial: String,
    pub detail: String,
}

impl std::fmt::Display for Mismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.check)?;
        if let Some(d) = self.degree {
            write!(f, " at L^{d}")?;
        }
        if let Some(e) = self.eps_degree {
            write!(f, ", eps^{e}")?;
        }
        if !self.monomial.is_empty() {
            write!(f, ", monomial {}", self.monomial)?;
        }
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}
