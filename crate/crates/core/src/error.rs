use thiserror::Error;

/// Errors raised by the arithmetic and module constructions.
///
/// Every variant has a stable [`Error::name`] which the command-line
/// front end prints verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field size: {0}")]
    InvalidField(String),
    #[error("ramification mismatch: {0} vs {1}")]
    RamificationMismatch(u32, u32),
    #[error("division by a value indistinguishable from zero at precision {0}")]
    DivisionByZeroToPrecision(i64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not invertible: {0}")]
    NotInvertible(String),
    #[error("derivative of phi_t does not equal the image of t")]
    DerivativeMismatch,
    #[error("rank violation: {0}")]
    RankViolation(String),
    #[error("degenerate module: phi_t has no positive tau-degree term")]
    Degenerate,
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("no stabilisation up to degree bound {bound}")]
    Unstable { bound: u32 },
    #[error("kernel is not an F_q-subspace")]
    NotASubspace,
    #[error("kernel is not stable under phi_t")]
    NotStable,
    #[error("singular matrix")]
    SingularMatrix,
    #[error("gamma moves the point off the chart (last coordinate vanishes to precision)")]
    BoundaryPoint,
    #[error("point lies on the lattice")]
    OnLattice,
    #[error("series is zero to its precision; order undecidable")]
    ZeroToPrecision,
    #[error("first lattice is not a finite-index sublattice of the second")]
    NotASublattice,
    #[error("point carries no separation certificate")]
    UncertifiedPoint,
    #[error("enumerator does not support this shape: {0}")]
    EnumeratorUnsupported(String),
    #[error("finite quotient too large: {size} > {ceiling}")]
    QuotientTooLarge { size: u128, ceiling: u128 },
    #[error("invalid double-quotient representatives: {0}")]
    InvalidRepresentatives(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable identifier used in structured CLI output.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidField(_) => "InvalidField",
            Error::RamificationMismatch(..) => "RamificationMismatch",
            Error::DivisionByZeroToPrecision(_) => "DivisionByZeroToPrecision",
            Error::DivisionByZero => "DivisionByZero",
            Error::NotInvertible(_) => "NotInvertible",
            Error::DerivativeMismatch => "DerivativeMismatch",
            Error::RankViolation(_) => "RankViolation",
            Error::Degenerate => "Degenerate",
            Error::InsufficientPrecision(_) => "InsufficientPrecision",
            Error::Unstable { .. } => "Unstable",
            Error::NotASubspace => "NotASubspace",
            Error::NotStable => "NotStable",
            Error::SingularMatrix => "SingularMatrix",
            Error::BoundaryPoint => "BoundaryPoint",
            Error::OnLattice => "OnLattice",
            Error::ZeroToPrecision => "ZeroToPrecision",
            Error::NotASublattice => "NotASublattice",
            Error::UncertifiedPoint => "UncertifiedPoint",
            Error::EnumeratorUnsupported(_) => "EnumeratorUnsupported",
            Error::QuotientTooLarge { .. } => "QuotientTooLarge",
            Error::InvalidRepresentatives(_) => "InvalidRepresentatives",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::Parse(_) => "Parse",
        }
    }

    /// Precision and stabilisation failures, as opposed to bad input.
    pub fn is_precision_failure(&self) -> bool {
        matches!(
            self,
            Error::DivisionByZeroToPrecision(_)
                | Error::InsufficientPrecision(_)
                | Error::Unstable { .. }
                | Error::ZeroToPrecision
                | Error::BoundaryPoint
                | Error::UncertifiedPoint
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
