use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse classification used by the command-line front end to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// The answer cannot be certified at the requested precision or truncation.
    Precision,
    /// A standing hypothesis (torsion certificate, exactness, assumed
    /// hypothesis) failed or was not asserted.
    Hypothesis,
    /// Malformed or out-of-domain input.
    Input,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("precision mismatch: {0}")]
    PrecisionMismatch(String),

    #[error("not a unit: {0}")]
    NotAUnit(String),

    #[error("series is indistinguishable from zero at p-adic precision {precision}")]
    IndistinguishableFromZero { precision: u32 },

    #[error("truncation too small: {0}")]
    TruncationTooSmall(String),

    #[error("module is not certified torsion at precision: {0}")]
    NotTorsionAtPrecision(String),

    #[error("precision insufficient: {0}")]
    PrecisionInsufficient(String),

    #[error("homology characteristic elements change under truncation: {0}")]
    TruncationNotStable(String),

    #[error("alternating product is not integral at precision: {0}")]
    NonIntegralAkashi(String),

    #[error("sequence is not exact: {0}")]
    NotExact(String),

    #[error("bad reduction at {ell}: the reduced curve is singular")]
    BadReduction { ell: u64 },

    #[error("prime {ell} exceeds the enumeration bound {bound}")]
    PrimeTooLarge { ell: u64, bound: u64 },

    #[error("place above {ell} divides p")]
    PlaceDividesP { ell: u64 },

    #[error("valuation reaches the precision cap {precision}")]
    ValuationAtPrecisionCap { precision: u32 },

    #[error("enumeration size bound exceeded: {0}")]
    SizeBound(String),

    #[error("hypothesis not asserted: {0}")]
    MissingAssumption(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        use Error::*;
        match self {
            PrecisionMismatch(_)
            | IndistinguishableFromZero { .. }
            | TruncationTooSmall(_)
            | PrecisionInsufficient(_)
            | TruncationNotStable(_)
            | NonIntegralAkashi(_)
            | ValuationAtPrecisionCap { .. } => ErrorClass::Precision,
            NotTorsionAtPrecision(_) | NotExact(_) | MissingAssumption(_) => ErrorClass::Hypothesis,
            NotAUnit(_)
            | BadReduction { .. }
            | PrimeTooLarge { .. }
            | PlaceDividesP { .. }
            | SizeBound(_)
            | InvalidInput(_) => ErrorClass::Input,
        }
    }

    pub(crate) fn mismatch(what: impl Into<String>) -> Self {
        Error::PrecisionMismatch(what.into())
    }

    pub fn invalid(what: impl Into<String>) -> Self {
        Error::InvalidInput(what.into())
    }
}
