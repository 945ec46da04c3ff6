use thiserror::Error;

/// Everything that can go wrong in this crate.
///
/// Mathematical failures (a non-unit that should have been inverted, a
/// denominator that does not divide) are distinguished from I/O and parse
/// failures so the command line front end can map them to different exit
/// codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("element is not a unit")]
    NonUnit,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("outside the convergence domain: {0}")]
    DomainError(String),
    #[error("operands live in different contexts")]
    ContextMismatch,
    #[error("not determined at the available precision: {0}")]
    Indeterminate(String),
    #[error("not divisible for character {chi:?}: {reason}")]
    NotDivisible { chi: Vec<u64>, reason: String },
    #[error("degenerate denominator: {0}")]
    DegenerateDenominator(String),
    #[error("map is not a group homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("map is not surjective")]
    NotSurjective,
    #[error("zero divisor in presentation")]
    ZeroDivisor,
    #[error("module is not torsion (determinant vanishes to precision)")]
    NotTorsion,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("unknown auxiliary prime {0}")]
    UnknownPrime(String),
    #[error("ideal is not squarefree: {0}")]
    NotSquarefree(String),
    #[error("local datum undefined: {0}")]
    UndefinedDatum(String),
    #[error("result is not integral: {0}")]
    NonIntegral(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Short machine-readable tag used in JSON error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonUnit => "NonUnit",
            Error::PrecisionExhausted(_) => "PrecisionExhausted",
            Error::DomainError(_) => "DomainError",
            Error::ContextMismatch => "ContextMismatch",
            Error::Indeterminate(_) => "Indeterminate",
            Error::NotDivisible { .. } => "NotDivisible",
            Error::DegenerateDenominator(_) => "DegenerateDenominator",
            Error::NotAHomomorphism(_) => "NotAHomomorphism",
            Error::NotSurjective => "NotSurjective",
            Error::ZeroDivisor => "ZeroDivisor",
            Error::NotTorsion => "NotTorsion",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::UnknownPrime(_) => "UnknownPrime",
            Error::NotSquarefree(_) => "NotSquarefree",
            Error::UndefinedDatum(_) => "UndefinedDatum",
            Error::NonIntegral(_) => "NonIntegral",
            Error::Parse(_) => "Parse",
            Error::Io(_) => "Io",
        }
    }

    /// True for input problems (bad files, bad syntax) as opposed to
    /// mathematical obstructions.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Parse(_) | Error::Io(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
