use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands live in different fields: {left} vs {right}")]
    FieldMismatch { left: String, right: String },

    #[error("division by exact zero")]
    DivisionByZero,

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("denominator {0} is not invertible in the residue field")]
    NonInvertibleDenominator(String),

    #[error("invalid field descriptor: {0}")]
    InvalidField(String),

    #[error("point lies outside the convergence disc of the tail model: {0}")]
    OutsideConvergenceDisc(String),

    #[error("a rigorous tail bound was requested but the series carries no tail model")]
    NoTailModel,

    #[error("series is not flagged as a polynomial")]
    NotAPolynomial,

    #[error("linear coefficient is not a unit at tracked precision")]
    NonUnitLinearCoefficient,

    #[error("radius depends on an unknown coefficient tail")]
    UndeterminedTail,

    #[error("multiplier has valuation zero (indifferent fixed point)")]
    IndifferentMultiplier,

    #[error("bound check applies to the {expected} regime only")]
    WrongRegime { expected: &'static str },

    #[error("injectivity hypothesis cannot be decided beyond the known coefficients")]
    InsufficientTailInformation,

    #[error("input too large: {0}")]
    TooLarge(String),

    #[error("series has a coefficient of negative valuation at degree {0}")]
    NonIntegralCoefficients(usize),

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("schema error at `{path}`: {msg}")]
    Schema { path: String, msg: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable identifier used in CLI reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::FieldMismatch { .. } => "FieldMismatch",
            Error::DivisionByZero => "DivisionByZero",
            Error::PrecisionExhausted(_) => "PrecisionExhausted",
            Error::Parse { .. } => "ParseError",
            Error::NonInvertibleDenominator(_) => "NonInvertibleDenominator",
            Error::InvalidField(_) => "InvalidField",
            Error::OutsideConvergenceDisc(_) => "OutsideConvergenceDisc",
            Error::NoTailModel => "NoTailModel",
            Error::NotAPolynomial => "NotAPolynomial",
            Error::NonUnitLinearCoefficient => "NonUnitLinearCoefficient",
            Error::UndeterminedTail => "UndeterminedTail",
            Error::IndifferentMultiplier => "IndifferentMultiplier",
            Error::WrongRegime { .. } => "WrongRegime",
            Error::InsufficientTailInformation => "InsufficientTailInformation",
            Error::TooLarge(_) => "TooLarge",
            Error::NonIntegralCoefficients(_) => "NonIntegralCoefficients",
            Error::InvalidMap(_) => "InvalidMap",
            Error::Invariant(_) => "InvariantViolation",
            Error::Schema { .. } => "SchemaError",
            Error::Io(_) => "IoError",
        }
    }

    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }
}
