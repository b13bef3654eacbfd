use thiserror::Error;

/// Errors raised by constructors and operations across the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("polynomial is empty or zero")]
    ZeroPolynomial,
    #[error("newton polygon requires a nonzero constant coefficient")]
    ZeroConstantTerm,
    #[error("invalid (phi,N)-module: {0}")]
    InvalidModule(String),
    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u64, u64),
    #[error("slope {slope} needs blocks of size {block}, which does not divide multiplicity {multiplicity}")]
    SlopeMultiplicity {
        slope: String,
        block: u64,
        multiplicity: u64,
    },
    #[error("slope {slope} has block size {block} exceeding total rank {rank}")]
    SlopeDenominator { slope: String, block: u64, rank: u64 },
    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),
    #[error("operation requires an explicit flag; weights-only Hodge data given")]
    FlagRequired,
    #[error("module is not acyclic")]
    NotAcyclic,
    #[error("subobject enumeration is not certified for this module")]
    Uncertified,
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("invalid sheaf: {0}")]
    InvalidSheaf(String),
    #[error("tensor product of two torsion sheaves is not supported")]
    TorsionTensor,
    #[error("invalid Banach-Colmez object: {0}")]
    InvalidObject(String),
    #[error("malformed exact sequence: {0}")]
    MalformedSequence(String),
    #[error("unsupported Ext input: {0}")]
    UnsupportedLabel(String),
    #[error("invalid synthetic cohomology: {0}")]
    InvalidCohomology(String),
    #[error("Mayer-Vietoris hypotheses violated: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Hypotheses(Vec<crate::cst::HypothesisViolation>),
}

impl Error {
    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "not-prime",
            Error::ParseRational(_) => "parse-rational",
            Error::DivisionByZero => "division-by-zero",
            Error::DimensionMismatch(_) => "dimension-mismatch",
            Error::NotSquare { .. } => "not-square",
            Error::Singular => "singular",
            Error::ZeroPolynomial => "zero-polynomial",
            Error::ZeroConstantTerm => "zero-constant-term",
            Error::InvalidModule(_) => "invalid-module",
            Error::PrimeMismatch(..) => "prime-mismatch",
            Error::SlopeMultiplicity { .. } => "slope-multiplicity",
            Error::SlopeDenominator { .. } => "slope-denominator",
            Error::InvalidFiltration(_) => "invalid-filtration",
            Error::FlagRequired => "flag-required",
            Error::NotAcyclic => "not-acyclic",
            Error::Uncertified => "uncertified",
            Error::Internal(_) => "internal",
            Error::InvalidSheaf(_) => "invalid-sheaf",
            Error::TorsionTensor => "torsion-tensor",
            Error::InvalidObject(_) => "invalid-object",
            Error::MalformedSequence(_) => "malformed-sequence",
            Error::UnsupportedLabel(_) => "unsupported-label",
            Error::InvalidCohomology(_) => "invalid-cohomology",
            Error::Hypotheses(_) => "hypotheses",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
