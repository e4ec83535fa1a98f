use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed code: {0}")]
    MalformedCode(String),

    #[error("invalid bit string: {0}")]
    ParseBits(String),

    #[error("width mismatch: expected {expected} bits, got {got}")]
    WidthMismatch { expected: usize, got: usize },

    #[error("line {line} violates its {role} role")]
    BadConstantLine { line: usize, role: &'static str },

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("bad wiring: {0}")]
    BadWiring(String),

    #[error("exhaustive domain of {width} bits exceeds the ceiling of {limit} bits")]
    DomainTooLarge { width: usize, limit: usize },

    #[error("invalid netlist: {0}")]
    InvalidNetlist(String),

    #[error("compiled circuit needs {needed} ancilla lines, budget is {budget}")]
    TooManyLines { needed: usize, budget: usize },

    #[error("compressed output of {coded} bits does not fit a block of {block} bits")]
    CompressorOverflow { coded: usize, block: usize },

    #[error("codec {codec} is not injective on the block domain: {detail}")]
    CodecNotInjective { codec: String, detail: String },

    #[error("generator output does not reproduce S")]
    GeneratorMismatch,

    #[error("unknown codec `{0}`")]
    UnknownCodec(String),

    #[error("weights are not integral: {0}")]
    NonIntegralWeights(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("circuit is not conservative")]
    NotConservative,

    #[error("width {width} is too small, need at least {min}")]
    WidthTooSmall { width: usize, min: usize },

    #[error("string of {len} bits is too short, need at least {min}")]
    StringTooShort { len: usize, min: usize },

    #[error("temperature must be positive, got {0} K")]
    NonPositiveTemperature(f64),
}

impl Error {
    /// Stable machine-readable name used in structured error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::MalformedCode(_) => "MalformedCode",
            Error::ParseBits(_) => "ParseBits",
            Error::WidthMismatch { .. } => "WidthMismatch",
            Error::BadConstantLine { .. } => "BadConstantLine",
            Error::InvalidGate(_) => "InvalidGate",
            Error::BadWiring(_) => "BadWiring",
            Error::DomainTooLarge { .. } => "DomainTooLarge",
            Error::InvalidNetlist(_) => "InvalidNetlist",
            Error::TooManyLines { .. } => "TooManyLines",
            Error::CompressorOverflow { .. } => "CompressorOverflow",
            Error::CodecNotInjective { .. } => "CodecNotInjective",
            Error::GeneratorMismatch => "GeneratorMismatch",
            Error::UnknownCodec(_) => "UnknownCodec",
            Error::NonIntegralWeights(_) => "NonIntegralWeights",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::NotConservative => "NotConservative",
            Error::WidthTooSmall { .. } => "WidthTooSmall",
            Error::StringTooShort { .. } => "StringTooShort",
            Error::NonPositiveTemperature(_) => "NonPositiveTemperature",
        }
    }
}
