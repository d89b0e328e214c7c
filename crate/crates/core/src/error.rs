use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    CompositeCharacteristic(u32),
    #[error("field order {p}^{t} is outside the supported range (q <= 65536)")]
    UnsupportedOrder { p: u32, t: u32 },
    #[error("modulus is not an irreducible polynomial of degree {degree}")]
    ReducibleModulus { degree: u32 },
    #[error("automorphism index j={j} is out of range for extension degree t={t}")]
    BadAutomorphism { j: u32, t: u32 },
    #[error("operation requires {0}")]
    Configuration(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is singular")]
    Singular,
    #[error("zero vector where a nonzero one is required")]
    ZeroInput,
    #[error("size cap exceeded: {what} = {size} > {cap}")]
    SizeCap { what: &'static str, size: u128, cap: u128 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("search exhausted after {attempts} attempts (seed {seed})")]
    SearchExhausted { attempts: u64, seed: u64 },
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}

impl Error {
    /// Stable machine-readable tag, used in JSON error reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::CompositeCharacteristic(_) => "composite_characteristic",
            Error::UnsupportedOrder { .. } => "unsupported_order",
            Error::ReducibleModulus { .. } => "reducible_modulus",
            Error::BadAutomorphism { .. } => "bad_automorphism",
            Error::Configuration(_) => "configuration",
            Error::Shape(_) => "shape",
            Error::Singular => "singular",
            Error::ZeroInput => "zero_input",
            Error::SizeCap { .. } => "size_cap",
            Error::Parse(_) => "parse",
            Error::SearchExhausted { .. } => "search_exhausted",
            Error::Consistency(_) => "consistency",
        }
    }
}
