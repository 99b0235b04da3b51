use thiserror::Error;

use crate::field::Level;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrimeP(u32),
    #[error("modulus for the {level} level is reducible")]
    ReducibleModulus { level: &'static str },
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("modulus for the {level} level is not monic")]
    NotMonic { level: &'static str },
    #[error("field of order {0} is too large for dense tables")]
    FieldTooLarge(u64),

    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("level mismatch: expected {expected:?}, got {got:?}")]
    LevelMismatch { expected: Level, got: Level },
    #[error("code {code} out of range for {level:?} level of order {order}")]
    CodeOutOfRange { level: Level, code: u32, order: u32 },
    #[error("{m} does not divide the extension degree {degree}")]
    NonDivisorM { m: u32, degree: u32 },
    #[error("element {0} does not lie in the requested subfield")]
    NotInSubfield(u32),

    #[error("map is not a permutation (collision at {0} and {1})")]
    NotAPermutation(u32, u32),
    #[error("additive polynomial is not bijective")]
    NotBijective,
    #[error("map is not linear over the base field")]
    NotLinear,
    #[error("duplicate abscissa {0}")]
    DuplicateAbscissa(u32),
    #[error("table has length {got}, expected {expected}")]
    TableLength { expected: usize, got: usize },

    #[error("gamma must be nonzero")]
    ZeroGamma,
    #[error("certificates do not share f and A")]
    IncompatibleCerts,
    #[error("alpha = {0} is a (p^s - 1)-th power")]
    AlphaIsPower(u32),
    #[error("s = {s} outside 1..={max}")]
    BadS { s: u32, max: u32 },

    #[error("translator certificate does not verify")]
    UnverifiedCert,
    #[error("translator system does not verify: {0}")]
    UnverifiedSystem(String),
    #[error("L is not a permutation")]
    LNotPermutation,
    #[error("characteristic must be 2")]
    NotChar2,
    #[error("characteristic must be odd")]
    EvenCharacteristic,
    #[error("b must be nonzero")]
    ZeroB,
    #[error("g is not a permutation of the base field")]
    GNotPermutation,
    #[error("h_{0} is not a permutation of the base field")]
    HNotPermutation(usize),
    #[error("gammas are linearly dependent over the base field")]
    DependentGammas,
    #[error("Ker L and Im L intersect nontrivially")]
    KernelImageOverlap,
    #[error("gammas do not form a basis of Ker L")]
    NotKernelBasis,
    #[error("gamma + gamma^q is nonzero")]
    GammaTraceNonzero,
    #[error("t = {t} exceeds k = {k}")]
    BadT { t: u32, k: u32 },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("domain size {0} is not a power of two")]
    BadDomainSize(usize),
    #[error("Walsh spectrum has not been computed")]
    SpectrumMissing,

    #[error("parse error at {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("field order {required} exceeds cap {cap}")]
    CapExceeded { required: u64, cap: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
