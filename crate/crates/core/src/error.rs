use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("series inverse needs a nonzero constant term")]
    NonUnitConstantTerm,
    #[error("cannot parse scalar {0:?}")]
    ParseScalar(String),

    #[error("unknown group label {0:?}")]
    UnknownLabel(String),
    #[error("unsupported rank {rank} for family {family}")]
    UnsupportedRank { family: char, rank: usize },
    #[error("invalid Cartan matrix: {0}")]
    InvalidCartan(String),
    #[error("Coxeter relation violated for generators ({i}, {j}): expected order {order}")]
    RelationViolation { i: usize, j: usize, order: u32 },
    #[error("Cartan matrix is singular")]
    SingularCartan,
    #[error("element budget exceeded: group has more than {budget} elements")]
    BudgetExceeded { budget: u64 },
    #[error("stabilizer chain inconsistent: {0}")]
    ChainInconsistent(String),

    #[error("series is not the Poincare series of a free algebra with {rank} generators")]
    NotAFreeAlgebraShape { rank: usize },
    #[error("covariant series times the degree product does not terminate: {0}")]
    NonPolynomialQuotient(String),

    #[error("no candidate sets match the numerator")]
    NoCandidateSets,
    #[error("point is not regular: Jacobian determinant vanishes")]
    PointNotRegular,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("input report is not certified: {0}")]
    InputNotCertified(String),

    #[error("polynomial expansion too large ({terms} monomials)")]
    ExpansionTooLarge { terms: u128 },
    #[error("variable block {index} out of range (have {blocks})")]
    BlockIndexOutOfRange { index: usize, blocks: usize },

    #[error("cache schema mismatch: found {found}, expected {expected}")]
    SchemaMismatch { found: u32, expected: u32 },
    #[error("cache Cartan hash mismatch for {label}")]
    HashMismatch { label: String },
    #[error("corrupt cache payload: {0}")]
    CorruptPayload(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
