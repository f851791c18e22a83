use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("variable mismatch: {0}")]
    VariableMismatch(String),
    #[error("ambient ring mismatch: {0}")]
    AmbientMismatch(String),
    #[error("the zero ring is not allowed: relations generate the unit ideal")]
    ZeroRing,
    #[error("ideal is the unit ideal")]
    UnitIdeal,
    #[error("unsupported ideal class: {0}")]
    UnsupportedIdealClass(String),
    #[error("not a prime ideal: {0}")]
    NotPrime(String),
    #[error("module localizes to zero at {0}")]
    ZeroLocalization(String),
    #[error("map is not etale at {0:?}")]
    NotEtaleAt(Vec<String>),
    #[error("bad etale presentation: {0}")]
    BadPresentation(String),
    #[error("not a ring map: {0}")]
    NotRingMap(String),
    #[error("source element is a zerodivisor (annihilated by {0})")]
    SourceZerodivisor(String),
    #[error("source module is not reflexive")]
    SourceNotReflexive,
    #[error("module is not reflexive: {0}")]
    NotReflexive(String),
    #[error("module is not locally free of rank 1 at generic point {0}")]
    WrongGenericRank(String),
    #[error("fractional ideal is degenerate at generic point {0}")]
    Degenerate(String),
    #[error("embedded point {0}")]
    EmbeddedPoint(String),
    #[error("section does not generate the stalk at generic point {0}")]
    DegenerateSection(String),
    #[error("not invariant under group element {0}")]
    NotInvariant(String),
    #[error("group element {0} does not act by a ring automorphism")]
    NotAutomorphism(String),
    #[error("action violates the group table at ({0}, {1})")]
    TableViolation(String, String),
    #[error("cocycle identity fails at ({g}, {h}): {witness}")]
    CocycleFailure { g: String, h: String, witness: String },
    #[error("induced dual structure violates the cocycle identity: {0}")]
    DualCocycleFailure(String),
    #[error("module map is not well defined: {0}")]
    NotWellDefined(String),
    #[error("{0}")]
    Malformed(String),
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
