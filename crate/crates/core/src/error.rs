use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{m} exceeds the supported cap of 2^16")]
    FieldTooLarge { p: u64, m: u32 },
    #[error("modulus {0} has the wrong degree or is not monic")]
    BadModulus(u64),
    #[error("modulus {0} is reducible")]
    ReducibleModulus(u64),
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("value {value} is not an element of a field of order {q}")]
    NotAnElement { value: u64, q: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("matrix is singular")]
    Singular,

    #[error("ground set size must be at least {min}, got {k}")]
    GroundSetTooSmall { k: usize, min: usize },
    #[error("block {block} contains element {element} outside 1..={k}")]
    ElementOutOfRange {
        block: usize,
        element: usize,
        k: usize,
    },
    #[error("block {block} is empty")]
    EmptyBlock { block: usize },
    #[error("block {block} repeats element {element}")]
    RepeatedElement { block: usize, element: usize },
    #[error("pair ({a}, {b}) occurs in blocks {first} and {second}")]
    RepeatedPair {
        a: usize,
        b: usize,
        first: usize,
        second: usize,
    },
    #[error("class {class} is not a partition: missing {missing:?}, duplicated {duplicated:?}")]
    NotAPartition {
        class: usize,
        missing: Vec<usize>,
        duplicated: Vec<usize>,
    },
    #[error("no parallel classes given")]
    NoClasses,
    #[error("difference matrix parameter out of range: {0}")]
    DmRange(String),
    #[error("rows {rows:?} repeat difference {difference} at columns {columns:?}")]
    DifferenceCollision {
        rows: (usize, usize),
        columns: (usize, usize),
        difference: u32,
    },
    #[error("full difference matrix misses group element {0}")]
    DifferenceCoverage(u32),
    #[error("malformed difference matrix: {0}")]
    MalformedDm(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("enumeration of {needed} messages exceeds the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("invalid code parameters: {0}")]
    CodeParameters(String),
    #[error("{erased} erasures exceed the tolerance of {limit}")]
    TooManyErasures { erased: usize, limit: usize },
    #[error("erasure position {0} outside the codeword")]
    ErasureOutOfRange(usize),
    #[error("locality report does not match the code: {0}")]
    ReportMismatch(String),
    #[error("no untouched repair group for symbol {0}")]
    NoRepairGroup(usize),

    #[error("locality parameters out of range: {0}")]
    LocalityParameters(String),
    #[error("minimum distance is required to classify optimality")]
    MissingDistance,

    #[error("packing leaves element {0} uncovered")]
    UncoveredElement(usize),
    #[error("resolvable packing ground set {packing} does not match code dimension {k}")]
    GroundSetMismatch { packing: usize, k: usize },
    #[error("{classes} classes need fewer than {checks} check columns")]
    TooManyClasses { classes: usize, checks: usize },
    #[error("input code is not MDS: {0}")]
    NotMds(String),
    #[error("pyramid construction needs exactly one class, got {0}")]
    NotSingleClass(usize),
    #[error("invalid column selection: {0}")]
    ColumnSelection(String),
    #[error("construction self-check failed: {0}")]
    SelfCheck(String),

    #[error("malformed document: {0}")]
    Document(String),
}
