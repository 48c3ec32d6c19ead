use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("minimal polynomial is not monic")]
    NotMonic,
    #[error("minimal polynomial is reducible: {0}")]
    Reducible(String),
    #[error("minimal polynomial has degree zero")]
    DegreeZero,
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("class number must be positive")]
    BadClassNumber,
    #[error("Z[theta] is not maximal at p = {0}")]
    DedekindFailure(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("element is not integral")]
    NotIntegral,
    #[error("zero divisor")]
    ZeroDivisor,
    #[error("zero element")]
    ZeroElement,
    #[error("root isolation failed at {0} bits")]
    PrecisionExhausted(u32),
    #[error("search cap too small: {0}")]
    CapTooSmall(String),
    #[error("curve is singular")]
    SingularCurve,
    #[error("point is not on the curve")]
    PointNotOnCurve,
    #[error("fewer than three usable good primes below the cap")]
    InsufficientGoodPrimes,
    #[error("stability multiplier post-check failed: {0}")]
    StabilityNotFound(String),
    #[error("scan cap too small: {0}")]
    ScanCapTooSmall(String),
    #[error("point at infinity")]
    PointAtInfinity,
    #[error("order search failed: {0}")]
    OrderSearchFailed(String),
    #[error("torsion degeneracy: {0}")]
    TorsionDegenerate(String),
    #[error("{0} does not divide {1}")]
    NotDivisible(i64, i64),
    #[error("rank assertion missing for {0}")]
    RankAssertionMissing(String),
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("fields are not linearly disjoint: {0}")]
    NotLinearlyDisjoint(String),
    #[error("xi = 0 is handled separately")]
    ZeroXi,
    #[error("factorial of degree {0} is beyond the supported range")]
    FactorialOverflow(usize),
    #[error("lemma violation: {0}")]
    LemmaViolation(String),
    #[error("config: {0}")]
    ConfigParse(String),
    #[error("unknown name: {0}")]
    Unknown(String),
}

pub type Result<T> = std::result::Result<T, Error>;
