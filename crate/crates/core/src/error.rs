use thiserror::Error;

/// Errors raised by the algebra engine.
///
/// Several variants (`NotDivisible`, `NotCentral`) are sentinels: they can
/// only fire when an internal convention is broken, and the test-suite
/// treats them as bugs.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("conductor mismatch: {0} vs {1}")]
    ConductorMismatch(u32, u32),

    #[error("root of unity of order {order} is not in Q(zeta_{conductor})")]
    RootNotInField { order: u32, conductor: u32 },

    #[error("group order exceeds cap {cap}")]
    CapExceeded { cap: usize },

    #[error("matrix is not unitary for the standard Hermitian form: {0}")]
    NotUnitary(String),

    #[error("matrix is not invertible: {0}")]
    NotInvertible(String),

    #[error("Molien series does not factor as a product of 1/(1 - t^d) up to degree {max_degree}")]
    FactorizationFailed { max_degree: usize },

    #[error("polynomial is not divisible by the linear form of hyperplane {hyperplane}")]
    NotDivisible { hyperplane: usize },

    #[error("operation requires a Coxeter group (all n_H = 2)")]
    NotCoxeter,

    #[error("operator does not commute with the group action")]
    NotEquivariant,

    #[error("polynomial is not W-invariant")]
    NotInvariant,

    #[error("group algebra element is not central")]
    NotCentral,

    #[error("representation is not irreducible: z(k) does not act by a scalar")]
    NotScalar,

    #[error("parameter is singular: eigenvalue {eigenvalue} of z(k) has -c in N")]
    SingularParameter { eigenvalue: String },

    #[error("inconclusive up to degree {max_degree}: {reason}")]
    Inconclusive { max_degree: usize, reason: String },

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("invalid multiplicity: {0}")]
    InvalidMultiplicity(String),

    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
