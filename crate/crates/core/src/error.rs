use thiserror::Error;

/// Errors raised by the series kernel and the verifiers built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("series is not invertible (leading coefficient is zero)")]
    NotInvertible,

    #[error("U_p is only defined on unramified series (ramification {0})")]
    Ramified(u32),

    #[error("unsupported prime {0}")]
    UnsupportedPrime(u32),

    #[error("prime {0} is exploratory only; no congruence constants are defined for it")]
    ExploratoryPrime(u32),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("not a phi-polynomial of degree <= {max_degree}: residual coefficient at q^{exponent} is nonzero")]
    NotPhiPolynomial { max_degree: usize, exponent: i64 },

    #[error("not a psi-polynomial plus constant of degree <= {max_degree}: residual coefficient at q^{exponent} is nonzero")]
    NotPsiPolynomial { max_degree: usize, exponent: i64 },

    #[error("expected integral coefficients: {0}")]
    NonIntegral(String),
}

pub type Result<T> = std::result::Result<T, Error>;
