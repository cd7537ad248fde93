use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series does not terminate: no numerator parameter is a nonpositive integer")]
    NonTerminating,

    #[error("denominator parameter #{parameter} vanishes at term {term}, before the series terminates")]
    ZeroDenominator { parameter: usize, term: u64 },

    #[error("series is not balanced: a+b+c+1-d-e-f-n = {residual}")]
    Unbalanced { residual: String },

    #[error("expected {expected} parameters, got {got}")]
    Arity { expected: &'static str, got: usize },

    #[error("argument {name} is negative ({value})")]
    NegativeArgument { name: &'static str, value: String },

    #[error("{0}")]
    OutOfRange(String),

    #[error("degenerate weight: p1*p4 == p2*p3 makes 1-eta1-eta2 vanish")]
    DegenerateWeight,

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("zero factor in a denominator: {0}")]
    ZeroFactor(String),

    #[error("fixed-point root t equals alpha1; u is undefined")]
    SingularRoot,

    #[error("discriminant {0} is not a perfect square in the exact backend")]
    IrrationalDiscriminant(String),

    #[error("negative radicand in factor {factor}: {value}")]
    NegativeRadicand { factor: &'static str, value: String },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("cannot parse number {0:?}")]
    Number(String),
}
