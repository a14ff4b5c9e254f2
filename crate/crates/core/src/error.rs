use std::fmt;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("base {0} is unsupported (digits are stored in one byte, so b must be below 256)")]
    BaseTooLarge(u32),
    #[error("operands live over different fields (F_{left} vs F_{right})")]
    BaseMismatch { left: u32, right: u32 },
    #[error("digit {digit} is not an element of F_{base}")]
    InvalidDigit { digit: u32, base: u32 },
    #[error("division by the zero polynomial")]
    ZeroModulus,
    #[error("irreducibility is undefined for constant polynomials")]
    ConstantPolynomial,
    #[error("degree condition violated: {0}")]
    Degree(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// The instance is well-formed but too large to process exhaustively.
    #[error("refused: {0}")]
    TooLarge(String),
    #[error("direction numbers cover dimensions up to {available}, but {requested} were requested")]
    MissingDimension { requested: usize, available: usize },
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
    #[error("malformed direction-number data at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("integrand returned {value} at {}", Coords(.point))]
    NonFiniteIntegrand { point: Vec<f64>, value: f64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("slope fit refused: {0}")]
    FitRefused(String),
}

struct Coords<'a>(&'a [f64]);

impl fmt::Display for Coords<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
