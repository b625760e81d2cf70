use alloc::string::String;

/// Errors raised by the scalar expression layer.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExprError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("exp argument is not a polynomial: {0}")]
    ExpNotPolynomial(String),
    #[error("sqrt argument is not a positive rational: {0}")]
    SqrtNotPositiveRational(String),
    #[error("division by the zero expression")]
    DivisionByZero,
    #[error("denominator vanishes at the evaluation point")]
    Pole,
    #[error("symbol `{0}` is not bound to a value")]
    Unbound(String),
    #[error("imaginary unit appears in a denominator")]
    ComplexDenominator,
}

/// Errors raised by the geometric layers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("J*J is not -id: entry ({row},{col}) differs by {residual}")]
    NotAlmostComplex { row: usize, col: usize, residual: String },
    #[error("frame matrix is singular")]
    SingularFrame,
    #[error("torsion space has dimension {0}, expected 2")]
    TorsionDimension(usize),
    #[error("torsion bundle is degenerate at the analysis point")]
    Degenerate,
    #[error("tau map is outside the expected +/-lambda form: {0}")]
    TauSpectrum(String),
    #[error("no positive eigenvalue for the distinguished direction: {0}")]
    NoDistinguishedField(String),
    #[error("structure function c[{i}{j}]^{k} is not constant: {coefficient}")]
    NotLocallyHomogeneous { i: usize, j: usize, k: usize, coefficient: String },
    #[error("adapted frame is only known numerically at the point; exact frame fields unavailable")]
    InexactFrame,
    #[error("structure constants violate {0}")]
    InvalidStructureConstants(String),
    #[error("parameter constraint {0} != 0 is violated")]
    ConstraintViolated(String),
    #[error("vectors are linearly dependent")]
    Dependent,
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
