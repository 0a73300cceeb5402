use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Error type shared by every module of the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid jet order {0}: a variable jet needs order >= 1")]
    InvalidOrder(usize),

    #[error("insufficient jet order: derivative {requested} requested of an order-{order} jet")]
    InsufficientOrder { requested: usize, order: usize },

    #[error("singular point: division by a series with zero constant term")]
    SingularDivision,

    #[error("domain error in {func}: argument {value}")]
    FnDomain { func: &'static str, value: f64 },

    #[error("lex error at offset {offset}: {msg}")]
    Lex { offset: usize, msg: String },

    #[error("parse error at offset {offset}: {msg}")]
    Parse { offset: usize, msg: String },

    #[error("unknown function `{name}` at offset {offset}")]
    UnknownFunction { name: String, offset: usize },

    #[error("unbound symbol `{0}` in expression")]
    UnboundSymbol(String),

    #[error("parameter {t} outside curve interval [{lo}, {hi}]")]
    OutOfInterval { t: f64, lo: f64, hi: f64 },

    #[error("bad sample grid: {0}")]
    SampleGrid(String),

    #[error("sampled curves provide derivatives up to order 4 only (order {requested} requested)")]
    SampledOrderLimit { requested: usize },

    #[error("coordinate {index} of curve evaluation failed: {source}")]
    Coordinate {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("degenerate curve at t = {t}: frame determinant {det:.3e} below tolerance")]
    Degenerate { t: f64, det: f64 },

    #[error("affine inflection at t = {t}: length density below tolerance")]
    AffineInflection { t: f64 },

    #[error("nonconvex graph at t = {t}: f'' = {second} <= 0")]
    NonconvexGraph { t: f64, second: f64 },

    #[error("equiaffine curvature vanishes inside the window")]
    ZeroEquiaffineCurvature,

    #[error("t = {t} is not an equiaffine length parameter (a = {a:.3e})")]
    NotEquiaffineParameter { t: f64, a: f64 },

    #[error("integrator failure at t = {t}: {msg}")]
    IntegratorFailure { t: f64, msg: String },

    #[error("initial frame is not invertible")]
    FrameNotInvertible,

    #[error("curvature profile mismatch: {0}")]
    ProfileMismatch(String),

    #[error("Abel solution reached a singular value at x = {x}: {msg}")]
    AbelSingular { x: f64, msg: String },

    #[error("root finding failed: {msg} (condition estimate {condition:.3e})")]
    RootFinding { msg: String, condition: f64 },

    #[error("internal cross-check failed: {0}")]
    CrossCheck(String),

    #[error("catalog inconsistency: {0}")]
    CatalogInconsistency(String),

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
