use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid sequence at index {index}: {msg}")]
    InvalidSequence { index: usize, msg: String },
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("cutoff insufficient: t = {t} reaches the enumeration cutoff (t_J = {t_cut}); raise j_cut")]
    CutoffInsufficient { t: f64, t_cut: f64 },
    #[error("precision error: {0}; raise precision_bits")]
    Precision(String),
    #[error("identity inapplicable: {0}")]
    IdentityInapplicable(String),
    #[error("raise K_eval: series not resolved at t = {t} with K_eval = {k_eval}")]
    RaiseKEval { t: f64, k_eval: usize },
    #[error("lambda domain violated at t = {t}; smallest admissible lambda found is {lambda_max}")]
    LambdaDomain { t: f64, lambda_max: f64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
