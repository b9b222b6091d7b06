use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid box: {0}")]
    InvalidBox(String),

    #[error("box volume {volume} is below the required {required}")]
    VolumeTooSmall { volume: f64, required: f64 },

    #[error("box leaves the closed positive quadrant")]
    OutOfOrthant,

    #[error("polynomial is not totally real: {real_roots} real roots for degree {degree}")]
    NotTotallyReal { degree: usize, real_roots: usize },

    #[error("polynomial has repeated or clustered roots")]
    DegenerateRoots,

    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),

    #[error("window would contain about {estimate} points, cap is {cap}")]
    WindowTooLarge { estimate: f64, cap: usize },

    #[error("flow probe estimate {estimate} exceeds the cap of {cap}")]
    FlowTooLarge { estimate: f64, cap: f64 },

    #[error("{count} candidates exceed the cap of {cap}")]
    TooManyPoints { count: usize, cap: usize },

    #[error("eps = {eps} needs more points than the enumeration cap")]
    EpsTooSmall { eps: f64 },

    #[error("exact coordinates do not fit the fixed-width verifier grid")]
    Overflow,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable identifier used in CLI diagnostics and JSON error reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "E_DIMENSION",
            Error::InvalidBox(_) => "E_INVALID_BOX",
            Error::VolumeTooSmall { .. } => "E_VOLUME_TOO_SMALL",
            Error::OutOfOrthant => "E_OUT_OF_ORTHANT",
            Error::NotTotallyReal { .. } => "E_NOT_TOTALLY_REAL",
            Error::DegenerateRoots => "E_DEGENERATE_ROOTS",
            Error::InvalidPolynomial(_) => "E_INVALID_POLYNOMIAL",
            Error::WindowTooLarge { .. } => "E_WINDOW_TOO_LARGE",
            Error::FlowTooLarge { .. } => "E_FLOW_TOO_LARGE",
            Error::TooManyPoints { .. } => "E_TOO_MANY_POINTS",
            Error::EpsTooSmall { .. } => "E_EPS_TOO_SMALL",
            Error::Overflow => "E_OVERFLOW",
            Error::InvalidArgument(_) => "E_INVALID_ARGUMENT",
        }
    }
}
