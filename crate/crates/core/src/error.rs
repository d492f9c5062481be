use num_complex::Complex64 as C64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// |Z(q)| fell below the singularity threshold; q is a log-divergence
    /// point of the effective action (a v-PSC source).
    #[error("influence functional vanishes at q = {q}")]
    ZeroOfInfluenceFunctional { q: C64 },

    #[error("no boundary root converged from {seeds} seeds")]
    NoRoots { seeds: usize },

    #[error("adaptive quadrature exceeded depth {depth} on [{a}, {b}]")]
    QuadratureFailure { depth: usize, a: f64, b: f64 },

    #[error("grid too coarse: {tail:e} of the momentum mass sits near the Nyquist band")]
    GridTooCoarse { tail: f64 },

    #[error("lost track of the coalescing branch pair at Q' = {at}")]
    BranchTrackingLost { at: C64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("malformed grid file: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the CLI: 2 for configuration problems, 3 for
    /// numerical failures, 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Parse(_) => 2,
            Error::Io(_) => 1,
            _ => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::ZeroOfInfluenceFunctional { .. } => "ZeroOfInfluenceFunctional",
            Error::NoRoots { .. } => "NoRoots",
            Error::QuadratureFailure { .. } => "QuadratureFailure",
            Error::GridTooCoarse { .. } => "GridTooCoarse",
            Error::BranchTrackingLost { .. } => "BranchTrackingLost",
            Error::Config(_) => "ConfigError",
            Error::Parse(_) => "ParseError",
            Error::Io(_) => "IoError",
        }
    }
}
