use std::fmt;
use std::path::PathBuf;

/// Pipeline stage an error surfaced from, used by the CLI to label failures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Hamiltonian,
    Eigensystem,
    Transitions,
    Liouvillian,
    SteadyState,
    QuantumSpectrum,
    ClassicalSpectrum,
    Comparison,
    Output,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Stage::Hamiltonian => "hamiltonian",
            Stage::Eigensystem => "eigensystem",
            Stage::Transitions => "transitions",
            Stage::Liouvillian => "liouvillian",
            Stage::SteadyState => "steady state",
            Stage::QuantumSpectrum => "quantum spectrum",
            Stage::ClassicalSpectrum => "classical spectrum",
            Stage::Comparison => "comparison",
            Stage::Output => "output",
        };
        f.write_str(name)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    Dimension {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("matrix is not Hermitian: max|A - A^H| = {deviation:e} exceeds {tolerance:e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("linear system is singular or ill-conditioned (condition estimate {condition:e})")]
    Singular { condition: f64 },

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("lossless response evaluated on its real pole at omega = {omega}")]
    Pole { omega: f64 },

    #[error(
        "steady state is not unique: smallest |eigenvalue| {smallest:e}, second {second:e}; \
         check that every dressed state is coupled to the bath"
    )]
    DegenerateKernel { smallest: f64, second: f64 },

    #[error("steady state is not positive: minimum eigenvalue {min_eigenvalue:e}")]
    NegativeState { min_eigenvalue: f64 },

    #[error("spectrum has negative excursion {min:e} relative to maximum {max:e}")]
    NegativeSpectrum { min: f64, max: f64 },

    #[error("resolvent solve failed at omega = {omega}: {diagnostic}")]
    Resolvent { omega: f64, diagnostic: String },

    #[error("self-check `{check}` failed: deviation {deviation:e}")]
    SelfCheck { check: &'static str, deviation: f64 },

    #[error("spectra are sampled on different grids")]
    GridMismatch,

    #[error("{0}")]
    Precondition(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{stage} stage failed: {source}")]
    Stage {
        stage: Stage,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Strips `Stage` wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            other => other,
        }
    }

    /// Process exit code for the error class: 2 for configuration problems,
    /// 3 for numerical failures, 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self.root() {
            Error::Config(_) | Error::InvalidParameter { .. } => 2,
            Error::Io { .. } => 1,
            _ => 3,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) trait StageExt<T> {
    fn stage(self, stage: Stage) -> Result<T>;
}

impl<T> StageExt<T> for Result<T> {
    fn stage(self, stage: Stage) -> Result<T> {
        self.map_err(|e| match e {
            already @ Error::Stage { .. } => already,
            other => Error::Stage {
                stage,
                source: Box::new(other),
            },
        })
    }
}
