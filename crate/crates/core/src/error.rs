use std::fmt;

/// A density-matrix invariant that can fail validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Invariant {
    Hermiticity,
    Trace,
    Positivity,
    Dimension,
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Invariant::Hermiticity => "HERMITICITY",
            Invariant::Trace => "TRACE",
            Invariant::Positivity => "POSITIVITY",
            Invariant::Dimension => "DIMENSION",
        };
        f.write_str(s)
    }
}

/// One failed invariant together with the offending magnitude.
///
/// For `Hermiticity` the magnitude is `max |rho - rho^dagger|`, for `Trace` it
/// is `|tr rho - 1|`, for `Positivity` the most negative eigenvalue, and for
/// `Dimension` the matrix side length that did not match.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub invariant: Invariant,
    pub magnitude: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({:e})", self.invariant, self.magnitude)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid density matrix: {}", join(.0))]
    InvalidState(Vec<Violation>),
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("matrix is not unitary (max deviation {0:e})")]
    Unitarity(f64),
    #[error("vector is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("filter annihilates the state (trace {0:e})")]
    FilterAnnihilates(f64),
    #[error("capacity exceeded: {0}")]
    CapExceeded(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl Error {
    /// Invariants named by an [`Error::InvalidState`], empty otherwise.
    pub fn invariants(&self) -> Vec<Invariant> {
        match self {
            Error::InvalidState(v) => v.iter().map(|v| v.invariant).collect(),
            _ => Vec::new(),
        }
    }
}

fn join(v: &[Violation]) -> String {
    v.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
}

pub type Result<T> = std::result::Result<T, Error>;
