use std::fmt;
use std::path::Path;

use causet::frames::FrameError;
use causet::io::IoError;
use causet::oracle::OracleError;
use causet::pythagoras::PythagorasError;
use causet::quantify::QuantifyError;

/// A failed command, carrying its exit code.
#[derive(Debug)]
pub enum Failure {
    /// A verification or validation check failed.
    Check(String),
    Invalid(String),
    Io(String),
    NotSynchronized(String),
    NotCoordinated(String),
    Precondition(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Self::Check(_) => 1,
            Self::Invalid(_) => 2,
            Self::Io(_) => 3,
            Self::NotSynchronized(_) => 4,
            Self::NotCoordinated(_) => 5,
            Self::Precondition(_) => 6,
        }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        Self::Io(format!("{}: {err}", path.display()))
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (Self::Check(m)
        | Self::Invalid(m)
        | Self::Io(m)
        | Self::NotSynchronized(m)
        | Self::NotCoordinated(m)
        | Self::Precondition(m)) = self;
        f.write_str(m)
    }
}

impl From<QuantifyError> for Failure {
    fn from(e: QuantifyError) -> Self {
        match e {
            QuantifyError::NotSynchronized(_) => Self::NotSynchronized(e.to_string()),
            _ => Self::Invalid(e.to_string()),
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Quantify(q) => q.into(),
            IoError::OriginUnquantified(_) => Self::Precondition(e.to_string()),
            _ => Self::Invalid(e.to_string()),
        }
    }
}

impl From<FrameError> for Failure {
    fn from(e: FrameError) -> Self {
        match e {
            FrameError::NotCoordinated { .. } => Self::NotCoordinated(e.to_string()),
            _ => Self::Invalid(e.to_string()),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Quantify(q) => q.into(),
            _ => Self::Invalid(e.to_string()),
        }
    }
}

impl From<PythagorasError> for Failure {
    fn from(e: PythagorasError) -> Self {
        match e {
            PythagorasError::Oracle(o) => o.into(),
            _ => Self::Precondition(e.to_string()),
        }
    }
}
