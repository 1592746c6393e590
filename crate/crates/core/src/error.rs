use thiserror::Error;

/// Errors raised by the numerical kernels, samplers and estimators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    #[error(
        "quadrature did not converge: value {value:e}, error estimate {abs_error:e} after {evaluations} evaluations"
    )]
    NonConvergence {
        value: f64,
        abs_error: f64,
        evaluations: usize,
    },

    #[error("vector is not normalised: |v|^2 = {norm_sq}")]
    NormViolation { norm_sq: f64 },

    #[error("no eigenvectors selected for averaging")]
    EmptySelection,

    #[error("mismatched dimensions: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("eigen-decomposition failed (n = {dim}, max |H_ij| = {max_abs:e}): {detail}")]
    Eigen { dim: usize, max_abs: f64, detail: String },

    #[error("member {member}: {source}")]
    Member {
        member: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("matrix is not unitary: max |U^dag U - I| = {deviation:e}")]
    NonUnitary { deviation: f64 },

    #[error("invalid geometry: {0}")]
    Geometry(String),

    #[error("invalid S^z sector {sz} for chain length {length}")]
    InvalidSector { length: usize, sz: f64 },

    #[error("degenerate samples: {0}")]
    DegenerateSamples(String),

    #[error("fit did not converge after {iterations} iterations")]
    FitNonConvergence { iterations: usize },

    #[error("cache format error: {0}")]
    Cache(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            op,
            detail: detail.into(),
        }
    }

    /// Attach the index of the ensemble member or realization that failed.
    pub fn for_member(self, member: usize) -> Self {
        Error::Member {
            member,
            source: Box::new(self),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
