use thiserror::Error;

/// Everything that can go wrong inside the solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid {field}: {reason}")]
    InvalidInput { field: String, reason: String },

    #[error("probabilities sum to {sum}, expected 1 within 1e-9")]
    ProbabilitySum { sum: f64 },

    #[error("policy length {got} does not match {expected} viewpoints")]
    LengthMismatch { expected: usize, got: usize },

    #[error(
        "InfeasibleServerCompute: viewpoint {viewpoint} needs {compute_time} s of server compute \
         against a {deadline} s deadline"
    )]
    InfeasibleServerCompute {
        viewpoint: usize,
        compute_time: f64,
        deadline: f64,
    },

    #[error(
        "NotLocallyComputable: viewpoint {viewpoint} cannot be projected on the device in time"
    )]
    NotLocallyComputable { viewpoint: usize },

    #[error("scenario is not symmetric")]
    NotSymmetric,

    #[error("scenario is not heterogeneous")]
    NotHeterogeneous,

    #[error("initial policy is infeasible: {reason}")]
    InfeasibleInitial { reason: String },

    #[error("{n} viewpoints exceeds the exhaustive search cap of {cap}")]
    TooLarge { n: usize, cap: usize },

    #[error("sweep grid is empty")]
    EmptyGrid,

    #[error("sweep grid is not strictly increasing at index {index}")]
    GridNotIncreasing { index: usize },

    #[error("domain error: {term}")]
    Domain { term: String },

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidInput {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// True for errors meaning the model has no feasible answer, as opposed
    /// to malformed input.
    pub fn is_infeasibility(&self) -> bool {
        matches!(
            self,
            Error::InfeasibleServerCompute { .. }
                | Error::NotLocallyComputable { .. }
                | Error::InfeasibleInitial { .. }
                | Error::Domain { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
