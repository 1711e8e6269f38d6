use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cell ({i}, {j}) is outside the positive quadrant")]
    InvalidCell { i: i64, j: i64 },

    #[error("L-shape arm lists differ in length ({widths} widths, {heights} heights)")]
    UnequalArms { widths: usize, heights: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("board has {cells} cells, enumeration limit is {limit}")]
    SizeLimit { cells: usize, limit: usize },

    #[error("profile height {height} exceeds the limit {limit}")]
    ProfileLimit { height: usize, limit: usize },

    #[error("arguments {a} and {n} are not coprime")]
    NotCoprime { a: u64, n: u64 },

    #[error("subset is not contained in the board")]
    NotSubset,

    #[error("dominoes do not tile the board: {0}")]
    NotATiling(String),

    #[error("postcondition failed: {0}")]
    Postcondition(String),

    #[error("value is not within {tol:e} of an integer (real residual {re_residual:e}, imaginary residual {im_residual:e})")]
    Tolerance {
        re_residual: f64,
        im_residual: f64,
        tol: f64,
    },
}

impl Error {
    /// Resource-limit failures, as opposed to bad input.
    pub fn is_limit(&self) -> bool {
        matches!(self, Error::SizeLimit { .. } | Error::ProfileLimit { .. })
    }
}
