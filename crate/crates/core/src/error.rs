use num_complex::Complex64;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    /// Iterative procedure stopped before meeting its tolerance. `estimate` holds
    /// the best available value, flattened to its complex components.
    #[error("{context}: no convergence after {evaluations} evaluations (error bound {error_bound:.3e})")]
    NonConvergence {
        context: String,
        estimate: Vec<Complex64>,
        error_bound: f64,
        evaluations: usize,
    },

    #[error("lossless stack has a real-axis pole near lambda = {lambda:.6e}; the real-axis spectral path is undefined")]
    LosslessPole { lambda: f64 },

    #[error("region mismatch: {0}")]
    RegionMismatch(String),

    #[error("field and source points coincide")]
    Coincident,

    #[error("ill-posed inversion: {0}")]
    IllPosed(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid stack: {0}")]
    InvalidStack(String),
}
