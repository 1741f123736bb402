use thiserror::Error;

/// Errors surfaced by the library.
///
/// Direction operations report degeneracies (zero vectors, failed curvature,
/// near-parallel subspaces) so the solver can resolve them into restarts;
/// everything else is configuration or I/O plumbing.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate vector: {0} has zero norm")]
    DegenerateVector(&'static str),

    #[error("curvature condition violated: s^T y = {sty:e} <= 0")]
    CurvatureViolated { sty: f64 },

    #[error("near-parallel subspace: omega_bar = {omega}")]
    NearParallel { omega: f64 },

    #[error("degenerate curvature: d^T y = 0")]
    DegenerateCurvature,

    #[error("not a descent direction: g^T d = {gtd:e} >= 0")]
    NotDescent { gtd: f64 },

    #[error("invalid options: {0}")]
    InvalidOptions(String),

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("non-finite function value at {0}")]
    NonFinite(String),

    #[error("unknown solver '{0}'")]
    UnknownSolver(String),

    #[error("unknown problem '{0}'")]
    UnknownProblem(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {msg}")]
    Parse { path: String, msg: String },
}
