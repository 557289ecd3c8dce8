use thiserror::Error;

/// Errors produced by the toolkit.
///
/// Domain errors signal invalid inputs (parameters outside the range a
/// function is defined on); the remaining variants signal numerical
/// failures of an otherwise well-posed computation.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// The complete integral requested is divergent (q = 1 with p <= 2).
    #[error("divergent: K_p(1) is infinite for p <= 2")]
    Divergent,

    /// No modulus q in (0,1) satisfies Q_p(q) = -r for the requested ratio.
    #[error("no wavelike modulus: r = {r} is outside the solvable range for p = {p}")]
    NoWavelikeModulus { p: f64, r: f64 },

    #[error("no bracket: f has the same sign at {lo} and {hi}")]
    NoBracket { lo: f64, hi: f64 },

    #[error("root not bracketed to width {tol} within {max_iter} iterations; last bracket [{lo}, {hi}]")]
    RootIterationLimit {
        lo: f64,
        hi: f64,
        tol: f64,
        max_iter: usize,
    },

    #[error("quadrature did not converge within depth {max_depth}: best estimate {estimate}, error bound {error_bound}")]
    QuadratureNoConvergence {
        estimate: f64,
        error_bound: f64,
        max_depth: usize,
    },

    #[error("integrand returned NaN at x = {x}")]
    IntegrandNan { x: f64 },

    /// Flat lengths do not satisfy the flat-core sum constraint.
    #[error("sum-flatparts violated: flat lengths sum to {got}, constraint requires {want}")]
    SumFlatParts { got: f64, want: f64 },

    #[error("cannot concatenate an empty list of curves")]
    EmptyConcat,

    /// The curvature vanishes identically, so no multiplier can be fitted.
    #[error("lambda undetermined: curvature is identically zero")]
    LambdaUndetermined,

    #[error("constraint projection did not converge after {iterations} Newton iterations (residual {residual})")]
    ProjectionDiverged { iterations: usize, residual: f64 },

    /// The requested loop/segment partition could not be located.
    #[error("partition unavailable: {0}")]
    PartitionUnavailable(String),
}

impl Error {
    /// True for errors caused by inputs outside a function's domain, as
    /// opposed to numerical failures.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::Divergent
                | Error::NoWavelikeModulus { .. }
                | Error::SumFlatParts { .. }
                | Error::EmptyConcat
                | Error::LambdaUndetermined
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
