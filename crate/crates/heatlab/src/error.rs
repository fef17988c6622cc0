use thiserror::Error;

/// Library-wide error type.
#[derive(Error, Debug)]
pub enum Error {
    /// A quadrature did not reach its target accuracy. Carries the partial
    /// sums observed so the caller can judge how far off it is.
    #[error("quadrature for {what} did not converge (target {target:.1e}, achieved {achieved:.1e}); partial sums {partials:?}")]
    QuadratureNonConvergence {
        what: String,
        target: f64,
        achieved: f64,
        partials: Vec<f64>,
    },

    /// Model-level invariant violated (divergent tail integral, non-decreasing
    /// density, ...).
    #[error("invalid model: {0}")]
    ModelInvalid(String),

    #[error("domain error: {0}")]
    DomainError(String),

    /// No scaling exponent in (0, 2) fits the grid; carries the worst pair.
    #[error("scaling violated: no exponent in (0,2) fits; worst pair u={u:.6e}, lambda={lambda:.6e}, ratio={ratio:.6e}")]
    ScalingViolated { u: f64, lambda: f64, ratio: f64 },

    /// Numerical Laplace inversion produced a non-monotone table.
    #[error("renewal inversion unstable: non-monotone V at radii {offending:?}; consider the h-proxy backend")]
    InversionUnstable { offending: Vec<f64> },

    #[error("query {value:.6e} outside table range [{lo:.6e}, {hi:.6e}] (one-decade extrapolation included)")]
    RangeError { value: f64, lo: f64, hi: f64 },

    /// V'(x) vanished at a sampled point, so the condition-H supremum is
    /// undecidable from the table.
    #[error("condition H undecidable: V'({0:.6e}) = 0 on the sampled grid")]
    ConditionHUndecidable(f64),

    /// A bound was requested outside the regime where its hypotheses are
    /// verified; names the missing hypothesis.
    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    #[error("accuracy warning for {what}: achieved error bound {achieved:.2e} above target {target:.2e}")]
    AccuracyWarning {
        what: String,
        target: f64,
        achieved: f64,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error("unknown check '{name}'; available: {available:?}")]
    UnknownCheck { name: String, available: Vec<String> },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
