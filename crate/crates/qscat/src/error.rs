//! Error types shared across the crate.
//!
//! Numerical trouble spots (scattering resonances, branch points, singular
//! source systems) surface as typed errors rather than NaNs so that sweep
//! drivers can record and skip them.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes of the scattering computations.
///
/// Diagnostic payloads are carried as `f64` regardless of the working scalar
/// type.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An input was outside its documented range.
    #[error("domain error: {0}")]
    Domain(String),

    /// Cap quadrature did not settle within the refinement budget.
    #[error(
        "cap quadrature did not converge after {refinements} refinements \
         (last relative change {last_change:.3e})"
    )]
    QuadratureNoConverge { refinements: u32, last_change: f64 },

    /// The double series did not settle within the term budget.
    #[error(
        "series did not converge after {max_n} outer terms; \
         partial sum ({partial_re:.6e}, {partial_im:.6e}), tail bound {tail_bound:.3e}"
    )]
    SeriesNoConverge {
        max_n: usize,
        partial_re: f64,
        partial_im: f64,
        tail_bound: f64,
    },

    /// A resummation denominator vanished: the parameters sit on a
    /// scattering resonance.
    #[error("scattering resonance: denominator magnitude {magnitude:.3e} below threshold")]
    ResonancePole { magnitude: f64 },

    /// `3 - (1 + xi)^2` vanished, so the square-root branch of the kernel
    /// decomposition is degenerate.
    #[error("degenerate decomposition branch: |3-(1+xi)^2| = {magnitude:.3e}")]
    DegenerateBranch { magnitude: f64 },

    /// The renormalized coupling denominator `(1+xi/3)(1-xi)` vanished.
    #[error("coupling pole: |(1+xi/3)(1-xi)| = {magnitude:.3e}")]
    CouplingPole { magnitude: f64 },

    /// The two-site source system is singular (resonance in the direct solve).
    #[error("singular source system: pivot magnitude {pivot:.3e}")]
    SingularSystem { pivot: f64 },

    /// The post-selected density matrix has zero weight.
    #[error("zero yield: a11 + a22 vanishes")]
    ZeroYield,

    /// Full-order results are only derived for wave packets much larger than
    /// the target, `w >> d`.
    #[error("unsupported regime: full-order expressions require w/d >= 1 (got {w_over_d})")]
    UnsupportedRegime { w_over_d: f64 },
}
