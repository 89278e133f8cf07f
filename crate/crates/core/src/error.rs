//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Errors produced by parameter conversion, spectral enumeration, the
/// wavefunction evaluators and the finite-difference oracle.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// The minimal-length parameter is zero, so the deformed
    /// parameterization (rho, rho*) does not exist.  Use the ordinary
    /// beta -> 0 closed forms instead of this crate's deformed ones.
    #[error("no minimal length: beta = 0 makes rho* infinite; use the beta->0 limit forms")]
    NoMinimalLength,

    /// A physical input violated a positivity or finiteness requirement.
    #[error("domain error: {0}")]
    Domain(String),

    /// rho = 0 is the critical point lambda = 0: the intertwining
    /// operators lose their differential part and the closed-form
    /// solution tables do not apply there.
    #[error("critical point lambda = 0 (rho = 0): spectrum is non-analytic, tables do not apply")]
    CriticalPoint,

    /// |rho| = rho* is a regime boundary, not an interior point of any
    /// of the four solution ranges.
    #[error("regime boundary |rho| = rho*: spectra are non-analytic at rho = {rho}")]
    RegimeBoundary { rho: f64 },

    /// The supplied k^2 gives a negative radicand in the energy relation.
    #[error("unphysical state: k^2 = {k2} gives negative radicand {radicand} in this regime")]
    UnphysicalState { k2: f64, radicand: f64 },

    /// Requested a closed-form level that has no admissible members in
    /// the current regime (degeneracy would be zero).
    #[error("level not permissible: family {family} with index N = {n_index} has no members here")]
    LevelNotPermissible { family: String, n_index: u32 },

    /// The component solution exists but cannot be paired into a spinor
    /// and must be discarded.
    #[error("discarded solution: {0}")]
    DiscardedSolution(String),

    /// Quantum numbers outside the admissible window of the regime's
    /// table row.
    #[error("inadmissible quantum numbers: {0}")]
    Inadmissible(String),

    /// The terminating hypergeometric sum hit a pole of a Pochhammer
    /// denominator inside the summation range.
    #[error("hypergeometric pole: c = {c} vanishes at term k = {k} of the terminating sum")]
    HypergeometricPole { c: f64, k: u32 },

    /// A 1/p term of an intertwining operator has no finite limit at p = 0.
    #[error("divergent limit at p = 0: profile power {power} with angular index {angular}")]
    DivergentAtOrigin { power: f64, angular: i64 },

    /// The quadrature tail beyond p_max exceeds the requested tolerance.
    #[error("quadrature tail {tail:.3e} exceeds tolerance {tol:.3e}; increase p_max")]
    QuadratureTail { tail: f64, tol: f64 },

    /// Sturm bisection failed to bracket an eigenvalue.
    #[error("bisection failed for eigenvalue {index}: bracket [{lo}, {hi}] after {iters} iterations")]
    Bisection {
        index: usize,
        lo: f64,
        hi: f64,
        iters: u32,
    },

    /// The kink-detection grid cannot separate adjacent critical points.
    #[error("grid too coarse: critical pairs {pairs:?} closer than two grid steps")]
    GridTooCoarse { pairs: Vec<(u32, u32)> },
}

pub type Result<T> = std::result::Result<T, Error>;
