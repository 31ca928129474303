//! Quantum estimation of the length-scale parameter `d = L⁻²` of a massive
//! harmonic oscillator.
//!
//! The crate works throughout in the *instantaneous eigenbasis*
//! `{|ψ_n(d)⟩}` of the oscillator at its own parameter value, so that the
//! parameter derivative of every basis state is a sparse constant matrix and
//! the family of bases is connected by an exact one-parameter unitary flow.
//!
//! Modules:
//!
//! - [`special`]: Hermite polynomials, normalized oscillator eigenfunctions,
//!   Gauss–Hermite quadrature.
//! - [`fockspace`]: truncated Fock-space states, ladder operators, the
//!   parameter-derivative operator, the scale-flow generator, fidelity.
//! - [`qfi`]: quantum and classical Fisher information engines (analytic,
//!   pure-state numeric, mixed-state SLD, Bures finite difference, position
//!   quadrature) and the mean-square-noise functional.
//! - [`channels`]: excitation damping and thermal states with their exact
//!   noisy-state Fisher information.
//! - [`multimode`]: entangled multi-oscillator probes and two-copy readouts.
//! - [`inference`]: position-measurement sampling, MOM/MLE/Bayesian
//!   estimators, and a deterministic Monte Carlo benchmark harness.

pub mod channels;
pub mod fockspace;
pub mod inference;
mod linalg;
pub mod multimode;
pub mod qfi;
pub mod special;

use thiserror::Error;

/// Errors for length-scale estimation computations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("non-finite input: {0}")]
    NonFinite(String),

    #[error("overflow evaluating H_{n}(u) with u = {u}")]
    HermiteOverflow { n: usize, u: f64 },

    #[error("eigenvalue iteration failed to converge (dim {0})")]
    EigenFailure(usize),

    #[error("cutoff {cutoff} insufficient: truncation leakage {leakage:.3e} above {tolerance:.1e}")]
    CutoffInsufficient {
        cutoff: usize,
        leakage: f64,
        tolerance: f64,
    },

    #[error("cutoff mismatch: {0} vs {1}")]
    CutoffMismatch(usize, usize),

    #[error("basis parameter mismatch: d = {0} vs d = {1}")]
    BasisMismatch(f64, f64),

    #[error("matrix is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("state is not normalized (norm deviation {0:.3e})")]
    NotNormalized(f64),

    #[error("all eigenvalue pair sums below the rank threshold; QFI undefined")]
    DegenerateRank,

    #[error("observable has zero variance on the probe state")]
    ZeroVariance,

    #[error("quadrature did not converge: {0}")]
    QuadratureFailure(String),

    #[error("empty or degenerate sample batch: {0}")]
    BadBatch(String),

    #[error("estimator failed: {0}")]
    EstimatorFailure(String),

    #[error("negative finite-difference Fisher information {0:.3e}; retry with a larger step")]
    NegativeCurvature(f64),
}

pub type Result<T> = std::result::Result<T, Error>;

pub use fockspace::{DensityOperator, FockVector, TruncatedOperator};
pub use qfi::{QfiMethod, QfiReport};
pub use special::LengthScale;
