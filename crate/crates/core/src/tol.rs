//! Numeric tolerances.
//!
//! The fixed constants below are part of the library's contracts; the
//! [`Tolerances`] struct carries the two knobs the CLI exposes (`--tol`
//! scales equality and LP-feasibility acceptance together).

/// Hermiticity check: sup |a_ij - conj(a_ji)|.
pub const TOL_HERM: f64 = 1e-9;
/// Eigendecomposition reconstruction and unitarity residual.
pub const TOL_EIG: f64 = 1e-9;
/// Commutator sup-norm threshold.
pub const TOL_COMM: f64 = 1e-9;
/// Simultaneous diagonalization residual.
pub const TOL_SIMDIAG: f64 = 1e-9;
/// Positive-semidefiniteness slack (min eigenvalue >= -TOL_PSD).
pub const TOL_PSD: f64 = 1e-9;
/// Matrix equality in sup-norm.
pub const TOL_EQ: f64 = 1e-8;
/// LP feasibility acceptance residual.
pub const TOL_FEAS: f64 = 1e-7;
/// Hellinger-gap threshold for pairwise sufficiency.
pub const TOL_SUFF: f64 = 1e-9;
/// Density matrix trace normalization.
pub const TOL_TRACE: f64 = 1e-9;
/// Eigenvalue clustering gap for degenerate spectra (> TOL_EIG so
/// numerically split eigenvalues cluster correctly).
pub const EIG_CLUSTER_GAP: f64 = 1e-7;
/// Eigenvalues above this count toward matrix rank.
pub const RANK_THRESHOLD: f64 = 1e-7;

/// Scalable tolerances threaded through the order module and the CLI.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Matrix equality in sup-norm (default [`TOL_EQ`]).
    pub eq: f64,
    /// LP feasibility acceptance residual (default [`TOL_FEAS`]).
    pub feas: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { eq: TOL_EQ, feas: TOL_FEAS }
    }
}

impl Tolerances {
    /// Scale both knobs by `factor` relative to the defaults.
    pub fn scaled(factor: f64) -> Self {
        Tolerances { eq: TOL_EQ * factor, feas: TOL_FEAS * factor }
    }
}
