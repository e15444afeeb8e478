//! Finite-dimensional toolkit for fuzzy versions of quantum observables.
//!
//! The library models effect algebras with two concrete backends (Hilbert
//! space effects and finite tribes), finite-outcome observables (POVMs),
//! smearing by Markov kernels, the post-processing preorder and clean
//! observables, and the equivalence between fuzzy equivalence and
//! statistical sufficiency (pairwise, Hellinger-based, and Blackwell).
//!
//! Module map:
//! - [`hermit`] — dense complex Hermitian matrix core (eigendecomposition,
//!   Loewner order, simultaneous diagonalization of commuting effects);
//! - [`effects`] — effect-algebra elements and states on both backends;
//! - [`observables`] — finite-outcome observables and state distributions;
//! - [`kernels`] — row-stochastic Markov kernels, smearing, Bayes reversal;
//! - [`divergences`] — f-divergence engine (total variation, KL, Hellinger);
//! - [`order`] — the decision layer: preorder witnesses, clean observables,
//!   PV mothers, and the sufficiency suite, backed by an LP feasibility
//!   solver;
//! - [`scenario`] — the JSON scenario format consumed by the CLI.

pub mod divergences;
pub mod effects;
pub mod hermit;
pub mod kernels;
pub mod observables;
pub mod order;
pub mod sampling;
pub mod scenario;

mod error;
mod tol;

pub use error::PovError;
pub use tol::Tolerances;

/// Default RNG seed used by the CLI and the sampled sufficiency evidence.
pub const DEFAULT_SEED: u64 = 3_405_691_582;
