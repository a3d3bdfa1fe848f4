//! Numerical toolkit for exclusion constants and kinetic-energy bounds of
//! identical particles with intermediate (Lieb-Liniger, Calogero-Sutherland)
//! and fractional (anyon) exchange statistics.
//!
//! The crate is organized around the quantities the bounds are built from:
//!
//! * [`constants`] — the 1D exclusion constants ξ_S, ξ_H, the fermionic
//!   ξ_F = π/√2 and the Dyson-Lenard ball root, via Bessel evaluation and
//!   bracketed root finding.
//! * [`fractionality`] — the anyon exclusion measure ξ_A(α, n) and its
//!   large-N limit, with exact integer arithmetic for rational α.
//! * [`neumann`] — independent finite-difference eigenvalue oracles for the
//!   quantization conditions and the local exclusion inequalities.
//! * [`covering`] — dyadic covering of a planar density into A/B squares and
//!   assembly of the anyon Lieb-Thirring lower bound from local pieces.
//! * [`bounds`] — closed-form evaluators for every Lieb-Thirring-type
//!   inequality and the exactly solvable comparators.
//! * [`trap`] — harmonic-oscillator and power-law trap bounds, including the
//!   closed-form density minimizer and the symmetrized trial-state upper bound.
//! * [`trial_degrees`] — exact degree and angular-momentum calculus for the
//!   Read-Rezayi-like trial states.

pub mod bounds;
pub mod config;
pub mod constants;
pub mod covering;
pub mod density;
pub mod error;
pub mod fractionality;
pub mod neumann;
pub mod special;
pub mod suites;
pub mod trap;
pub mod trial_degrees;

pub use bounds::{BoundConstants, BoundReport, GasSpec};
pub use config::ToolkitConfig;
pub use constants::{BesselOrder, RootResult};
pub use covering::{CoverTree, UncertaintyConstants};
pub use density::DensityGrid;
pub use error::CoreError;
pub use fractionality::{ReducedFraction, XiAResult};
pub use neumann::{EigResult, Grid1D};
pub use trap::{MinimizerProfile, TrapSpec};
pub use trial_degrees::{DegreeLedger, TrialSpec};

/// Crate version, embedded in CLI reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
