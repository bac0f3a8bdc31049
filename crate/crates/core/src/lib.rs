//! Steady-state simulation of a driven three-mode system: a microwave
//! cavity coupled to a magnon mode by a beam-splitter interaction, the
//! magnon coupled to a mechanical vibration by radiation-pressure-like
//! backaction, with a two-phonon (squeezing) drive on the magnon and an
//! optional net gain on the cavity.
//!
//! The pipeline:
//! 1. [`model::SystemParams`] fixes the operating parameters,
//! 2. [`steady_state::solve_steady_state`] finds the classical fixed point
//!    and the drive-enhanced coupling,
//! 3. [`dynamics::build_drift`] / [`dynamics::build_diffusion`] assemble the
//!    linearized quadrature dynamics,
//! 4. [`lyapunov::solve_lyapunov`] yields the stationary covariance,
//! 5. [`entanglement::log_negativity`] scores bipartite entanglement,
//! 6. [`sweep::run_sweep`] maps the pipeline over parameter grids.
//!
//! The physics modules are generic over the scalar type via [`real::Real`];
//! the `*64` aliases below pin the common `f64` case. Sweeps and
//! configuration handling are `f64` only.

pub mod config;
pub mod dynamics;
pub mod entanglement;
pub mod error;
pub mod lyapunov;
pub mod model;
pub mod real;
pub mod steady_state;
pub mod sweep;

pub use error::{Error, Result};
pub use real::Real;

pub type SystemParams64 = model::SystemParams<f64>;
pub type DriveSpec64 = model::DriveSpec<f64>;
pub type SteadyState64 = steady_state::SteadyState<f64>;
pub type DriftMatrix64 = dynamics::DriftMatrix<f64>;
pub type DiffusionMatrix64 = dynamics::DiffusionMatrix<f64>;
pub type StabilityReport64 = dynamics::StabilityReport<f64>;
pub type CovarianceMatrix64 = lyapunov::CovarianceMatrix<f64>;
pub type ReducedCM64 = entanglement::ReducedCM<f64>;
pub type EntanglementResult64 = entanglement::EntanglementResult<f64>;
