//! Semiclassical coherent-state kernels for systems with a spin-½ internal
//! degree of freedom coupled to a continuous one.
//!
//! The spin is integrated out exactly into an influence functional `Z(q)`;
//! the continuous degree of freedom is treated by complex classical
//! trajectories with Klauder boundary conditions. Zeros of `Z` turn into
//! logarithmic singularities of the effective action and create pairs of
//! phase-space caustics (v-PSC), which are located here together with their
//! Stokes lines and the branch-exclusion regions they bound.
//!
//! Two models are provided: the infinitely heavy curve-crossing model
//! ([`heavy`]) and the spin-kicked rotor ([`rotor`]).

pub mod compare;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod grid;
pub mod heavy;
pub mod plane;
pub mod quad;
pub mod rotor;
pub mod run;
pub mod spin;
pub mod stokes;

pub use config::RunConfig;
pub use dynamics::{BoundaryMap, CoherentLabel, ComplexPoint, KlauderVars, MapSample, SaddleBranch, SolverOptions};
pub use error::{Error, Result};
pub use grid::{Axis, GridField, GridValues};
pub use heavy::{HeavyModel, HeavySemiclassics};
pub use num_complex::Complex64 as C64;
pub use plane::Window;
pub use spin::{HeavyParams, KickParams, SpinMatrix, SpinState};
pub use stokes::{CausticKind, CausticPoint, StokesGeometry, StokesLine};
