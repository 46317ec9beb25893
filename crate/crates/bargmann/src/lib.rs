//! Toolkit for the extended-space formulation of Newtonian mechanics.
//!
//! A non-relativistic system with potential `U(r, t)` is encoded as a
//! Lorentzian metric on a 5-dimensional space with coordinates
//! `(x, y, z, t, s)`:
//!
//! ```text
//! ds^2 = dr^2 + 2 dt ds - 2 U(r, t) dt^2
//! ```
//!
//! Null geodesics of this metric project onto Newtonian trajectories, the
//! extended Galilei group acts isometrically, conformal vector fields
//! reproduce the Schrödinger symmetry algebra with its Noether charges, and
//! the 5-dimensional wave equation reduces to the Schrödinger equation.
//!
//! The crate is organized along those four threads:
//!
//! - [`geometry`]: the metric, its inverse and connection, builtin potentials
//! - [`group`]: the extended Galilei group and its projective action on
//!   wavefunctions
//! - [`dynamics`]: null geodesic integration checked against an independent
//!   Newtonian oracle, plus the vertical-coordinate law
//! - [`symmetry`]: conformal vector fields, the 13-generator algebra, and
//!   conserved charges along geodesics
//! - [`quantum`]: the 5-dimensional Laplacian and the lift of Schrödinger
//!   solutions to s-periodic waves
//! - [`scenario`]: TOML-driven runs with deterministic CSV/JSON output,
//!   consumed by the `bargmann` binary
//!
//! Runnable walkthroughs for each thread live under `examples/`.

pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod group;
pub mod quantum;
pub mod scenario;
pub mod symmetry;

pub use error::{Error, Result};
pub use geometry::{BargmannMetric, ExtendedPoint, Potential, TangentVector};
pub use group::{BargmannElement, Wavefunction};
pub use scenario::{Check, Report, Scenario};
