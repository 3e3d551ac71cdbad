//! Numerical laboratory for the quasilinear bistable reaction-diffusion equation
//!
//! ```text
//!     u_t = ε^p (|u_x|^{p-2} u_x)_x - F'(u),    x ∈ (a, b),  t > 0,
//!     F(u) = |1 - u²|^n / (2n),                 p > 1,  n > 1,
//! ```
//!
//! with homogeneous Neumann boundary conditions. The exponent pair (p, n)
//! selects one of three regimes for the dynamics of N-transition-layer data:
//!
//! * `n < p` (subcritical): stationary layer patterns built from compactly
//!   supported standing waves; layers do not move at all.
//! * `n = p` (critical): metastability — layers persist for times of order
//!   exp(Ap/2ε) before collapsing.
//! * `n > p` (supercritical/degenerate): layers persist only for algebraic
//!   times of order ε^{-k}.
//!
//! The crate provides the double-well potential family and its closed-form
//! constants ([`potential`]), exact stationary profiles via first-integral
//! inversion ([`profiles`]), layer initial data and interface metrics
//! ([`layers`]), an energy-diminishing finite-difference solver ([`solver`]),
//! energy/collapse diagnostics ([`diagnostics`]), and an experiment harness
//! with a scenario registry ([`harness`]).

pub mod diagnostics;
pub mod error;
pub mod grid;
pub mod harness;
pub mod layers;
pub mod potential;

pub mod profiles;
pub mod quad;
pub mod solver;

pub use error::{Error, Result};
pub use grid::{Field, Grid};
pub use potential::{CriticalConstants, PotentialParams, Regime};
