//! Pseudo-spectral simulation of the regularized Navier–Stokes/Allen–Cahn
//! family on the periodic torus.
//!
//! The model is parameterized by a dissipation exponent `θ`, smoothing
//! exponents `θ₁`, `θ₂` for the advecting (`M`) and advected (`N`)
//! velocity, and a flag `χ` switching on the `∇(Mu)ᵀ·(Nu)` term. Named
//! presets cover the NSE, Leray-α, modified Leray-α, simplified Bardina,
//! Navier–Stokes–Voigt and NS-α couplings.

pub mod diagnostics;
pub mod error;
pub mod harness;
pub mod models;
pub mod nonlinear;
pub mod spectral;
pub mod timestepper;

pub use error::{Error, Result};
