//! Pseudospectral variational solver for positive solutions of the
//! Schrödinger–Bopp–Podolsky–Proca system on flat 3-tori
//!
//! ```text
//! −ε²Δu + u + q²φu = |u|^{p−2}u
//! −ε²Δφ + ε⁴Δ²φ + φ = 4πu²
//! ```
//!
//! The second equation is solved exactly in Fourier space
//! ([`bopp_podolsky`]); the first is the Euler–Lagrange equation of the
//! functional in [`energy`], whose critical points are found on the Nehari
//! manifold ([`nehari`]). [`photography`] builds concentrated trial states
//! from the whole-space ground state and [`diagnostics`] measures where
//! states concentrate.

pub mod bopp_podolsky;
pub mod cli;
pub mod diagnostics;
pub mod energy;
pub mod error;
pub mod manifold;
pub mod nehari;
pub mod photography;

pub use error::{Result, SbppError};
pub use manifold::{ModelParams, ScalarField, TorusSpec};
