//! Simulation and analysis of large-step Trotter circuits for the
//! transverse-field XY chain and its controlled-Rx variant.
//!
//! A single spin excitation is injected on one qubit with an X gate and then
//! propagated by `N_T` Trotter steps, each a layer of nearest-neighbour
//! two-qubit gates (XY or controlled-Rx) followed by a layer of Rz gates.
//!
//! Two backends are provided:
//!
//! * [`dense`]: the full `2^N` state vector, valid for every gate family;
//! * [`subspace`]: `N` amplitudes over the single-excitation basis, valid for
//!   XY circuits, together with an exact continuous-time tight-binding
//!   propagator used as an oracle.
//!
//! [`analytics`] holds closed-form transmission probabilities, localization
//! metrics and peak detection; [`sweep`] runs reproducible parameter sweeps
//! and disorder ensembles; [`figures`] bundles recipes for the standard
//! resonance and localization panels; [`output`] writes CSV/JSON results.

// `!(x <= tol)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytics;
pub mod dense;
pub mod error;
pub mod figures;
pub mod model;
pub mod output;
pub mod rng;
pub mod subspace;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

/// Crate version embedded in result provenance.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
