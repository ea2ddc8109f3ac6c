//! Coherent states for the bound hydrogen atom.
//!
//! The crate builds the coherent-state families of a single degree of
//! freedom (oscillator, moment-weighted, degenerate-spectrum), the
//! angular-momentum shell states and the full hydrogen coherent states
//! `|s, γ, Ω̄⟩`, and checks their three defining properties numerically:
//! normalization, resolution of unity and temporal stability.
//!
//! Everything works in the energy eigenbasis; configuration-space values
//! are produced on demand by [`position`].

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod angular;
pub mod error;
pub mod fock1d;
pub mod hydrogen;
pub mod phase;
pub mod position;
pub mod specfun;
pub mod weights;

pub use error::{Error, Result};
pub use num_complex::Complex64;
