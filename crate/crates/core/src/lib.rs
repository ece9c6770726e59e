//! Coarse-grained effective Hamiltonians for a driven two-level system.
//!
//! The model is H(t) = −(ε/2)σ3 + 𝒲 cos(ωt) σ1. This crate provides the
//! interaction and bar frames, first- and second-order Magnus window
//! averages (numeric and closed form), Stark and Bloch-Siegert shifts,
//! regime checks, propagation and a worst-case fidelity metric.

pub mod error;
pub mod fidelity;
pub mod magnus;
pub mod model;
pub mod pauli;
pub mod propagation;
pub mod shifts;

pub use error::{Error, Result};
pub use fidelity::{min_fidelity, trace_overlap, FidelitySample, SeriesSpec};
pub use magnus::{MagnusOrder, QuadratureRule, QuadratureSpec, SecondOrderTerm, Window};
pub use model::{DriveParams, Frame, Hamiltonian};
pub use pauli::{expm_pauli, Mat2, PauliCoeffs, Unitary2, C64};
pub use propagation::{FloquetSplitting, PropagationSpec, StepMethod};
pub use shifts::{RatioStatus, RegimeCase, RegimeRatio, RegimeReport, Shifts};
