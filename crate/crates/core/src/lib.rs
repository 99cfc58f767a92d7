//! Gate-level simulator and compiler for fluxon-controlled zigzag flux-qubit chains.
//!
//! A chain holds `N` data qubits interleaved with `N − 1` switch qubits
//! (`d1, s1, d2, …, dN`). A fluxon travelling along the chain applies a
//! switch-conditioned three-qubit unitary to each resonant block in turn.
//! On top of that physical layer this crate provides
//!
//! * [`statevec`]: a dense state-vector engine with in-place k-qubit kernels,
//! * [`gates`]: the JPS/CNS gate family and the conditional operators,
//! * [`chain`]: topology, switch biasing and fluxon sweeps,
//! * [`compiler`]: ZYZ/ABC synthesis to sweep programs plus dense verification,
//! * [`qec`]: the three-qubit phase-flip code driven by fluxon passes,
//! * [`script`], [`runner`], [`sweep`], [`verify`]: the `.fknit` text format
//!   and the machinery behind the command-line front end.
//!
//! The math core is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix double precision, which every tolerance in the protocol layers
//! assumes.

pub mod chain;
pub mod compiler;
pub mod error;
pub mod gates;
pub mod matrix;
pub mod qec;
pub mod rng;
pub mod runner;
pub mod scalar;
pub mod script;
pub mod statevec;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Complex amplitude in double precision.
pub type Amplitude = num_complex::Complex64;
pub type StateVector = statevec::StateVector<f64>;
pub type StateVector32 = statevec::StateVector<f32>;
pub type Gate = gates::Gate<f64>;
pub type Gate32 = gates::Gate<f32>;
pub type Matrix = matrix::Matrix<f64>;
pub type Matrix32 = matrix::Matrix<f32>;
pub type ConditionalOperator = gates::ConditionalOperator<f64>;
pub type ChainState = chain::ChainState<f64>;
pub type ChainState32 = chain::ChainState<f32>;
pub type EulerAngles = compiler::EulerAngles<f64>;
