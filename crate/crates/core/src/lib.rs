//! Truncated spectral triples for finitely generated groups.
//!
//! The pipeline runs from a group presentation to a Dirac operator:
//!
//! * [`group`] solves the word problem (built-in families and bounded
//!   Knuth–Bendix completion for finite presentations),
//! * [`cayley`] enumerates Cayley-graph balls and counts geodesics exactly,
//! * [`clifford`] realizes the Clifford generators on the exterior algebra,
//! * [`dirac`] assembles `D = Σ c_s ⊗ ∂_s` on a ball and checks its spectral
//!   properties,
//! * [`homogenize`] implements the measure-averaged derivations and the
//!   growth-function classification experiments,
//! * [`cli`] drives everything from the command line.

pub mod cayley;
pub mod cli;
pub mod clifford;
pub mod dirac;
pub mod exec;
pub mod group;
pub mod homogenize;
pub mod rational;
pub mod sparse;

pub use exec::Exec;
