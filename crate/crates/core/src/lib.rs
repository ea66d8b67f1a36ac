//! Exact rational arithmetic on the Riemann sphere, bit-string qubits and
//! the experiments built on them.
//!
//! The crate has two arithmetic layers. [`rational`] and [`exact`] decide
//! rationality exactly and return certificates; [`numeric`] evaluates the
//! same quantities at 256 bits so every exact claim can be cross-checked.
//! [`lattice`], [`qubit`] and [`reduction`] build the finite bit-string
//! model, and [`experiments`] drives the Monte Carlo and definability
//! studies through [`exec`].

pub mod error;
pub mod exact;
pub mod exec;
pub mod experiments;
pub mod lattice;
pub mod numeric;
pub mod qubit;
pub mod rational;
pub mod reduction;

pub use error::{RaqmError, Result};
pub use exact::{
    itc_verdict, niven_cosine, spherical_third_side, ExactCosine, ItcVerdict, Surd,
};
pub use exec::Execution;
pub use lattice::{BitString, LatticePoint, Pno, Quaternion};
pub use qubit::{HiddenPermutation, QubitState, TwoQubitState};
pub use rational::{Rational, RationalAngle};
pub use reduction::{measure, IntegerPair, ReductionTrace};
