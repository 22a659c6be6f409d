//! Thermodynamic formalism on subshifts of finite type.
//!
//! The crate computes topological pressure three ways and checks them against
//! each other: an exact transfer operator oracle, Caratheodory style cover
//! functionals with a jump-up point, and counting estimators over separated
//! sets of finite words whose empirical distributions stay near a target
//! measure. On top of pressure sit per-orbit quantities (local entropy,
//! Birkhoff averages, pointwise pressure and dimension) and Bowen equation
//! solvers for conformal repellers and volume preserving hyperbolic models.
//!
//! Measures are Bernoulli, stationary Markov, or finite mixtures of those;
//! mixtures model non-ergodic behaviour, where entropy and pressure split
//! into an average and an essential supremum over components.
//!
//! The crate is `no_std` compatible (with `alloc`); the default `std`
//! feature only switches the float and error plumbing.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]
// Validation guards of the form `!(x > 0.0)` also catch NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod builtins;
pub mod counting;
pub mod cover;
pub mod dimension;
pub mod error;
pub mod measure;
pub mod pointwise;
pub mod report;
pub mod separation;
pub mod shift;
pub mod transfer;

mod solve;

pub use error::{Error, Result};
pub use measure::{EmpiricalMeasure, MeasureSpec, NeighborhoodSpec};
pub use report::EstimateReport;
pub use shift::{ball_depth, birkhoff_sum, Potential, Sided, Subshift, Word};
