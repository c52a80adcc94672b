//! Finite, exactly computable ergodic theory of product-group actions.
//!
//! The crate builds probability-measure-preserving actions of finitely
//! generated groups on finite probability spaces and provides:
//!
//! * exact convolution algebra of finite-support measures on groups ([`groups`]),
//! * finite probability spaces and sigma-algebras as canonical partitions ([`spaces`]),
//! * actions, commuting pairs and the standard constructors ([`actions`]),
//! * ergodic and synergodic decompositions with exact verification ([`decomposition`]),
//! * Markov averaging operators, conditional expectations and convergence sweeps ([`operators`]),
//! * Koopman operators, group-ring evaluation and operator norms ([`koopman`]).
//!
//! All measure weights are exact rationals; floating point only appears in
//! convergence sweeps and operator norms.

pub mod actions;
pub mod decomposition;
mod error;
pub mod groups;
pub mod koopman;
pub mod operators;
pub mod random;
pub mod rational;
pub mod rng;
pub mod spaces;

pub use error::{Error, Result};
