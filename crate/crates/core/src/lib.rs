//! Exact, finite-scale tools for the fractional Helly property and its relatives.
//!
//! The crate works with explicit finite set systems: it counts consistent
//! k-tuples, finds maximal intersecting subfamilies, solves the covering LPs
//! behind intersection numbers and fractional transversals, generates the
//! standard counterexample families, and evaluates the arithmetic, finite-field
//! and type-counting experiments that accompany them. Every verdict is an
//! exact rational.

pub mod cli;
pub mod combin;
pub mod constructs;
pub mod error;
pub mod formula;
pub mod fraclp;
pub mod io;
pub mod pseudofield;
pub mod rational;
pub mod setfam;
pub mod sqfint;
pub mod typecount;
pub mod vc;

pub use error::{Error, Result};
pub use rational::Q;
pub use setfam::SetFamily;
