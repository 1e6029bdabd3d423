//! Fault-tolerant greedy graph spanners.
//!
//! The crate builds vertex- and edge-fault-tolerant spanners with the greedy
//! algorithm, checks fault tolerance by brute force, and provides the
//! blocking-set and subsampling machinery used to study their size.

pub mod blocking;
pub mod error;
pub mod experiment;
pub mod generators;
pub mod graph;
pub mod io;
pub mod seed;
pub mod spanner;
pub mod verifier;

pub use error::{Error, Result};
