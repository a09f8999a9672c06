//! Conditional-independence structure of finitely exchangeable random
//! vectors and random networks.
//!
//! The crate covers independence models with semi-graphoid closure and
//! property checks, mixed-graph separation, the regime classifier for
//! exchangeable networks, and exact distribution oracles used to verify
//! these results by exhaustion at small sizes.

pub mod dist;
pub mod error;
pub mod exchange;
pub mod graphs;
pub mod ground;
pub mod imodel;
pub mod sample;
pub mod verify;

pub use error::{Error, Result};
pub use ground::{dyad_universe, Dyad, Element, GroundSet, Kind, NodePermutation, VarSet};
