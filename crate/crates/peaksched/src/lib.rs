//! Peak-memory scheduling of computation DAGs.
//!
//! Two memory models are supported. In the *node-sum* model every node
//! carries a signed weight and the memory at time `i` is the sum of the
//! first `i` scheduled weights. In the *computation-graph* model every
//! node has an output `size` (held until its last consumer finishes) and
//! a `scratch` allowance (held only while the node runs); the node-sum
//! model is the common currency the solvers reduce to.
//!
//! The crate is `no_std` + `alloc`; all IO, file formats and the CLI live
//! in the companion `peaksched-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod caduceus;
pub mod comp;
pub mod dominant;
pub mod graph;
pub mod linearize;
pub mod profile;
pub mod pumpkin;
pub mod reduce;
pub mod segments;
pub mod sp;
pub mod testkit;

pub use comp::ComputationGraph;
pub use graph::{Dag, NodeId, PartialSchedule, Schedule, TopologicalCut};
pub use profile::{NodeSumGraph, Profile};
