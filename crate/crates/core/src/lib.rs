//! Residual entropy and spanning-tree entropy of graphs.
//!
//! The residual entropy of a graph `G` with positive even degrees is
//! `ρ(G) = ln EO(G) / n`, where `EO(G)` counts Eulerian orientations. The
//! spanning-tree entropy is `τ(G) = ln t(G) / n`. This crate computes both
//! exactly where feasible, estimates `ρ` by sampling Eulerian partitions,
//! evaluates the transfer-matrix limit of `ρ(G □ C_ℓ)` as `ℓ → ∞`, and
//! provides the closed-form bounds and heuristics that relate the two.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, threading and
//! the command-line interface live in the `icegraph` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod eo_exact;
pub mod error;
pub mod estimates;
pub mod generators;
pub mod graph;
pub mod mc;
pub mod numeric;
pub mod spanning;
pub mod transfer;

pub use error::{Error, Result};
pub use graph::{DegreeStats, Edge, Graph, Orientation};

/// Arbitrary-precision nonnegative integer used for every exact count.
pub type BigCount = num_bigint::BigUint;
