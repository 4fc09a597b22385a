//! Area-minimizing subgraphs of integer lattices.
//!
//! A subset `A ⊂ Z^n` is *minimal* when its trace on every finite window has
//! least perimeter among all competitors with the same exterior boundary
//! trace. This crate decides that property on finite windows exactly (via
//! s-t minimum cuts), certifies it with integral divergence-free currents
//! (the 1-Laplacian criterion `0 ∈ Δ₁ 1_A`), refutes it with explicit
//! cheaper competitors, and ships a catalog of Z² patterns together with
//! executable checks of their structural properties.

pub mod catalog2d;
pub mod currents;
pub mod energy;
pub mod error;
pub mod flow;
pub mod lattice;
pub mod mincut;
pub mod props;
pub mod render;
pub mod skeleton;

pub use error::{Error, Result};
