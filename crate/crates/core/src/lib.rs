//! Graph reconstruction in the congested clique.
//!
//! Each of `n` nodes knows its own adjacency row of an input graph `G`; after a
//! few synchronous rounds of bandwidth-limited messages every node must know
//! `G` (or, for strong reconstruction, reject when `G` lies outside a given
//! class). This crate holds the arithmetic, the codes, the execution engine
//! and the protocols. It is `no_std` and needs only `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod ecc;
pub mod engine;
pub mod field;
pub mod fingerprint;
pub mod graphs;
pub mod matrix;
pub mod protocols;

pub use engine::{execute, Execution, Outcome, Protocol, Transcript};
pub use field::{FieldElem, PrimeField};
pub use graphs::{GraphClass, LabeledGraph};
