//! Training-free quantum graph embedding.
//!
//! A graph on `n` vertices is mapped to an `n`-qubit circuit: a degree-weighted
//! `R_X` encoding layer, a diagonal `R_ZZ` entangler with one gate per edge, and a
//! uniform `R_X` mixer, with the entangler/mixer pair repeated `r` times. The
//! embedding is the output distribution sorted in non-increasing order, which
//! removes any dependence on vertex labels.
//!
//! Modules, bottom up:
//!
//! - [`graph`]: graph type, family generators, rewiring, the isomorphism
//!   oracle and the cut function.
//! - [`cfi`]: Cai–Fürer–Immerman untwisted/twisted pairs.
//! - [`qsim`]: statevector engine specialised for the embedding circuit.
//! - [`embed`]: sorting, head truncation and distances.
//! - [`sampling`]: finite-shot histograms and subsampling.
//! - [`stats`]: null/signal z-score separation.
//! - [`noise`]: Pauli-trajectory depolarizing and readout noise.
//! - [`experiments`]: the experiment harness driven by the `quic` CLI.
//!
//! Bit convention: qubit `i` is bit `i` of a basis-state index (little-endian).
//! Rendered bitstrings put qubit 0 in the rightmost character.

pub mod cfi;
pub mod embed;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod noise;
pub mod qsim;
pub mod rng;
pub mod sampling;
pub mod stats;
pub mod tolerance;

pub use error::{Error, Result};
pub use graph::Graph;
