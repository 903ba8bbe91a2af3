//! Classical simulation of neural-network weight search by a lackadaisical
//! quantum walk on a complete graph.
//!
//! Every vertex of the graph is one point of a finite window carved from the
//! integer weight lattice of a 2-2-1 XOR perceptron. A classical oracle marks
//! the vertices whose weights classify XOR perfectly, and the walk is then
//! simulated in its four-dimensional invariant subspace
//! `{AA, AB, BA, BB}` for a number of steps fixed before evolution starts.
//!
//! Modules:
//!
//! * [`coined_walk`]: Hadamard-coined walks on the line and on `Z^d`.
//! * [`lackadaisical_walk`]: the complete-graph walk in the collapsed subspace.
//! * [`weight_space`]: lattice windows, index codec and window shifting.
//! * [`mlp`]: the 2-2-1 network and its backpropagation baseline.
//! * [`oracle`]: exhaustive marking of solution vertices.
//! * [`trainer`]: the end-to-end search procedure.
//! * [`rng`]: named random sub-streams derived from one seed.

pub mod coined_walk;
pub mod error;
pub mod lackadaisical_walk;
pub mod mlp;
pub mod oracle;
pub mod rng;
pub mod stats;
pub mod trainer;
pub mod weight_space;

pub use error::{Error, Result};
