//! One-pass triangle counting in graph streams.
//!
//! The crate bundles everything needed to study the hybrid estimator at desk
//! scale:
//!
//! - [`stream`]: edge-stream model, parsing, and single-pass fan-out delivery.
//! - [`generators`]: adversarial hard instances and random baselines with
//!   known ground truth.
//! - [`oracle`]: exact brute-force triangle statistics, including the
//!   order-dependent interference weights that split `T` into `T^{<k}` and
//!   `T^{>k}`.
//! - [`qsim`]: efficient classical simulation of the quantum single-pass
//!   estimator for the low-interference count.
//! - [`statevector`]: literal dense-basis reference simulator used as the
//!   correctness oracle for `qsim`.
//! - [`classical`]: sampling estimator for the high-interference count.
//! - [`hybrid`]: parameter selection, amplification, and the combined
//!   estimate.
//! - [`experiment`]: multi-trial harness with deterministic per-trial seeds.

pub mod classical;
pub mod error;
pub mod experiment;
pub mod generators;
pub mod hybrid;
pub mod oracle;
pub mod qsim;
pub mod seed;
pub mod statevector;
pub mod stats;
pub mod stream;
pub mod testkit;

pub use error::{Error, Result};
pub use stream::{DirectedEdge, Edge, EdgeStream, StreamConsumer, VertexId};
