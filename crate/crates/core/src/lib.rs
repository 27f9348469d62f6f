//! Random mass-partitions built from residual allocation models,
//! Poisson-Dirichlet laws and the jumps of stable subordinators.
//!
//! The crate is organised bottom-up:
//!
//! * [`randkit`]: reproducible counter-based streams, gamma/beta samplers and
//!   the special functions used for reference CDFs.
//! * [`partition`]: the [`MassPartition`] model, self-normalization and
//!   size-biased reordering.
//! * [`repr`]: every constructive representation of `RAM(alpha, a1, c)` and
//!   `PD(alpha, theta)`, including the exactly closed perpetuity samplers.
//! * [`excursion`]: straddling-excursion tuples, the BFRY law and the
//!   occupation-time functional.
//! * [`stattest`]: Kolmogorov-Smirnov tests, moment checks and the
//!   summability diagnostics for stick-breaking parameter sequences.

pub mod error;
pub mod excursion;
pub mod partition;
pub mod randkit;
pub mod repr;
pub mod stattest;

pub use error::{Error, Result};
pub use partition::{Closure, MarkedPointSet, MassPartition, Order, Point};
pub use randkit::{derive_seed, make_stream, RngStream};
pub use repr::{PdParams, RamParams};
