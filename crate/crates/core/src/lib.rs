//! Numerical toolkit for phase effects of low-velocity frame changes on
//! quantum states: spectral wave propagation, boost/translation loops on
//! multi-mass superpositions, the Klein-Gordon reduction, ring-interferometer
//! phase comparators, and faithful matrix representations of the extended
//! Galilei and Poincare groups.
//!
//! Everything here is deterministic: no randomness, no global state beyond a
//! per-thread FFT plan cache, and all fields and group elements are immutable
//! values.

pub mod error;
pub mod evolution;
pub mod frame;
pub mod grid;
pub mod groups;
pub mod report;
pub mod sagnac;

pub use error::{Error, Result};
