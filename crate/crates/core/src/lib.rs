//! Numerics for cyclotomic Euler sums, polylogarithms and multiple
//! polylogarithms, with a Laurent-series residue engine and a registry of
//! parity identities checked by independent evaluation pipelines.

pub mod accel;
pub mod cache;
pub mod error;
pub mod eulersum;
pub mod laurent;
pub mod numerics;
pub mod polylog;
mod asymptotic;
pub mod mpl;
pub mod registry;
pub mod residue;

pub use error::{Error, Result};
