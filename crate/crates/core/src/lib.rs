//! Simulation toolkit for a time-delayed Duffing oscillator driving a
//! non-delayed Duffing oscillator through continuous-control coupling.

pub mod cli;
pub mod dde;
pub mod error;
pub mod model;
pub mod observables;
pub mod stability;
pub mod sweep;

pub use error::{Error, Result};
