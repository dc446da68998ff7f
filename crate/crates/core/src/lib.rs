//! Voting rules over strict preferences and exhaustive checking of their
//! axioms on small electorates.

pub mod axioms;
pub mod engine;
pub mod error;
pub mod prefcore;
pub mod repro;
pub mod rules;

pub use error::{Error, Result};
