//! Discreet counterfeit-coin weighings.
//!
//! A lawyer knows exactly which `f` of `t` coins are fake and must convince a
//! judge, who believes the fake count is either `f` or `d`, that it is `f`.
//! The lawyer would like to do so without revealing whether any individual
//! coin is fake. This crate models weighing plans, runs the judge's
//! exhaustive deduction, builds the known strategies, measures how much
//! information each one leaks, and searches small instances exhaustively.

pub mod error;
pub mod judge;
pub mod metrics;
pub mod rational;
pub mod report;
pub mod search;
pub mod strategies;
pub mod weighmodel;

pub use error::{Error, Result};
