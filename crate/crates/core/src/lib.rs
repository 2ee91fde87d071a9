//! Exact counts of irreducible binomials `X^t - a` over finite fields.
//!
//! [`binomials`] holds the closed-form count together with two independent
//! checks (the order criterion and a brute-force Rabin test built on
//! [`ffield`]); [`census`] aggregates those counts over ranges of `q` and
//! `t` and compares them with the asymptotic main terms.

pub mod arith;
pub mod binomials;
pub mod census;
pub mod cli;
pub mod error;
pub mod ffield;

pub use error::{Error, Result};
