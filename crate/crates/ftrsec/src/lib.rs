//! Physical-layer secrecy metrics for wiretap links whose main and
//! eavesdropper channels fade independently under the fluctuating two-ray
//! (FTR) model.
//!
//! The SNR of an FTR link is a countable mixture of Erlang distributions:
//! truncating the mixture at a controlled mass defect gives closed-form
//! series for the average secrecy capacity, the secrecy outage probability
//! (exact and lower bound), and the probability of strictly positive secrecy
//! capacity. Every closed form in this crate is backed by a quadrature
//! oracle and a seeded Monte Carlo estimator over the physical channel
//! model, wired together by the `validate` subcommand of the `ftrsec`
//! binary.

pub mod config;
pub mod error;
pub mod ftr;
pub mod kahan;
pub mod mc;
pub mod quad;
pub mod report;
pub mod secrecy;
pub mod special;

pub use error::{FtrError, Result};
