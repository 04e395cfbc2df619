//! Reliability and secrecy evaluation for ambient backscatter NOMA downlinks
//! with residual hardware impairments, channel-estimation errors, imperfect
//! SIC and artificial noise.
//!
//! The crate pairs closed-form outage / intercept probabilities
//! ([`analytic`]) with a Monte Carlo estimator ([`montecarlo`]) that draws
//! estimated channel gains ([`channel`]) and evaluates the per-node SINRs
//! ([`sinr`]) directly. The [`cli`] module turns both into parameter sweeps
//! exported as CSV or JSON.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod channel;
pub mod cli;
pub mod error;
pub mod montecarlo;
pub mod params;
pub mod quad;
pub mod sinr;
pub mod specfun;

pub use error::{Error, Result};
pub use params::{Link, Node, NodeCoefficients, QConvention, SystemParams, Target};
