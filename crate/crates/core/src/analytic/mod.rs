//! Closed-form outage and intercept probabilities, their high-SNR and
//! high-MER asymptotes, and numeric diversity orders.
//!
//! Every probability comes back as a [`Prob`]: the value clamped to [0, 1]
//! for reporting next to the raw value the formula produced.

pub mod aux;
mod diversity;
mod intercept;
mod outage;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{SystemParams, Target};

pub use aux::{aux_constants, AuxConstants};
pub use diversity::diversity_order;
pub use intercept::{ip_asym_mer, ip_rf, ip_rn, ip_rn_printed_pairing, ip_tag};
pub use outage::{op_rf, op_rf_asym, op_rn, op_rn_asym, op_tag, op_tag_asym};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prob {
    pub value: f64,
    pub raw: f64,
}

impl Prob {
    pub fn new(raw: f64) -> Self {
        Prob {
            value: raw.clamp(0.0, 1.0),
            raw,
        }
    }
}

/// Hardware model behind the tag expressions.
#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    #[default]
    Nonideal,
    /// κ = 0 and σ²_e = 0 everywhere.
    Ideal,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Nonideal => "nonideal",
            Mode::Ideal => "ideal",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nonideal" | "non_ideal" => Ok(Mode::Nonideal),
            "ideal" => Ok(Mode::Ideal),
            _ => Err(Error::InvalidInput(format!("unknown mode `{s}`"))),
        }
    }
}

fn require_ideal(p: &SystemParams) -> Result<()> {
    if p.is_ideal() {
        Ok(())
    } else {
        Err(Error::NotIdeal)
    }
}

/// Exact outage probability of `target`; `mode` only affects the tag.
pub fn op(target: Target, p: &SystemParams, mode: Mode) -> Result<Prob> {
    match target {
        Target::Rf => op_rf(p),
        Target::Rn => op_rn(p),
        Target::T => op_tag(p, mode),
    }
}

/// High-SNR outage floor of `target`.
pub fn op_asym(target: Target, p: &SystemParams, mode: Mode) -> Result<Prob> {
    match target {
        Target::Rf => op_rf_asym(p),
        Target::Rn => op_rn_asym(p),
        Target::T => op_tag_asym(p, mode),
    }
}

/// Exact intercept probability of `target`; `mode` only affects the tag.
pub fn ip(target: Target, p: &SystemParams, mode: Mode) -> Result<Prob> {
    match target {
        Target::Rf => ip_rf(p),
        Target::Rn => ip_rn(p),
        Target::T => ip_tag(p, mode),
    }
}
