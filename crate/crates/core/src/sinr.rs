//! Instantaneous SINRs for decoding x2, x1 and the tag symbol c(t).

use serde::{Deserialize, Serialize};

use crate::channel::ChannelRealization;
use crate::error::{Error, Result};
use crate::params::{Link, Node, NodeCoefficients, SystemParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SinrTriple {
    pub g_x2: f64,
    /// Absent at the far reader.
    pub g_x1: Option<f64>,
    pub g_c: Option<f64>,
}

/// (X, Y, Z) = direct-link, tag-link and source-tag gains seen by the node.
fn gains(real: &ChannelRealization, node: Node) -> (f64, f64, f64) {
    (
        real.g_hat[node.direct_link()],
        real.g_hat[node.tag_link()],
        real.g_hat[Link::St],
    )
}

/// Interference common to the x2 and x1 stages, without the self term.
fn common(coef: &NodeCoefficients, y: f64, z: f64) -> f64 {
    z * (coef.b * y + coef.m) + coef.c * y + coef.psi
}

pub fn sinr_x2(real: &ChannelRealization, coef: &NodeCoefficients, params: &SystemParams) -> f64 {
    let (x, y, z) = gains(real, coef.node);
    let g = params.gamma;
    params.a2 * g * x / (g * (common(coef, y, z) + coef.q * x) + 1.0)
}

pub fn sinr_x1(
    real: &ChannelRealization,
    coef: &NodeCoefficients,
    params: &SystemParams,
) -> Result<f64> {
    if !coef.node.has_sic() {
        return Err(Error::NoSicStage(coef.node));
    }
    let (x, y, z) = gains(real, coef.node);
    let g = params.gamma;
    Ok(params.a1 * g * x / (g * (common(coef, y, z) + coef.o * x) + 1.0))
}

pub fn sinr_c(
    real: &ChannelRealization,
    coef: &NodeCoefficients,
    params: &SystemParams,
) -> Result<f64> {
    if !coef.node.has_sic() {
        return Err(Error::NoSicStage(coef.node));
    }
    let (x, y, z) = gains(real, coef.node);
    let g = params.gamma;
    let beta2 = params.beta * params.beta;
    let den = z * (coef.m_small * y + coef.m) + coef.c * y + coef.xi * x + coef.psi;
    Ok(beta2 * y * z * g / (g * den + 1.0))
}

pub fn sinr_triple(
    real: &ChannelRealization,
    coef: &NodeCoefficients,
    params: &SystemParams,
) -> SinrTriple {
    let g_x2 = sinr_x2(real, coef, params);
    SinrTriple {
        g_x2,
        g_x1: sinr_x1(real, coef, params).ok(),
        g_c: sinr_c(real, coef, params).ok(),
    }
}
