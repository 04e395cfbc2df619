use crate::analytic::aux::{op_tag_model, rf_consts, IdealTagConsts, NearConsts, TagModel};
use crate::analytic::{require_ideal, Mode, Prob};
use crate::error::Result;
use crate::params::SystemParams;
use crate::specfun::{chebyshev_nodes, exp_e1, k0_k1};

fn certain() -> Prob {
    Prob::new(1.0)
}

/// Far-reader outage probability.
pub fn op_rf(p: &SystemParams) -> Result<Prob> {
    match rf_consts(p) {
        Some(k) => Ok(Prob::new(k.below(1.0 / p.gamma)?)),
        None => Ok(certain()),
    }
}

/// Far-reader outage floor as γ → ∞.
pub fn op_rf_asym(p: &SystemParams) -> Result<Prob> {
    match rf_consts(p) {
        Some(k) => Ok(Prob::new(k.below(0.0)?)),
        None => Ok(certain()),
    }
}

/// Near-reader outage probability (x2 then x1 must both be decoded).
pub fn op_rn(p: &SystemParams) -> Result<Prob> {
    match NearConsts::new(p) {
        Some(k) => Ok(Prob::new(k.outage(1.0 / p.gamma)?)),
        None => Ok(certain()),
    }
}

pub fn op_rn_asym(p: &SystemParams) -> Result<Prob> {
    match NearConsts::new(p) {
        Some(k) => Ok(Prob::new(k.outage(0.0)?)),
        None => Ok(certain()),
    }
}

/// Tag outage probability at the near reader.
pub fn op_tag(p: &SystemParams, mode: Mode) -> Result<Prob> {
    let inv_gamma = 1.0 / p.gamma;
    match mode {
        Mode::Nonideal => tag_nonideal(p, inv_gamma),
        Mode::Ideal => {
            require_ideal(p)?;
            let Some(t) = op_tag_model(p, inv_gamma) else {
                return Ok(certain());
            };
            let Some(r) = t.overlap_correction() else {
                return Ok(certain());
            };
            Ok(Prob::new(tag_ideal(p, &t)? - r))
        }
    }
}

/// Tag outage floor as γ → ∞.
pub fn op_tag_asym(p: &SystemParams, mode: Mode) -> Result<Prob> {
    match mode {
        Mode::Nonideal => tag_nonideal(p, 0.0),
        Mode::Ideal => {
            require_ideal(p)?;
            let Some(t) = op_tag_model(p, 0.0) else {
                return Ok(certain());
            };
            let d = IdealTagConsts::new(&t);
            let mut raw = 1.0 - d.delta9 * exp_e1(d.delta9)?;
            if d.delta11 > 0.0 {
                raw += d.delta11 * exp_e1(d.delta11)?;
            }
            Ok(Prob::new(raw))
        }
    }
}

/// 1 − I21 + I22 − R
fn tag_nonideal(p: &SystemParams, inv_gamma: f64) -> Result<Prob> {
    let Some(t) = op_tag_model(p, inv_gamma) else {
        return Ok(certain());
    };
    let Some(r) = t.overlap_correction() else {
        return Ok(certain());
    };
    let cheb = chebyshev_nodes(p.cheb_n)?;
    let i21 = t.i21(p.series_v)?;
    let i22 = t.i22(&cheb)?;
    Ok(Prob::new(1.0 - i21 + i22 - r))
}

/// Ideal-hardware form before the overlap correction.
fn tag_ideal(p: &SystemParams, t: &TagModel) -> Result<f64> {
    let cheb = chebyshev_nodes(p.cheb_n)?;
    let d = IdealTagConsts::new(t);
    let lam = t.lam_t * t.lam_st;
    let a = t.thc * t.inv_gamma / t.delta5;
    let ls = t.lam_s;
    let sb = t.varsigma * t.b;
    let e_rn = t.varsigma * t.inv_gamma / ls;

    let k0 = |th: f64| k0_k1(2.0 * ((th + 1.0) * d.delta10_scale).sqrt()).0;

    let mut raw = 1.0 - d.delta9 * (-e_rn).exp() * exp_e1(d.delta9)?;
    raw += a / lam
        * cheb.integrate(|th| {
            let d10 = (th + 1.0) * d.delta10_scale;
            (-(sb * lam * d10 / ls + e_rn)).exp() * k0(th)
        });
    if d.delta11 > 0.0 {
        let e_xi = t.inv_gamma / (ls * t.xi);
        raw += d.delta11 * e_xi.exp() * exp_e1(d.delta11)?;
        raw -= a / lam * cheb.integrate(|th| (e_xi * (1.0 - th) / 2.0).exp() * k0(th));
    }
    Ok(raw)
}
