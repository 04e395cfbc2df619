use crate::analytic::aux::{ip_rf_consts, ip_rn_consts, ip_tag_model, ReaderConsts, TagModel};
use crate::analytic::{require_ideal, Mode, Prob};
use crate::error::Result;
use crate::params::{derive_coefficients, Link, Node, SystemParams, Target};
use crate::quad;
use crate::specfun::{chebyshev_nodes, exp_e1, k0_k1, k1_small_arg, ChebyshevNodes};

fn never() -> Prob {
    Prob::new(0.0)
}

fn above(k: Option<ReaderConsts>, inv_gamma: f64) -> Result<Prob> {
    match k {
        // −Δ2·e^{Δ1 − Δ3 − tail/γ}·Ei(−Δ1)
        Some(k) => {
            let e = (-k.delta3 - k.tail * inv_gamma).exp();
            Ok(Prob::new(k.delta2 * e * exp_e1(k.delta1)?))
        }
        None => Ok(never()),
    }
}

/// Probability that the eavesdropper decodes x2.
pub fn ip_rf(p: &SystemParams) -> Result<Prob> {
    above(ip_rf_consts(p), 1.0 / p.gamma)
}

/// Probability that the eavesdropper decodes x1 (threshold γ_th1^E).
pub fn ip_rn(p: &SystemParams) -> Result<Prob> {
    above(ip_rn_consts(p, p.ip.th1_e), 1.0 / p.gamma)
}

/// The x1 interception form evaluated against γ_th2^E instead of γ_th1^E.
pub fn ip_rn_printed_pairing(p: &SystemParams) -> Result<Prob> {
    above(ip_rn_consts(p, p.ip.th2_e), 1.0 / p.gamma)
}

/// Probability that the eavesdropper decodes the tag symbol.
pub fn ip_tag(p: &SystemParams, mode: Mode) -> Result<Prob> {
    let Some(t) = ip_tag_model(p, 1.0 / p.gamma) else {
        return Ok(never());
    };
    let cheb = chebyshev_nodes(p.cheb_n)?;
    match mode {
        Mode::Nonideal => Ok(Prob::new(t.p_decodable()? - t.i22(&cheb)?)),
        Mode::Ideal => {
            require_ideal(p)?;
            Ok(Prob::new(tag_ideal(&t, &cheb)))
        }
    }
}

fn tag_ideal(t: &TagModel, cheb: &ChebyshevNodes) -> f64 {
    let lam = t.lam_st * t.lam_t;
    let a0 = t.thc * t.inv_gamma / t.delta5;
    let r = (a0 / lam).sqrt();
    let s1 = a0 / lam * cheb.integrate(|th| (th + 1.0) * k0_k1((th + 1.0) * r).0);
    let c = t.delta5 / (t.lam_s * t.xi * t.thc);
    let s2 = 2.0 / lam
        * quad::integrate_to_inf(
            |y| (-c * (y - a0)).exp() * k0_k1(2.0 * (y / lam).sqrt()).0,
            a0,
            1.0 / c,
            1e-10,
        );
    1.0 - s1 - s2
}

/// High main-to-eavesdropper-ratio approximation of the intercept
/// probability of `target`; `mode` only affects the tag.
pub fn ip_asym_mer(target: Target, p: &SystemParams, mode: Mode) -> Result<Prob> {
    let e = derive_coefficients(p, Node::E);
    match target {
        Target::Rf => mer_reader(p, p.a2, e.q, p.ip.th2_e),
        Target::Rn => mer_reader(p, p.a1, e.o, p.ip.th1_e),
        Target::T => {
            let Some(t) = ip_tag_model(p, 1.0 / p.gamma) else {
                return Ok(never());
            };
            let cheb = chebyshev_nodes(p.cheb_n)?;
            match mode {
                Mode::Nonideal => Ok(Prob::new(mer_tag_nonideal(p, &t, &cheb)?)),
                Mode::Ideal => {
                    require_ideal(p)?;
                    Ok(Prob::new(mer_tag_ideal(p, &t, &cheb)))
                }
            }
        }
    }
}

/// −Δ2'·e^{Δ1' − Δ3' − tail/γ}·(1 + b')·Ei(−(Δ1' + b'))
fn mer_reader(p: &SystemParams, power: f64, self_int: f64, th: f64) -> Result<Prob> {
    let c = derive_coefficients(p, Node::E);
    let d = power - self_int * th;
    if !(d > 0.0) {
        return Ok(never());
    }
    let ls = p.lambda[Link::SE];
    let lte = p.lambda[Link::TE];
    let lme = p.mer();
    let d1 = c.m / (lte * c.b) + c.m * c.c * th / (ls * d * c.b);
    let d2 = ls * d / (lme * lte * lte * c.b * th);
    let d3 = c.psi * th / (ls * d);
    let bp = (ls * d + lte * c.c * th) / (lme * lte * lte * c.b * th);
    let tail = th / (ls * p.gamma * d);
    // e^{Δ1'}·Ei(−(Δ1' + b')) = −e^{−b'}·e^{x}E1(x) at x = Δ1' + b'
    let v = d2 * (1.0 + bp) * (-bp - d3 - tail).exp() * exp_e1(d1 + bp)?;
    Ok(Prob::new(v))
}

fn mer_tag_nonideal(p: &SystemParams, t: &TagModel, cheb: &ChebyshevNodes) -> Result<f64> {
    let lme = p.mer();
    let lte = t.lam_t;
    let d5 = t.delta5;
    let em = (-t.m * t.thc / (lte * d5)).exp();
    let lin = 1.0 - t.c * t.thc / (lme * lte * d5);

    let ip = t.ip_consts();
    let x = (ip.delta13 * ip.delta15).sqrt();
    let region = 2.0 * x * em * lin * k1_small_arg(x, 3)?;

    let k = t.cheb_consts();
    let (a, b, a4) = (-k.a1, k.a3_plus_d8, k.a4);
    let sum = cheb.integrate(|th| {
        let u = th + 1.0;
        let e1 = (-2.0 * b / (a4 * u)).exp() * (1.0 - a * a4 * u / 2.0);
        let e2 = (-(2.0 * a * a4 / u + b * u / (2.0 * a4))).exp();
        e1 * (1.0 / (th + 3.0) - 1.0 / u) - e2 / (th + 3.0)
    });
    // 2·K0(2√(ab)) ≈ −2·ln √(ab)
    let i22 = k.pre * em * lin * (sum - 2.0 * (a * b).sqrt().ln());
    Ok(region - i22)
}

fn mer_tag_ideal(p: &SystemParams, t: &TagModel, cheb: &ChebyshevNodes) -> f64 {
    let lam = p.mer() * t.lam_t * t.lam_t;
    let a0 = t.thc * t.inv_gamma / t.delta5;
    let r = (a0 / lam).sqrt();
    let s1 = a0 / lam * cheb.integrate(|th| (th + 1.0) * ((th + 1.0) / 2.0 * r).ln());
    let c = t.delta5 / (t.lam_s * t.xi * t.thc);
    let s2 = 2.0 / lam
        * quad::integrate_to_inf(
            |y| (-c * (y - a0)).exp() * (y / lam).sqrt().ln(),
            a0,
            1.0 / c,
            1e-10,
        );
    1.0 + s1 + s2
}
