//! Intermediate constants of the closed forms, each computable from the
//! parameters alone.

use serde::Serialize;

use crate::error::Result;
use crate::params::{derive_coefficients, Link, Node, NodeCoefficients, SystemParams};
use crate::quad;
use crate::specfun::{bessel_k, exp_e1, ChebyshevNodes};

/// Constants of the single-condition forms: far-reader outage and the
/// eavesdropper's x2 / x1 interception.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReaderConsts {
    /// Decoding margin a − Q·γ_th (or a1 − O·γ_th), positive when feasible.
    pub margin: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub delta3: f64,
    /// Coefficient of 1/γ in the exponent: γ_th / (λ_S·margin).
    pub tail: f64,
}

impl ReaderConsts {
    /// `None` when the margin is not positive.
    pub fn new(
        coef: &NodeCoefficients,
        power: f64,
        self_interference: f64,
        th: f64,
        lambda: (f64, f64, f64),
    ) -> Option<Self> {
        let (ls, lt, lst) = lambda;
        let d = power - self_interference * th;
        if !(d > 0.0) {
            return None;
        }
        let k = th / (ls * d);
        let b = coef.b;
        Some(ReaderConsts {
            margin: d,
            delta1: (k * coef.m + 1.0 / lst) * (ls * d + lt * coef.c * th) / (lt * b * th),
            delta2: ls * d / (lst * lt * b * th),
            delta3: k * coef.psi,
            tail: k,
        })
    }

    /// Probability that the SINR stays at or below the threshold:
    /// 1 + Δ2·e^{Δ1 − Δ3 − tail/γ}·Ei(−Δ1).
    pub fn below(&self, inv_gamma: f64) -> Result<f64> {
        let e = (-self.delta3 - self.tail * inv_gamma).exp();
        Ok(1.0 - self.delta2 * e * exp_e1(self.delta1)?)
    }
}

/// Constants of the near-reader outage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NearConsts {
    /// ς = max of the two threshold ratios.
    pub varsigma: f64,
    pub delta4: f64,
    /// λ_S / (λ_ST·ς·λ_T·B).
    pub pre: f64,
    /// ς·ψ / λ_S
    pub psi_term: f64,
    /// Coefficient of 1/γ: ς / λ_S.
    pub tail: f64,
}

/// ς for the near reader, `None` when either decoding margin is not positive.
pub fn varsigma(p: &SystemParams, coef: &NodeCoefficients) -> Option<f64> {
    let d1 = p.a1 - coef.o * p.op.th1_rn;
    let d2 = p.a2 - coef.q * p.op.th2_rn;
    if !(d1 > 0.0 && d2 > 0.0) {
        return None;
    }
    Some((p.op.th1_rn / d1).max(p.op.th2_rn / d2))
}

impl NearConsts {
    pub fn new(p: &SystemParams) -> Option<Self> {
        let c = derive_coefficients(p, Node::Rn);
        let s = varsigma(p, &c)?;
        let ls = p.lambda[Link::SRn];
        let lt = p.lambda[Link::TRn];
        let lst = p.lambda[Link::St];
        Some(NearConsts {
            varsigma: s,
            delta4: (lst * s * c.m + ls) * (ls + s * lt * c.c) / (ls * lst * s * lt * c.b),
            pre: ls / (lst * s * lt * c.b),
            psi_term: s * c.psi / ls,
            tail: s / ls,
        })
    }

    pub fn outage(&self, inv_gamma: f64) -> Result<f64> {
        let e = (-self.psi_term - self.tail * inv_gamma).exp();
        Ok(1.0 - self.pre * e * exp_e1(self.delta4)?)
    }
}

/// Everything the tag-symbol expressions need at one receiving node.
///
/// With X, Y, Z the direct, tag and source-tag gains, the tag symbol is
/// decoded when X < U(Y, Z) = [Δ5·YZ − γ_thc(M·Z + C·Y + G0)] / (ξ·γ_thc),
/// and at the near reader x1/x2 need X > L = ς[Z(B·Y + M) + C·Y + G0],
/// G0 = ψ + 1/γ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TagModel {
    pub lam_s: f64,
    pub lam_t: f64,
    pub lam_st: f64,
    pub b: f64,
    pub c: f64,
    pub m: f64,
    pub psi: f64,
    pub xi: f64,
    pub delta5: f64,
    pub varsigma: f64,
    pub thc: f64,
    pub inv_gamma: f64,
}

/// Constants of the I21 block: ∫ e^{−(B1·u + B3/u)} / (u + B4) du scaled by
/// `pre·e^{−b5}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesConsts {
    pub b1: f64,
    pub b3: f64,
    pub b4: f64,
    pub b5: f64,
    pub pre: f64,
}

/// Constants of the I22 block. `a3_plus_d8` is the combination A3 + Δ8 that
/// appears in every term; `a` = −A1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChebConsts {
    pub pre: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3_plus_d8: f64,
    pub a4: f64,
}

impl TagModel {
    /// `None` when Δ5 = β² − m·γ_thc is not positive (the tag symbol can
    /// never be decoded).
    pub fn new(
        p: &SystemParams,
        node: Node,
        thc: f64,
        varsigma: f64,
        inv_gamma: f64,
    ) -> Option<Self> {
        let c = derive_coefficients(p, node);
        let delta5 = p.beta * p.beta - c.m_small * thc;
        if !(delta5 > 0.0) {
            return None;
        }
        Some(TagModel {
            lam_s: p.lambda[node.direct_link()],
            lam_t: p.lambda[node.tag_link()],
            lam_st: p.lambda[Link::St],
            b: c.b,
            c: c.c,
            m: c.m,
            psi: c.psi,
            xi: c.xi,
            delta5,
            varsigma,
            thc,
            inv_gamma,
        })
    }

    fn g0(&self) -> f64 {
        self.psi + self.inv_gamma
    }

    /// M·C·γ_thc/Δ5 + ψ + 1/γ
    fn g(&self) -> f64 {
        self.m * self.c * self.thc / self.delta5 + self.g0()
    }

    pub fn series_consts(&self) -> SeriesConsts {
        let TagModel {
            lam_s: ls,
            lam_t: lt,
            lam_st: lst,
            b,
            c,
            m,
            delta5: d5,
            varsigma: s,
            thc,
            ..
        } = *self;
        let g = self.g();
        let b4 = (s * ls * lt * c * (b * thc + d5) + ls * ls * d5) / (s * b);
        let b1 = (ls + lst * s * m) / (ls * ls * lst * lt * d5)
            + s * b * m * thc / (ls * ls * lt * d5 * d5);
        let b3 = s * b * thc * b4 * g / (ls * d5);
        let b5 = s * b * thc * g / (ls * d5)
            + s * b * thc * b4 * m / (ls * ls * lt * d5 * d5)
            + c * thc / (lst * d5)
            + s * m * c * thc / (ls * d5)
            + s * self.g0() / ls;
        SeriesConsts {
            b1,
            b3,
            b4,
            b5,
            pre: ls / (s * b * lst * lt),
        }
    }

    /// E[e^{−L/λ_S}; U > 0] through the Bessel series
    /// −2 Σ_{v≥1} (−1)^v B4^{−v} (B3/B1)^{v/2} K_v(2√(B1·B3)).
    ///
    /// The series is asymptotic: it is cut at `max_terms`, when a term drops
    /// below 1e-12 of the partial sum, or when the terms start growing.
    pub fn i21(&self, max_terms: usize) -> Result<f64> {
        let k = self.series_consts();
        let x = 2.0 * (k.b1 * k.b3).sqrt();
        let rho = (k.b3 / k.b1).sqrt() / k.b4;
        let k0 = bessel_k(0, x)?;
        let k1 = bessel_k(1, x)?;
        // s_v = ρ^v K_v(x), by the upward recurrence scaled to avoid overflow.
        let (mut prev, mut cur) = (k0, rho * k1);
        let mut sum = -cur;
        for v in 1..max_terms {
            let next = rho * rho * prev + 2.0 * v as f64 / x * rho * cur;
            if next > cur || next < 1e-12 * sum.abs() {
                if next <= cur {
                    sum += if (v + 1) % 2 == 0 { next } else { -next };
                }
                break;
            }
            sum += if (v + 1) % 2 == 0 { next } else { -next };
            prev = cur;
            cur = next;
        }
        Ok(k.pre * (-k.b5).exp() * (-2.0 * sum))
    }

    pub fn cheb_consts(&self) -> ChebConsts {
        let TagModel {
            lam_s: ls,
            lam_t: lt,
            lam_st: lst,
            c,
            m,
            xi,
            delta5: d5,
            thc,
            ..
        } = *self;
        ChebConsts {
            pre: ls * xi * thc / (lt * lst * d5),
            a1: -1.0 / (ls * xi * lt * lst * d5),
            a2: -thc * (m / lt + c / lst) / d5,
            a3_plus_d8: thc * self.g() * ls * xi,
            a4: ls * ls * xi * xi * thc,
        }
    }

    /// E[e^{−U/λ_S}; U > 0] by Gauss-Chebyshev over the rational kernel
    /// 1/(u + A4), split at u = A4.
    pub fn i22(&self, cheb: &ChebyshevNodes) -> Result<f64> {
        if self.xi == 0.0 {
            return Ok(0.0);
        }
        let k = self.cheb_consts();
        let a = -k.a1;
        let b = k.a3_plus_d8;
        let a4 = k.a4;
        let sum = cheb.integrate(|t| {
            let e1 = (-(2.0 * b / (a4 * (t + 1.0)) + a * a4 * (t + 1.0) / 2.0)).exp();
            let e2 = (-(2.0 * a * a4 / (t + 1.0) + b * (t + 1.0) / (2.0 * a4))).exp();
            e1 * (1.0 / (t + 3.0) - 1.0 / (t + 1.0)) - e2 / (t + 3.0)
        });
        let k0 = bessel_k(0, 2.0 * (a * b).sqrt())?;
        Ok(k.pre * k.a2.exp() * (sum + 2.0 * k0))
    }

    /// Pr(U > 0), the probability that the tag symbol is decodable.
    pub fn p_decodable(&self) -> Result<f64> {
        let ip = self.ip_consts();
        let x = (ip.delta13 * ip.delta15).sqrt();
        Ok(2.0 * x * (-ip.delta14).exp() * bessel_k(1, 2.0 * x)?)
    }

    pub fn ip_consts(&self) -> TagIpConsts {
        let d5 = self.delta5;
        TagIpConsts {
            delta13: 1.0 / (self.lam_st * self.lam_t * d5),
            delta14: self.thc * (self.c / self.lam_st + self.m / self.lam_t) / d5,
            delta15: self.thc * self.g(),
        }
    }

    /// E[(e^{−U/λ_S} − e^{−L/λ_S}); 0 < U < L]: the mass that
    /// 1 − I21 + I22 counts as success although the x1/x2 and tag conditions
    /// are incompatible there. Returns `None` when they are incompatible
    /// everywhere.
    pub fn overlap_correction(&self) -> Option<f64> {
        if self.xi == 0.0 {
            return Some(0.0);
        }
        let TagModel {
            lam_s: ls,
            lam_t: lt,
            lam_st: lst,
            b,
            c,
            m,
            xi,
            delta5: d5,
            varsigma: s,
            thc,
            ..
        } = *self;
        let g0 = self.g0();
        let d5p = d5 - xi * thc * s * b;
        if !(d5p > 0.0) {
            return None;
        }
        let thp = thc * (1.0 + xi * s);
        let z0 = c * thc / d5;
        let z1 = c * thp / d5p;
        let f = |z: f64| {
            let w = d5 * z - c * thc;
            if !(w > 0.0) {
                return 0.0;
            }
            let y0 = thc * (m * z + g0) / w;
            let y1 = if z > z1 {
                thp * (m * z + g0) / (d5p * z - c * thp)
            } else {
                f64::INFINITY
            };
            let k_l = s * (b * z + c) / ls + 1.0 / lt;
            let k_u = w / (ls * xi * thc) + 1.0 / lt;
            let e_l = |y: f64| {
                if y.is_infinite() {
                    0.0
                } else {
                    (-s * (m * z + g0) / ls - y * k_l).exp()
                }
            };
            let e_u = |y: f64| {
                if y.is_infinite() {
                    0.0
                } else {
                    (-(y * w - thc * (m * z + g0)) / (ls * xi * thc) - y / lt).exp()
                }
            };
            let inner = (e_u(y0) - e_u(y1)) / (lt * k_u) - (e_l(y0) - e_l(y1)) / (lt * k_l);
            inner * (-z / lst).exp() / lst
        };
        let head = if z1 > z0 {
            quad::integrate(f, z0, z1, 1e-15, 1e-10)
        } else {
            0.0
        };
        let tail = quad::integrate_to_inf(f, z1, lst, 1e-10);
        Some(head + tail)
    }
}

/// Constants of the tag interception probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TagIpConsts {
    pub delta13: f64,
    pub delta14: f64,
    pub delta15: f64,
}

/// Ideal-hardware tag constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdealTagConsts {
    pub delta9: f64,
    pub delta11: f64,
    /// Δ10 = (ϑ + 1)·`delta10_scale`.
    pub delta10_scale: f64,
    /// Defined alongside Δ10 with the same value; no formula reads it.
    pub delta12_unused: f64,
}

impl IdealTagConsts {
    pub fn new(t: &TagModel) -> Self {
        let lam = t.lam_t * t.lam_st;
        let d10 = t.thc * t.inv_gamma / (2.0 * lam * t.delta5);
        IdealTagConsts {
            delta9: t.lam_s / (lam * t.varsigma * t.b),
            delta11: t.lam_s * t.xi * t.thc / (lam * t.delta5),
            delta10_scale: d10,
            delta12_unused: d10,
        }
    }
}

/// Every named constant for one parameter set; `None` marks an infeasible
/// regime where the corresponding probability is fixed (OP = 1, IP = 0).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuxConstants {
    pub rf: Option<ReaderConsts>,
    pub rn: Option<NearConsts>,
    pub tag_series: Option<SeriesConsts>,
    pub tag_cheb: Option<ChebConsts>,
    pub tag_ideal: Option<IdealTagConsts>,
    pub ip_rf: Option<ReaderConsts>,
    /// Δ17, Δ16, Δ18 in the `delta1..3` slots.
    pub ip_rn: Option<ReaderConsts>,
    pub ip_tag: Option<TagIpConsts>,
    pub ip_tag_cheb: Option<ChebConsts>,
}

pub(crate) fn rf_consts(p: &SystemParams) -> Option<ReaderConsts> {
    let c = derive_coefficients(p, Node::Rf);
    ReaderConsts::new(
        &c,
        p.a2,
        c.q,
        p.op.th2_rf,
        (p.lambda[Link::SRf], p.lambda[Link::TRf], p.lambda[Link::St]),
    )
}

fn e_lambda(p: &SystemParams) -> (f64, f64, f64) {
    (p.lambda[Link::SE], p.lambda[Link::TE], p.lambda[Link::St])
}

pub(crate) fn ip_rf_consts(p: &SystemParams) -> Option<ReaderConsts> {
    let c = derive_coefficients(p, Node::E);
    ReaderConsts::new(&c, p.a2, c.q, p.ip.th2_e, e_lambda(p))
}

pub(crate) fn ip_rn_consts(p: &SystemParams, th: f64) -> Option<ReaderConsts> {
    let c = derive_coefficients(p, Node::E);
    ReaderConsts::new(&c, p.a1, c.o, th, e_lambda(p))
}

pub(crate) fn op_tag_model(p: &SystemParams, inv_gamma: f64) -> Option<TagModel> {
    let s = varsigma(p, &derive_coefficients(p, Node::Rn))?;
    TagModel::new(p, Node::Rn, p.op.thc_rn, s, inv_gamma)
}

pub(crate) fn ip_tag_model(p: &SystemParams, inv_gamma: f64) -> Option<TagModel> {
    TagModel::new(p, Node::E, p.ip.thc_e, 0.0, inv_gamma)
}

pub fn aux_constants(p: &SystemParams) -> AuxConstants {
    let inv_gamma = 1.0 / p.gamma;
    let tag = op_tag_model(p, inv_gamma);
    let ip_tag = ip_tag_model(p, inv_gamma);
    AuxConstants {
        rf: rf_consts(p),
        rn: NearConsts::new(p),
        tag_series: tag.map(|t| t.series_consts()),
        tag_cheb: tag.map(|t| t.cheb_consts()),
        tag_ideal: tag.map(|t| IdealTagConsts::new(&t)),
        ip_rf: ip_rf_consts(p),
        ip_rn: ip_rn_consts(p, p.ip.th1_e),
        ip_tag: ip_tag.map(|t| t.ip_consts()),
        ip_tag_cheb: ip_tag.map(|t| t.cheb_consts()),
    }
}
