//! Scenario parameters and the per-node SINR coefficients derived from them.
//!
//! All quantities are linear. Channel mean powers `lambda` describe the
//! *estimated* gains |ĥ|², and the estimation-error variances `sigma_e2` act
//! on top of them through the coefficients below.

use std::fmt;
use std::ops::{Index, IndexMut};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The seven propagation links of the downlink.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Link {
    /// Source to tag.
    St,
    SRf,
    SRn,
    SE,
    TRf,
    TRn,
    TE,
}

impl Link {
    pub const ALL: [Link; 7] = [
        Link::St,
        Link::SRf,
        Link::SRn,
        Link::SE,
        Link::TRf,
        Link::TRn,
        Link::TE,
    ];

    fn slot(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Link::St => "st",
            Link::SRf => "srf",
            Link::SRn => "srn",
            Link::SE => "se",
            Link::TRf => "trf",
            Link::TRn => "trn",
            Link::TE => "te",
        }
    }
}

impl FromStr for Link {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let link = match s.to_ascii_lowercase().as_str() {
            // `sb` is an alias for the tag link.
            "st" | "sb" => Link::St,
            "srf" => Link::SRf,
            "srn" => Link::SRn,
            "se" => Link::SE,
            "trf" => Link::TRf,
            "trn" => Link::TRn,
            "te" => Link::TE,
            _ => return Err(Error::InvalidInput(format!("unknown link `{s}`"))),
        };
        Ok(link)
    }
}

/// Receiving nodes: far reader, near reader, eavesdropper.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Node {
    Rf,
    Rn,
    E,
}

impl Node {
    pub const ALL: [Node; 3] = [Node::Rf, Node::Rn, Node::E];

    pub fn direct_link(self) -> Link {
        match self {
            Node::Rf => Link::SRf,
            Node::Rn => Link::SRn,
            Node::E => Link::SE,
        }
    }

    pub fn tag_link(self) -> Link {
        match self {
            Node::Rf => Link::TRf,
            Node::Rn => Link::TRn,
            Node::E => Link::TE,
        }
    }

    /// Whether the node runs SIC and decodes x1 and c(t) after x2.
    pub fn has_sic(self) -> bool {
        !matches!(self, Node::Rf)
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Node::Rf => "Rf",
            Node::Rn => "Rn",
            Node::E => "E",
        })
    }
}

impl FromStr for Node {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rf" => Ok(Node::Rf),
            "rn" => Ok(Node::Rn),
            "e" => Ok(Node::E),
            _ => Err(Error::UnknownNode(s.to_string())),
        }
    }
}

/// Whose reliability or secrecy a metric describes: the two readers or the tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Target {
    Rf,
    Rn,
    T,
}

impl Target {
    pub const ALL: [Target; 3] = [Target::Rf, Target::Rn, Target::T];

    pub(crate) fn slot(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Target::Rf => "Rf",
            Target::Rn => "Rn",
            Target::T => "T",
        })
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rf" => Ok(Target::Rf),
            "rn" => Ok(Target::Rn),
            "t" | "tag" => Ok(Target::T),
            _ => Err(Error::InvalidInput(format!("unknown target `{s}`"))),
        }
    }
}

/// One value per link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkValues(pub [f64; 7]);

impl LinkValues {
    pub fn uniform(v: f64) -> Self {
        LinkValues([v; 7])
    }

    pub fn iter(&self) -> impl Iterator<Item = (Link, f64)> + '_ {
        Link::ALL.iter().map(move |&l| (l, self[l]))
    }
}

impl Index<Link> for LinkValues {
    type Output = f64;
    fn index(&self, l: Link) -> &f64 {
        &self.0[l.slot()]
    }
}

impl IndexMut<Link> for LinkValues {
    fn index_mut(&mut self, l: Link) -> &mut f64 {
        &mut self.0[l.slot()]
    }
}

/// One value per receiving node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NodeValues(pub [f64; 3]);

impl NodeValues {
    pub fn uniform(v: f64) -> Self {
        NodeValues([v; 3])
    }
}

impl Index<Node> for NodeValues {
    type Output = f64;
    fn index(&self, n: Node) -> &f64 {
        &self.0[n as usize]
    }
}

impl IndexMut<Node> for NodeValues {
    fn index_mut(&mut self, n: Node) -> &mut f64 {
        &mut self.0[n as usize]
    }
}

/// How the x1/AN/RHI self-interference coefficient Q is formed.
///
/// `NoGamma` gives Q = a1 + ϖφ_J + κ², which is what the received-signal
/// model produces once the outer γ of the SINR denominator is factored out.
/// `AsWritten` multiplies that by γ once more.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QConvention {
    #[default]
    NoGamma,
    AsWritten,
}

impl FromStr for QConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "no_gamma" => Ok(QConvention::NoGamma),
            "as_written" => Ok(QConvention::AsWritten),
            _ => Err(Error::InvalidInput(format!(
                "q_convention must be `as_written` or `no_gamma`, got `{s}`"
            ))),
        }
    }
}

impl fmt::Display for QConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QConvention::NoGamma => "no_gamma",
            QConvention::AsWritten => "as_written",
        })
    }
}

/// Decoding thresholds at the legitimate readers (linear SINR).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpThresholds {
    pub th1_rn: f64,
    pub th2_rn: f64,
    pub th2_rf: f64,
    pub thc_rn: f64,
}

/// Secrecy thresholds at the eavesdropper (linear SINR).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IpThresholds {
    pub th1_e: f64,
    pub th2_e: f64,
    pub thc_e: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub a1: f64,
    pub a2: f64,
    /// Reflection-coefficient magnitude; only β² enters the SINRs.
    pub beta: f64,
    /// Residual fraction left by imperfect SIC.
    pub epsilon: f64,
    /// Artificial-noise power as a fraction of P_S.
    pub phi_j: f64,
    /// Leakage of the artificial noise into the legitimate readers.
    pub varpi: f64,
    /// Hardware-impairment level κ_{Si} per receiving node.
    pub kappa: NodeValues,
    pub sigma_e2: LinkValues,
    pub lambda: LinkValues,
    pub n0: f64,
    /// Transmit SNR P_S / N0.
    pub gamma: f64,
    pub op: OpThresholds,
    pub ip: IpThresholds,
    /// Gauss-Chebyshev node count.
    pub cheb_n: usize,
    /// Cap on the Bessel-series order in the tag outage expression.
    pub series_v: usize,
    pub q_convention: QConvention,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self::reference()
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

impl SystemParams {
    /// The reference scenario used throughout the numerical evaluation,
    /// at a transmit SNR of 20 dB.
    pub fn reference() -> Self {
        let mut lambda = LinkValues::uniform(1.0);
        lambda[Link::SRf] = 4.0;
        lambda[Link::SRn] = 6.0;
        lambda[Link::St] = 1.0;
        lambda[Link::SE] = 0.5;
        lambda[Link::TRf] = 1.0;
        lambda[Link::TRn] = 2.0;
        lambda[Link::TE] = 0.3;
        SystemParams {
            a1: 0.2,
            a2: 0.8,
            beta: 0.1,
            epsilon: 0.01,
            phi_j: 0.1,
            varpi: 0.5,
            kappa: NodeValues::uniform(0.1),
            sigma_e2: LinkValues::uniform(0.05),
            lambda,
            n0: 1.0,
            gamma: db_to_linear(20.0),
            op: OpThresholds {
                th1_rn: 1.2,
                th2_rn: 1.0,
                th2_rf: 1.0,
                thc_rn: 0.001,
            },
            ip: IpThresholds {
                th1_e: 0.12,
                th2_e: 0.3,
                thc_e: 0.01,
            },
            cheb_n: 100,
            series_v: 30,
            q_convention: QConvention::NoGamma,
        }
    }

    pub fn snr_db(&self) -> f64 {
        linear_to_db(self.gamma)
    }

    pub fn with_snr_db(mut self, db: f64) -> Self {
        self.gamma = db_to_linear(db);
        self
    }

    pub fn with_kappa(mut self, kappa: f64) -> Self {
        self.kappa = NodeValues::uniform(kappa);
        self
    }

    pub fn with_sigma_e2(mut self, s2: f64) -> Self {
        self.sigma_e2 = LinkValues::uniform(s2);
        self
    }

    /// Copy with every impairment level and estimation-error variance zeroed.
    pub fn idealized(&self) -> Self {
        self.clone().with_kappa(0.0).with_sigma_e2(0.0)
    }

    pub fn is_ideal(&self) -> bool {
        self.kappa.0.iter().all(|&k| k == 0.0) && self.sigma_e2.0.iter().all(|&s| s == 0.0)
    }

    /// Main-to-eavesdropper ratio λ_ST / λ_TE.
    pub fn mer(&self) -> f64 {
        mer(self)
    }

    /// Sets λ_ST so that the main-to-eavesdropper ratio equals `mer`, with
    /// λ_TE untouched.
    pub fn with_mer(mut self, mer: f64) -> Self {
        self.lambda[Link::St] = mer * self.lambda[Link::TE];
        self
    }

    pub fn validate(&self) -> ValidationReport {
        validate(self)
    }

    pub fn validated(self) -> Result<Self> {
        let report = self.validate();
        if report.is_ok() {
            Ok(self)
        } else {
            Err(Error::InvalidParams(report.violations))
        }
    }

    pub fn coefficients(&self, node: Node) -> NodeCoefficients {
        derive_coefficients(self, node)
    }
}

/// Outcome of [`validate`]: hard violations and feasibility warnings.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<String>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate(p: &SystemParams) -> ValidationReport {
    let mut r = ValidationReport::default();
    let mut check = |ok: bool, what: &str| {
        if !ok {
            r.violations.push(what.to_string());
        }
    };
    let finite = |x: f64| x.is_finite();

    check(
        finite(p.a1) && finite(p.a2) && (p.a1 + p.a2 - 1.0).abs() <= 1e-9,
        "a1 + a2 = 1",
    );
    check(p.a1 > 0.0, "a1 > 0");
    check(p.a1 < p.a2, "a1 < a2");
    check(p.beta > 0.0 && p.beta <= 1.0, "0 < beta <= 1");
    check((0.0..=1.0).contains(&p.epsilon), "0 <= epsilon <= 1");
    check(p.phi_j > 0.0 && p.phi_j <= 1.0, "0 < phi_J <= 1");
    check((0.0..=1.0).contains(&p.varpi), "0 <= varpi <= 1");
    check(
        p.kappa.0.iter().all(|&k| k >= 0.0 && finite(k)),
        "kappa >= 0",
    );
    check(
        p.sigma_e2.0.iter().all(|&s| s >= 0.0 && finite(s)),
        "sigma_e2 >= 0",
    );
    check(
        p.lambda.0.iter().all(|&l| l > 0.0 && finite(l)),
        "lambda > 0",
    );
    check(p.n0 > 0.0 && finite(p.n0), "n0 > 0");
    check(p.gamma > 0.0 && finite(p.gamma), "gamma > 0");
    let th = [
        p.op.th1_rn,
        p.op.th2_rn,
        p.op.th2_rf,
        p.op.thc_rn,
        p.ip.th1_e,
        p.ip.th2_e,
        p.ip.thc_e,
    ];
    check(th.iter().all(|&t| t > 0.0 && !t.is_nan()), "thresholds > 0");
    check(p.cheb_n >= 1, "cheb_n >= 1");
    check(p.series_v >= 1, "series_v >= 1");

    if r.violations.is_empty() {
        let feas = [
            (Node::Rf, p.op.th2_rf, None),
            (Node::Rn, p.op.th2_rn, Some(p.op.th1_rn)),
            (Node::E, p.ip.th2_e, Some(p.ip.th1_e)),
        ];
        for (node, th2, th1) in feas {
            let c = derive_coefficients(p, node);
            if p.a2 - c.q * th2 <= 0.0 {
                r.warnings.push(format!(
                    "{node}: a2 - Q*th2 <= 0, x2 can never be decoded at this node"
                ));
            }
            if let Some(th1) = th1 {
                if p.a1 - c.o * th1 <= 0.0 {
                    r.warnings.push(format!(
                        "{node}: a1 - O*th1 <= 0, x1 can never be decoded at this node"
                    ));
                }
            }
        }
    }
    r
}

/// Main-to-eavesdropper ratio λ_ST / λ_TE.
pub fn mer(p: &SystemParams) -> f64 {
    p.lambda[Link::St] / p.lambda[Link::TE]
}

/// Constants multiplying the channel gains in a node's SINR denominators.
///
/// `o`, `m_small` and `xi` belong to the SIC stages and are not used for the
/// far reader, which decodes x2 only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NodeCoefficients {
    pub node: Node,
    /// Backscatter-path distortion: β²(1 + [ϖ]φ_J + κ²).
    pub b: f64,
    /// b · σ²_{e,ST}
    pub c: f64,
    /// b · σ²_{e,Ti}
    pub m: f64,
    /// Interference on x2 from x1, AN and RHI.
    pub q: f64,
    pub psi: f64,
    /// Residual interference on x1 after imperfect SIC.
    pub o: f64,
    pub m_small: f64,
    pub xi: f64,
}

pub fn derive_coefficients(p: &SystemParams, node: Node) -> NodeCoefficients {
    let beta2 = p.beta * p.beta;
    let k2 = p.kappa[node] * p.kappa[node];
    // The eavesdropper takes the full jamming power; readers see a fraction.
    let jam = match node {
        Node::E => p.phi_j,
        Node::Rf | Node::Rn => p.varpi * p.phi_j,
    };
    let s_st = p.sigma_e2[Link::St];
    let s_ti = p.sigma_e2[node.tag_link()];
    let s_si = p.sigma_e2[node.direct_link()];

    let b = beta2 * (1.0 + jam + k2);
    let q_base = p.a1 + jam + k2;
    let q = match p.q_convention {
        QConvention::NoGamma => q_base,
        QConvention::AsWritten => p.gamma * q_base,
    };
    NodeCoefficients {
        node,
        b,
        c: b * s_st,
        m: b * s_ti,
        q,
        psi: b * s_ti * s_st + s_si * (1.0 + jam + k2),
        o: p.epsilon * p.a2 + jam + k2,
        m_small: beta2 * (k2 + jam),
        xi: p.epsilon + jam + k2,
    }
}

/// [`derive_coefficients`] keyed by a textual node identifier.
pub fn derive_coefficients_named(p: &SystemParams, node: &str) -> Result<NodeCoefficients> {
    Ok(derive_coefficients(p, node.parse()?))
}
