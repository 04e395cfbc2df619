//! Sweep grids, figure presets and the parallel evaluator.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{self, Mode};
use crate::error::{Error, Result};
use crate::montecarlo::{self, McOptions, RnIpEvent, DEFAULT_TRIALS};
use crate::params::{db_to_linear, linear_to_db, Link, QConvention, SystemParams, Target};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variable {
    SnrDb,
    Kappa,
    SigmaE2,
    Epsilon,
    Beta,
    PhiJ,
    Varpi,
    MerDb,
}

impl Variable {
    pub fn name(self) -> &'static str {
        match self {
            Variable::SnrDb => "snr_db",
            Variable::Kappa => "kappa",
            Variable::SigmaE2 => "sigma_e2",
            Variable::Epsilon => "epsilon",
            Variable::Beta => "beta",
            Variable::PhiJ => "phi_j",
            Variable::Varpi => "varpi",
            Variable::MerDb => "mer_db",
        }
    }

    /// κ and σ²_e are set uniformly over all nodes and links.
    pub fn apply(self, p: &mut SystemParams, v: f64) {
        match self {
            Variable::SnrDb => p.gamma = db_to_linear(v),
            Variable::Kappa => p.kappa = crate::params::NodeValues::uniform(v),
            Variable::SigmaE2 => p.sigma_e2 = crate::params::LinkValues::uniform(v),
            Variable::Epsilon => p.epsilon = v,
            Variable::Beta => p.beta = v,
            Variable::PhiJ => p.phi_j = v,
            Variable::Varpi => p.varpi = v,
            Variable::MerDb => p.lambda[Link::St] = db_to_linear(v) * p.lambda[Link::TE],
        }
    }

    pub fn current(self, p: &SystemParams) -> f64 {
        match self {
            Variable::SnrDb => p.snr_db(),
            Variable::Kappa => p.kappa.0[0],
            Variable::SigmaE2 => p.sigma_e2.0[0],
            Variable::Epsilon => p.epsilon,
            Variable::Beta => p.beta,
            Variable::PhiJ => p.phi_j,
            Variable::Varpi => p.varpi,
            Variable::MerDb => linear_to_db(p.mer()),
        }
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let v = match s.to_ascii_lowercase().as_str() {
            "snr_db" => Variable::SnrDb,
            "kappa" => Variable::Kappa,
            "sigma_e2" => Variable::SigmaE2,
            "epsilon" => Variable::Epsilon,
            "beta" => Variable::Beta,
            "phi_j" => Variable::PhiJ,
            "varpi" => Variable::Varpi,
            "mer_db" => Variable::MerDb,
            _ => {
                return Err(Error::InvalidInput(format!(
                    "`{s}` is not a sweep variable"
                )))
            }
        };
        Ok(v)
    }
}

/// Inclusive grid `start, start + step, …` up to `stop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Range {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        let r = Range { start, stop, step };
        r.check()?;
        Ok(r)
    }

    pub fn point(v: f64) -> Self {
        Range {
            start: v,
            stop: v,
            step: 1.0,
        }
    }

    fn check(&self) -> Result<()> {
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(Error::InvalidInput("range bounds must be finite".into()));
        }
        if !(self.step > 0.0) {
            return Err(Error::InvalidInput("range step must be > 0".into()));
        }
        if self.stop < self.start {
            return Err(Error::InvalidInput("range is empty (stop < start)".into()));
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|i| self.start + i as f64 * self.step).collect()
    }
}

impl FromStr for Range {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let [a, b, c] = parts[..] else {
            return Err(Error::InvalidInput(format!(
                "range `{s}` is not start:stop:step"
            )));
        };
        let num = |x: &str| {
            x.parse::<f64>()
                .map_err(|_| Error::InvalidInput(format!("range `{s}`: `{x}` is not a number")))
        };
        Range::new(num(a)?, num(b)?, num(c)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Arm {
    Analytic,
    Asymptotic,
    Mc,
}

impl fmt::Display for Arm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Arm::Analytic => "analytic",
            Arm::Asymptotic => "asymptotic",
            Arm::Mc => "mc",
        })
    }
}

impl FromStr for Arm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "analytic" | "exact" => Ok(Arm::Analytic),
            "asymptotic" | "asym" => Ok(Arm::Asymptotic),
            "mc" => Ok(Arm::Mc),
            _ => Err(Error::InvalidInput(format!("unknown arm `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Op,
    Ip,
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Op => "op",
            Metric::Ip => "ip",
        })
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "op" => Ok(Metric::Op),
            "ip" => Ok(Metric::Ip),
            _ => Err(Error::InvalidInput(format!("unknown metric `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub variable: Variable,
    pub range: Range,
    pub targets: Vec<Target>,
    pub arms: Vec<Arm>,
    pub metrics: Vec<Metric>,
    /// `Ideal` evaluates the idealized copy of the parameters.
    pub modes: Vec<Mode>,
    pub trials: u64,
    pub master_seed: u64,
    pub q_convention: QConvention,
    pub rn_ip_event: RnIpEvent,
    /// Appended to the metric column to tell preset panels apart.
    pub label: Option<String>,
}

impl SweepSpec {
    pub fn single(variable: Variable, at: f64) -> Self {
        SweepSpec {
            variable,
            range: Range::point(at),
            targets: Target::ALL.to_vec(),
            arms: vec![Arm::Analytic],
            metrics: vec![Metric::Op, Metric::Ip],
            modes: vec![Mode::Nonideal],
            trials: DEFAULT_TRIALS,
            master_seed: 1,
            q_convention: QConvention::NoGamma,
            rn_ip_event: RnIpEvent::Marginal,
            label: None,
        }
    }

    pub fn grid(&self) -> Vec<f64> {
        self.range.grid()
    }

    pub fn check(&self) -> Result<()> {
        self.range.check()?;
        if self.targets.is_empty() || self.arms.is_empty() {
            return Err(Error::InvalidInput(
                "need at least one target and one arm".into(),
            ));
        }
        if self.metrics.is_empty() || self.modes.is_empty() {
            return Err(Error::InvalidInput(
                "need at least one metric and one mode".into(),
            ));
        }
        if self.arms.contains(&Arm::Mc) && self.trials == 0 {
            return Err(Error::InvalidInput("mc arm needs trials >= 1".into()));
        }
        Ok(())
    }

    fn metric_name(&self, metric: Metric, mode: Mode) -> String {
        match &self.label {
            Some(l) => format!("{metric}:{mode}@{l}"),
            None => format!("{metric}:{mode}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub var: f64,
    pub target: Target,
    pub arm: Arm,
    /// `op|ip:nonideal|ideal`, plus `@label` for preset panels.
    pub metric: String,
    pub value: f64,
    pub std_err: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn select<'a>(
        &'a self,
        target: Target,
        arm: Arm,
        metric: &'a str,
    ) -> impl Iterator<Item = &'a SweepRow> + 'a {
        self.rows
            .iter()
            .filter(move |r| r.target == target && r.arm == arm && r.metric == metric)
    }
}

/// One sweep with its own base parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    pub spec: SweepSpec,
    pub params: SystemParams,
}

pub fn run_sweep(spec: &SweepSpec, params: &SystemParams) -> Result<SweepResult> {
    run_sweep_with(spec, params, None)
}

/// Evaluates every grid point, in a dedicated pool of `workers` threads if
/// given. Rows are ordered by grid index, then mode, metric, target, arm.
pub fn run_sweep_with(
    spec: &SweepSpec,
    params: &SystemParams,
    workers: Option<usize>,
) -> Result<SweepResult> {
    spec.check()?;
    let mut base = params.clone();
    base.q_convention = spec.q_convention;
    let grid = spec.grid();

    let eval = || -> Result<Vec<Vec<SweepRow>>> {
        grid.par_iter()
            .map(|&x| eval_point(spec, &base, x))
            .collect()
    };
    let per_point = match workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?
            .install(eval)?,
        None => eval()?,
    };
    Ok(SweepResult {
        rows: per_point.into_iter().flatten().collect(),
    })
}

fn eval_point(spec: &SweepSpec, base: &SystemParams, x: f64) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for &mode in &spec.modes {
        let mut p = base.clone();
        spec.variable.apply(&mut p, x);
        if mode == Mode::Ideal {
            p = p.idealized();
        }
        let report = p.validate();
        if !report.is_ok() {
            return Err(Error::InvalidParams(report.violations));
        }
        let counts = if spec.arms.contains(&Arm::Mc) {
            let opts = McOptions {
                workers: None,
                rn_ip_event: spec.rn_ip_event,
            };
            Some(montecarlo::simulate(
                &p,
                spec.trials,
                spec.master_seed,
                opts,
            )?)
        } else {
            None
        };
        for &metric in &spec.metrics {
            let name = spec.metric_name(metric, mode);
            for &target in &spec.targets {
                for &arm in &spec.arms {
                    let (value, std_err) = match (arm, metric) {
                        (Arm::Mc, _) => {
                            let c = counts.as_ref().expect("counted above");
                            let e = match metric {
                                Metric::Op => c.op(target),
                                Metric::Ip => c.ip(target),
                            };
                            (e.p_hat, Some(e.std_err))
                        }
                        (Arm::Analytic, Metric::Op) => {
                            (analytic::op(target, &p, mode)?.value, None)
                        }
                        (Arm::Analytic, Metric::Ip) => {
                            (analytic::ip(target, &p, mode)?.value, None)
                        }
                        (Arm::Asymptotic, Metric::Op) => {
                            (analytic::op_asym(target, &p, mode)?.value, None)
                        }
                        (Arm::Asymptotic, Metric::Ip) => {
                            (analytic::ip_asym_mer(target, &p, mode)?.value, None)
                        }
                    };
                    rows.push(SweepRow {
                        var: x,
                        target,
                        arm,
                        metric: name.clone(),
                        value,
                        std_err,
                    });
                }
            }
        }
    }
    Ok(rows)
}

pub const PRESETS: [&str; 5] = ["fig2", "fig3", "fig4", "fig5", "fig6"];

/// Expands a figure preset into panels. Run settings (trials, seed,
/// conventions) come from `template`, scenario values from `base`.
pub fn preset(name: &str, base: &SystemParams, template: &SweepSpec) -> Result<Vec<Panel>> {
    let snr = Range {
        start: 0.0,
        stop: 40.0,
        step: 2.0,
    };
    let panel = |variable,
                 range,
                 metrics: &[Metric],
                 modes: &[Mode],
                 arms: &[Arm],
                 label: Option<String>,
                 params: SystemParams| Panel {
        spec: SweepSpec {
            variable,
            range,
            targets: Target::ALL.to_vec(),
            arms: arms.to_vec(),
            metrics: metrics.to_vec(),
            modes: modes.to_vec(),
            label,
            ..template.clone()
        },
        params,
    };
    let both = [Metric::Op, Metric::Ip];
    let exact_mc = [Arm::Analytic, Arm::Mc];

    let panels = match name {
        "fig2" => vec![panel(
            Variable::SnrDb,
            snr,
            &both,
            &[Mode::Nonideal, Mode::Ideal],
            &exact_mc,
            None,
            base.clone(),
        )],
        "fig3" => {
            let mut v = Vec::new();
            for phi_j in [0.1, 0.4] {
                for varpi in [0.2, 0.05] {
                    let p = SystemParams {
                        phi_j,
                        varpi,
                        ..base.idealized()
                    };
                    v.push(panel(
                        Variable::SnrDb,
                        snr,
                        &both,
                        &[Mode::Ideal],
                        &exact_mc,
                        Some(format!("phi_j={phi_j};varpi={varpi}")),
                        p,
                    ));
                }
            }
            v
        }
        "fig4" => {
            let kappa = Range {
                start: 0.0,
                stop: 0.3,
                step: 0.03,
            };
            let sigma = Range {
                start: 0.0,
                stop: 0.1,
                step: 0.01,
            };
            let op_p = SystemParams {
                phi_j: 0.05,
                ..base.clone().with_snr_db(25.0)
            };
            let ip_p = SystemParams {
                phi_j: 0.2,
                ..base.clone().with_snr_db(5.0)
            };
            let mut v = Vec::new();
            for (var, range) in [(Variable::Kappa, kappa), (Variable::SigmaE2, sigma)] {
                for (metric, p) in [(Metric::Op, &op_p), (Metric::Ip, &ip_p)] {
                    v.push(panel(
                        var,
                        range,
                        &[metric],
                        &[Mode::Nonideal],
                        &exact_mc,
                        Some(format!("vs_{var}")),
                        p.clone(),
                    ));
                }
            }
            v
        }
        "fig5" => {
            let mut v = Vec::new();
            for (metric, eps, betas) in [
                (Metric::Op, [0.0, 0.05], [0.2, 0.12]),
                (Metric::Ip, [0.0, 0.3], [0.1, 0.3]),
            ] {
                for epsilon in eps {
                    for beta in betas {
                        let p = SystemParams {
                            epsilon,
                            beta,
                            ..base.clone()
                        };
                        v.push(panel(
                            Variable::SnrDb,
                            snr,
                            &[metric],
                            &[Mode::Nonideal],
                            &exact_mc,
                            Some(format!("epsilon={epsilon};beta={beta}")),
                            p,
                        ));
                    }
                }
            }
            v
        }
        "fig6" => {
            let mut p = base.clone().with_snr_db(5.0);
            p.lambda[Link::TE] = 2.0;
            p.ip.th1_e = 0.3;
            p.ip.th2_e = 0.3;
            p.ip.thc_e = 1.0;
            vec![panel(
                Variable::MerDb,
                Range {
                    start: 0.0,
                    stop: 30.0,
                    step: 2.0,
                },
                &[Metric::Ip],
                &[Mode::Nonideal, Mode::Ideal],
                &[Arm::Analytic, Arm::Asymptotic],
                None,
                p,
            )]
        }
        _ => {
            return Err(Error::InvalidInput(format!(
                "unknown preset `{name}` (expected one of {})",
                PRESETS.join(", ")
            )))
        }
    };
    Ok(panels)
}

/// Runs every panel and concatenates the rows in panel order.
pub fn run_panels(panels: &[Panel], workers: Option<usize>) -> Result<SweepResult> {
    let mut out = SweepResult::default();
    for p in panels {
        out.rows
            .extend(run_sweep_with(&p.spec, &p.params, workers)?.rows);
    }
    Ok(out)
}
