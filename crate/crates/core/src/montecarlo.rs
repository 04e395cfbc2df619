//! Monte Carlo outage and intercept estimates over channel realizations.
//!
//! Trials are split into fixed index blocks and the per-block event counts
//! are summed as integers, so an estimate depends only on the parameters,
//! the trial count and the master seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::draw_with;
use crate::error::{Error, Result};
use crate::params::{derive_coefficients, Node, SystemParams, Target};
use crate::sinr::{sinr_c, sinr_x1, sinr_x2};

pub const DEFAULT_TRIALS: u64 = 1_000_000;
const BLOCK: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricEstimate {
    pub p_hat: f64,
    pub trials: u64,
    pub std_err: f64,
}

impl MetricEstimate {
    pub fn from_count(hits: u64, trials: u64) -> Self {
        let p = hits as f64 / trials as f64;
        MetricEstimate {
            p_hat: p,
            trials,
            std_err: (p * (1.0 - p) / trials as f64).sqrt(),
        }
    }
}

/// Which eavesdropper event counts as intercepting the near reader's x1.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RnIpEvent {
    /// γ_E^{x1} > γ_th1^E alone.
    #[default]
    Marginal,
    /// E must also clear γ_th2^E on x2 before cancelling it.
    Chained,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct McOptions {
    /// Worker threads; `None` uses the global rayon pool.
    pub workers: Option<usize>,
    pub rn_ip_event: RnIpEvent,
}

/// Raw event counts for every OP and IP metric over one set of trials.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EventCounts {
    pub trials: u64,
    pub outage: [u64; 3],
    pub intercept: [u64; 3],
}

impl EventCounts {
    fn merge(mut self, o: EventCounts) -> Self {
        self.trials += o.trials;
        for i in 0..3 {
            self.outage[i] += o.outage[i];
            self.intercept[i] += o.intercept[i];
        }
        self
    }

    pub fn op(&self, t: Target) -> MetricEstimate {
        MetricEstimate::from_count(self.outage[t.slot()], self.trials)
    }

    pub fn ip(&self, t: Target) -> MetricEstimate {
        MetricEstimate::from_count(self.intercept[t.slot()], self.trials)
    }
}

/// Runs `trials` realizations and counts every outage and intercept event.
pub fn simulate(
    params: &SystemParams,
    trials: u64,
    master_seed: u64,
    opts: McOptions,
) -> Result<EventCounts> {
    if trials == 0 {
        return Err(Error::InvalidInput("trials must be at least 1".into()));
    }
    let blocks = trials.div_ceil(BLOCK);
    let run = || {
        (0..blocks)
            .into_par_iter()
            .map(|b| {
                let lo = b * BLOCK;
                let hi = (lo + BLOCK).min(trials);
                count_block(params, master_seed, lo..hi, opts.rn_ip_event)
            })
            .reduce(EventCounts::default, EventCounts::merge)
    };
    let counts = match opts.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    };
    Ok(counts)
}

fn count_block(
    params: &SystemParams,
    master_seed: u64,
    range: std::ops::Range<u64>,
    rn_ip: RnIpEvent,
) -> EventCounts {
    let cf = derive_coefficients(params, Node::Rf);
    let cn = derive_coefficients(params, Node::Rn);
    let ce = derive_coefficients(params, Node::E);
    let op = &params.op;
    let ip = &params.ip;
    let base = ChaCha8Rng::seed_from_u64(master_seed);
    let mut c = EventCounts::default();
    for i in range {
        let mut rng = base.clone();
        rng.set_stream(i);
        let r = draw_with(params, &mut rng);
        c.trials += 1;

        if !(sinr_x2(&r, &cf, params) > op.th2_rf) {
            c.outage[Target::Rf.slot()] += 1;
        }
        let rn_ok = sinr_x2(&r, &cn, params) > op.th2_rn
            && sinr_x1(&r, &cn, params).expect("Rn has SIC") > op.th1_rn;
        if !rn_ok {
            c.outage[Target::Rn.slot()] += 1;
        }
        if !(rn_ok && sinr_c(&r, &cn, params).expect("Rn has SIC") > op.thc_rn) {
            c.outage[Target::T.slot()] += 1;
        }

        let e_x2 = sinr_x2(&r, &ce, params) > ip.th2_e;
        if e_x2 {
            c.intercept[Target::Rf.slot()] += 1;
        }
        let e_x1 = sinr_x1(&r, &ce, params).expect("E has SIC") > ip.th1_e;
        let rn_hit = match rn_ip {
            RnIpEvent::Marginal => e_x1,
            RnIpEvent::Chained => e_x1 && e_x2,
        };
        if rn_hit {
            c.intercept[Target::Rn.slot()] += 1;
        }
        if sinr_c(&r, &ce, params).expect("E has SIC") > ip.thc_e {
            c.intercept[Target::T.slot()] += 1;
        }
    }
    c
}

pub fn estimate_op(
    target: Target,
    params: &SystemParams,
    trials: u64,
    master_seed: u64,
) -> Result<MetricEstimate> {
    Ok(simulate(params, trials, master_seed, McOptions::default())?.op(target))
}

pub fn estimate_ip(
    target: Target,
    params: &SystemParams,
    trials: u64,
    master_seed: u64,
) -> Result<MetricEstimate> {
    Ok(simulate(params, trials, master_seed, McOptions::default())?.ip(target))
}

#[cfg(test)]
mod tests {
    use super::*;

    const N: u64 = 200_000;

    #[test]
    fn zero_trials_rejected() {
        let p = SystemParams::reference();
        assert!(estimate_op(Target::Rf, &p, 0, 1).is_err());
    }

    #[test]
    fn infeasible_threshold_always_fails() {
        let mut p = SystemParams::reference();
        p.op.th2_rf = 4.0; // a2 - Q·th2 < 0
        let e = estimate_op(Target::Rf, &p, 10_000, 3).unwrap();
        assert_eq!(e.p_hat, 1.0);
        assert_eq!(e.std_err, 0.0);
    }

    #[test]
    fn vacuous_thresholds_ideal() {
        let mut p = SystemParams::reference().idealized();
        p.op.th1_rn = 1e-12;
        p.op.th2_rn = 1e-12;
        p.op.th2_rf = 1e-12;
        p.op.thc_rn = 1e-12;
        let c = simulate(&p, 20_000, 5, McOptions::default()).unwrap();
        for t in Target::ALL {
            assert!(c.op(t).p_hat < 1e-3, "{t}");
        }
    }

    #[test]
    fn unreachable_secrecy_threshold() {
        let mut p = SystemParams::reference();
        p.ip.th1_e = 1e9;
        p.ip.th2_e = 1e9;
        p.ip.thc_e = 1e9;
        let c = simulate(&p, 20_000, 5, McOptions::default()).unwrap();
        for t in Target::ALL {
            assert_eq!(c.ip(t).p_hat, 0.0);
        }
    }

    #[test]
    fn heavy_eavesdropper_impairment_blocks_interception() {
        let mut p = SystemParams::reference().with_snr_db(5.0);
        p.kappa[Node::E] = 10.0;
        let c = simulate(&p, 20_000, 5, McOptions::default()).unwrap();
        for t in Target::ALL {
            assert!(c.ip(t).p_hat < 1e-3, "{t}");
        }
    }

    #[test]
    fn worker_count_does_not_matter() {
        let p = SystemParams::reference();
        let one = simulate(
            &p,
            50_001,
            11,
            McOptions {
                workers: Some(1),
                ..Default::default()
            },
        )
        .unwrap();
        let many = simulate(
            &p,
            50_001,
            11,
            McOptions {
                workers: Some(7),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(one, many);
        assert_eq!(one.trials, 50_001);
    }

    #[test]
    fn nested_outage_events() {
        let p = SystemParams::reference().with_snr_db(10.0);
        let c = simulate(&p, N, 2, McOptions::default()).unwrap();
        assert!(c.outage[Target::T.slot()] >= c.outage[Target::Rn.slot()]);
        let chained = simulate(
            &p,
            N,
            2,
            McOptions {
                rn_ip_event: RnIpEvent::Chained,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(chained.intercept[Target::Rn.slot()] <= c.intercept[Target::Rn.slot()]);
    }

    #[test]
    fn outage_falls_with_snr() {
        let base = SystemParams::reference();
        let mut prev: Option<EventCounts> = None;
        for db in [0.0, 10.0, 20.0, 30.0] {
            let c = simulate(&base.clone().with_snr_db(db), N, 4, McOptions::default()).unwrap();
            if let Some(pc) = prev {
                for t in Target::ALL {
                    let (a, b) = (pc.op(t), c.op(t));
                    assert!(
                        b.p_hat <= a.p_hat + 3.0 * a.std_err.max(b.std_err),
                        "{t} at {db} dB"
                    );
                }
            }
            prev = Some(c);
        }
    }

    #[test]
    fn std_err_formula() {
        let e = MetricEstimate::from_count(250, 1000);
        assert_eq!(e.p_hat, 0.25);
        assert!((e.std_err - (0.25f64 * 0.75 / 1000.0).sqrt()).abs() < 1e-15);
    }
}
