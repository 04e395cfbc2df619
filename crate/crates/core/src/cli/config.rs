//! Flat `key = value` configuration files.
//!
//! Unspecified keys keep the reference-scenario defaults. One sweepable key
//! may carry a `start:stop:step` range instead of a number, which makes it
//! the sweep variable. Thresholds take linear values, or dB through the
//! `_db` suffix. Setting only one of `a1`, `a2` makes the other its
//! complement to 1.

use std::path::Path;

use crate::cli::sweep::{Arm, Metric, Range, SweepSpec, Variable};
use crate::error::{Error, Result};
use crate::params::{db_to_linear, Link, Node, SystemParams, Target};

pub fn load_config(path: &Path) -> Result<(SystemParams, SweepSpec)> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text, path)
}

pub fn parse_config(text: &str, path: &Path) -> Result<(SystemParams, SweepSpec)> {
    let mut p = SystemParams::reference();
    let mut spec = SweepSpec::single(Variable::SnrDb, p.snr_db());
    let mut ranged: Option<(Variable, Range)> = None;
    let (mut a1_set, mut a2_set) = (false, false);

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let perr = |msg: String| Error::Parse {
            path: path.to_path_buf(),
            line: line_no,
            msg,
        };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| perr(format!("expected `key = value`, got `{line}`")))?;
        let key = key.trim().to_ascii_lowercase();
        let value = value.trim();
        let num = || -> Result<f64> {
            value
                .parse::<f64>()
                .map_err(|_| perr(format!("`{key}`: `{value}` is not a number")))
        };
        let int = || -> Result<u64> {
            value
                .parse::<u64>()
                .map_err(|_| perr(format!("`{key}`: `{value}` is not a non-negative integer")))
        };

        if let Ok(var) = key.parse::<Variable>() {
            if value.contains(':') {
                if let Some((prev, _)) = ranged {
                    return Err(perr(format!(
                        "only one sweep range is allowed (already sweeping `{prev}`)"
                    )));
                }
                let r = value.parse::<Range>().map_err(|e| perr(e.to_string()))?;
                ranged = Some((var, r));
            } else {
                var.apply(&mut p, num()?);
            }
            continue;
        }

        match key.as_str() {
            "a1" => {
                p.a1 = num()?;
                a1_set = true;
            }
            "a2" => {
                p.a2 = num()?;
                a2_set = true;
            }
            "n0" => p.n0 = num()?,
            "gamma" => p.gamma = num()?,
            "kappa_rf" => p.kappa[Node::Rf] = num()?,
            "kappa_rn" => p.kappa[Node::Rn] = num()?,
            "kappa_e" => p.kappa[Node::E] = num()?,
            "cheb_n" => p.cheb_n = int()? as usize,
            "series_v" => p.series_v = int()? as usize,
            "q_convention" => {
                p.q_convention = value.parse().map_err(|e: Error| perr(e.to_string()))?;
                spec.q_convention = p.q_convention;
            }
            "rn_ip_event" => {
                spec.rn_ip_event = match value {
                    "marginal" => crate::montecarlo::RnIpEvent::Marginal,
                    "chained" => crate::montecarlo::RnIpEvent::Chained,
                    _ => return Err(perr(format!("`{value}` is not `marginal` or `chained`"))),
                }
            }
            "trials" => spec.trials = int()?,
            "seed" => spec.master_seed = int()?,
            "targets" => spec.targets = list::<Target>(value).map_err(|e| perr(e.to_string()))?,
            "arms" => spec.arms = list::<Arm>(value).map_err(|e| perr(e.to_string()))?,
            "metrics" => spec.metrics = list::<Metric>(value).map_err(|e| perr(e.to_string()))?,
            "modes" => spec.modes = list(value).map_err(|e| perr(e.to_string()))?,
            _ => {
                if let Some(slot) = threshold_slot(&mut p, &key) {
                    *slot = num()?;
                } else if let Some(base) = key.strip_suffix("_db") {
                    let slot = threshold_slot(&mut p, base)
                        .ok_or_else(|| perr(format!("unknown key `{key}`")))?;
                    *slot = db_to_linear(num()?);
                } else if let Some(link) = key.strip_prefix("lambda_") {
                    let link: Link = link.parse().map_err(|e: Error| perr(e.to_string()))?;
                    p.lambda[link] = num()?;
                } else if let Some(link) = key.strip_prefix("sigma_e2_") {
                    let link: Link = link.parse().map_err(|e: Error| perr(e.to_string()))?;
                    p.sigma_e2[link] = num()?;
                } else {
                    return Err(perr(format!("unknown key `{key}`")));
                }
            }
        }
    }

    // A lone power coefficient fixes its partner.
    match (a1_set, a2_set) {
        (true, false) => p.a2 = 1.0 - p.a1,
        (false, true) => p.a1 = 1.0 - p.a2,
        _ => {}
    }
    p.q_convention = spec.q_convention;
    match ranged {
        Some((var, range)) => {
            spec.variable = var;
            spec.range = range;
        }
        None => spec.range = Range::point(spec.variable.current(&p)),
    }
    let report = p.validate();
    if !report.is_ok() {
        return Err(Error::InvalidParams(report.violations));
    }
    Ok((p, spec))
}

fn threshold_slot<'a>(p: &'a mut SystemParams, key: &str) -> Option<&'a mut f64> {
    Some(match key {
        "th1_rn" => &mut p.op.th1_rn,
        "th2_rn" => &mut p.op.th2_rn,
        "th2_rf" => &mut p.op.th2_rf,
        "thc_rn" => &mut p.op.thc_rn,
        "th1_e" => &mut p.ip.th1_e,
        "th2_e" => &mut p.ip.th2_e,
        "thc_e" => &mut p.ip.thc_e,
        _ => return None,
    })
}

fn list<T: std::str::FromStr<Err = Error>>(value: &str) -> Result<Vec<T>> {
    let items: Vec<T> = value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect::<Result<_>>()?;
    if items.is_empty() {
        return Err(Error::InvalidInput("list must not be empty".into()));
    }
    Ok(items)
}

/// Renders the reference defaults as a config file, one key per line.
pub fn default_config_text() -> String {
    let p = SystemParams::reference();
    let mut s = String::new();
    let mut kv = |k: &str, v: String| s.push_str(&format!("{k} = {v}\n"));
    kv("a1", p.a1.to_string());
    kv("a2", p.a2.to_string());
    kv("beta", p.beta.to_string());
    kv("epsilon", p.epsilon.to_string());
    kv("phi_j", p.phi_j.to_string());
    kv("varpi", p.varpi.to_string());
    kv("kappa", p.kappa[Node::Rf].to_string());
    kv("sigma_e2", p.sigma_e2[Link::St].to_string());
    for (l, v) in p.lambda.iter() {
        kv(&format!("lambda_{}", l.name()), v.to_string());
    }
    kv("n0", p.n0.to_string());
    kv("snr_db", p.snr_db().to_string());
    kv("th1_rn", p.op.th1_rn.to_string());
    kv("th2_rn", p.op.th2_rn.to_string());
    kv("th2_rf", p.op.th2_rf.to_string());
    kv("thc_rn", p.op.thc_rn.to_string());
    kv("th1_e", p.ip.th1_e.to_string());
    kv("th2_e", p.ip.th2_e.to_string());
    kv("thc_e", p.ip.thc_e.to_string());
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::PathBuf;

    fn parse(s: &str) -> Result<(SystemParams, SweepSpec)> {
        parse_config(s, &PathBuf::from("test.cfg"))
    }

    #[test]
    fn empty_is_reference_scenario() {
        let (p, spec) = parse("").unwrap();
        assert_eq!(p, SystemParams::reference());
        assert_eq!(spec.grid().len(), 1);
    }

    #[test]
    fn default_text_round_trips() {
        let (p, _) = parse(&default_config_text()).unwrap();
        let t = SystemParams::reference();
        assert_eq!(p.lambda, t.lambda);
        assert_eq!(p.op, t.op);
        assert!((p.gamma - t.gamma).abs() < 1e-9);
    }

    #[test]
    fn a1_override_fails_validation() {
        match parse("a1 = 0.7") {
            Err(Error::InvalidParams(v)) => assert!(v.iter().any(|m| m == "a1 < a2"), "{v:?}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn power_pair() {
        let (p, _) = parse("a2 = 0.75").unwrap();
        assert!((p.a1 - 0.25).abs() < 1e-15);
        assert!(matches!(
            parse("a1 = 0.3\na2 = 0.6"),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn snr_range() {
        let (_, spec) = parse("snr_db = 0:40:2\n").unwrap();
        assert_eq!(spec.variable, Variable::SnrDb);
        assert_eq!(spec.grid().len(), 21);
    }

    #[test]
    fn db_thresholds_and_links() {
        let (p, _) =
            parse("th2_rf_db = 0\nlambda_sb = 2.5 # tag link\nsigma_e2_te = 0.01\nkappa_e = 0.2")
                .unwrap();
        assert_eq!(p.op.th2_rf, 1.0);
        assert_eq!(p.lambda[Link::St], 2.5);
        assert_eq!(p.sigma_e2[Link::TE], 0.01);
        assert_eq!(p.kappa[Node::E], 0.2);
    }

    #[test]
    fn diagnostics_carry_line_numbers() {
        match parse("a1 = 0.2\n\nbogus = 3") {
            Err(Error::Parse { line, msg, .. }) => {
                assert_eq!(line, 3);
                assert!(msg.contains("bogus"));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse("beta = x"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(parse("just words"), Err(Error::Parse { .. })));
        assert!(matches!(
            parse("snr_db = 0:10:1\nkappa = 0:0.1:0.01"),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn lists() {
        let (_, spec) = parse("targets = Rf, T\narms = analytic,mc\nmodes = ideal").unwrap();
        assert_eq!(spec.targets, vec![Target::Rf, Target::T]);
        assert_eq!(spec.arms, vec![Arm::Analytic, Arm::Mc]);
        assert_eq!(spec.modes, vec![crate::analytic::Mode::Ideal]);
    }
}
