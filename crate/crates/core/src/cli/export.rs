use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::cli::sweep::SweepResult;
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "var,target,arm,metric,value,std_err";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::InvalidInput(format!("unknown format `{s}`"))),
        }
    }
}

/// Twelve significant digits.
fn num(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn to_csv(r: &SweepResult) -> String {
    let mut s = String::with_capacity(64 * (r.rows.len() + 1));
    s.push_str(CSV_HEADER);
    s.push('\n');
    for row in &r.rows {
        let se = row.std_err.map(num).unwrap_or_default();
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            num(row.var),
            row.target,
            row.arm,
            row.metric,
            num(row.value),
            se
        );
    }
    s
}

pub fn to_json(r: &SweepResult) -> Result<String> {
    Ok(serde_json::to_string_pretty(r)? + "\n")
}

pub fn from_json(s: &str) -> Result<SweepResult> {
    Ok(serde_json::from_str(s)?)
}

pub fn render(r: &SweepResult, format: Format) -> Result<String> {
    match format {
        Format::Csv => Ok(to_csv(r)),
        Format::Json => to_json(r),
    }
}

pub fn export(r: &SweepResult, format: Format, path: &Path) -> Result<()> {
    write_file(path, &render(r, format)?)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Gnuplot script drawing one line per (target, arm, metric) series of the
/// CSV at `csv_path`, on a log y axis.
pub fn plot_script(r: &SweepResult, csv_path: &Path, xlabel: &str) -> String {
    let mut series: Vec<(String, String, String)> = Vec::new();
    for row in &r.rows {
        let key = (
            row.target.to_string(),
            row.arm.to_string(),
            row.metric.clone(),
        );
        if !series.contains(&key) {
            series.push(key);
        }
    }
    let csv = csv_path.display();
    let mut s = String::new();
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set logscale y");
    let _ = writeln!(s, "set xlabel '{xlabel}'");
    let _ = writeln!(s, "set ylabel 'probability'");
    let _ = writeln!(s, "set key outside right");
    let plots: Vec<String> = series
        .iter()
        .map(|(t, a, m)| {
            let style = if a == "mc" { "points" } else { "lines" };
            format!(
                "  \"< grep ',{t},{a},{m},' '{csv}'\" using 1:5 with {style} title '{t} {a} {m}'"
            )
        })
        .collect();
    let _ = writeln!(s, "plot \\\n{}", plots.join(", \\\n"));
    s
}

pub fn write_plot_script(r: &SweepResult, csv_path: &Path, xlabel: &str, out: &Path) -> Result<()> {
    write_file(out, &plot_script(r, csv_path, xlabel))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::sweep::{Arm, SweepRow};
    use crate::params::Target;

    fn sample() -> SweepResult {
        SweepResult {
            rows: vec![
                SweepRow {
                    var: 0.0,
                    target: Target::Rf,
                    arm: Arm::Analytic,
                    metric: "op:nonideal".into(),
                    value: 0.123456789012345,
                    std_err: None,
                },
                SweepRow {
                    var: 2.0,
                    target: Target::T,
                    arm: Arm::Mc,
                    metric: "ip:ideal".into(),
                    value: 1.0 / 3.0,
                    std_err: Some(4.7e-4),
                },
            ],
        }
    }

    #[test]
    fn csv_layout() {
        let csv = to_csv(&sample());
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(
            lines[1],
            "0.00000000000e0,Rf,analytic,op:nonideal,1.23456789012e-1,"
        );
        assert_eq!(
            lines[2],
            "2.00000000000e0,T,mc,ip:ideal,3.33333333333e-1,4.70000000000e-4"
        );
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        assert_eq!(from_json(&to_json(&r).unwrap()).unwrap(), r);
    }

    #[test]
    fn plot_script_references_csv() {
        let s = plot_script(&sample(), Path::new("out.csv"), "snr_db");
        assert!(s.contains("'out.csv'"));
        assert_eq!(s.matches("using 1:5").count(), 2);
    }

    #[test]
    fn io_error_carries_path() {
        let bad = Path::new("/nonexistent-dir/x.csv");
        match export(&sample(), Format::Csv, bad) {
            Err(Error::Io { path, .. }) => assert_eq!(path, bad),
            other => panic!("{other:?}"),
        }
    }
}
