//! Command-line front end: config loading, sweeps, figure presets and export.
//!
//! ```text
//! abnoma validate <config>
//! abnoma sweep <config> [--preset fig2..fig6] [--out path] [--format csv|json]
//!              [--trials N] [--seed S] [--q-convention as_written|no_gamma]
//!              [--workers N] [--plot-script]
//! ```
//!
//! Exit status is 0 on success, 1 for invalid input and 2 for I/O failures.

pub mod config;
pub mod export;
pub mod sweep;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::error::Error;
use crate::params::QConvention;

pub use config::{default_config_text, load_config, parse_config};
pub use export::{export, from_json, plot_script, render, to_csv, to_json, Format, CSV_HEADER};
pub use sweep::{
    preset, run_panels, run_sweep, run_sweep_with, Arm, Metric, Panel, Range, SweepResult,
    SweepRow, SweepSpec, Variable, PRESETS,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_IO: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "abnoma",
    version,
    about = "Outage and intercept probabilities for ambient-backscatter NOMA"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Parse and validate a config file.
    Validate { config: PathBuf },
    /// Run the sweep described by a config file, or a figure preset.
    Sweep {
        config: PathBuf,
        #[arg(long)]
        preset: Option<String>,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: String,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long = "q-convention")]
        q_convention: Option<String>,
        #[arg(long)]
        workers: Option<usize>,
        /// Also write `<out>.gp`, a gnuplot script reading the CSV.
        #[arg(long = "plot-script")]
        plot_script: bool,
    },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io { .. } => EXIT_IO,
        _ => EXIT_INVALID,
    }
}

/// Runs the CLI on `args` (program name first) and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
        }
    };
    match dispatch(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            match &e {
                Error::InvalidParams(v) => {
                    eprintln!("error: invalid parameters:");
                    for m in v {
                        eprintln!("  - {m}");
                    }
                }
                _ => eprintln!("error: {e}"),
            }
            exit_code(&e)
        }
    }
}

fn dispatch(cli: Cli) -> crate::Result<()> {
    match cli.cmd {
        Cmd::Validate { config } => {
            let (p, spec) = load_config(&config)?;
            for w in p.validate().warnings {
                eprintln!("warning: {w}");
            }
            println!(
                "ok: {} grid point(s) over {}",
                spec.grid().len(),
                spec.variable
            );
            Ok(())
        }
        Cmd::Sweep {
            config,
            preset: preset_name,
            out,
            format,
            trials,
            seed,
            q_convention,
            workers,
            plot_script: want_script,
        } => {
            let format: Format = format.parse()?;
            let (p, mut spec) = load_config(&config)?;
            if let Some(t) = trials {
                spec.trials = t;
            }
            if let Some(s) = seed {
                spec.master_seed = s;
            }
            if let Some(q) = q_convention {
                spec.q_convention = q.parse::<QConvention>()?;
            }
            if want_script && (out.is_none() || format != Format::Csv) {
                return Err(Error::InvalidInput(
                    "--plot-script needs --out with csv format".into(),
                ));
            }
            let panels = match &preset_name {
                Some(name) => preset(name, &p, &spec)?,
                None => vec![Panel { spec, params: p }],
            };
            let result = run_panels(&panels, workers)?;
            let text = render(&result, format)?;
            match &out {
                Some(path) => {
                    std::fs::write(path, &text).map_err(|source| Error::Io {
                        path: path.clone(),
                        source,
                    })?;
                    if want_script {
                        let mut gp = path.clone().into_os_string();
                        gp.push(".gp");
                        let gp = PathBuf::from(gp);
                        let xlabel = panels[0].spec.variable.name();
                        export::write_plot_script(&result, path, xlabel, &gp)?;
                    }
                }
                None => {
                    let mut so = std::io::stdout().lock();
                    so.write_all(text.as_bytes()).map_err(|source| Error::Io {
                        path: PathBuf::from("<stdout>"),
                        source,
                    })?;
                }
            }
            Ok(())
        }
    }
}
