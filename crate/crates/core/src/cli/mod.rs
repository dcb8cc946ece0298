//! Command-line front end.
//!
//! Exit codes: 0 success, 1 configuration or usage error, 2 numerical or
//! verification failure. Diagnostics go to stderr prefixed with `config:`,
//! `numeric:` or `verify:`.

pub mod config;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::design::ScannerDesign;
use crate::materials::MaterialRegistry;
use crate::oracle::DEFAULT_NODES;
use crate::sweep::{self, Objective, SweepAxis, SweepSpec};
use crate::verify;

pub use config::{parse_config, ConfigDoc, ConfigError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "piezoscan", version, about = "Static model of a piezoelectric multimorph micro-scanner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one design: print a summary line and write a one-row CSV.
    Model {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "model.csv")]
        out: PathBuf,
    },
    /// Write the full-device deflection profile.
    Profile {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 401)]
        samples: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sweep one parameter (values in SI units) and write one row per point.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// beam_length, beam_width, substrate_thickness, piezo_thickness, mirror_side or voltage
        #[arg(long)]
        axis: String,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        out: PathBuf,
        /// Also refine the best point for `tilt` or `y_max`.
        #[arg(long)]
        optimize: Option<String>,
    },
    /// Evaluate the three published scanners (850, 600, 500 µm beams).
    Table1 {
        #[arg(long)]
        out: PathBuf,
        /// Take materials, cross-section, mirror and voltage from this config
        /// instead of the built-in reference.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Run the closed-form and oracle verification suite.
    Verify {
        #[arg(long, default_value_t = DEFAULT_NODES)]
        nodes: usize,
    },
}

enum Failure {
    Config(String),
    Numeric(String),
    Verify(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<crate::Error> for Failure {
    fn from(e: crate::Error) -> Self {
        Failure::Numeric(e.to_string())
    }
}

fn load_design(path: &Path) -> Result<ScannerDesign, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    let doc = parse_config(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    Ok(doc.resolve(&MaterialRegistry::builtin())?)
}

fn write_out(path: &Path, contents: &str) -> Result<(), Failure> {
    output::write_atomic(path, contents)
        .map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display())))
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<(), Failure> {
    let say = |out: &mut dyn Write, line: String| {
        // a closed stdout is not worth failing the computation for
        let _ = writeln!(out, "{line}");
    };
    match cmd {
        Command::Model { config, out: path } => {
            let sol = load_design(&config)?.solve(2)?;
            write_out(&path, &output::model_csv(&sol))?;
            say(out, output::model_summary(&sol));
        }
        Command::Profile {
            config,
            samples,
            out: path,
        } => {
            let sol = load_design(&config)?.solve(samples)?;
            write_out(&path, &output::profile_csv(&sol))?;
            say(out, format!("wrote {} rows to {}", sol.profile.len(), path.display()));
        }
        Command::Sweep {
            config,
            axis,
            from,
            to,
            steps,
            out: path,
            optimize,
        } => {
            let axis: SweepAxis = axis.parse().map_err(|e: crate::Error| Failure::Config(e.to_string()))?;
            let objective = optimize
                .map(|o| o.parse::<Objective>())
                .transpose()
                .map_err(|e| Failure::Config(e.to_string()))?;
            let spec = SweepSpec {
                base: load_design(&config)?,
                axis,
                from,
                to,
                steps,
            };
            spec.validate().map_err(|e| Failure::Config(e.to_string()))?;
            let records = sweep::run_sweep(&spec)?;
            write_out(&path, &output::sweep_csv(axis.name(), &records))?;
            let failed = records.iter().filter(|r| r.result.is_err()).count();
            say(
                out,
                format!("wrote {} rows ({failed} failed) to {}", records.len(), path.display()),
            );
            if let Some(objective) = objective {
                let best = sweep::optimize_1d(&spec, objective)?;
                say(
                    out,
                    format!(
                        "best {}={} objective={}",
                        axis.name(),
                        output::sig9(best.value),
                        output::sig9(best.objective)
                    ),
                );
            }
        }
        Command::Table1 { out: path, config } => {
            let base = match config {
                Some(c) => load_design(&c)?,
                None => ScannerDesign::reference(850e-6),
            };
            let rows = sweep::table1(&base);
            let records: Vec<_> = rows.iter().map(|r| r.record.clone()).collect();
            write_out(&path, &output::sweep_csv(SweepAxis::BeamLength.name(), &records))?;
            for row in &rows {
                match &row.record.result {
                    Ok(r) => say(
                        out,
                        format!(
                            "{}: phi_deg={} (published {}) y_max_um={} (published {})",
                            row.label,
                            output::sig9(r.tilt_deg),
                            row.published_tilt_deg,
                            output::sig9(r.y_max_m * 1e6),
                            row.published_y_max_m * 1e6
                        ),
                    ),
                    Err(e) => return Err(Failure::Numeric(format!("scanner {}: {e}", row.label))),
                }
            }
        }
        Command::Verify { nodes } => {
            let report = verify::run(nodes)?;
            let _ = write!(out, "{report}");
            if !report.passed() {
                let names: Vec<_> = report.failures().map(|c| c.name).collect();
                return Err(Failure::Verify(format!("tolerance exceeded: {}", names.join(", "))));
            }
        }
    }
    Ok(())
}

/// Runs the CLI with explicit argument list and output streams; returns the
/// process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "config: {e}");
                    EXIT_CONFIG
                }
            };
        }
    };

    match execute(cli.command, stdout) {
        Ok(()) => EXIT_OK,
        Err(Failure::Config(msg)) => {
            let _ = writeln!(stderr, "config: {msg}");
            EXIT_CONFIG
        }
        Err(Failure::Numeric(msg)) => {
            let _ = writeln!(stderr, "numeric: {msg}");
            EXIT_NUMERIC
        }
        Err(Failure::Verify(msg)) => {
            let _ = writeln!(stderr, "verify: {msg}");
            EXIT_NUMERIC
        }
    }
}
