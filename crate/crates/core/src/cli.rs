//! Command-line front end.
//!
//! Exit codes: 0 when the run's verification passes, 2 when it fails,
//! 1 for usage or configuration errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::config::{validate, DemonConfig, Format, LandauerConfig, ScenarioConfig};
use crate::error::{Error, Result};
use crate::pipeline::{self, RunOutput};
use crate::scenarios::{DemonVariant, LandauerMode, PressureModel};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAIL: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "entropy-lab",
    version,
    about = "Entropy production in localization events"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// TOML run configuration
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override the configured seed
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for output files
    #[arg(long)]
    out: Option<PathBuf>,
    /// Which artifacts to write: csv, report, plots or all
    #[arg(long)]
    format: Option<Format>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evolve a packet through its schedule and absorption events
    Simulate {
        #[command(flatten)]
        common: Common,
    },
    /// One-bit piston box
    Landauer {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_mode)]
        mode: Option<LandauerMode>,
        /// Bath temperature
        #[arg(long = "T")]
        temperature: Option<f64>,
        /// Entropy production of the sensor-stopped piston
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Pressure or temperature demon
    Demon {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_variant)]
        variant: Option<DemonVariant>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        box_width: Option<f64>,
        #[arg(long)]
        aperture: Option<f64>,
        #[arg(long)]
        sigma_p: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, value_parser = parse_model)]
        model: Option<PressureModel>,
    },
    /// Re-audit an entropy time series written by `simulate`
    Verify {
        csv: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Check a configuration without running it
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

fn parse_mode(s: &str) -> std::result::Result<LandauerMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_variant(s: &str) -> std::result::Result<DemonVariant, String> {
    match s {
        "pressure" => Ok(DemonVariant::Pressure),
        "temperature" => Ok(DemonVariant::Temperature),
        other => Err(format!("unknown demon variant `{other}`")),
    }
}

fn parse_model(s: &str) -> std::result::Result<PressureModel, String> {
    match s {
        "closed-form" => Ok(PressureModel::ClosedForm),
        "grid" => Ok(PressureModel::Grid),
        other => Err(format!("unknown pressure model `{other}`")),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{text}");
            } else {
                let _ = write!(stdout, "{text}");
            }
            return code;
        }
    };
    match execute(cli.command, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn load(path: Option<&Path>) -> Result<ScenarioConfig> {
    match path {
        Some(p) => ScenarioConfig::load(p),
        None => Ok(ScenarioConfig::default()),
    }
}

fn check(config: &ScenarioConfig) -> Result<()> {
    let diags = validate(config);
    if diags.is_empty() {
        Ok(())
    } else {
        let lines: Vec<String> = diags.iter().map(|d| d.to_string()).collect();
        Err(Error::Usage(format!(
            "invalid configuration:\n  {}",
            lines.join("\n  ")
        )))
    }
}

fn execute(command: Command, stdout: &mut dyn Write) -> Result<i32> {
    let (output, common, config) = match command {
        Command::Validate { config } => {
            let cfg = ScenarioConfig::load(&config)?;
            let diags = validate(&cfg);
            for d in &diags {
                let _ = writeln!(stdout, "{d}");
            }
            if diags.is_empty() {
                let _ = writeln!(stdout, "ok: {} is valid", config.display());
                return Ok(EXIT_PASS);
            }
            return Ok(EXIT_USAGE);
        }
        Command::Simulate { common } => {
            let mut config = load(common.config.as_deref())?;
            let sim = config.simulate.as_mut().ok_or_else(|| {
                Error::Usage("simulate needs a config with a [simulate] section".into())
            })?;
            if let Some(seed) = common.seed {
                sim.seed = seed;
            }
            check(&config)?;
            let sim = config.simulate.as_ref().expect("checked above");
            (
                pipeline::simulate(sim, &config.units, sim.seed)?,
                common,
                config,
            )
        }
        Command::Landauer {
            common,
            mode,
            temperature,
            epsilon,
        } => {
            let mut config = load(common.config.as_deref())?;
            let base = config.landauer;
            let mode = mode.or(base.map(|l| l.mode)).ok_or_else(|| {
                Error::Usage("landauer needs --mode or a [landauer] section".into())
            })?;
            config.landauer = Some(LandauerConfig {
                mode,
                temperature: temperature.or(base.map(|l| l.temperature)).unwrap_or(1.0),
                epsilon: epsilon.or(base.and_then(|l| l.epsilon)),
            });
            check(&config)?;
            (
                pipeline::landauer(config.landauer.as_ref().expect("set above"))?,
                common,
                config,
            )
        }
        Command::Demon {
            common,
            variant,
            trials,
            box_width,
            aperture,
            sigma_p,
            samples,
            model,
        } => {
            let mut config = load(common.config.as_deref())?;
            let base = config.demon;
            let variant = variant
                .or(base.map(|d| d.variant))
                .ok_or_else(|| Error::Usage("demon needs --variant or a [demon] section".into()))?;
            let aperture = aperture
                .or(base.map(|d| d.aperture))
                .ok_or_else(|| Error::Usage("demon needs --aperture".into()))?;
            config.demon = Some(DemonConfig {
                variant,
                seed: common.seed.or(base.map(|d| d.seed)).unwrap_or(0),
                trials: trials.or(base.map(|d| d.trials)).unwrap_or(10_000),
                box_width: box_width.or(base.and_then(|d| d.box_width)),
                aperture,
                model: model.or(base.map(|d| d.model)).unwrap_or_default(),
                sigma_p: sigma_p.or(base.and_then(|d| d.sigma_p)),
                samples: samples.or(base.map(|d| d.samples)).unwrap_or(100_000),
            });
            check(&config)?;
            (
                pipeline::demon(config.demon.as_ref().expect("set above"), &config.units)?,
                common,
                config,
            )
        }
        Command::Verify { csv, common } => {
            let config = load(common.config.as_deref())?;
            check(&config)?;
            let text = std::fs::read_to_string(&csv)
                .map_err(|e| Error::Usage(format!("cannot read {}: {e}", csv.display())))?;
            let source = csv
                .file_name()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            (
                pipeline::verify_csv(&text, &source, &config.units)?,
                common,
                config,
            )
        }
    };
    finish(&output, &common, &config, stdout)
}

fn finish(
    output: &RunOutput,
    common: &Common,
    config: &ScenarioConfig,
    stdout: &mut dyn Write,
) -> Result<i32> {
    let _ = write!(stdout, "{}", output.report_text);
    let dir = common
        .out
        .clone()
        .or_else(|| config.output.directory.clone());
    if let Some(dir) = dir {
        let formats = match common.format {
            Some(f) => vec![f],
            None => config.output.formats.clone(),
        };
        for path in output.write(&dir, &formats)? {
            let _ = writeln!(stdout, "wrote {}", path.display());
        }
    }
    Ok(if output.pass { EXIT_PASS } else { EXIT_FAIL })
}
