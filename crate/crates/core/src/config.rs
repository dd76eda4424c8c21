//! Run configuration: a TOML document with one section per command.
//!
//! ```toml
//! [units]            # optional, natural units by default
//! hbar = 1.0
//! k_B = 1.0
//! c = 1.0
//!
//! [output]           # optional
//! directory = "out"
//! formats = ["all"]  # any of csv, report, plots, all
//!
//! [simulate]
//! seed = 7
//! schedule = { start = 0.0, end = 10.0, steps = 50 }   # or an explicit list of times
//! grid = { x0 = -64.0, dx = 0.0625, N = 2048 }
//! packet = { mu_x = 0.0, p0 = 0.0, sigma0 = 2.0, mass = 1000.0 }
//!
//! [[simulate.events]]
//! t1 = 5.0
//! photon_energy = 20.0
//! sigma_loc = 0.2          # or preset = "compton"
//! T0 = 1.0
//!
//! [landauer]
//! mode = "ontic-reset"
//! T = 1.0
//!
//! [demon]
//! variant = "pressure"     # or "temperature"
//! trials = 10000
//! box_width = 4.0
//! aperture = 1.0
//! ```

use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::analytic::GaussianPacket;
use crate::error::{Error, Result};
use crate::events::{Direction, LocalizationWidth, Photon};
use crate::evolution::validate_schedule;
use crate::grid::{GridSpec, BOUNDARY_DECAY, SIGMA_WINDOW};
use crate::scenarios::{DemonVariant, LandauerMode, PressureModel};
use crate::units::UnitSystem;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub units: UnitSystem,
    #[serde(default)]
    pub output: OutputConfig,
    pub simulate: Option<SimulateConfig>,
    pub landauer: Option<LandauerConfig>,
    pub demon: Option<DemonConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Hash)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Report,
    Plots,
    All,
}

impl Format {
    pub fn includes(formats: &[Format], wanted: Format) -> bool {
        formats.iter().any(|&f| f == wanted || f == Format::All)
    }
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "report" => Ok(Format::Report),
            "plots" => Ok(Format::Plots),
            "all" => Ok(Format::All),
            other => Err(Error::Usage(format!("unknown format `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub directory: Option<PathBuf>,
    #[serde(default = "all_formats")]
    pub formats: Vec<Format>,
}

fn all_formats() -> Vec<Format> {
    vec![Format::All]
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            directory: None,
            formats: all_formats(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    #[serde(default)]
    pub seed: u64,
    pub grid: GridSpec,
    pub packet: PacketConfig,
    pub schedule: Schedule,
    #[serde(default)]
    pub events: Vec<EventConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PacketConfig {
    #[serde(default)]
    pub mu_x: f64,
    #[serde(default)]
    pub p0: f64,
    pub sigma0: f64,
    #[serde(default = "one")]
    pub mass: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Schedule {
    Times(Vec<f64>),
    Uniform(UniformSchedule),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniformSchedule {
    #[serde(default)]
    pub start: f64,
    pub end: f64,
    /// Number of intervals; the schedule has `steps + 1` times.
    pub steps: usize,
}

impl Schedule {
    pub fn times(&self) -> Vec<f64> {
        match self {
            Schedule::Times(t) => t.clone(),
            Schedule::Uniform(u) => {
                if u.steps == 0 {
                    return vec![u.start];
                }
                (0..=u.steps)
                    .map(|i| u.start + (u.end - u.start) * i as f64 / u.steps as f64)
                    .collect()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WidthPreset {
    Compton,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventConfig {
    pub t1: f64,
    pub photon_energy: f64,
    #[serde(default)]
    pub direction: Direction,
    pub sigma_loc: Option<f64>,
    pub preset: Option<WidthPreset>,
    #[serde(default, rename = "T0", alias = "t0")]
    pub environment_temperature: f64,
}

impl EventConfig {
    pub fn width(&self) -> Result<LocalizationWidth> {
        match (self.sigma_loc, self.preset) {
            (Some(s), None) => Ok(LocalizationWidth::Explicit(s)),
            (None, Some(WidthPreset::Compton)) => Ok(LocalizationWidth::ComptonPreset),
            (None, None) => Err(Error::Usage("event needs `sigma_loc` or `preset`".into())),
            (Some(_), Some(_)) => Err(Error::Usage(
                "event takes either `sigma_loc` or `preset`, not both".into(),
            )),
        }
    }

    pub fn photon(&self, units: &UnitSystem) -> Result<Photon> {
        Photon::new(self.photon_energy, units.c, self.direction)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LandauerConfig {
    pub mode: LandauerMode,
    #[serde(rename = "T", alias = "t", default = "one")]
    pub temperature: f64,
    pub epsilon: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DemonConfig {
    pub variant: DemonVariant,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    pub box_width: Option<f64>,
    pub aperture: f64,
    #[serde(default)]
    pub model: PressureModel,
    pub sigma_p: Option<f64>,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_trials() -> usize {
    10_000
}

fn default_samples() -> usize {
    100_000
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub field: String,
    pub message: String,
}

impl Diagnostic {
    fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

impl ScenarioConfig {
    /// Parses a TOML document. Errors carry the line and column of the offending key.
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Usage(format!("config: {e}")))
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| Error::Usage(format!("{}: {e}", path.display())))
    }
}

/// Structural and physical checks without running anything.
pub fn validate(config: &ScenarioConfig) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let u = &config.units;
    for (name, v) in [
        ("units.hbar", u.hbar),
        ("units.k_B", u.k_b),
        ("units.c", u.c),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            out.push(Diagnostic::new(name, format!("must be positive, got {v}")));
        }
    }
    if let Some(sim) = &config.simulate {
        validate_simulate(sim, u, &mut out);
    }
    if let Some(l) = &config.landauer {
        if !(l.temperature > 0.0) {
            out.push(Diagnostic::new(
                "landauer.T",
                format!("must be positive, got {}", l.temperature),
            ));
        }
        match (l.mode, l.epsilon) {
            (LandauerMode::MeasuredWithSensor, None) => out.push(Diagnostic::new(
                "landauer.epsilon",
                "required in measured-with-sensor mode",
            )),
            (_, Some(e)) if !(e > 0.0) => out.push(Diagnostic::new(
                "landauer.epsilon",
                format!("must be positive, got {e}"),
            )),
            _ => {}
        }
    }
    if let Some(d) = &config.demon {
        validate_demon(d, &mut out);
    }
    out
}

fn validate_demon(d: &DemonConfig, out: &mut Vec<Diagnostic>) {
    if !(d.aperture > 0.0) {
        out.push(Diagnostic::new(
            "demon.aperture",
            format!("must be positive, got {}", d.aperture),
        ));
    }
    match d.variant {
        DemonVariant::Pressure => {
            match d.box_width {
                None => out.push(Diagnostic::new(
                    "demon.box_width",
                    "required for the pressure demon",
                )),
                Some(l) if !(l > 0.0) => out.push(Diagnostic::new(
                    "demon.box_width",
                    format!("must be positive, got {l}"),
                )),
                Some(l) if d.aperture > l / 2.0 => out.push(Diagnostic::new(
                    "demon.aperture",
                    format!(
                        "must be at most box_width / 2 = {}, got {}",
                        l / 2.0,
                        d.aperture
                    ),
                )),
                Some(_) => {}
            }
            if d.trials == 0 {
                out.push(Diagnostic::new("demon.trials", "must be at least 1"));
            }
        }
        DemonVariant::Temperature => {
            match d.sigma_p {
                None => out.push(Diagnostic::new(
                    "demon.sigma_p",
                    "required for the temperature demon",
                )),
                Some(s) if !(s > 0.0) => out.push(Diagnostic::new(
                    "demon.sigma_p",
                    format!("must be positive, got {s}"),
                )),
                Some(_) => {}
            }
            if d.samples == 0 {
                out.push(Diagnostic::new("demon.samples", "must be at least 1"));
            }
        }
    }
}

/// Half-width around a Gaussian mean that a grid must cover: six standard
/// deviations, widened if needed so the edge density stays below the decay
/// threshold.
pub fn required_half_width(sigma: f64) -> f64 {
    let peak = 1.0 / ((2.0 * std::f64::consts::PI).sqrt() * sigma);
    let target = 0.5 * BOUNDARY_DECAY;
    let decay = if peak > target {
        sigma * (2.0 * (peak / target).ln()).sqrt()
    } else {
        0.0
    };
    (SIGMA_WINDOW * sigma).max(decay)
}

fn validate_simulate(sim: &SimulateConfig, units: &UnitSystem, out: &mut Vec<Diagnostic>) {
    let before = out.len();
    if let Err(e) = sim.grid.validate() {
        out.push(Diagnostic::new("simulate.grid", e.to_string()));
    }
    let p = &sim.packet;
    if !(p.sigma0 > 0.0 && p.sigma0.is_finite()) {
        out.push(Diagnostic::new(
            "simulate.packet.sigma0",
            format!("must be positive, got {}", p.sigma0),
        ));
    }
    if !(p.mass > 0.0 && p.mass.is_finite()) {
        out.push(Diagnostic::new(
            "simulate.packet.mass",
            format!("must be positive, got {}", p.mass),
        ));
    }
    let times = sim.schedule.times();
    if let Err(e) = validate_schedule(&times) {
        out.push(Diagnostic::new("simulate.schedule", e.to_string()));
    }
    let (first, last) = (
        times.first().copied().unwrap_or(0.0),
        times.last().copied().unwrap_or(0.0),
    );
    let mut seen = Vec::new();
    for (i, ev) in sim.events.iter().enumerate() {
        let field = |f: &str| format!("simulate.events[{i}].{f}");
        if !(ev.t1 > first && ev.t1 <= last) {
            out.push(Diagnostic::new(
                field("t1"),
                format!(
                    "event outside schedule: t1 = {} not in ({first}, {last}]",
                    ev.t1
                ),
            ));
        }
        if seen.contains(&ev.t1.to_bits()) {
            out.push(Diagnostic::new(
                field("t1"),
                "at most one absorption per timestamp",
            ));
        }
        seen.push(ev.t1.to_bits());
        if !(ev.photon_energy > 0.0) {
            out.push(Diagnostic::new(
                field("photon_energy"),
                format!("must be positive, got {}", ev.photon_energy),
            ));
        }
        if !(ev.environment_temperature >= 0.0) {
            out.push(Diagnostic::new(field("T0"), "must be non-negative"));
        }
        match ev.width() {
            Err(e) => out.push(Diagnostic::new(field("sigma_loc"), e.to_string())),
            Ok(width) => {
                if let Ok(photon) = ev.photon(units) {
                    let s = width.resolve(&photon, units.hbar);
                    if !(s > 0.0) {
                        out.push(Diagnostic::new(
                            field("sigma_loc"),
                            format!("must be positive, got {s}"),
                        ));
                    } else if s < 4.0 * sim.grid.dx {
                        out.push(Diagnostic::new(
                            field("sigma_loc"),
                            format!(
                                "{s} is below the resolution limit 4 dx = {}",
                                4.0 * sim.grid.dx
                            ),
                        ));
                    }
                }
            }
        }
    }
    if out.len() == before {
        grid_adequacy(sim, units, &times, out);
    }
}

/// Follows the range of possible packet means and the packet width through
/// the schedule and checks that the grid holds every state.
fn grid_adequacy(
    sim: &SimulateConfig,
    units: &UnitSystem,
    times: &[f64],
    out: &mut Vec<Diagnostic>,
) {
    let spec = sim.grid;
    let mut events: Vec<&EventConfig> = sim.events.iter().collect();
    events.sort_by(|a, b| a.t1.total_cmp(&b.t1));

    let p = &sim.packet;
    let Ok(mut packet) = GaussianPacket::new(0.0, p.p0, p.sigma0, p.mass, units.hbar) else {
        return;
    };
    let (mut lo, mut hi) = (p.mu_x, p.mu_x);
    let mut now = 0.0;
    let p_max = spec.p_max(units.hbar) - spec.dp(units.hbar);

    let check = |t: f64, pk: &GaussianPacket, lo: f64, hi: f64, out: &mut Vec<Diagnostic>| {
        let half = required_half_width(pk.sigma_x());
        if lo - half < spec.x0 || hi + half > spec.x_end() {
            out.push(Diagnostic::new(
                "simulate.grid",
                format!(
                    "grid [{}, {}) too narrow at t = {t}: packet needs [{}, {}]",
                    spec.x0,
                    spec.x_end(),
                    lo - half,
                    hi + half
                ),
            ));
            return false;
        }
        if required_half_width(pk.sigma_p()) > p_max {
            out.push(Diagnostic::new(
                "simulate.grid.dx",
                format!(
                    "momentum window +-{p_max} cannot hold momentum spread {} at t = {t}",
                    pk.sigma_p()
                ),
            ));
            return false;
        }
        true
    };

    let advance = |packet: &GaussianPacket, lo: f64, hi: f64, dt: f64| {
        let shift = packet.p0() / packet.mass() * dt;
        (packet.evolve(dt).expect("dt >= 0"), lo + shift, hi + shift)
    };

    if !check(0.0, &packet, lo, hi, out) {
        return;
    }
    let end = times.last().copied().unwrap_or(0.0);
    for ev in events {
        let (pk, l, h) = advance(&packet, lo, hi, ev.t1 - now);
        if !check(ev.t1, &pk, l, h, out) {
            return;
        }
        // the collapse site can land anywhere the pre-event packet has support
        let reach = SIGMA_WINDOW * pk.sigma_x();
        lo = l - reach;
        hi = h + reach;
        let Ok(photon) = ev.photon(units) else { return };
        let Ok(width) = ev.width() else { return };
        let sigma_loc = width.resolve(&photon, units.hbar);
        let Ok(next) = GaussianPacket::new(
            0.0,
            pk.p0() + photon.momentum(),
            sigma_loc,
            p.mass,
            units.hbar,
        ) else {
            return;
        };
        packet = next;
        now = ev.t1;
    }
    let (pk, l, h) = advance(&packet, lo, hi, end - now);
    check(end, &pk, l, h, out);
}

#[cfg(test)]
mod tests {
    use super::*;

    const VALID: &str = r#"
        [simulate]
        seed = 7
        schedule = { start = 0.0, end = 4.0, steps = 8 }
        grid = { x0 = -32.0, dx = 0.03125, N = 2048 }
        packet = { sigma0 = 2.0, mass = 1000.0 }

        [[simulate.events]]
        t1 = 2.0
        photon_energy = 20.0
        sigma_loc = 0.2
        T0 = 1.0
    "#;

    #[test]
    fn valid_config_has_no_diagnostics() {
        let cfg = ScenarioConfig::from_toml(VALID).unwrap();
        assert_eq!(cfg.units, UnitSystem::NATURAL);
        assert_eq!(validate(&cfg), vec![]);
        assert_eq!(cfg.simulate.unwrap().schedule.times().len(), 9);
    }

    #[test]
    fn negative_sigma_is_named() {
        let cfg =
            ScenarioConfig::from_toml(&VALID.replace("sigma0 = 2.0", "sigma0 = -1.0")).unwrap();
        let d = validate(&cfg);
        assert!(
            d.iter()
                .any(|d| d.field == "simulate.packet.sigma0" && d.message.contains("positive")),
            "{d:?}"
        );
    }

    #[test]
    fn late_event_is_outside_schedule() {
        let cfg = ScenarioConfig::from_toml(&VALID.replace("t1 = 2.0", "t1 = 9.0")).unwrap();
        let d = validate(&cfg);
        assert!(
            d.iter()
                .any(|d| d.message.contains("event outside schedule")),
            "{d:?}"
        );
    }

    #[test]
    fn unknown_key_reports_line() {
        let text = VALID.replace("seed = 7", "seed = 7\n        colour = 3");
        match ScenarioConfig::from_toml(&text) {
            Err(Error::Usage(msg)) => {
                assert!(msg.contains("colour"), "{msg}");
                assert!(msg.contains("line 4"), "{msg}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn narrow_grid_is_caught_before_running() {
        let cfg = ScenarioConfig::from_toml(
            &VALID.replace("x0 = -32.0, dx = 0.03125", "x0 = -8.0, dx = 0.0078125"),
        )
        .unwrap();
        let d = validate(&cfg);
        assert!(
            d.iter()
                .any(|d| d.field == "simulate.grid" && d.message.contains("too narrow")),
            "{d:?}"
        );
    }

    #[test]
    fn light_packet_spreading_is_caught() {
        let cfg =
            ScenarioConfig::from_toml(&VALID.replace("mass = 1000.0", "mass = 0.01")).unwrap();
        let d = validate(&cfg);
        assert!(d.iter().any(|d| d.message.contains("too narrow")), "{d:?}");
    }

    #[test]
    fn width_choice_is_exclusive() {
        let cfg = ScenarioConfig::from_toml(
            &VALID.replace("sigma_loc = 0.2", "sigma_loc = 0.2\n preset = \"compton\""),
        )
        .unwrap();
        assert!(!validate(&cfg).is_empty());
        let cfg =
            ScenarioConfig::from_toml(&VALID.replace("sigma_loc = 0.2", "preset = \"compton\""))
                .unwrap();
        // hbar c / 2E = 0.025 < 4 dx
        assert!(validate(&cfg)
            .iter()
            .any(|d| d.message.contains("resolution")));
    }

    #[test]
    fn demon_sections() {
        let cfg = ScenarioConfig::from_toml(
            "[demon]\nvariant = \"pressure\"\nbox_width = 4.0\naperture = 3.0\n",
        )
        .unwrap();
        assert!(validate(&cfg).iter().any(|d| d.field == "demon.aperture"));
        let cfg = ScenarioConfig::from_toml("[demon]\nvariant = \"temperature\"\naperture = 1.0\n")
            .unwrap();
        assert!(validate(&cfg).iter().any(|d| d.field == "demon.sigma_p"));
    }

    #[test]
    fn landauer_section() {
        let cfg =
            ScenarioConfig::from_toml("[landauer]\nmode = \"measured-with-sensor\"\nT = 1.0\n")
                .unwrap();
        assert!(validate(&cfg).iter().any(|d| d.field == "landauer.epsilon"));
        let cfg = ScenarioConfig::from_toml("[landauer]\nmode = \"ontic-reset\"\n").unwrap();
        assert!(validate(&cfg).is_empty());
    }

    #[test]
    fn explicit_schedule_list() {
        let cfg = ScenarioConfig::from_toml(&VALID.replace(
            "schedule = { start = 0.0, end = 4.0, steps = 8 }",
            "schedule = [0.0, 1.0, 3.0, 2.0]",
        ))
        .unwrap();
        assert!(validate(&cfg)
            .iter()
            .any(|d| d.field == "simulate.schedule"));
    }
}
