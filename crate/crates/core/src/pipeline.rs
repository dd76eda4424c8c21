//! Executes configured runs and renders their artifacts in memory.
//!
//! Every artifact is a pure function of the configuration and seed, so two
//! runs with the same inputs produce byte-identical files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::analytic::GaussianPacket;
use crate::config::{DemonConfig, Format, LandauerConfig, SimulateConfig};
use crate::error::{Error, Result};
use crate::events::{absorb, AbsorptionEvent, AbsorptionRequest, PacketMeta};
use crate::evolution::{free_propagate, validate_schedule};
use crate::grid::GridWavefunction;
use crate::ledger::{fmt9, EntropyLedger, VerificationReport};
use crate::plot::render_entropy_svg;
use crate::rng::SimRng;
use crate::scenarios::{
    landauer_box, pressure_demon, temperature_demon, DemonReport, DemonVariant, LandauerOutcome,
};
use crate::units::UnitSystem;

pub const CSV_FILE: &str = "entropy.csv";
pub const TRIALS_FILE: &str = "trials.csv";
pub const REPORT_TEXT_FILE: &str = "report.txt";
pub const REPORT_JSON_FILE: &str = "report.json";
pub const PLOT_FILE: &str = "entropy.svg";

/// Rendered artifacts of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub run_id: String,
    pub csv: Option<(&'static str, String)>,
    pub report_text: String,
    pub report_json: String,
    pub plot_svg: Option<String>,
    pub pass: bool,
}

impl RunOutput {
    /// Writes the requested artifacts into `dir` (created if missing).
    pub fn write(&self, dir: &Path, formats: &[Format]) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)
            .map_err(|e| Error::Usage(format!("cannot create {}: {e}", dir.display())))?;
        let mut files: Vec<(PathBuf, &str)> = Vec::new();
        if Format::includes(formats, Format::Csv) {
            if let Some((name, csv)) = &self.csv {
                files.push((dir.join(name), csv));
            }
        }
        if Format::includes(formats, Format::Report) {
            files.push((dir.join(REPORT_TEXT_FILE), &self.report_text));
            files.push((dir.join(REPORT_JSON_FILE), &self.report_json));
        }
        if Format::includes(formats, Format::Plots) {
            if let Some(svg) = &self.plot_svg {
                files.push((dir.join(PLOT_FILE), svg));
            }
        }
        files
            .into_iter()
            .map(|(path, body)| {
                std::fs::write(&path, body)
                    .map_err(|e| Error::Usage(format!("cannot write {}: {e}", path.display())))?;
                Ok(path)
            })
            .collect()
    }
}

/// A finished simulation: the ledger plus the events that were committed.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub ledger: EntropyLedger,
    pub events: Vec<AbsorptionEvent>,
    pub report: VerificationReport,
}

/// Free evolution from the configured packet, with absorptions spliced in
/// at their times. The post-event state is recorded at `t1`.
pub fn run_simulation(cfg: &SimulateConfig, units: &UnitSystem, seed: u64) -> Result<Simulation> {
    let times = cfg.schedule.times();
    validate_schedule(&times)?;
    let p = &cfg.packet;
    let packet = GaussianPacket::new(p.mu_x, p.p0, p.sigma0, p.mass, units.hbar)?;
    let mut state = GridWavefunction::from_gaussian(&packet, cfg.grid)?.with_momentum_center(p.p0);
    let mut meta = PacketMeta {
        mass: p.mass,
        p0: p.p0,
    };

    let mut events: Vec<(usize, _)> = cfg.events.iter().enumerate().collect();
    events.sort_by(|a, b| a.1.t1.total_cmp(&b.1.t1));
    let mut pending = events.into_iter().peekable();

    let mut ledger = EntropyLedger::new(format!("simulate-seed-{seed}"), seed, *units);
    let mut committed = Vec::new();
    let mut now = 0.0;

    for &t in &times {
        while let Some((index, ev)) = pending.next_if(|(_, ev)| ev.t1 <= t) {
            state = step(&state, meta.mass, ev.t1 - now, ev.t1)?;
            now = ev.t1;
            let request = AbsorptionRequest {
                photon: ev.photon(units)?,
                width: ev.width()?,
                t1: ev.t1,
                environment_temperature: ev.environment_temperature,
            };
            let mut rng = SimRng::child(seed, index as u64);
            let out = absorb(&state, meta, &request, units.k_b, &mut rng)?;
            meta.p0 += request.photon.momentum();
            state = out.state_after;
            committed.push(out.event.clone());
            ledger.record_absorption(&state, out.event)?;
        }
        if ledger.entries().last().is_some_and(|e| e.t >= t) {
            continue;
        }
        state = step(&state, meta.mass, t - now, t)?;
        now = t;
        ledger.record(t, &state)?;
    }
    if let Some((_, ev)) = pending.next() {
        return Err(Error::Usage(format!(
            "event at t1 = {} lies after the last scheduled time",
            ev.t1
        )));
    }

    let report = ledger.verify();
    Ok(Simulation {
        ledger,
        events: committed,
        report,
    })
}

fn step(state: &GridWavefunction, mass: f64, dt: f64, t: f64) -> Result<GridWavefunction> {
    free_propagate(state, mass, dt).map_err(|e| match e {
        crate::Error::GridOverflow { boundary, .. } => crate::Error::GridOverflow { t, boundary },
        other => other,
    })
}

#[derive(Serialize)]
struct SimulationDocument<'a> {
    command: &'static str,
    verification: &'a VerificationReport,
    absorptions: &'a [AbsorptionEvent],
}

pub fn simulate(cfg: &SimulateConfig, units: &UnitSystem, seed: u64) -> Result<RunOutput> {
    let sim = run_simulation(cfg, units, seed)?;
    let doc = SimulationDocument {
        command: "simulate",
        verification: &sim.report,
        absorptions: &sim.events,
    };
    let mut text = String::from("command: simulate\n");
    text.push_str(&sim.report.render_text());
    for (i, ev) in sim.events.iter().enumerate() {
        if i == 0 {
            text.push('\n');
        }
        let _ = writeln!(
            text,
            "absorption {i}: t1 = {}, x1 = {}, sigma_loc = {} ({}), photon E = {}, p = {}, delta_S = {}, delta_S (momentum route) = {}{}",
            fmt9(ev.t1),
            fmt9(ev.x1),
            fmt9(ev.sigma_loc),
            ev.sigma_loc_source,
            fmt9(ev.photon.energy()),
            fmt9(ev.photon.momentum()),
            fmt9(ev.delta_s),
            fmt9(ev.delta_s_conjugate),
            match &ev.brillouin {
                Some(b) => format!(
                    ", brillouin ratio = {} ({})",
                    fmt9(b.ratio),
                    if b.ok { "ok" } else { "below threshold" }
                ),
                None => String::new(),
            }
        );
    }
    Ok(RunOutput {
        run_id: sim.ledger.run_id.clone(),
        csv: Some((CSV_FILE, sim.ledger.to_csv())),
        report_text: text,
        report_json: to_json(&doc),
        plot_svg: Some(render_entropy_svg(sim.ledger.entries())),
        pass: sim.report.pass,
    })
}

#[derive(Serialize)]
struct LandauerDocument {
    command: &'static str,
    run_id: String,
    outcome: LandauerOutcome,
    info_entropy_drop: f64,
    pass: bool,
}

pub fn landauer(cfg: &LandauerConfig) -> Result<RunOutput> {
    let outcome = landauer_box(cfg.mode, cfg.temperature, cfg.epsilon)?;
    let drop = outcome.info_entropy_drop();
    let pass = outcome.entropy_produced >= 0.0 && (drop - std::f64::consts::LN_2).abs() < 1e-12;
    let run_id = format!("landauer-{}", cfg.mode.as_str());
    let mut text = String::new();
    let _ = writeln!(text, "command: landauer");
    let _ = writeln!(text, "run_id: {run_id}");
    let _ = writeln!(text, "mode: {}", cfg.mode.as_str());
    let _ = writeln!(text, "T: {}", cfg.temperature);
    let _ = writeln!(text, "work: {}", fmt9(outcome.work));
    let _ = writeln!(text, "entropy_produced: {}", fmt9(outcome.entropy_produced));
    let _ = writeln!(
        text,
        "info_entropy_before: {}",
        fmt9(outcome.info_entropy_before)
    );
    let _ = writeln!(
        text,
        "info_entropy_after: {}",
        fmt9(outcome.info_entropy_after)
    );
    let _ = writeln!(text, "info_entropy_drop: {}", fmt9(drop));
    let _ = writeln!(text, "status: {}", if pass { "PASS" } else { "FAIL" });
    let doc = LandauerDocument {
        command: "landauer",
        run_id: run_id.clone(),
        outcome,
        info_entropy_drop: drop,
        pass,
    };
    Ok(RunOutput {
        run_id,
        csv: None,
        report_text: text,
        report_json: to_json(&doc),
        plot_svg: None,
        pass,
    })
}

#[derive(Serialize)]
struct DemonDocument<'a> {
    command: &'static str,
    run_id: &'a str,
    report: &'a DemonReport,
}

pub fn demon(cfg: &DemonConfig, units: &UnitSystem) -> Result<RunOutput> {
    let report = match cfg.variant {
        DemonVariant::Pressure => {
            let l = cfg.box_width.ok_or_else(|| {
                Error::Usage("demon.box_width is required for the pressure demon".into())
            })?;
            pressure_demon(cfg.trials, l, cfg.aperture, cfg.seed, cfg.model)?
        }
        DemonVariant::Temperature => {
            let sigma_p = cfg.sigma_p.ok_or_else(|| {
                Error::Usage("demon.sigma_p is required for the temperature demon".into())
            })?;
            temperature_demon(sigma_p, cfg.aperture, units.hbar, cfg.samples, cfg.seed)?
        }
    };
    let run_id = format!(
        "demon-{}-seed-{}",
        match cfg.variant {
            DemonVariant::Pressure => "pressure",
            DemonVariant::Temperature => "temperature",
        },
        cfg.seed
    );
    let mut text = String::new();
    let _ = writeln!(text, "command: demon");
    let _ = writeln!(text, "run_id: {run_id}");
    let _ = writeln!(
        text,
        "variant: {}",
        if report.variant == DemonVariant::Pressure {
            "pressure"
        } else {
            "temperature"
        }
    );
    let _ = writeln!(text, "model: {}", report.model);
    let _ = writeln!(text, "seed: {}", report.seed);
    let _ = writeln!(text, "trials: {}", report.trials);
    if report.variant == DemonVariant::Pressure {
        if let Some(r) = report.records.first() {
            let _ = writeln!(text, "info_gain: {}", fmt9(r.info_gain));
        }
        let _ = writeln!(text, "mean_net: {}", fmt9(report.mean_net));
        let _ = writeln!(text, "min_net: {}", fmt9(report.min_net));
    }
    if let Some(p) = &report.passage {
        let _ = writeln!(text, "sigma_p: {}", fmt9(p.sigma_p));
        let _ = writeln!(text, "sigma_x: {}", fmt9(p.sigma_x));
        let _ = writeln!(text, "aperture: {}", fmt9(p.aperture));
        let _ = writeln!(text, "hits: {}", p.hits);
        let _ = writeln!(text, "passage_estimate: {}", fmt9(p.estimate));
        let _ = writeln!(text, "passage_analytic: {}", fmt9(p.analytic));
        let _ = writeln!(text, "passage_linearized: {}", fmt9(p.linearized));
        let _ = writeln!(text, "estimator_sigma: {}", fmt9(p.estimator_sigma));
        let _ = writeln!(
            text,
            "passage_analytic_half_sigma_p: {}",
            fmt9(p.analytic_at_half_sigma_p)
        );
    }
    let _ = writeln!(text, "note: {}", report.note);
    let _ = writeln!(
        text,
        "status: {}",
        if report.pass { "PASS" } else { "FAIL" }
    );

    let csv = if report.records.is_empty() {
        None
    } else {
        let mut csv = String::from("trial,x1,info_gain,localization_entropy,net\n");
        for (i, r) in report.records.iter().enumerate() {
            let _ = writeln!(
                csv,
                "{i},{},{},{},{}",
                fmt9(r.x1),
                fmt9(r.info_gain),
                fmt9(r.localization_entropy),
                fmt9(r.net)
            );
        }
        Some((TRIALS_FILE, csv))
    };
    let doc = DemonDocument {
        command: "demon",
        run_id: &run_id,
        report: &report,
    };
    Ok(RunOutput {
        run_id: run_id.clone(),
        csv,
        report_text: text,
        report_json: to_json(&doc),
        plot_svg: None,
        pass: report.pass,
    })
}

#[derive(Serialize)]
struct VerifyDocument<'a> {
    command: &'static str,
    source: &'a str,
    verification: &'a VerificationReport,
}

/// Re-audits a time series previously written by `simulate`.
pub fn verify_csv(csv: &str, source: &str, units: &UnitSystem) -> Result<RunOutput> {
    let ledger = EntropyLedger::from_csv(csv, format!("verify-{source}"), 0, *units)?;
    let report = ledger.verify();
    let mut text = format!("command: verify\nsource: {source}\n");
    text.push_str(&report.render_text());
    let doc = VerifyDocument {
        command: "verify",
        source,
        verification: &report,
    };
    Ok(RunOutput {
        run_id: ledger.run_id.clone(),
        csv: None,
        report_text: text,
        report_json: to_json(&doc),
        plot_svg: Some(render_entropy_svg(ledger.entries())),
        pass: report.pass,
    })
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}
