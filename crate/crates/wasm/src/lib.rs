//! Browser bindings for the entropy lab. Each exported function takes plain
//! numbers and returns a JSON string for the page to draw.

use entropy_lab::events::{
    absorb, AbsorptionRequest, Direction, LocalizationWidth, PacketMeta, Photon,
};
use entropy_lab::scenarios::{pressure_demon, temperature_demon, PressureModel};
use entropy_lab::{
    free_propagate, Error, GaussianPacket, GridSpec, GridWavefunction, Result, SimRng,
};
use serde::Serialize;
use wasm_bindgen::prelude::*;

const HBAR: f64 = 1.0;
const MAX_POINTS: usize = 1 << 14;
/// Points sent to the page per curve.
const PLOT_POINTS: usize = 400;

#[derive(Debug, Serialize)]
pub struct Frame {
    pub t: f64,
    pub density: Vec<f64>,
    pub i_x: f64,
    pub i_p: f64,
    pub s: f64,
    pub sigma_x: f64,
    pub sigma_x_exact: f64,
}

#[derive(Debug, Serialize)]
pub struct Evolution {
    pub x: Vec<f64>,
    pub frames: Vec<Frame>,
    pub leipnik_bound: f64,
}

#[derive(Debug, Serialize)]
pub struct Localization {
    pub x: Vec<f64>,
    pub before: Vec<f64>,
    pub after: Vec<f64>,
    pub x1: f64,
    pub sigma_loc: f64,
    pub delta_s: f64,
    pub delta_s_conjugate: f64,
    /// Absent when the environment temperature is zero.
    pub brillouin_ratio: Option<f64>,
    pub brillouin_ok: Option<bool>,
}

#[derive(Debug, Serialize)]
pub struct DemonSummary {
    pub variant: &'static str,
    pub trials: usize,
    pub mean_net: f64,
    pub min_net: f64,
    pub pass: bool,
    /// Histogram of localization points (pressure) or empty.
    pub positions: Vec<f64>,
    pub estimate: Option<f64>,
    pub analytic: Option<f64>,
}

/// Grid fine enough for `finest` and wide enough for `half_width` either side
/// of the origin.
fn grid_for(finest: f64, half_width: f64) -> Result<GridSpec> {
    let dx = finest / 8.0;
    let n = ((2.0 * half_width / dx).ceil() as usize)
        .next_power_of_two()
        .max(1024);
    if n > MAX_POINTS {
        return Err(Error::GridSize(n));
    }
    GridSpec::new(-half_width, 2.0 * half_width / n as f64, n)
}

fn downsample(values: &[f64]) -> Vec<f64> {
    let stride = (values.len() / PLOT_POINTS).max(1);
    values.iter().step_by(stride).copied().collect()
}

fn axis(spec: GridSpec) -> Vec<f64> {
    downsample(&(0..spec.n).map(|j| spec.x(j)).collect::<Vec<_>>())
}

fn frame(t: f64, psi: &GridWavefunction, exact: &GaussianPacket) -> Result<Frame> {
    let i_x = psi.differential_entropy()?;
    let i_p = psi.to_momentum()?.differential_entropy()?;
    Ok(Frame {
        t,
        density: downsample(&psi.density()),
        i_x,
        i_p,
        s: i_p,
        sigma_x: psi.moments()?.std_dev,
        sigma_x_exact: exact.evolve(t)?.sigma_x(),
    })
}

pub fn evolution(sigma0: f64, mass: f64, p0: f64, t_max: f64, frames: usize) -> Result<Evolution> {
    if frames == 0 || frames > 200 {
        return Err(Error::Domain {
            name: "frames",
            constraint: "between 1 and 200",
            value: frames as f64,
        });
    }
    let packet = GaussianPacket::new(0.0, p0, sigma0, mass, HBAR)?;
    let end = packet.evolve(t_max)?;
    let drift = (p0 / mass * t_max).abs();
    let spec = grid_for(sigma0, drift + 8.0 * end.sigma_x())?;
    let mut psi = GridWavefunction::from_gaussian(&packet, spec)?.with_momentum_center(p0);
    let dt = t_max / frames as f64;
    let mut out = vec![frame(0.0, &psi, &packet)?];
    for k in 1..=frames {
        psi = free_propagate(&psi, mass, dt)?;
        out.push(frame(k as f64 * dt, &psi, &packet)?);
    }
    Ok(Evolution {
        x: axis(spec),
        frames: out,
        leipnik_bound: entropy_lab::units::leipnik_bound(HBAR),
    })
}

pub fn localization(
    sigma0: f64,
    sigma_loc: f64,
    energy: f64,
    temperature: f64,
    seed: u64,
) -> Result<Localization> {
    let mass = 1000.0;
    let t1 = 1.0;
    let packet = GaussianPacket::new(0.0, 0.0, sigma0, mass, HBAR)?;
    let spec = grid_for(sigma0.min(sigma_loc), 8.0 * packet.evolve(t1)?.sigma_x())?;
    let psi0 = GridWavefunction::from_gaussian(&packet, spec)?;
    let before = free_propagate(&psi0, mass, t1)?;
    let request = AbsorptionRequest {
        photon: Photon::new(energy, 1.0, Direction::Forward)?,
        width: LocalizationWidth::Explicit(sigma_loc),
        t1,
        environment_temperature: temperature,
    };
    let out = absorb(
        &before,
        PacketMeta { mass, p0: 0.0 },
        &request,
        1.0,
        &mut SimRng::from_seed(seed),
    )?;
    let e = out.event;
    Ok(Localization {
        x: axis(spec),
        before: downsample(&before.density()),
        after: downsample(&out.state_after.density()),
        x1: e.x1,
        sigma_loc: e.sigma_loc,
        delta_s: e.delta_s,
        delta_s_conjugate: e.delta_s_conjugate,
        brillouin_ratio: e.brillouin.map(|b| b.ratio),
        brillouin_ok: e.brillouin.map(|b| b.ok),
    })
}

pub fn demon(variant: &str, trials: usize, width: f64, seed: u64) -> Result<DemonSummary> {
    match variant {
        "pressure" => {
            let r = pressure_demon(trials, width, 1.0, seed, PressureModel::ClosedForm)?;
            Ok(DemonSummary {
                variant: "pressure",
                trials: r.trials,
                mean_net: r.mean_net,
                min_net: r.min_net,
                pass: r.pass,
                positions: r.records.iter().take(2000).map(|t| t.x1).collect(),
                estimate: None,
                analytic: None,
            })
        }
        "temperature" => {
            let r = temperature_demon(width, 1.0, HBAR, trials, seed)?;
            let p = r.passage;
            Ok(DemonSummary {
                variant: "temperature",
                trials: r.trials,
                mean_net: r.mean_net,
                min_net: r.min_net,
                pass: r.pass,
                positions: Vec::new(),
                estimate: p.map(|p| p.estimate),
                analytic: p.map(|p| p.analytic),
            })
        }
        other => Err(Error::Usage(format!("unknown demon variant `{other}`"))),
    }
}

fn to_js<T: Serialize>(r: Result<T>) -> std::result::Result<String, JsError> {
    let v = r.map_err(|e| JsError::new(&e.to_string()))?;
    serde_json::to_string(&v).map_err(|e| JsError::new(&e.to_string()))
}

/// Free evolution of a Gaussian: densities and entropies at `frames + 1` times.
#[wasm_bindgen(js_name = freeEvolution)]
pub fn free_evolution_js(
    sigma0: f64,
    mass: f64,
    p0: f64,
    t_max: f64,
    frames: usize,
) -> std::result::Result<String, JsError> {
    to_js(evolution(sigma0, mass, p0, t_max, frames))
}

/// One photon absorption: densities before and after plus the entropy produced.
#[wasm_bindgen(js_name = absorbPhoton)]
pub fn absorb_photon_js(
    sigma0: f64,
    sigma_loc: f64,
    energy: f64,
    temperature: f64,
    seed: u64,
) -> std::result::Result<String, JsError> {
    to_js(localization(sigma0, sigma_loc, energy, temperature, seed))
}

/// Pressure (`width` = box width) or temperature (`width` = sigma_p) demon.
#[wasm_bindgen(js_name = runDemon)]
pub fn run_demon_js(
    variant: &str,
    trials: usize,
    width: f64,
    seed: u64,
) -> std::result::Result<String, JsError> {
    to_js(demon(variant, trials, width, seed))
}
