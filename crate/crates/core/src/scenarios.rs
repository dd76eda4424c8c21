//! Thermodynamic thought experiments as executable bookkeeping.
//!
//! * [`landauer_box`]: the one-bit piston box, resolved by what the particle's
//!   position actually is when the piston moves.
//! * [`pressure_demon`]: one-way passage through an aperture, paid for by the
//!   localization entropy of squeezing through it.
//! * [`temperature_demon`]: a particle with sharp momentum has a position spread
//!   so wide that it almost never finds the aperture.

use std::f64::consts::{E, LN_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erf;

use crate::error::{require_positive, Error, Result};
use crate::events::{absorb, AbsorptionRequest, Direction, LocalizationWidth, PacketMeta, Photon};
use crate::grid::{GridSpec, GridWavefunction};
use crate::rng::SimRng;

/// Tolerated per-trial shortfall of the net entropy balance.
pub const NET_TOLERANCE: f64 = 1e-9;

/// Monte-Carlo agreement threshold, in estimator standard deviations.
pub const MC_SIGMAS: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LandauerMode {
    /// The particle has no definite side: the piston compresses a genuine one-bit state.
    OnticReset,
    /// The particle was in fact on the left: the piston sweeps empty space.
    EpistemicLeft,
    /// The particle was in fact on the right: it stays confined to half the box.
    EpistemicRight,
    /// A sensor stops the piston on first contact.
    MeasuredWithSensor,
}

impl LandauerMode {
    pub const ALL: [LandauerMode; 4] = [
        LandauerMode::OnticReset,
        LandauerMode::EpistemicLeft,
        LandauerMode::EpistemicRight,
        LandauerMode::MeasuredWithSensor,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            LandauerMode::OnticReset => "ontic-reset",
            LandauerMode::EpistemicLeft => "epistemic-left",
            LandauerMode::EpistemicRight => "epistemic-right",
            LandauerMode::MeasuredWithSensor => "measured-with-sensor",
        }
    }
}

impl std::str::FromStr for LandauerMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LandauerMode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::Usage(format!("unknown landauer mode `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LandauerOutcome {
    pub mode: LandauerMode,
    pub temperature: f64,
    /// Isothermal work done by the piston (k_B = 1).
    pub work: f64,
    /// In units of k_B.
    pub entropy_produced: f64,
    pub info_entropy_before: f64,
    pub info_entropy_after: f64,
}

impl LandauerOutcome {
    pub fn info_entropy_drop(&self) -> f64 {
        self.info_entropy_before - self.info_entropy_after
    }
}

/// Closed-form outcome of resetting the one-bit box at temperature `t`.
/// `epsilon` is the (arbitrarily small) production of the sensor-stopped
/// piston and is required only in that mode.
pub fn landauer_box(mode: LandauerMode, t: f64, epsilon: Option<f64>) -> Result<LandauerOutcome> {
    require_positive("T", t)?;
    // Shannon entropy of the two equally likely sides.
    let before = -2.0 * (0.5 * 0.5f64.ln());
    let entropy_produced = match mode {
        // W = -int_V^{V/2} k_B T / V dV = k_B T ln 2
        LandauerMode::OnticReset => LN_2,
        LandauerMode::EpistemicLeft | LandauerMode::EpistemicRight => 0.0,
        LandauerMode::MeasuredWithSensor => match epsilon {
            Some(e) => require_positive("epsilon", e)?,
            None => {
                return Err(Error::Domain {
                    name: "epsilon",
                    constraint: "given and positive in measured-with-sensor mode",
                    value: f64::NAN,
                })
            }
        },
    };
    Ok(LandauerOutcome {
        mode,
        temperature: t,
        work: t * entropy_produced,
        entropy_produced,
        info_entropy_before: before,
        info_entropy_after: 0.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DemonVariant {
    Temperature,
    Pressure,
}

/// How the pressure demon's localization entropy is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum PressureModel {
    /// `ln(L / w)`: uniform support over the box collapsing to the aperture.
    #[default]
    ClosedForm,
    /// A box-profile grid state localized by a real absorption event; the
    /// measured entropy change replaces `ln(L / w)`.
    Grid,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialRecord {
    /// Where the particle localized.
    pub x1: f64,
    pub info_gain: f64,
    pub localization_entropy: f64,
    pub net: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PassageStats {
    pub sigma_p: f64,
    pub sigma_x: f64,
    pub aperture: f64,
    pub samples: usize,
    pub hits: usize,
    pub estimate: f64,
    pub analytic: f64,
    /// `w / (sqrt(2 pi) sigma_x)`, the small-aperture limit.
    pub linearized: f64,
    pub estimator_sigma: f64,
    pub analytic_at_half_sigma_p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DemonReport {
    pub variant: DemonVariant,
    pub model: &'static str,
    pub seed: u64,
    pub trials: usize,
    pub records: Vec<TrialRecord>,
    pub mean_net: f64,
    pub min_net: f64,
    pub passage: Option<PassageStats>,
    pub pass: bool,
    pub note: &'static str,
}

/// Runs `trials` one-way passages through an aperture of width `w` in a box
/// of width `l`.
pub fn pressure_demon(
    trials: usize,
    l: f64,
    w: f64,
    seed: u64,
    model: PressureModel,
) -> Result<DemonReport> {
    require_positive("box width", l)?;
    require_positive("aperture", w)?;
    if w > l / 2.0 {
        return Err(Error::Domain {
            name: "aperture",
            constraint: "at most half the box width",
            value: w,
        });
    }
    if trials == 0 {
        return Err(Error::Usage(
            "pressure demon needs at least one trial".into(),
        ));
    }
    let info_gain = LN_2;
    let records: Vec<TrialRecord> = match model {
        PressureModel::ClosedForm => {
            let localization = (l / w).ln();
            let left = 0.5 * (l - w);
            (0..trials)
                .map(|i| {
                    let x1 = left + w * SimRng::child(seed, i as u64).uniform();
                    TrialRecord {
                        x1,
                        info_gain,
                        localization_entropy: localization,
                        net: localization - info_gain,
                    }
                })
                .collect()
        }
        PressureModel::Grid => grid_pressure_trials(trials, l, w, seed)?,
    };
    let n = records.len() as f64;
    let mean_net = records.iter().map(|r| r.net).sum::<f64>() / n;
    let min_net = records.iter().map(|r| r.net).fold(f64::INFINITY, f64::min);
    Ok(DemonReport {
        variant: DemonVariant::Pressure,
        model: match model {
            PressureModel::ClosedForm => "closed-form",
            PressureModel::Grid => "grid",
        },
        seed,
        trials,
        records,
        mean_net,
        min_net,
        passage: None,
        pass: mean_net >= 0.0 && min_net >= -NET_TOLERANCE,
        note: "localization ledger ln(L/w) is a constructed model of passage through an opening",
    })
}

fn grid_pressure_trials(trials: usize, l: f64, w: f64, seed: u64) -> Result<Vec<TrialRecord>> {
    const N: usize = 2048;
    // Gaussian with the same entropy as a uniform density of width w.
    let sigma_loc = w / (2.0 * PI * E).sqrt();
    let pad = 8.0 * sigma_loc + 0.05 * l;
    let spec = GridSpec::spanning(-pad, l + pad, N)?;
    let edge = 2.0 * spec.dx;
    let before = GridWavefunction::from_fn(spec, 1.0, |x| {
        let profile = 0.5 * ((x / edge).tanh() - ((x - l) / edge).tanh());
        Complex64::new(profile.max(0.0).sqrt(), 0.0)
    })?;
    let request = AbsorptionRequest {
        photon: Photon::new(1.0, 1.0, Direction::Forward)?,
        width: LocalizationWidth::Explicit(sigma_loc),
        t1: 1.0,
        environment_temperature: 0.0,
    };
    let meta = PacketMeta { mass: 1.0, p0: 0.0 };
    (0..trials)
        .map(|i| {
            let mut rng = SimRng::child(seed, i as u64);
            let out = absorb(&before, meta, &request, 1.0, &mut rng)?;
            Ok(TrialRecord {
                x1: out.event.x1,
                info_gain: LN_2,
                localization_entropy: out.event.delta_s,
                net: out.event.delta_s - LN_2,
            })
        })
        .collect()
}

/// Probability that a particle with momentum spread `sigma_p` (and hence
/// minimum-uncertainty position spread `hbar / (2 sigma_p)`) lies within an
/// aperture of width `w` centered on its mean.
pub fn centered_passage_probability(sigma_p: f64, w: f64, hbar: f64) -> f64 {
    let sigma_x = hbar / (2.0 * sigma_p);
    erf(w / (2.0 * std::f64::consts::SQRT_2 * sigma_x))
}

/// Monte-Carlo estimate of the centered passage probability compared with
/// the analytic Gaussian integral.
pub fn temperature_demon(
    sigma_p: f64,
    w: f64,
    hbar: f64,
    samples: usize,
    seed: u64,
) -> Result<DemonReport> {
    require_positive("sigma_p", sigma_p)?;
    require_positive("aperture", w)?;
    require_positive("hbar", hbar)?;
    if samples == 0 {
        return Err(Error::Usage(
            "temperature demon needs at least one sample".into(),
        ));
    }
    let sigma_x = hbar / (2.0 * sigma_p);
    let half = 0.5 * w;
    let mut rng = SimRng::from_seed(seed);
    let hits = (0..samples)
        .filter(|_| (sigma_x * rng.standard_normal()).abs() <= half)
        .count();
    let estimate = hits as f64 / samples as f64;
    let analytic = centered_passage_probability(sigma_p, w, hbar);
    let estimator_sigma = (analytic * (1.0 - analytic) / samples as f64).sqrt();
    let pass = (estimate - analytic).abs() <= MC_SIGMAS * estimator_sigma;
    Ok(DemonReport {
        variant: DemonVariant::Temperature,
        model: "gaussian",
        seed,
        trials: samples,
        records: Vec::new(),
        mean_net: 0.0,
        min_net: 0.0,
        passage: Some(PassageStats {
            sigma_p,
            sigma_x,
            aperture: w,
            samples,
            hits,
            estimate,
            analytic,
            linearized: w / ((2.0 * PI).sqrt() * sigma_x),
            estimator_sigma,
            analytic_at_half_sigma_p: centered_passage_probability(0.5 * sigma_p, w, hbar),
        }),
        pass,
        note: "sharp momentum implies a wide position spread, so passage through a fixed aperture becomes rare",
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    #[allow(clippy::approx_constant)]
    fn landauer_examples() {
        let ontic = landauer_box(LandauerMode::OnticReset, 1.0, None).unwrap();
        assert!((ontic.entropy_produced - 0.693_147_180_559_945_3).abs() < 1e-15);
        assert_eq!(ontic.work, ontic.entropy_produced);
        assert_eq!(
            landauer_box(LandauerMode::EpistemicLeft, 1.0, None)
                .unwrap()
                .entropy_produced,
            0.0
        );
        assert_eq!(
            landauer_box(LandauerMode::EpistemicRight, 3.0, None)
                .unwrap()
                .work,
            0.0
        );
        let measured = landauer_box(LandauerMode::MeasuredWithSensor, 1.0, Some(1e-6)).unwrap();
        assert_eq!(measured.entropy_produced, 1e-6);
        assert!(landauer_box(LandauerMode::MeasuredWithSensor, 1.0, Some(0.0)).is_err());
        assert!(landauer_box(LandauerMode::MeasuredWithSensor, 1.0, None).is_err());
        assert!(landauer_box(LandauerMode::OnticReset, 0.0, None).is_err());
        let warm = landauer_box(LandauerMode::OnticReset, 2.5, None).unwrap();
        assert!((warm.work - 2.5 * LN_2).abs() < 1e-15);
    }

    #[test]
    fn landauer_information_drop_is_one_bit_in_every_mode() {
        for mode in LandauerMode::ALL {
            let o = landauer_box(mode, 1.0, Some(1e-3)).unwrap();
            assert!((o.info_entropy_before - LN_2).abs() < 1e-15);
            assert_eq!(o.info_entropy_after, 0.0);
            assert!(o.entropy_produced >= 0.0);
            assert_eq!(o.entropy_produced == LN_2, mode == LandauerMode::OnticReset);
        }
    }

    #[test]
    fn mode_names_round_trip() {
        for mode in LandauerMode::ALL {
            assert_eq!(mode.as_str().parse::<LandauerMode>().unwrap(), mode);
        }
        assert!("ontic".parse::<LandauerMode>().is_err());
    }

    #[test]
    fn pressure_demon_examples() {
        let r = pressure_demon(100, 4.0, 1.0, 1, PressureModel::ClosedForm).unwrap();
        assert!(r.pass);
        for rec in &r.records {
            assert!((rec.net - LN_2).abs() < 1e-15);
            assert!(rec.x1 >= 1.5 && rec.x1 <= 2.5);
        }
        let edge = pressure_demon(10, 4.0, 2.0, 1, PressureModel::ClosedForm).unwrap();
        assert!(edge.records.iter().all(|r| r.net == 0.0));
        assert!(edge.pass);
        assert!(pressure_demon(10, 4.0, 2.5, 1, PressureModel::ClosedForm).is_err());
    }

    #[test]
    fn pressure_demon_is_deterministic() {
        let a = pressure_demon(10_000, 4.0, 1.0, 77, PressureModel::ClosedForm).unwrap();
        let b = pressure_demon(10_000, 4.0, 1.0, 77, PressureModel::ClosedForm).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn grid_pressure_demon_tracks_closed_form() {
        let r = pressure_demon(20, 4.0, 1.0, 5, PressureModel::Grid).unwrap();
        assert!(r.pass);
        for rec in &r.records {
            assert!(
                (rec.localization_entropy - 4f64.ln()).abs() < 0.02,
                "{}",
                rec.localization_entropy
            );
        }
    }

    #[test]
    fn temperature_demon_examples() {
        let r = temperature_demon(0.001, 1.0, 1.0, 100_000, 3).unwrap();
        let p = r.passage.unwrap();
        assert_eq!(p.sigma_x, 500.0);
        assert!((p.analytic - 7.978_844_278_221_252e-4).abs() < 1e-15);
        assert!((p.linearized - 7.978_845_608_028_654e-4).abs() < 1e-15);
        assert!(r.pass);

        let wide = temperature_demon(10.0, 1.0, 1.0, 100_000, 3)
            .unwrap()
            .passage
            .unwrap();
        assert!((wide.sigma_x - 0.05).abs() < 1e-15);
        assert_eq!(wide.analytic, 1.0);
        assert_eq!(wide.estimate, 1.0);

        let ratio = p.analytic / p.analytic_at_half_sigma_p;
        assert!((ratio - 2.0).abs() < 1e-6, "{ratio}");
    }

    proptest! {
        #[test]
        fn pressure_net_non_negative(l in 0.1f64..100.0, frac in 1e-3f64..=0.5) {
            let w = l * frac;
            let r = pressure_demon(3, l, w, 0, PressureModel::ClosedForm).unwrap();
            prop_assert!(r.pass);
            for rec in &r.records {
                prop_assert!(rec.net >= -1e-12);
                if frac < 0.5 - 1e-9 {
                    prop_assert!(rec.net > 0.0);
                }
            }
        }

        #[test]
        fn passage_decreases_as_momentum_sharpens(sigma_p in 1e-4f64..1.0, w in 0.01f64..1.0) {
            let p = centered_passage_probability(sigma_p, w, 1.0);
            let sharper = centered_passage_probability(0.5 * sigma_p, w, 1.0);
            prop_assert!(sharper < p || p == 0.0);
        }
    }
}
