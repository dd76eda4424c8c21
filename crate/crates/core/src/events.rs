//! Photon absorption as a localization event.
//!
//! Absorbing a photon annihilates it, collapses the center-of-mass state to a
//! narrow Gaussian at a Born-sampled site and adds the photon's momentum.
//! The thermodynamic entropy produced is the drop in position entropy, which
//! for Gaussian endpoints equals the rise in momentum entropy.

use serde::{Deserialize, Serialize};

use crate::analytic::GaussianPacket;
use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::grid::GridWavefunction;
use crate::rng::SimRng;

/// Default `ratio_threshold` for [`brillouin_check`].
pub const BRILLOUIN_RATIO: f64 = 10.0;

/// Entropy changes at or below this value (nats) do not count as a localization.
pub const LOCALIZATION_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    #[default]
    Forward,
    Backward,
}

impl Direction {
    fn sign(self) -> f64 {
        match self {
            Direction::Forward => 1.0,
            Direction::Backward => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Photon {
    energy: f64,
    momentum: f64,
    c: f64,
}

impl Photon {
    pub fn new(energy: f64, c: f64, direction: Direction) -> Result<Self> {
        require_positive("photon energy", energy)?;
        require_positive("c", c)?;
        Ok(Self {
            energy,
            momentum: direction.sign() * energy / c,
            c,
        })
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    /// Signed momentum `+-E/c`.
    pub fn momentum(&self) -> f64 {
        self.momentum
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// `nu = E / h` for Planck constant `h`.
    pub fn frequency(&self, planck: f64) -> f64 {
        self.energy / planck
    }

    /// A photon's momentum is sharp and its position has no meaning, so it
    /// carries no information entropy.
    pub fn total_information_entropy(&self) -> f64 {
        0.0
    }
}

/// How the post-collapse width is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LocalizationWidth {
    Explicit(f64),
    /// `hbar c / (2 E)`: a resolution scale set by the photon's wavelength.
    /// This is a modeling heuristic, not a derived quantity.
    ComptonPreset,
}

impl LocalizationWidth {
    pub fn resolve(&self, photon: &Photon, hbar: f64) -> f64 {
        match *self {
            LocalizationWidth::Explicit(s) => s,
            LocalizationWidth::ComptonPreset => hbar * photon.c() / (2.0 * photon.energy()),
        }
    }

    pub fn source(&self) -> &'static str {
        match self {
            LocalizationWidth::Explicit(_) => "explicit",
            LocalizationWidth::ComptonPreset => "compton-preset (heuristic hbar c / 2E)",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BrillouinCheck {
    pub ok: bool,
    pub ratio: f64,
    pub threshold: f64,
}

/// Whether `E >= ratio_threshold * k_B T0`, i.e. whether the photon is hot
/// enough relative to the environment to localize distinctly. Advisory only.
pub fn brillouin_check(
    photon: &Photon,
    t0: f64,
    k_b: f64,
    ratio_threshold: f64,
) -> Result<BrillouinCheck> {
    require_positive("T0", t0)?;
    require_positive("k_B", k_b)?;
    let ratio = photon.energy() / (k_b * t0);
    Ok(BrillouinCheck {
        ok: ratio >= ratio_threshold,
        ratio,
        threshold: ratio_threshold,
    })
}

/// Mass and mean momentum of the free packet being localized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PacketMeta {
    pub mass: f64,
    pub p0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AbsorptionRequest {
    pub photon: Photon,
    pub width: LocalizationWidth,
    pub t1: f64,
    /// Environment temperature `T0`; zero skips the Brillouin check.
    pub environment_temperature: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AbsorptionEvent {
    pub t1: f64,
    pub x1: f64,
    pub sigma_loc: f64,
    pub sigma_loc_source: &'static str,
    pub photon: Photon,
    pub environment_temperature: f64,
    /// `k_B (I_x before - I_x after)`.
    pub delta_s: f64,
    /// `k_B (I_p after - I_p before)`; equals `delta_s` when the
    /// pre-event state is still minimum-uncertainty.
    pub delta_s_conjugate: f64,
    pub brillouin: Option<BrillouinCheck>,
}

#[derive(Debug, Clone)]
pub struct Absorption {
    pub state_after: GridWavefunction,
    pub event: AbsorptionEvent,
}

/// Localizes `psi` (the freely evolved state at `t1`) by absorbing `photon`.
pub fn absorb(
    psi: &GridWavefunction,
    meta: PacketMeta,
    request: &AbsorptionRequest,
    k_b: f64,
    rng: &mut SimRng,
) -> Result<Absorption> {
    require_positive("t1", request.t1)?;
    require_non_negative("environment temperature", request.environment_temperature)?;
    require_positive("k_B", k_b)?;
    let hbar = psi.hbar();
    let sigma_loc = require_positive("sigma_loc", request.width.resolve(&request.photon, hbar))?;
    let spec = psi.spec();
    let limit = 4.0 * spec.dx;
    if sigma_loc < limit {
        return Err(Error::Resolution { sigma_loc, limit });
    }

    let ix_before = psi.differential_entropy()?;
    let delta_nats = ix_before - crate::analytic::gaussian_entropy(sigma_loc)?;
    if delta_nats <= LOCALIZATION_EPS {
        return Err(Error::NotALocalization {
            delta_s: k_b * delta_nats,
        });
    }

    let x1 = psi.sample_position(rng)?;
    let p_after = meta.p0 + request.photon.momentum();
    let packet = GaussianPacket::new(x1, p_after, sigma_loc, meta.mass, hbar)?;
    let state_after = GridWavefunction::from_gaussian(&packet, spec)?.with_momentum_center(p_after);

    let ix_after = state_after.differential_entropy()?;
    let ip_before = psi.to_momentum()?.differential_entropy()?;
    let ip_after = state_after.to_momentum()?.differential_entropy()?;
    let delta_s = k_b * (ix_before - ix_after);
    if delta_s <= k_b * LOCALIZATION_EPS {
        return Err(Error::NotALocalization { delta_s });
    }

    let brillouin = if request.environment_temperature > 0.0 {
        Some(brillouin_check(
            &request.photon,
            request.environment_temperature,
            k_b,
            BRILLOUIN_RATIO,
        )?)
    } else {
        None
    };

    Ok(Absorption {
        state_after,
        event: AbsorptionEvent {
            t1: request.t1,
            x1,
            sigma_loc,
            sigma_loc_source: request.width.source(),
            photon: request.photon,
            environment_temperature: request.environment_temperature,
            delta_s,
            delta_s_conjugate: k_b * (ip_after - ip_before),
            brillouin,
        },
    })
}
