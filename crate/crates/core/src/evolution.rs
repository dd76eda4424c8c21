//! Free-particle propagation by an exact momentum-space phase.

use num_complex::Complex64;

use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::grid::{GridWavefunction, Space, BOUNDARY_DECAY};

/// Evolves a position-space state by `dt` under `H = p^2 / 2m`.
///
/// The momentum representation is multiplied by `exp(-i p^2 dt / (2 m hbar))`,
/// so `|phi(p)|` is untouched. Fails if the spread state reaches the grid edge.
pub fn free_propagate(psi: &GridWavefunction, mass: f64, dt: f64) -> Result<GridWavefunction> {
    propagate_step(psi, mass, dt, dt)
}

fn propagate_step(
    psi: &GridWavefunction,
    mass: f64,
    dt: f64,
    report_time: f64,
) -> Result<GridWavefunction> {
    require_positive("mass", mass)?;
    require_non_negative("dt", dt)?;
    if psi.space() != Space::Position {
        return Err(Error::WrongSpace {
            expected: Space::Position,
        });
    }
    psi.check_boundary_decay()?;
    if dt == 0.0 {
        return Ok(psi.clone());
    }
    let hbar = psi.hbar();
    let phi = psi.to_momentum()?;
    let rate = dt / (2.0 * mass * hbar);
    let kicked = phi.map_indexed(|k, a| {
        let p = phi.coordinate(k);
        a * Complex64::cis(-p * p * rate)
    });
    let out = kicked.to_position()?;
    let boundary = out.boundary_density();
    if boundary >= BOUNDARY_DECAY {
        return Err(Error::GridOverflow {
            t: report_time,
            boundary,
        });
    }
    Ok(out)
}

/// Snapshots of `psi` (taken to be at `t = 0`) at each of the strictly
/// ascending, non-negative `times`, built by composing single steps.
pub fn propagate_schedule(
    psi: &GridWavefunction,
    mass: f64,
    times: &[f64],
) -> Result<Vec<GridWavefunction>> {
    validate_schedule(times)?;
    let mut out = Vec::with_capacity(times.len());
    let mut current = psi.clone();
    let mut now = 0.0;
    for &t in times {
        current = propagate_step(&current, mass, t - now, t)?;
        now = t;
        out.push(current.clone());
    }
    Ok(out)
}

pub fn validate_schedule(times: &[f64]) -> Result<()> {
    let Some(&first) = times.first() else {
        return Err(Error::Usage("schedule is empty".into()));
    };
    if !(first >= 0.0) {
        return Err(Error::Usage(format!(
            "schedule starts at {first}, expected t >= 0"
        )));
    }
    if let Some(w) = times.windows(2).find(|w| !(w[1] > w[0])) {
        return Err(Error::Usage(format!(
            "schedule is not strictly ascending: {} then {}",
            w[0], w[1]
        )));
    }
    if times.iter().any(|t| !t.is_finite()) {
        return Err(Error::Usage("schedule contains a non-finite time".into()));
    }
    Ok(())
}
