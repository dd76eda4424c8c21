//! Wavefunctions sampled on a uniform grid.
//!
//! A position-space state lives on `x_j = x0 + j dx`, its conjugate on
//! `p_k = p_min + k dp` with `dp = 2 pi hbar / (N dx)`. The transform between
//! them is
//!
//! ```text
//! phi_k = dx / sqrt(2 pi hbar) * sum_j psi_j exp(-i p_k x_j / hbar)
//! ```
//!
//! which is exactly unitary for the `dx`/`dp` weighted norms.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::analytic::GaussianPacket;
use crate::error::{require_positive, Error, Result};
use crate::rng::SimRng;

/// Largest accepted `|psi_0|^2 + |psi_{N-1}|^2` for states fed to evolution
/// and the ledger.
pub const BOUNDARY_DECAY: f64 = 1e-12;

/// Largest norm deviation accepted by entropy, moment and sampling routines.
pub const NORM_TOLERANCE: f64 = 1e-6;

/// Minimum number of grid points.
pub const MIN_POINTS: usize = 256;

/// Half-width, in standard deviations, that a packet must fit inside.
pub const SIGMA_WINDOW: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Position,
    Momentum,
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::Position => f.write_str("position"),
            Space::Momentum => f.write_str("momentum"),
        }
    }
}

/// Uniform position grid `x_j = x0 + j dx`, `j = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub x0: f64,
    pub dx: f64,
    #[serde(rename = "N", alias = "n")]
    pub n: usize,
}

impl GridSpec {
    pub fn new(x0: f64, dx: f64, n: usize) -> Result<Self> {
        let spec = Self { x0, dx, n };
        spec.validate()?;
        Ok(spec)
    }

    /// Grid of `n` points covering `[lo, hi)`.
    pub fn spanning(lo: f64, hi: f64, n: usize) -> Result<Self> {
        Self::new(lo, (hi - lo) / n as f64, n)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.n.is_power_of_two() || self.n < MIN_POINTS {
            return Err(Error::GridSize(self.n));
        }
        require_positive("dx", self.dx)?;
        if !self.x0.is_finite() {
            return Err(Error::Domain {
                name: "x0",
                constraint: "finite",
                value: self.x0,
            });
        }
        Ok(())
    }

    /// Right edge `x0 + n dx` (exclusive).
    pub fn x_end(&self) -> f64 {
        self.x0 + self.n as f64 * self.dx
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x0 + j as f64 * self.dx
    }

    pub fn dp(&self, hbar: f64) -> f64 {
        2.0 * PI * hbar / (self.n as f64 * self.dx)
    }

    /// Largest momentum magnitude representable around a zero-centered momentum grid.
    pub fn p_max(&self, hbar: f64) -> f64 {
        PI * hbar / self.dx
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridWavefunction {
    samples: Vec<Complex64>,
    origin: f64,
    spacing: f64,
    conjugate_origin: f64,
    hbar: f64,
    space: Space,
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn fft_in_place(buf: &mut [Complex64], inverse: bool) {
    PLANNER.with(|planner| {
        let mut planner = planner.borrow_mut();
        let fft = if inverse {
            planner.plan_fft_inverse(buf.len())
        } else {
            planner.plan_fft_forward(buf.len())
        };
        fft.process(buf);
    });
}

impl GridWavefunction {
    /// Position-space state from raw samples (not normalized). The momentum
    /// grid is centered on zero.
    pub fn from_samples(samples: Vec<Complex64>, spec: GridSpec, hbar: f64) -> Result<Self> {
        spec.validate()?;
        require_positive("hbar", hbar)?;
        if samples.len() != spec.n {
            return Err(Error::Usage(format!(
                "expected {} samples, got {}",
                spec.n,
                samples.len()
            )));
        }
        Ok(Self {
            samples,
            origin: spec.x0,
            spacing: spec.dx,
            conjugate_origin: -((spec.n / 2) as f64) * spec.dp(hbar),
            hbar,
            space: Space::Position,
        })
    }

    /// Normalized position-space state sampled from `f`.
    pub fn from_fn(spec: GridSpec, hbar: f64, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let samples = (0..spec.n).map(|j| f(spec.x(j))).collect();
        Self::from_samples(samples, spec, hbar)?.normalize()
    }

    /// Samples the analytic packet (including the complex width of a spread
    /// packet) and normalizes. The packet's mean plus or minus six widths must
    /// lie inside the grid.
    pub fn from_gaussian(packet: &GaussianPacket, spec: GridSpec) -> Result<Self> {
        spec.validate()?;
        let mu = packet.mu_x();
        let sigma = packet.sigma_x();
        let lo = mu - SIGMA_WINDOW * sigma;
        let hi = mu + SIGMA_WINDOW * sigma;
        if lo < spec.x0 || hi > spec.x_end() {
            let z_lo = (spec.x0 - mu) / sigma;
            let z_hi = (spec.x_end() - mu) / sigma;
            let outside = 0.5 * erfc(-z_lo / std::f64::consts::SQRT_2)
                + 0.5 * erfc(z_hi / std::f64::consts::SQRT_2);
            return Err(Error::GridTooNarrow {
                boundary_mass: outside,
            });
        }
        Self::from_fn(spec, packet.hbar(), |x| packet.amplitude(x))
    }

    /// Moves the conjugate momentum grid so that it is centered on `p_center`
    /// (up to half a grid step). Only meaningful for position-space states.
    pub fn with_momentum_center(mut self, p_center: f64) -> Self {
        if self.space == Space::Position {
            let dp = self.conjugate_spacing();
            let shift = (p_center / dp).round() * dp;
            self.conjugate_origin = shift - ((self.len() / 2) as f64) * dp;
        }
        self
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Left edge of this state's own grid (`x0` or `p_min`).
    pub fn origin(&self) -> f64 {
        self.origin
    }

    /// Grid step of this state's own grid (`dx` or `dp`).
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    fn conjugate_spacing(&self) -> f64 {
        2.0 * PI * self.hbar / (self.len() as f64 * self.spacing)
    }

    pub fn coordinate(&self, j: usize) -> f64 {
        self.origin + j as f64 * self.spacing
    }

    pub fn coordinates(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|j| self.coordinate(j))
    }

    /// Position grid for a position-space state.
    pub fn spec(&self) -> GridSpec {
        GridSpec {
            x0: self.origin,
            dx: self.spacing,
            n: self.len(),
        }
    }

    /// `|psi_j|^2`.
    pub fn density(&self) -> Vec<f64> {
        self.samples.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn norm(&self) -> f64 {
        self.samples.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.spacing
    }

    pub fn normalize(&self) -> Result<Self> {
        let norm = self.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::DegenerateState);
        }
        let scale = norm.sqrt().recip();
        Ok(self.map_samples(|a| a * scale))
    }

    pub(crate) fn map_samples(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            samples: self.samples.iter().map(|&a| f(a)).collect(),
            ..self.clone()
        }
    }

    pub(crate) fn map_indexed(&self, f: impl Fn(usize, Complex64) -> Complex64) -> Self {
        Self {
            samples: self
                .samples
                .iter()
                .enumerate()
                .map(|(j, &a)| f(j, a))
                .collect(),
            ..self.clone()
        }
    }

    /// Complex conjugate of every sample (time reversal of a position state).
    pub fn conjugate(&self) -> Self {
        self.map_samples(|a| a.conj())
    }

    pub fn boundary_density(&self) -> f64 {
        match (self.samples.first(), self.samples.last()) {
            (Some(a), Some(b)) => a.norm_sqr() + b.norm_sqr(),
            _ => 0.0,
        }
    }

    pub fn check_boundary_decay(&self) -> Result<()> {
        let boundary = self.boundary_density();
        if boundary < BOUNDARY_DECAY {
            Ok(())
        } else {
            Err(Error::BoundaryDecay { boundary })
        }
    }

    fn require_space(&self, expected: Space) -> Result<()> {
        if self.space == expected {
            Ok(())
        } else {
            Err(Error::WrongSpace { expected })
        }
    }

    fn require_normalized(&self) -> Result<()> {
        let norm = self.norm();
        if (norm - 1.0).abs() > NORM_TOLERANCE || !norm.is_finite() {
            Err(Error::NotNormalized(norm))
        } else {
            Ok(())
        }
    }

    /// Unitary transform to the momentum representation.
    pub fn to_momentum(&self) -> Result<Self> {
        self.require_space(Space::Position)?;
        let hbar = self.hbar;
        let (x0, dx) = (self.origin, self.spacing);
        let p_min = self.conjugate_origin;
        let dp = self.conjugate_spacing();
        let mut buf: Vec<Complex64> = self
            .samples
            .iter()
            .enumerate()
            .map(|(j, &a)| a * Complex64::cis(-p_min * (x0 + j as f64 * dx) / hbar))
            .collect();
        fft_in_place(&mut buf, false);
        let scale = dx / (2.0 * PI * hbar).sqrt();
        for (k, a) in buf.iter_mut().enumerate() {
            *a *= Complex64::cis(-(k as f64) * dp * x0 / hbar) * scale;
        }
        Ok(Self {
            samples: buf,
            origin: p_min,
            spacing: dp,
            conjugate_origin: x0,
            hbar,
            space: Space::Momentum,
        })
    }

    /// Inverse of [`to_momentum`](Self::to_momentum).
    pub fn to_position(&self) -> Result<Self> {
        self.require_space(Space::Momentum)?;
        let hbar = self.hbar;
        let (p_min, dp) = (self.origin, self.spacing);
        let x0 = self.conjugate_origin;
        let dx = self.conjugate_spacing();
        let mut buf: Vec<Complex64> = self
            .samples
            .iter()
            .enumerate()
            .map(|(k, &a)| a * Complex64::cis(k as f64 * dp * x0 / hbar))
            .collect();
        fft_in_place(&mut buf, true);
        let scale = dp / (2.0 * PI * hbar).sqrt();
        for (j, a) in buf.iter_mut().enumerate() {
            *a *= Complex64::cis(p_min * (x0 + j as f64 * dx) / hbar) * scale;
        }
        Ok(Self {
            samples: buf,
            origin: x0,
            spacing: dx,
            conjugate_origin: p_min,
            hbar,
            space: Space::Position,
        })
    }

    /// `-sum_j q_j ln q_j ds` with `q_j = |psi_j|^2` and `0 ln 0 = 0`.
    pub fn differential_entropy(&self) -> Result<f64> {
        self.require_normalized()?;
        let sum: f64 = self
            .samples
            .iter()
            .map(|a| {
                let q = a.norm_sqr();
                if q > 0.0 {
                    -q * q.ln()
                } else {
                    0.0
                }
            })
            .sum();
        Ok(sum * self.spacing)
    }

    pub fn moments(&self) -> Result<Moments> {
        self.require_normalized()?;
        let ds = self.spacing;
        let density = self.density();
        let mean: f64 = density
            .iter()
            .enumerate()
            .map(|(j, q)| self.coordinate(j) * q)
            .sum::<f64>()
            * ds;
        let var: f64 = density
            .iter()
            .enumerate()
            .map(|(j, q)| {
                let d = self.coordinate(j) - mean;
                d * d * q
            })
            .sum::<f64>()
            * ds;
        Ok(Moments {
            mean,
            std_dev: var.sqrt(),
        })
    }

    /// Born-rule draw of a grid point by inverse CDF over `q_j dx`.
    pub fn sample_position(&self, rng: &mut SimRng) -> Result<f64> {
        self.require_space(Space::Position)?;
        self.require_normalized()?;
        let mut cdf = Vec::with_capacity(self.len());
        let mut acc = 0.0;
        for a in &self.samples {
            acc += a.norm_sqr() * self.spacing;
            cdf.push(acc);
        }
        let u = rng.uniform() * acc;
        let j = cdf.partition_point(|&c| c <= u).min(self.len() - 1);
        Ok(self.coordinate(j))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Moments {
    pub mean: f64,
    pub std_dev: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::gaussian_entropy;

    fn spec_16() -> GridSpec {
        GridSpec::spanning(-16.0, 16.0, 1024).unwrap()
    }

    fn unit_packet(mu: f64, p0: f64, sigma: f64) -> GaussianPacket {
        GaussianPacket::new(mu, p0, sigma, 1.0, 1.0).unwrap()
    }

    #[test]
    fn grid_size_rules() {
        assert!(matches!(
            GridSpec::new(0.0, 0.1, 128),
            Err(Error::GridSize(128))
        ));
        assert!(matches!(
            GridSpec::new(0.0, 0.1, 300),
            Err(Error::GridSize(300))
        ));
        assert!(GridSpec::new(0.0, 0.1, 256).is_ok());
        assert!(GridSpec::new(0.0, -0.1, 256).is_err());
    }

    #[test]
    fn from_gaussian_is_normalized_with_oracle_width() {
        let psi = GridWavefunction::from_gaussian(&unit_packet(0.0, 0.0, 1.0), spec_16()).unwrap();
        assert!((psi.norm() - 1.0).abs() < 1e-9);
        let m = psi.moments().unwrap();
        assert!(m.mean.abs() < 1e-8);
        assert!((m.std_dev - 1.0).abs() < 1e-6);
    }

    #[test]
    fn from_gaussian_rejects_narrow_grid() {
        let spec = GridSpec::spanning(-4.0, 4.0, 256).unwrap();
        match GridWavefunction::from_gaussian(&unit_packet(0.0, 0.0, 1.0), spec) {
            Err(Error::GridTooNarrow { boundary_mass }) => {
                // mass outside +-4 sigma
                assert!((boundary_mass - 6.334_248_366_623_996e-5).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn momentum_mean_tracks_p0() {
        let psi = GridWavefunction::from_gaussian(&unit_packet(0.0, 3.0, 1.0), spec_16()).unwrap();
        let m = psi.to_momentum().unwrap().moments().unwrap();
        assert!((m.mean - 3.0).abs() < 1e-6);
        assert!((m.std_dev - 0.5).abs() < 1e-6);
    }

    #[test]
    fn narrow_packet_has_wide_momentum() {
        let spec = GridSpec::spanning(-4.0, 4.0, 2048).unwrap();
        let psi = GridWavefunction::from_gaussian(&unit_packet(0.0, 0.0, 0.05), spec).unwrap();
        let m = psi.to_momentum().unwrap().moments().unwrap();
        assert!((m.std_dev - 10.0).abs() < 1e-3, "{}", m.std_dev);
    }

    #[test]
    fn round_trip_recovers_input() {
        let psi = GridWavefunction::from_gaussian(&unit_packet(1.0, -2.0, 0.8), spec_16())
            .unwrap()
            .with_momentum_center(-2.0);
        let phi = psi.to_momentum().unwrap();
        assert!((phi.norm() - psi.norm()).abs() < 1e-10);
        let back = phi.to_position().unwrap();
        let dev = psi
            .samples()
            .iter()
            .zip(back.samples())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(dev < 1e-10, "{dev}");
    }

    #[test]
    fn wrong_space_is_a_usage_error() {
        let psi = GridWavefunction::from_gaussian(&unit_packet(0.0, 0.0, 1.0), spec_16()).unwrap();
        assert!(matches!(
            psi.to_position(),
            Err(Error::WrongSpace {
                expected: Space::Momentum
            })
        ));
        let phi = psi.to_momentum().unwrap();
        assert!(phi.to_momentum().is_err());
        assert!(phi.sample_position(&mut SimRng::from_seed(1)).is_err());
    }

    #[test]
    fn normalize_examples() {
        let psi = GridWavefunction::from_gaussian(&unit_packet(0.0, 1.0, 1.0), spec_16()).unwrap();
        let again = psi.normalize().unwrap();
        let dev = psi
            .samples()
            .iter()
            .zip(again.samples())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(dev < 1e-12);
        let scaled = psi.map_samples(|a| a * 7.0).normalize().unwrap();
        for (a, b) in scaled.samples().iter().zip(psi.samples()) {
            assert!((a - b).norm() < 1e-15);
        }
        let zero = GridWavefunction::from_samples(
            vec![Complex64::new(0.0, 0.0); 256],
            spec_16_small(),
            1.0,
        )
        .unwrap();
        assert!(matches!(zero.normalize(), Err(Error::DegenerateState)));
    }

    fn spec_16_small() -> GridSpec {
        GridSpec::spanning(-16.0, 16.0, 256).unwrap()
    }

    fn uniform_state(width: f64) -> GridWavefunction {
        // cells j*dx in [0, width) carry the density 1/width exactly
        let spec = GridSpec::new(0.0, width / 512.0, 1024).unwrap();
        let amp = width.recip().sqrt();
        GridWavefunction::from_fn(spec, 1.0, |x| {
            if x < width - 1e-12 {
                Complex64::new(amp, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .unwrap()
    }

    #[test]
    fn uniform_entropies() {
        assert!(uniform_state(1.0).differential_entropy().unwrap().abs() < 1e-9);
        let h = uniform_state(2.0).differential_entropy().unwrap();
        assert!((h - 2f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn gaussian_entropy_by_quadrature() {
        let psi = GridWavefunction::from_gaussian(&unit_packet(0.0, 0.0, 1.0), spec_16()).unwrap();
        let h = psi.differential_entropy().unwrap();
        assert!((h - 1.418_938_533_204_672_7).abs() < 1e-6);
    }

    #[test]
    fn entropy_requires_normalization() {
        let psi = GridWavefunction::from_gaussian(&unit_packet(0.0, 0.0, 1.0), spec_16()).unwrap();
        let off = psi.map_samples(|a| a * 1.01);
        assert!(matches!(
            off.differential_entropy(),
            Err(Error::NotNormalized(_))
        ));
        assert!(off.moments().is_err());
    }

    #[test]
    fn moments_examples() {
        let psi = GridWavefunction::from_gaussian(&unit_packet(2.0, 0.0, 1.0), spec_16()).unwrap();
        let m = psi.moments().unwrap();
        assert!((m.mean - 2.0).abs() < 1e-8);
        assert!((m.std_dev - 1.0).abs() < 1e-6);

        let a = 3.0;
        let pair = GridWavefunction::from_fn(spec_16(), 1.0, |x| {
            let g = |c: f64| (-(x - c) * (x - c) / (4.0 * 0.25)).exp();
            Complex64::new(g(-a) + g(a), 0.0)
        })
        .unwrap();
        assert!(pair.moments().unwrap().mean.abs() < 1e-8);
    }

    #[test]
    fn delta_state_samples_its_cell() {
        let spec = spec_16_small();
        let mut samples = vec![Complex64::new(0.0, 0.0); 256];
        samples[77] = Complex64::new(1.0, 0.0);
        let psi = GridWavefunction::from_samples(samples, spec, 1.0)
            .unwrap()
            .normalize()
            .unwrap();
        for seed in 0..20 {
            let x = psi.sample_position(&mut SimRng::from_seed(seed)).unwrap();
            assert_eq!(x, spec.x(77));
        }
    }

    #[test]
    fn sampling_is_deterministic_and_born_distributed() {
        let psi = GridWavefunction::from_gaussian(&unit_packet(0.0, 0.0, 1.0), spec_16()).unwrap();
        let draw = |seed| {
            let mut rng = SimRng::from_seed(seed);
            (0..100_000)
                .map(|_| psi.sample_position(&mut rng).unwrap())
                .collect::<Vec<_>>()
        };
        let a = draw(42);
        assert_eq!(a, draw(42));
        let n = a.len() as f64;
        let mean = a.iter().sum::<f64>() / n;
        let std = (a.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
        assert!(mean.abs() < 0.02, "{mean}");
        assert!((std - 1.0).abs() < 0.02, "{std}");
    }

    #[test]
    fn histogram_converges_in_total_variation() {
        let psi =
            GridWavefunction::from_gaussian(&unit_packet(0.5, 0.0, 1.3), spec_16_small()).unwrap();
        let q: Vec<f64> = psi.density().iter().map(|d| d * psi.spacing()).collect();
        let tv = |draws: usize| {
            let mut rng = SimRng::from_seed(9);
            let mut counts = vec![0usize; psi.len()];
            for _ in 0..draws {
                let x = psi.sample_position(&mut rng).unwrap();
                let j = ((x - psi.origin()) / psi.spacing()).round() as usize;
                counts[j] += 1;
            }
            0.5 * counts
                .iter()
                .zip(&q)
                .map(|(&c, &p)| (c as f64 / draws as f64 - p).abs())
                .sum::<f64>()
        };
        let small = tv(2_000);
        let large = tv(200_000);
        // O(n^-1/2): 100x the draws should shrink the distance roughly tenfold
        assert!(large < small / 4.0, "{small} {large}");
        assert!(large < 0.02);
    }

    #[test]
    fn entropy_quadrature_matches_oracle_over_widths() {
        for i in 0..=12 {
            let sigma = 0.1 + (4.0 - 0.1) * i as f64 / 12.0;
            let spec = GridSpec::spanning(-64.0, 64.0, 2048).unwrap();
            let packet = unit_packet(0.0, 0.0, sigma);
            let psi = GridWavefunction::from_gaussian(&packet, spec).unwrap();
            let h = psi.differential_entropy().unwrap();
            assert!(
                (h - gaussian_entropy(sigma).unwrap()).abs() < 1e-6,
                "sigma {sigma}"
            );
        }
    }
}
