//! Entropy bookkeeping and the uncertainty / second-law audit.
//!
//! Each [`LedgerEntry`] stores the position and momentum entropies of the
//! state at one instant, the thermodynamic entropy `S = k_B I_p`, the Leipnik
//! sum `I_x + I_p` against its bound `ln(pi e hbar)` and the Heisenberg
//! product `sigma_x sigma_p`. [`EntropyLedger::verify`] audits a whole run.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::events::{AbsorptionEvent, Photon};
use crate::grid::{GridWavefunction, Space};
use crate::units::UnitSystem;

/// Allowed shortfall of `I_x + I_p` below the Leipnik bound (nats).
pub const LEIPNIK_TOLERANCE: f64 = 1e-6;
/// Allowed shortfall of `sigma_x sigma_p` below `hbar / 2`.
pub const HEISENBERG_TOLERANCE: f64 = 1e-9;
/// Allowed drift of `I_p` between consecutive entries without an event (nats).
pub const CONSTANCY_TOLERANCE: f64 = 1e-8;

pub const CSV_HEADER: &str = "t,I_x,I_p,S,leipnik_sum,leipnik_bound,heisenberg_product,event";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EventTag {
    None,
    Absorption,
    ScenarioStep,
}

impl EventTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            EventTag::None => "none",
            EventTag::Absorption => "absorption",
            EventTag::ScenarioStep => "scenario-step",
        }
    }
}

impl FromStr for EventTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(EventTag::None),
            "absorption" => Ok(EventTag::Absorption),
            "scenario-step" => Ok(EventTag::ScenarioStep),
            other => Err(Error::Usage(format!("unknown event tag `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LedgerEntry {
    pub t: f64,
    #[serde(rename = "I_x")]
    pub i_x: f64,
    #[serde(rename = "I_p")]
    pub i_p: f64,
    #[serde(rename = "S")]
    pub s: f64,
    pub leipnik_sum: f64,
    pub leipnik_bound: f64,
    pub heisenberg_product: f64,
    pub event: EventTag,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub payload: Option<AbsorptionEvent>,
}

impl LedgerEntry {
    /// Total information entropy of the system made of this state plus a
    /// not-yet-absorbed photon. The photon contributes nothing.
    pub fn total_with_photon(&self, photon: &Photon) -> f64 {
        self.leipnik_sum + photon.total_information_entropy()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyLedger {
    pub run_id: String,
    pub seed: u64,
    pub units: UnitSystem,
    entries: Vec<LedgerEntry>,
}

impl EntropyLedger {
    pub fn new(run_id: impl Into<String>, seed: u64, units: UnitSystem) -> Self {
        Self {
            run_id: run_id.into(),
            seed,
            units,
            entries: Vec::new(),
        }
    }

    pub fn entries(&self) -> &[LedgerEntry] {
        &self.entries
    }

    /// Mutable access for fault-injection in audits and tests.
    pub fn entries_mut(&mut self) -> &mut [LedgerEntry] {
        &mut self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Measures `psi` at time `t` and appends the entry.
    pub fn record(&mut self, t: f64, psi: &GridWavefunction) -> Result<&LedgerEntry> {
        self.record_tagged(t, psi, EventTag::None, None)
    }

    /// Records the post-event state of an absorption at the event time.
    pub fn record_absorption(
        &mut self,
        psi_after: &GridWavefunction,
        event: AbsorptionEvent,
    ) -> Result<&LedgerEntry> {
        self.record_tagged(event.t1, psi_after, EventTag::Absorption, Some(event))
    }

    pub fn record_tagged(
        &mut self,
        t: f64,
        psi: &GridWavefunction,
        event: EventTag,
        payload: Option<AbsorptionEvent>,
    ) -> Result<&LedgerEntry> {
        self.check_time(t)?;
        if psi.space() != Space::Position {
            return Err(Error::WrongSpace {
                expected: Space::Position,
            });
        }
        if (psi.hbar() - self.units.hbar).abs() > 1e-12 * self.units.hbar {
            return Err(Error::Usage(format!(
                "state hbar {} does not match the ledger unit system ({})",
                psi.hbar(),
                self.units.hbar
            )));
        }
        psi.check_boundary_decay()?;
        let phi = psi.to_momentum()?;
        phi.check_boundary_decay()?;
        let i_x = psi.differential_entropy()?;
        let i_p = phi.differential_entropy()?;
        let sigma_x = psi.moments()?.std_dev;
        let sigma_p = phi.moments()?.std_dev;
        self.entries.push(LedgerEntry {
            t,
            i_x,
            i_p,
            s: self.units.k_b * i_p,
            leipnik_sum: i_x + i_p,
            leipnik_bound: self.units.leipnik_bound(),
            heisenberg_product: sigma_x * sigma_p,
            event,
            payload,
        });
        Ok(self.entries.last().expect("just pushed"))
    }

    /// Appends a pre-computed entry (e.g. re-read from a CSV file).
    pub fn push_entry(&mut self, entry: LedgerEntry) -> Result<()> {
        self.check_time(entry.t)?;
        self.entries.push(entry);
        Ok(())
    }

    fn check_time(&self, t: f64) -> Result<()> {
        if !t.is_finite() {
            return Err(Error::Usage(format!("non-finite time {t}")));
        }
        if let Some(last) = self.entries.last() {
            if !(t > last.t) {
                return Err(Error::Usage(format!(
                    "time regression: t = {t} does not follow the last recorded t = {}",
                    last.t
                )));
            }
        }
        Ok(())
    }

    fn pair(&self, i: usize, j: usize) -> Result<(&LedgerEntry, &LedgerEntry)> {
        if j < i {
            return Err(Error::Usage(format!(
                "entry indices out of order: {i} > {j}"
            )));
        }
        match (self.entries.get(i), self.entries.get(j)) {
            (Some(a), Some(b)) => Ok((a, b)),
            _ => Err(Error::Usage(format!(
                "entry index out of range ({i}, {j}) for {} entries",
                self.entries.len()
            ))),
        }
    }

    /// Thermodynamic entropy change `k_B (I_p[j] - I_p[i])`.
    pub fn delta_s(&self, i: usize, j: usize) -> Result<f64> {
        let (a, b) = self.pair(i, j)?;
        Ok(self.units.k_b * (b.i_p - a.i_p))
    }

    /// The same change read off the position side, `k_B (I_x[i] - I_x[j])`.
    /// Agrees with [`delta_s`](Self::delta_s) when both entries saturate the
    /// Leipnik bound.
    pub fn delta_s_position(&self, i: usize, j: usize) -> Result<f64> {
        let (a, b) = self.pair(i, j)?;
        Ok(self.units.k_b * (a.i_x - b.i_x))
    }

    pub fn verify(&self) -> VerificationReport {
        let k_b = self.units.k_b;
        let half_hbar = 0.5 * self.units.hbar;
        let bound = self.units.leipnik_bound();
        let mut violations = Vec::new();
        let mut audits = Vec::with_capacity(self.entries.len());
        let mut events = Vec::new();

        if self.entries.is_empty() {
            violations.push(Violation::new(
                0,
                ViolationKind::Empty,
                "ledger has no entries".into(),
            ));
        }

        for (index, e) in self.entries.iter().enumerate() {
            let leipnik_slack = e.i_x + e.i_p - bound;
            let heisenberg_slack = e.heisenberg_product - half_hbar;
            if !(leipnik_slack >= -LEIPNIK_TOLERANCE) {
                violations.push(Violation::new(
                    index,
                    ViolationKind::Leipnik,
                    format!("I_x + I_p falls {:.3e} below ln(pi e hbar)", -leipnik_slack),
                ));
            }
            if !(heisenberg_slack >= -HEISENBERG_TOLERANCE) {
                violations.push(Violation::new(
                    index,
                    ViolationKind::Heisenberg,
                    format!(
                        "sigma_x sigma_p falls {:.3e} below hbar/2",
                        -heisenberg_slack
                    ),
                ));
            }
            if (e.s - k_b * e.i_p).abs() > CONSTANCY_TOLERANCE * k_b * (1.0 + e.i_p.abs()) {
                violations.push(Violation::new(
                    index,
                    ViolationKind::EntropyIdentity,
                    format!("stored S = {} differs from k_B I_p = {}", e.s, k_b * e.i_p),
                ));
            }
            if (e.leipnik_bound - bound).abs() > LEIPNIK_TOLERANCE {
                violations.push(Violation::new(
                    index,
                    ViolationKind::Leipnik,
                    format!(
                        "stored bound {} differs from ln(pi e hbar) = {bound}",
                        e.leipnik_bound
                    ),
                ));
            }

            if index > 0 {
                let d_ip = e.i_p - self.entries[index - 1].i_p;
                match e.event {
                    EventTag::Absorption => {
                        if !(d_ip > 0.0) {
                            violations.push(Violation::new(
                                index,
                                ViolationKind::SecondLaw,
                                format!(
                                    "S did not increase across the absorption (dI_p = {d_ip:.3e})"
                                ),
                            ));
                        }
                    }
                    EventTag::None | EventTag::ScenarioStep => {
                        if d_ip < -CONSTANCY_TOLERANCE {
                            violations.push(Violation::new(
                                index,
                                ViolationKind::SecondLaw,
                                format!("S decreased without an event (dI_p = {d_ip:.3e})"),
                            ));
                        } else if d_ip > CONSTANCY_TOLERANCE {
                            violations.push(Violation::new(
                                index,
                                ViolationKind::Constancy,
                                format!("S changed under free evolution (dI_p = {d_ip:.3e})"),
                            ));
                        }
                    }
                }
            }

            if e.event == EventTag::Absorption {
                let ledger_delta = if index > 0 {
                    Some(k_b * (e.i_p - self.entries[index - 1].i_p))
                } else {
                    None
                };
                if let Some(p) = &e.payload {
                    if !(p.delta_s > 0.0) {
                        violations.push(Violation::new(
                            index,
                            ViolationKind::EventDelta,
                            format!("event delta_S = {} is not positive", p.delta_s),
                        ));
                    }
                }
                events.push(EventAudit {
                    index,
                    t: e.t,
                    delta_s: ledger_delta,
                    event_delta_s: e.payload.as_ref().map(|p| p.delta_s),
                    x1: e.payload.as_ref().map(|p| p.x1),
                    sigma_loc: e.payload.as_ref().map(|p| p.sigma_loc),
                });
            }

            audits.push(EntryAudit {
                index,
                t: e.t,
                i_x: e.i_x,
                i_p: e.i_p,
                s: e.s,
                leipnik_slack,
                heisenberg_slack,
                event: e.event,
            });
        }

        let cumulative_delta_s = match (self.entries.first(), self.entries.last()) {
            (Some(a), Some(b)) => k_b * (b.i_p - a.i_p),
            _ => 0.0,
        };

        VerificationReport {
            run_id: self.run_id.clone(),
            seed: self.seed,
            units: self.units,
            tolerances: Tolerances::default(),
            leipnik_bound: bound,
            entries: audits,
            events,
            cumulative_delta_s,
            pass: violations.is_empty(),
            violations,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.entries.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for e in &self.entries {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                fmt9(e.t),
                fmt9(e.i_x),
                fmt9(e.i_p),
                fmt9(e.s),
                fmt9(e.leipnik_sum),
                fmt9(e.leipnik_bound),
                fmt9(e.heisenberg_product),
                e.event.as_str()
            );
        }
        out
    }

    /// Re-reads a time series written by [`to_csv`](Self::to_csv).
    pub fn from_csv(
        text: &str,
        run_id: impl Into<String>,
        seed: u64,
        units: UnitSystem,
    ) -> Result<Self> {
        let mut ledger = Self::new(run_id, seed, units);
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, header)) if header.trim() == CSV_HEADER => {}
            Some((_, header)) => {
                return Err(Error::Usage(format!(
                    "line 1: unexpected header `{}`, expected `{CSV_HEADER}`",
                    header.trim()
                )))
            }
            None => return Err(Error::Usage("empty CSV input".into())),
        }
        for (n, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let lineno = n + 1;
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 8 {
                return Err(Error::Usage(format!(
                    "line {lineno}: expected 8 fields, found {}",
                    fields.len()
                )));
            }
            let mut nums = [0.0; 7];
            for (slot, raw) in nums.iter_mut().zip(&fields) {
                *slot = raw
                    .trim()
                    .parse()
                    .map_err(|_| Error::Usage(format!("line {lineno}: `{raw}` is not a number")))?;
            }
            let event = fields[7]
                .trim()
                .parse()
                .map_err(|e: Error| Error::Usage(format!("line {lineno}: {e}")))?;
            ledger
                .push_entry(LedgerEntry {
                    t: nums[0],
                    i_x: nums[1],
                    i_p: nums[2],
                    s: nums[3],
                    leipnik_sum: nums[4],
                    leipnik_bound: nums[5],
                    heisenberg_product: nums[6],
                    event,
                    payload: None,
                })
                .map_err(|e| Error::Usage(format!("line {lineno}: {e}")))?;
        }
        Ok(ledger)
    }
}

/// Nine significant digits in scientific notation.
pub fn fmt9(x: f64) -> String {
    format!("{x:.8e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub information: f64,
    pub heisenberg: f64,
    pub constancy: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            information: LEIPNIK_TOLERANCE,
            heisenberg: HEISENBERG_TOLERANCE,
            constancy: CONSTANCY_TOLERANCE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    Empty,
    Leipnik,
    Heisenberg,
    EntropyIdentity,
    SecondLaw,
    Constancy,
    EventDelta,
}

impl ViolationKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ViolationKind::Empty => "empty",
            ViolationKind::Leipnik => "leipnik",
            ViolationKind::Heisenberg => "heisenberg",
            ViolationKind::EntropyIdentity => "entropy-identity",
            ViolationKind::SecondLaw => "second-law",
            ViolationKind::Constancy => "constancy",
            ViolationKind::EventDelta => "event-delta",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub index: usize,
    pub kind: ViolationKind,
    pub detail: String,
}

impl Violation {
    fn new(index: usize, kind: ViolationKind, detail: String) -> Self {
        Self {
            index,
            kind,
            detail,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntryAudit {
    pub index: usize,
    pub t: f64,
    #[serde(rename = "I_x")]
    pub i_x: f64,
    #[serde(rename = "I_p")]
    pub i_p: f64,
    #[serde(rename = "S")]
    pub s: f64,
    pub leipnik_slack: f64,
    pub heisenberg_slack: f64,
    pub event: EventTag,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EventAudit {
    pub index: usize,
    pub t: f64,
    /// `k_B (I_p after - I_p before)` from consecutive entries.
    pub delta_s: Option<f64>,
    /// The value computed by the event itself (position route).
    pub event_delta_s: Option<f64>,
    pub x1: Option<f64>,
    pub sigma_loc: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub run_id: String,
    pub seed: u64,
    pub units: UnitSystem,
    pub tolerances: Tolerances,
    pub leipnik_bound: f64,
    pub entries: Vec<EntryAudit>,
    pub events: Vec<EventAudit>,
    pub cumulative_delta_s: f64,
    pub violations: Vec<Violation>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn has_violation(&self, index: usize, kind: ViolationKind) -> bool {
        self.violations
            .iter()
            .any(|v| v.index == index && v.kind == kind)
    }

    pub fn status(&self) -> &'static str {
        if self.pass {
            "PASS"
        } else {
            "FAIL"
        }
    }

    /// `key: value` header followed by a fixed-width table.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "run_id: {}", self.run_id);
        let _ = writeln!(out, "seed: {}", self.seed);
        let _ = writeln!(out, "hbar: {}", self.units.hbar);
        let _ = writeln!(out, "k_B: {}", self.units.k_b);
        let _ = writeln!(out, "c: {}", self.units.c);
        let _ = writeln!(out, "leipnik_bound: {}", fmt9(self.leipnik_bound));
        let _ = writeln!(
            out,
            "tolerance_information: {:e}",
            self.tolerances.information
        );
        let _ = writeln!(
            out,
            "tolerance_heisenberg: {:e}",
            self.tolerances.heisenberg
        );
        let _ = writeln!(out, "tolerance_constancy: {:e}", self.tolerances.constancy);
        let _ = writeln!(out, "entries: {}", self.entries.len());
        let _ = writeln!(out, "events: {}", self.events.len());
        let _ = writeln!(out, "cumulative_delta_S: {}", fmt9(self.cumulative_delta_s));
        let _ = writeln!(out, "violations: {}", self.violations.len());
        let _ = writeln!(out, "status: {}", self.status());
        out.push('\n');
        let _ = writeln!(
            out,
            "{:>5} {:>16} {:>16} {:>16} {:>16} {:>16} {:>16} {:>12}",
            "index", "t", "I_x", "I_p", "S", "leipnik_slack", "heisenberg_slack", "event"
        );
        for a in &self.entries {
            let _ = writeln!(
                out,
                "{:>5} {:>16} {:>16} {:>16} {:>16} {:>16} {:>16} {:>12}",
                a.index,
                fmt9(a.t),
                fmt9(a.i_x),
                fmt9(a.i_p),
                fmt9(a.s),
                fmt9(a.leipnik_slack),
                fmt9(a.heisenberg_slack),
                a.event.as_str()
            );
        }
        if !self.events.is_empty() {
            out.push('\n');
            for ev in &self.events {
                let opt = |v: Option<f64>| v.map(fmt9).unwrap_or_else(|| "-".into());
                let _ = writeln!(
                    out,
                    "event {} at t = {}: delta_S = {}, event delta_S = {}, x1 = {}, sigma_loc = {}",
                    ev.index,
                    fmt9(ev.t),
                    opt(ev.delta_s),
                    opt(ev.event_delta_s),
                    opt(ev.x1),
                    opt(ev.sigma_loc)
                );
            }
        }
        if !self.violations.is_empty() {
            out.push('\n');
            for v in &self.violations {
                let _ = writeln!(
                    out,
                    "violation {} at entry {}: {}",
                    v.kind.as_str(),
                    v.index,
                    v.detail
                );
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::GaussianPacket;
    use crate::events::{absorb, AbsorptionRequest, Direction, LocalizationWidth, PacketMeta};
    use crate::evolution::free_propagate;
    use crate::grid::GridSpec;
    use crate::rng::SimRng;
    use num_complex::Complex64;
    use std::f64::consts::LN_10;

    fn spec() -> GridSpec {
        GridSpec::spanning(-32.0, 32.0, 2048).unwrap()
    }

    fn gaussian(sigma: f64, mass: f64) -> GridWavefunction {
        let p = GaussianPacket::new(0.0, 0.0, sigma, mass, 1.0).unwrap();
        GridWavefunction::from_gaussian(&p, spec()).unwrap()
    }

    fn ledger() -> EntropyLedger {
        EntropyLedger::new("test", 0, UnitSystem::NATURAL)
    }

    /// Free evolution, absorption 2 -> 0.2, free evolution.
    fn composite() -> EntropyLedger {
        let mass = 1000.0;
        let mut l = ledger();
        let psi = gaussian(2.0, mass);
        l.record(0.0, &psi).unwrap();
        let psi = free_propagate(&psi, mass, 1.0).unwrap();
        l.record(1.0, &psi).unwrap();
        let req = AbsorptionRequest {
            photon: crate::events::Photon::new(20.0, 1.0, Direction::Forward).unwrap(),
            width: LocalizationWidth::Explicit(0.2),
            t1: 1.5,
            environment_temperature: 1.0,
        };
        let psi = free_propagate(&psi, mass, 0.5).unwrap();
        let out = absorb(
            &psi,
            PacketMeta { mass, p0: 0.0 },
            &req,
            1.0,
            &mut SimRng::from_seed(4),
        )
        .unwrap();
        l.record_absorption(&out.state_after, out.event).unwrap();
        let psi = free_propagate(&out.state_after, mass, 0.5).unwrap();
        l.record(2.0, &psi).unwrap();
        l
    }

    #[test]
    fn gaussian_entry_saturates_bound() {
        let mut l = ledger();
        let e = l.record(0.0, &gaussian(1.0, 1.0)).unwrap().clone();
        assert!((e.i_x - 1.418_938_533).abs() < 1e-6);
        assert!((e.i_p - 0.725_791_353).abs() < 1e-6);
        assert!((e.leipnik_sum - 2.144_729_886).abs() < 1e-6);
        assert!((e.leipnik_sum - e.leipnik_bound).abs() < 1e-6);
        assert!((e.heisenberg_product - 0.5).abs() < 1e-6);
        assert_eq!(e.s, e.i_p);
    }

    #[test]
    fn photon_adds_no_information_entropy() {
        let mut l = ledger();
        let e = l.record(0.0, &gaussian(1.0, 1.0)).unwrap().clone();
        let photon = crate::events::Photon::new(3.0, 1.0, Direction::Forward).unwrap();
        assert_eq!(photon.total_information_entropy(), 0.0);
        assert_eq!(e.total_with_photon(&photon), e.leipnik_sum);
    }

    #[test]
    fn superposition_is_strictly_above_bound() {
        let psi = GridWavefunction::from_fn(spec(), 1.0, |x| {
            let g = |c: f64| (-(x - c) * (x - c) / (4.0 * 0.25)).exp();
            Complex64::new(g(-3.0) + g(3.0), 0.0)
        })
        .unwrap();
        let mut l = ledger();
        let e = l.record(0.0, &psi).unwrap();
        assert!(e.leipnik_sum - e.leipnik_bound > 1e-3);
    }

    #[test]
    fn time_must_advance() {
        let mut l = ledger();
        let psi = gaussian(1.0, 1.0);
        l.record(1.0, &psi).unwrap();
        assert!(matches!(l.record(1.0, &psi), Err(Error::Usage(_))));
        assert!(matches!(l.record(0.5, &psi), Err(Error::Usage(_))));
    }

    #[test]
    fn delta_s_examples() {
        let l = composite();
        assert!((l.delta_s(1, 2).unwrap() - LN_10).abs() < 1e-4);
        assert!((l.delta_s_position(0, 2).unwrap() - LN_10).abs() < 1e-4);
        assert!(l.delta_s(0, 1).unwrap().abs() < 1e-8);
        assert_eq!(l.delta_s(2, 2).unwrap(), 0.0);
        assert!(matches!(l.delta_s(2, 1), Err(Error::Usage(_))));
    }

    #[test]
    fn free_run_passes_with_flat_s() {
        let mut l = ledger();
        let mut psi = gaussian(1.0, 1.0);
        for i in 0..5 {
            if i > 0 {
                psi = free_propagate(&psi, 1.0, 0.5).unwrap();
            }
            l.record(i as f64 * 0.5, &psi).unwrap();
        }
        let r = l.verify();
        assert!(r.pass, "{}", r.render_text());
        assert!(r.events.is_empty());
        assert!(r.cumulative_delta_s.abs() < 1e-8);
    }

    #[test]
    fn composite_run_passes() {
        let r = composite().verify();
        assert!(r.pass, "{}", r.render_text());
        assert_eq!(r.events.len(), 1);
        assert!((r.cumulative_delta_s - LN_10).abs() < 1e-4);
    }

    #[test]
    fn corrupted_entry_fails_second_law() {
        let mut l = composite();
        l.entries_mut()[1].i_p -= 1.0;
        let r = l.verify();
        assert!(!r.pass);
        assert!(
            r.has_violation(1, ViolationKind::SecondLaw),
            "{}",
            r.render_text()
        );
        assert!(r.render_text().contains("violation second-law at entry 1"));
    }

    #[test]
    fn empty_ledger_fails() {
        assert!(!ledger().verify().pass);
    }

    #[test]
    fn csv_round_trip_reverifies() {
        let l = composite();
        let csv = l.to_csv();
        assert!(csv.starts_with(CSV_HEADER));
        let back = EntropyLedger::from_csv(&csv, "test", 0, UnitSystem::NATURAL).unwrap();
        assert_eq!(back.len(), l.len());
        assert_eq!(back.entries()[2].event, EventTag::Absorption);
        assert!(back.verify().pass, "{}", back.verify().render_text());
        assert_eq!(back.to_csv(), csv);
    }

    #[test]
    fn csv_errors_name_the_line() {
        let bad = format!("{CSV_HEADER}\n0,1,2,3,4,5,6,none\n1,x,2,3,4,5,6,none\n");
        match EntropyLedger::from_csv(&bad, "t", 0, UnitSystem::NATURAL) {
            Err(Error::Usage(msg)) => assert!(msg.starts_with("line 3"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }
}
