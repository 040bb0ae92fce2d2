//! Steering verdicts from entanglement of the mapped states, plus noise
//! thresholds for white-noise families.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::qmat::ThreeQubitState;
use crate::states::NoisyFamily;
use crate::taumap::{build_tau, within_bound, Direction, Scenario, Strength};
use crate::witness::{CriterionId, CriterionVerdict, EPS_CRIT};

/// Smallest tolerance accepted by [`threshold`].
pub const MIN_TOLERANCE: f64 = 1e-8;

/// Number of intervals in the monotonicity pre-scan (65 grid points).
pub const PRESCAN_INTERVALS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Conclusion {
    Detected,
    Undetermined,
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Conclusion::Detected => "detected",
            Conclusion::Undetermined => "undetermined",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SteeringReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub scenario: Scenario,
    pub mu: f64,
    pub certified: bool,
    pub criteria: Vec<CriterionVerdict>,
    pub conclusions: BTreeMap<Scenario, Conclusion>,
    pub notes: Vec<String>,
}

impl SteeringReport {
    pub fn conclusion(&self, scenario: Scenario) -> Conclusion {
        self.conclusions
            .get(&scenario)
            .copied()
            .unwrap_or(Conclusion::Undetermined)
    }

    /// Conclusion for the scenario the report was requested for.
    pub fn verdict(&self) -> Conclusion {
        self.conclusion(self.scenario)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Criteria run by [`detect`] when the caller does not choose.
pub fn default_criteria(scenario: Scenario) -> &'static [CriterionId] {
    if !scenario.has_certified_criterion() {
        return &[];
    }
    match scenario.strength {
        Strength::Genuine => &[CriterionId::GhzGme, CriterionId::Prop1Gme, CriterionId::WGmeRef],
        Strength::Steering => &[CriterionId::GhzEnt, CriterionId::PptEnt],
    }
}

/// Genuine scenarios need a criterion that certifies genuine entanglement;
/// any criterion works for plain steering.
pub fn check_compatible(criterion: CriterionId, scenario: Scenario) -> Result<()> {
    let ok = scenario.has_certified_criterion()
        && (scenario.strength == Strength::Steering || criterion.is_genuine());
    if ok {
        Ok(())
    } else {
        Err(Error::IncompatibleCriterion {
            criterion: criterion.to_string(),
            scenario: scenario.to_string(),
        })
    }
}

/// Closes a set of detected scenarios under the implications between them:
/// genuine steering implies steering in the same direction, and steering to
/// a single trusted party implies steering to two.
pub fn apply_implications(detected: &mut BTreeMap<Scenario, Conclusion>) {
    let implied = |s: Scenario| -> Vec<Scenario> {
        let mut out = Vec::new();
        if s.strength == Strength::Genuine {
            out.push(Scenario::new(s.direction, Strength::Steering));
        }
        if s.direction == Direction::AbToC {
            out.push(Scenario::new(Direction::AToBc, s.strength));
        }
        out
    };
    loop {
        let mut changed = false;
        for s in Scenario::ALL {
            if detected.get(&s) != Some(&Conclusion::Detected) {
                continue;
            }
            for t in implied(s) {
                if detected.insert(t, Conclusion::Detected) != Some(Conclusion::Detected) {
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
}

/// Runs the default criteria for `scenario` on the mapped state. `mu`
/// defaults to the scenario's bound.
pub fn detect(rho: &ThreeQubitState, scenario: Scenario, mu: Option<f64>) -> Result<SteeringReport> {
    detect_with_criteria(rho, scenario, mu, default_criteria(scenario))
}

pub fn detect_with_criteria(
    rho: &ThreeQubitState,
    scenario: Scenario,
    mu: Option<f64>,
    criteria: &[CriterionId],
) -> Result<SteeringReport> {
    for &c in criteria {
        check_compatible(c, scenario)?;
    }
    let bound = scenario.mu_bound();
    let mu = mu.unwrap_or(bound);
    let tau = build_tau(rho, scenario.tau_kind(), mu)?;
    let certified = within_bound(mu, bound);
    let verdicts: Vec<CriterionVerdict> = criteria.iter().map(|c| c.evaluate(tau.state())).collect();

    let mut notes = Vec::new();
    if !scenario.has_certified_criterion() {
        notes.push("undetermined: no certified criterion for genuine steering from AB to C".into());
    }
    if !certified {
        notes.push(format!(
            "mu = {mu} exceeds the bound {bound:.6} for {scenario}; entanglement of the mapped state certifies nothing"
        ));
    }
    if scenario == Scenario::AB_TO_C_STEERING {
        notes.push(
            "steering from AB to C is reported together with the steering from A to BC it implies".into(),
        );
    }

    let mut conclusions: BTreeMap<Scenario, Conclusion> =
        Scenario::ALL.iter().map(|&s| (s, Conclusion::Undetermined)).collect();
    if certified && verdicts.iter().any(|v| v.detected) {
        conclusions.insert(scenario, Conclusion::Detected);
        apply_implications(&mut conclusions);
    }

    Ok(SteeringReport {
        label: rho.label().map(str::to_owned),
        scenario,
        mu,
        certified,
        criteria: verdicts,
        conclusions,
        notes,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdResult {
    pub family: String,
    pub scenario: Scenario,
    pub criterion: CriterionId,
    pub p_critical: f64,
    pub tolerance: f64,
    pub p_low: f64,
    pub p_high: f64,
    pub margin_low: f64,
    pub margin_high: f64,
}

/// Criterion margin on the scenario's mapped state for the family member at
/// `p`, with `μ` pinned to the scenario's bound.
pub fn family_margin(
    family: &NoisyFamily,
    scenario: Scenario,
    criterion: CriterionId,
    p: f64,
) -> Result<f64> {
    let rho = family.at(p)?;
    let tau = build_tau(&rho, scenario.tau_kind(), scenario.mu_bound())?;
    Ok(criterion.evaluate(tau.state()).margin)
}

/// Bracket around the point where a margin first exceeds [`EPS_CRIT`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub low: f64,
    pub high: f64,
    pub margin_low: f64,
    pub margin_high: f64,
}

impl Bracket {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.low + self.high)
    }
}

/// Bisects a margin on `[0, 1]` that is quiet at 0 and fires at 1. A pre-scan
/// on a 65-point grid rejects margins whose detection flips more than once.
pub fn locate_crossing(margin: impl Fn(f64) -> Result<f64>, tol: f64) -> Result<Bracket> {
    if tol.is_nan() || tol < MIN_TOLERANCE {
        return Err(Error::ToleranceTooSmall(tol));
    }
    let m0 = margin(0.0)?;
    if m0 > EPS_CRIT {
        return Err(Error::AlwaysFires { margin_at_zero: m0 });
    }
    let m1 = margin(1.0)?;
    if m1 <= EPS_CRIT {
        return Err(Error::NeverFires { margin_at_one: m1 });
    }

    let n = PRESCAN_INTERVALS;
    let grid: Vec<f64> = (0..=n).map(|k| k as f64 / n as f64).collect();
    let mut fired = Vec::with_capacity(grid.len());
    for &p in &grid {
        fired.push(margin(p)? > EPS_CRIT);
    }
    let flips: Vec<(f64, f64)> = (0..n)
        .filter(|&k| fired[k] != fired[k + 1])
        .map(|k| (grid[k], grid[k + 1]))
        .collect();
    if flips.len() != 1 {
        return Err(Error::NonMonotone { intervals: flips });
    }

    let (mut lo, mut hi) = flips[0];
    let (mut m_lo, mut m_hi) = (margin(lo)?, margin(hi)?);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let m = margin(mid)?;
        if m > EPS_CRIT {
            hi = mid;
            m_hi = m;
        } else {
            lo = mid;
            m_lo = m;
        }
    }
    Ok(Bracket {
        low: lo,
        high: hi,
        margin_low: m_lo,
        margin_high: m_hi,
    })
}

/// Critical noise parameter at which `criterion` starts to fire along the
/// family, located by bisection to within `tol`.
pub fn threshold(
    family: &NoisyFamily,
    scenario: Scenario,
    criterion: CriterionId,
    tol: f64,
) -> Result<ThresholdResult> {
    if tol.is_nan() || tol < MIN_TOLERANCE {
        return Err(Error::ToleranceTooSmall(tol));
    }
    check_compatible(criterion, scenario)?;
    let b = locate_crossing(|p| family_margin(family, scenario, criterion, p), tol)?;
    Ok(ThresholdResult {
        family: family.label().to_owned(),
        scenario,
        criterion,
        p_critical: b.midpoint(),
        tolerance: tol,
        p_low: b.low,
        p_high: b.high,
        margin_low: b.margin_low,
        margin_high: b.margin_high,
    })
}

/// Which family a table cell belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinFamily {
    Ghz,
    W,
}

impl BuiltinFamily {
    pub fn family(self) -> NoisyFamily {
        match self {
            BuiltinFamily::Ghz => NoisyFamily::ghz(),
            BuiltinFamily::W => NoisyFamily::w(),
        }
    }
}

/// The six threshold cells: per family, steering A→BC, genuine steering
/// A→BC and steering AB→C, each with the criterion that yields it.
pub const TABLE_CELLS: [(BuiltinFamily, Scenario, CriterionId); 6] = [
    (BuiltinFamily::Ghz, Scenario::A_TO_BC_STEERING, CriterionId::GhzEnt),
    (BuiltinFamily::Ghz, Scenario::A_TO_BC_GENUINE, CriterionId::GhzGme),
    (BuiltinFamily::Ghz, Scenario::AB_TO_C_STEERING, CriterionId::GhzEnt),
    (BuiltinFamily::W, Scenario::A_TO_BC_STEERING, CriterionId::PptEnt),
    (BuiltinFamily::W, Scenario::A_TO_BC_GENUINE, CriterionId::Prop1Gme),
    (BuiltinFamily::W, Scenario::AB_TO_C_STEERING, CriterionId::PptEnt),
];

/// Computes every entry of [`TABLE_CELLS`], in that order. With `parallel`
/// each cell runs on its own scoped thread.
pub fn reproduce_tables(tol: f64, parallel: bool) -> Result<Vec<ThresholdResult>> {
    let cell = |&(fam, scenario, criterion): &(BuiltinFamily, Scenario, CriterionId)| {
        threshold(&fam.family(), scenario, criterion, tol)
    };
    if !parallel {
        return TABLE_CELLS.iter().map(cell).collect();
    }
    std::thread::scope(|s| {
        let handles: Vec<_> = TABLE_CELLS.iter().map(|c| s.spawn(move || cell(c))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("table worker panicked"))
            .collect()
    })
}
