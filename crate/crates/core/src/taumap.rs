//! The two mixing constructions that turn a steering question about `ρ_ABC`
//! into an entanglement question about a new three-qubit state:
//!
//! * `τ¹ = μ·ρ + (1−μ)·I₂/2 ⊗ Tr_A ρ` (Alice untrusted, Bob and Charlie trusted)
//! * `τ² = μ·ρ + (1−μ)·I₄/4 ⊗ Tr_AB ρ` (Alice and Bob untrusted, Charlie trusted)
//!
//! Entanglement of `τ¹` (genuine entanglement) certifies steering (genuine
//! steering) from A to BC for `μ ≤ 1/√3`. For `τ²`, entanglement certifies
//! steering for `μ ≤ 1/3` and genuine entanglement certifies genuine steering
//! for `μ ≤ 1/9`.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::qmat::{kron, marginal, partial_trace, ComplexMatrix, Subsystem, ThreeQubitState};

/// Relative slack when comparing a requested `μ` with its bound, so that a
/// bound computed as `1/√3` in a different expression still counts as certified.
const BOUND_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    /// Untrusted Alice steering trusted Bob and Charlie.
    AToBc,
    /// Untrusted Alice and Bob steering trusted Charlie.
    AbToC,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Strength {
    Steering,
    Genuine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scenario {
    pub direction: Direction,
    pub strength: Strength,
}

impl Scenario {
    pub const A_TO_BC_STEERING: Scenario = Scenario::new(Direction::AToBc, Strength::Steering);
    pub const A_TO_BC_GENUINE: Scenario = Scenario::new(Direction::AToBc, Strength::Genuine);
    pub const AB_TO_C_STEERING: Scenario = Scenario::new(Direction::AbToC, Strength::Steering);
    pub const AB_TO_C_GENUINE: Scenario = Scenario::new(Direction::AbToC, Strength::Genuine);

    pub const ALL: [Scenario; 4] = [
        Self::A_TO_BC_STEERING,
        Self::A_TO_BC_GENUINE,
        Self::AB_TO_C_STEERING,
        Self::AB_TO_C_GENUINE,
    ];

    pub const fn new(direction: Direction, strength: Strength) -> Self {
        Self { direction, strength }
    }

    pub fn tau_kind(self) -> TauKind {
        match self.direction {
            Direction::AToBc => TauKind::Tau1,
            Direction::AbToC => TauKind::Tau2,
        }
    }

    pub fn mu_bound(self) -> f64 {
        mu_bound(self.tau_kind(), self.strength)
    }

    /// False only for genuine AB→C steering, where none of the built-in
    /// criteria can fire at the admissible mixing weight.
    pub fn has_certified_criterion(self) -> bool {
        self != Self::AB_TO_C_GENUINE
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dir = match self.direction {
            Direction::AToBc => "a-to-bc",
            Direction::AbToC => "ab-to-c",
        };
        let strength = match self.strength {
            Strength::Steering => "steering",
            Strength::Genuine => "genuine",
        };
        write!(f, "{dir}:{strength}")
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (dir, strength) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("scenario `{s}` must look like a-to-bc:genuine")))?;
        let direction = match dir.to_ascii_lowercase().as_str() {
            "a-to-bc" => Direction::AToBc,
            "ab-to-c" => Direction::AbToC,
            other => return Err(Error::Parse(format!("unknown direction `{other}`"))),
        };
        let strength = match strength.to_ascii_lowercase().as_str() {
            "steering" => Strength::Steering,
            "genuine" => Strength::Genuine,
            other => return Err(Error::Parse(format!("unknown strength `{other}`"))),
        };
        Ok(Scenario::new(direction, strength))
    }
}

impl Serialize for Scenario {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TauKind {
    Tau1,
    Tau2,
}

impl fmt::Display for TauKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TauKind::Tau1 => "tau1",
            TauKind::Tau2 => "tau2",
        })
    }
}

/// Largest mixing weight for which entanglement of the mapped state still
/// certifies steering of the requested strength.
pub fn mu_bound(kind: TauKind, strength: Strength) -> f64 {
    match (kind, strength) {
        (TauKind::Tau1, _) => 1.0 / 3f64.sqrt(),
        (TauKind::Tau2, Strength::Genuine) => 1.0 / 9.0,
        (TauKind::Tau2, Strength::Steering) => 1.0 / 3.0,
    }
}

pub(crate) fn within_bound(mu: f64, bound: f64) -> bool {
    mu <= bound * (1.0 + BOUND_SLACK)
}

fn check_mu(mu: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&mu) {
        return Err(Error::OutOfRange {
            name: "mu",
            value: mu,
            min: 0.0,
            max: 1.0,
        });
    }
    Ok(())
}

fn mix(rho: &ComplexMatrix, replacement: &ComplexMatrix, mu: f64) -> ComplexMatrix {
    &rho.scale(mu) + &replacement.scale(1.0 - mu)
}

/// `μ·M + (1−μ)·I₂/2 ⊗ Tr_A M` for any 8×8 operator, including the
/// Hermitian quasi-states used to encode hidden-variable statistics.
pub fn tau1_operator(rho: &ComplexMatrix, mu: f64) -> Result<ComplexMatrix> {
    check_mu(mu)?;
    let bc = partial_trace(rho, Subsystem::A)?;
    Ok(mix(rho, &kron(&ComplexMatrix::identity(2).scale(0.5), &bc), mu))
}

/// `μ·M + (1−μ)·I₄/4 ⊗ Tr_AB M` for any 8×8 operator.
pub fn tau2_operator(rho: &ComplexMatrix, mu: f64) -> Result<ComplexMatrix> {
    check_mu(mu)?;
    let c = marginal(rho, Subsystem::C)?;
    Ok(mix(rho, &kron(&ComplexMatrix::identity(4).scale(0.25), &c), mu))
}

/// A mapped state together with the state and weight it was built from.
#[derive(Debug, Clone)]
pub struct TauState {
    base: ThreeQubitState,
    mu: f64,
    kind: TauKind,
    matrix: ThreeQubitState,
}

impl TauState {
    pub fn base(&self) -> &ThreeQubitState {
        &self.base
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn kind(&self) -> TauKind {
        self.kind
    }

    pub fn state(&self) -> &ThreeQubitState {
        &self.matrix
    }

    /// Whether entanglement of this state certifies steering of `strength`.
    pub fn certified_for(&self, strength: Strength) -> bool {
        within_bound(self.mu, mu_bound(self.kind, strength))
    }
}

/// Builds `τ¹`. Any `μ ∈ [0, 1]` is accepted; use [`TauState::certified_for`]
/// to see whether the steering guarantee applies.
pub fn build_tau1(rho: &ThreeQubitState, mu: f64) -> Result<TauState> {
    build_tau(rho, TauKind::Tau1, mu)
}

/// Builds `τ²`.
pub fn build_tau2(rho: &ThreeQubitState, mu: f64) -> Result<TauState> {
    build_tau(rho, TauKind::Tau2, mu)
}

pub fn build_tau(rho: &ThreeQubitState, kind: TauKind, mu: f64) -> Result<TauState> {
    let m = match kind {
        TauKind::Tau1 => tau1_operator(rho.matrix(), mu)?,
        TauKind::Tau2 => tau2_operator(rho.matrix(), mu)?,
    };
    // convex combination of two density matrices
    let mut matrix = ThreeQubitState::from_valid(m);
    if let Some(label) = rho.label() {
        matrix = matrix.with_label(format!("{kind}[{label}, mu = {mu}]"));
    }
    Ok(TauState {
        base: rho.clone(),
        mu,
        kind,
        matrix,
    })
}
