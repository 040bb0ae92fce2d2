//! Explicit decompositions of `τ¹` and `τ²` built from a hidden-variable
//! model of `ρ`. Each piece is a state (or product of states) on the
//! untrusted side weighted by the probability of the trusted parties'
//! outcomes; positivity of every piece is what makes the mapped state
//! (bi)separable.

use crate::error::{Error, Result};
use crate::qmat::{kron, min_eigenvalue, ComplexMatrix};
use crate::states::{bloch_qubit, pauli, pauli_projector, Axis, Outcome};

use super::{
    conditional_bloch_first, response_bloch, HybridTermA, HybridTermAB, JointResponse,
    JointTable, LhsModel, EPS_MODEL,
};

fn check_mu(mu: f64) -> Result<()> {
    if (0.0..=1.0).contains(&mu) {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name: "mu",
            value: mu,
            min: 0.0,
            max: 1.0,
        })
    }
}

fn qubit_prob(m: &ComplexMatrix, axis: Axis, outcome: Outcome) -> f64 {
    pauli_projector(axis, outcome).trace_product(m).re
}

fn scaled(v: [f64; 3], k: f64) -> [f64; 3] {
    v.map(|x| k * x)
}

/// Index of a trusted-party event `(setting, outcome)` pair.
fn event_index(axis: Axis, outcome: Outcome) -> usize {
    2 * (axis.index() - 1) + (outcome == Outcome::Minus) as usize
}

/// One of Alice's hidden states, weighted by the probability of the
/// trusted parties' outcomes it is attached to.
#[derive(Debug, Clone)]
pub struct AliceComponent {
    /// Index of the model term the component comes from.
    pub term: usize,
    pub weight: f64,
    pub state: ComplexMatrix,
    pub min_eigenvalue: f64,
}

impl AliceComponent {
    fn new(term: usize, weight: f64, bloch: [f64; 3]) -> Self {
        let state = bloch_qubit(bloch);
        let min_eigenvalue = min_eigenvalue(&state).expect("2x2 Hermitian");
        Self {
            term,
            weight,
            state,
            min_eigenvalue,
        }
    }
}

/// Decomposition of `τ¹`: for each of Bob's and Charlie's Pauli events, the
/// conditional state on Alice's side as a weighted sum of qubit states.
#[derive(Debug, Clone)]
pub struct Tau1Decomposition {
    pub mu: f64,
    /// Indexed by `6·event(j, b) + event(k, c)`.
    conditionals: Vec<Vec<AliceComponent>>,
}

impl Tau1Decomposition {
    pub fn conditional(&self, j: Axis, b: Outcome, k: Axis, c: Outcome) -> &[AliceComponent] {
        &self.conditionals[6 * event_index(j, b) + event_index(k, c)]
    }

    pub fn components(&self) -> impl Iterator<Item = &AliceComponent> {
        self.conditionals.iter().flatten()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.components()
            .map(|c| c.min_eigenvalue)
            .fold(f64::INFINITY, f64::min)
    }

    /// Every hidden state is positive semidefinite (to `tol`).
    pub fn is_psd(&self, tol: f64) -> bool {
        self.min_eigenvalue() >= -tol
    }

    /// Pauli statistics of the decomposition: `Σ weight · Tr[Π_a^i ρ]`.
    pub fn joint_table(&self) -> JointTable {
        JointTable::from_fn(|[i, j, k], [a, b, c]| {
            self.conditional(j, b, k, c)
                .iter()
                .map(|comp| comp.weight * qubit_prob(&comp.state, i, a))
                .sum()
        })
    }
}

fn wrong_form(expected: &'static str, model: &LhsModel) -> Error {
    Error::WrongModelForm {
        expected,
        found: model.form_name(),
    }
}

/// Rebuilds `τ¹ = μρ + (1−μ)·I/2 ⊗ ρ_BC` from an A→BC model of `ρ`.
pub fn reconstruct_tau1_decomposition(model: &LhsModel, mu: f64) -> Result<Tau1Decomposition> {
    check_mu(mu)?;
    model.validate()?;
    let mut conditionals = vec![Vec::new(); 36];
    let mut push = |j: Axis, b: Outcome, k: Axis, c: Outcome, comp: AliceComponent| {
        conditionals[6 * event_index(j, b) + event_index(k, c)].push(comp)
    };
    let bc_events = || {
        Axis::ALL.into_iter().flat_map(|j| {
            Outcome::ALL.into_iter().flat_map(move |b| {
                Axis::ALL
                    .into_iter()
                    .flat_map(move |k| Outcome::ALL.into_iter().map(move |c| (j, b, k, c)))
            })
        })
    };
    match model {
        LhsModel::AToBc(terms) => {
            for (n, t) in terms.iter().enumerate() {
                let bloch = scaled(response_bloch(&t.alice), mu);
                for (j, b, k, c) in bc_events() {
                    let w = t.weight * qubit_prob(&t.bob, j, b) * qubit_prob(&t.charlie, k, c);
                    push(j, b, k, c, AliceComponent::new(n, w, bloch));
                }
            }
        }
        LhsModel::AToBcHybrid(terms) => {
            for (n, t) in terms.iter().enumerate() {
                match t {
                    HybridTermA::Unsteered { weight, alice, bc } => {
                        let bloch = scaled(response_bloch(alice), mu);
                        for (j, b, k, c) in bc_events() {
                            let pbc = kron(&pauli_projector(j, b), &pauli_projector(k, c))
                                .trace_product(bc)
                                .re;
                            push(j, b, k, c, AliceComponent::new(n, weight * pbc, bloch));
                        }
                    }
                    HybridTermA::SteersBob { weight, ab, charlie } => {
                        for (j, b, k, c) in bc_events() {
                            let (pb, cond) = conditional_bloch_first(ab, j, b);
                            if let Some(v) = cond {
                                let w = weight * pb * qubit_prob(charlie, k, c);
                                push(j, b, k, c, AliceComponent::new(n, w, scaled(v, mu)));
                            }
                        }
                    }
                    HybridTermA::SteersCharlie { weight, ac, bob } => {
                        for (j, b, k, c) in bc_events() {
                            let (pc, cond) = conditional_bloch_first(ac, k, c);
                            if let Some(v) = cond {
                                let w = weight * pc * qubit_prob(bob, j, b);
                                push(j, b, k, c, AliceComponent::new(n, w, scaled(v, mu)));
                            }
                        }
                    }
                }
            }
        }
        _ => return Err(wrong_form("a-to-bc decomposition", model)),
    }
    Ok(Tau1Decomposition { mu, conditionals })
}

/// `⅑·I + μ(a/3·σ_i⊗I + b/3·I⊗σ_j + ab·σ_i⊗σ_j)` for outcome signs `a, b`:
/// the building block that spreads a joint outcome of a classical box over
/// a two-qubit operator. Positive semidefinite exactly when `μ ≤ 1/9`.
pub fn outcome_matrix(i: Axis, j: Axis, a: Outcome, b: Outcome, mu: f64) -> ComplexMatrix {
    let (sa, sb) = (a.sign(), b.sign());
    let i2 = ComplexMatrix::identity(2);
    let mut out = ComplexMatrix::identity(4).scale(1.0 / 9.0);
    out = &out + &kron(&pauli(i), &i2).scale(mu * sa / 3.0);
    out = &out + &kron(&i2, &pauli(j)).scale(mu * sb / 3.0);
    &out + &kron(&pauli(i), &pauli(j)).scale(mu * sa * sb)
}

/// `¼[I + μ(α·σ⊗I + I⊗β·σ + (α·σ)⊗(β·σ))]` written as a mixture of four
/// products of eigenprojectors of `α·σ` and `β·σ`.
#[derive(Debug, Clone)]
pub struct ProductFactor {
    pub alpha: [f64; 3],
    pub beta: [f64; 3],
    pub mu: f64,
    /// Weights of `φ⊗ψ`, `φ⊗ψ⊥`, `φ⊥⊗ψ`, `φ⊥⊗ψ⊥`.
    pub q: [f64; 4],
    /// `[φ, φ⊥]` on Alice's qubit.
    pub alice: [ComplexMatrix; 2],
    /// `[ψ, ψ⊥]` on Bob's qubit.
    pub bob: [ComplexMatrix; 2],
}

fn norm3(v: &[f64; 3]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Eigenprojectors of `v·σ` for eigenvalues `+|v|` and `−|v|`; the z basis
/// when `v` vanishes.
fn eigen_projectors(v: &[f64; 3]) -> [ComplexMatrix; 2] {
    let n = norm3(v);
    let u = if n > EPS_MODEL { v.map(|x| x / n) } else { [0.0, 0.0, 1.0] };
    [bloch_qubit(u), bloch_qubit(u.map(|x| -x))]
}

impl ProductFactor {
    pub fn new(alpha: [f64; 3], beta: [f64; 3], mu: f64) -> Self {
        let (a0, b0) = (norm3(&alpha), norm3(&beta));
        let ab = a0 * b0;
        let q = [
            0.25 * (1.0 + mu * (ab + a0 + b0)),
            0.25 * (1.0 + mu * (-ab + a0 - b0)),
            0.25 * (1.0 + mu * (-ab - a0 + b0)),
            0.25 * (1.0 + mu * (ab - a0 - b0)),
        ];
        Self {
            alpha,
            beta,
            mu,
            q,
            alice: eigen_projectors(&alpha),
            bob: eigen_projectors(&beta),
        }
    }

    pub fn min_coefficient(&self) -> f64 {
        self.q.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `Σ q_m φ_m ⊗ ψ_m`
    pub fn operator(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(4, 4);
        for (m, q) in self.q.iter().enumerate() {
            out = &out + &kron(&self.alice[m / 2], &self.bob[m % 2]).scale(*q);
        }
        out
    }

    /// The same operator from its Pauli expansion.
    pub fn bloch_operator(&self) -> ComplexMatrix {
        let mut c = [[0.0; 3]; 3];
        for (x, row) in c.iter_mut().enumerate() {
            for (y, v) in row.iter_mut().enumerate() {
                *v = self.alpha[x] * self.beta[y];
            }
        }
        super::two_qubit_bloch(&self.alpha, &self.beta, &c, self.mu)
    }

    fn prob(&self, i: Axis, a: Outcome, j: Axis, b: Outcome) -> f64 {
        (0..4)
            .map(|m| self.q[m] * qubit_prob(&self.alice[m / 2], i, a) * qubit_prob(&self.bob[m % 2], j, b))
            .sum()
    }
}

/// Which branch of the model a two-qubit factor comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorRole {
    /// Both untrusted parties classical and independent given `λ`.
    Local,
    /// Untrusted parties answer from a joint box.
    Joint,
    /// Alice classical, Bob correlated with Charlie.
    BobSteers,
    /// Bob classical, Alice correlated with Charlie.
    AliceSteers,
}

#[derive(Debug, Clone)]
pub enum PairFactor {
    /// Two-qubit state assembled from [`outcome_matrix`] blocks weighted by
    /// `¼·p(ab|ij)`. `block_min_eigenvalue` is the smallest eigenvalue among
    /// blocks with non-zero weight.
    Combined {
        state: ComplexMatrix,
        block_min_eigenvalue: f64,
        state_min_eigenvalue: f64,
    },
    Product(ProductFactor),
}

impl PairFactor {
    /// Smallest eigenvalue or mixture weight entering the decomposition.
    pub fn min_value(&self) -> f64 {
        match self {
            PairFactor::Combined {
                block_min_eigenvalue, ..
            } => *block_min_eigenvalue,
            PairFactor::Product(p) => p.min_coefficient(),
        }
    }

    pub fn operator(&self) -> ComplexMatrix {
        match self {
            PairFactor::Combined { state, .. } => state.clone(),
            PairFactor::Product(p) => p.operator(),
        }
    }

    fn prob(&self, i: Axis, a: Outcome, j: Axis, b: Outcome) -> f64 {
        match self {
            PairFactor::Combined { state, .. } => kron(&pauli_projector(i, a), &pauli_projector(j, b))
                .trace_product(state)
                .re,
            PairFactor::Product(p) => p.prob(i, a, j, b),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PairComponent {
    pub term: usize,
    pub role: FactorRole,
    pub weight: f64,
    pub factor: PairFactor,
}

/// Decomposition of `τ²`: for each of Charlie's Pauli events, Alice and
/// Bob's conditional state as a weighted sum of two-qubit factors.
#[derive(Debug, Clone)]
pub struct Tau2Decomposition {
    pub mu: f64,
    /// Indexed by `event(k, c)`.
    conditionals: Vec<Vec<PairComponent>>,
}

impl Tau2Decomposition {
    pub fn conditional(&self, k: Axis, c: Outcome) -> &[PairComponent] {
        &self.conditionals[event_index(k, c)]
    }

    pub fn components(&self) -> impl Iterator<Item = &PairComponent> {
        self.conditionals.iter().flatten()
    }

    /// Smallest block eigenvalue or mixture weight over all factors.
    pub fn min_value(&self) -> f64 {
        self.components()
            .map(|c| c.factor.min_value())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn is_valid(&self, tol: f64) -> bool {
        self.min_value() >= -tol
    }

    /// Smallest mixture weight among product factors, if any.
    pub fn min_product_coefficient(&self) -> Option<f64> {
        self.components()
            .filter_map(|c| match &c.factor {
                PairFactor::Product(p) => Some(p.min_coefficient()),
                _ => None,
            })
            .reduce(f64::min)
    }

    /// Smallest eigenvalue of the assembled joint-box states, if any.
    pub fn min_combined_eigenvalue(&self) -> Option<f64> {
        self.components()
            .filter_map(|c| match &c.factor {
                PairFactor::Combined {
                    state_min_eigenvalue, ..
                } => Some(*state_min_eigenvalue),
                _ => None,
            })
            .reduce(f64::min)
    }

    pub fn joint_table(&self) -> JointTable {
        JointTable::from_fn(|[i, j, k], [a, b, c]| {
            self.conditional(k, c)
                .iter()
                .map(|comp| comp.weight * comp.factor.prob(i, a, j, b))
                .sum()
        })
    }
}

/// Assembles the joint-box factor: `¼ Σ_ij Σ_ab p(ab|ij)·outcome_matrix`.
fn combined_factor(bx: &JointResponse, mu: f64) -> PairFactor {
    let mut state = ComplexMatrix::zeros(4, 4);
    let mut block_min = f64::INFINITY;
    for i in Axis::ALL {
        for j in Axis::ALL {
            for a in Outcome::ALL {
                for b in Outcome::ALL {
                    let p = bx.prob(i, j, a, b);
                    let m = outcome_matrix(i, j, a, b, mu);
                    if p > EPS_MODEL {
                        block_min = block_min.min(min_eigenvalue(&m).expect("4x4 Hermitian"));
                    }
                    state = &state + &m.scale(0.25 * p);
                }
            }
        }
    }
    let state_min_eigenvalue = min_eigenvalue(&state).expect("4x4 Hermitian");
    PairFactor::Combined {
        state,
        block_min_eigenvalue: block_min,
        state_min_eigenvalue,
    }
}

/// Rebuilds `τ² = μρ + (1−μ)·I/4 ⊗ ρ_C` from an AB→C model of `ρ`.
pub fn reconstruct_tau2_decomposition(model: &LhsModel, mu: f64) -> Result<Tau2Decomposition> {
    check_mu(mu)?;
    model.validate()?;
    let mut conditionals: Vec<Vec<PairComponent>> = vec![Vec::new(); 6];
    let c_events =
        || Axis::ALL.into_iter().flat_map(|k| Outcome::ALL.into_iter().map(move |c| (k, c)));
    match model {
        LhsModel::AbToC(terms) => {
            for (n, t) in terms.iter().enumerate() {
                let f = ProductFactor::new(response_bloch(&t.alice), response_bloch(&t.bob), mu);
                for (k, c) in c_events() {
                    conditionals[event_index(k, c)].push(PairComponent {
                        term: n,
                        role: FactorRole::Local,
                        weight: t.weight * qubit_prob(&t.charlie, k, c),
                        factor: PairFactor::Product(f.clone()),
                    });
                }
            }
        }
        LhsModel::AbToCHybrid(terms) => {
            for (n, t) in terms.iter().enumerate() {
                match t {
                    HybridTermAB::Joint { weight, ab, charlie } => {
                        let f = combined_factor(ab, mu);
                        for (k, c) in c_events() {
                            conditionals[event_index(k, c)].push(PairComponent {
                                term: n,
                                role: FactorRole::Joint,
                                weight: weight * qubit_prob(charlie, k, c),
                                factor: f.clone(),
                            });
                        }
                    }
                    HybridTermAB::BobSteers { weight, alice, bc } => {
                        let alpha = response_bloch(alice);
                        for (k, c) in c_events() {
                            let (pc, cond) = conditional_bloch_first(bc, k, c);
                            if let Some(beta) = cond {
                                conditionals[event_index(k, c)].push(PairComponent {
                                    term: n,
                                    role: FactorRole::BobSteers,
                                    weight: weight * pc,
                                    factor: PairFactor::Product(ProductFactor::new(alpha, beta, mu)),
                                });
                            }
                        }
                    }
                    HybridTermAB::AliceSteers { weight, bob, ac } => {
                        let beta = response_bloch(bob);
                        for (k, c) in c_events() {
                            let (pc, cond) = conditional_bloch_first(ac, k, c);
                            if let Some(alpha) = cond {
                                conditionals[event_index(k, c)].push(PairComponent {
                                    term: n,
                                    role: FactorRole::AliceSteers,
                                    weight: weight * pc,
                                    factor: PairFactor::Product(ProductFactor::new(alpha, beta, mu)),
                                });
                            }
                        }
                    }
                }
            }
        }
        _ => return Err(wrong_form("ab-to-c decomposition", model)),
    }
    Ok(Tau2Decomposition { mu, conditionals })
}
