//! Finite hidden-variable models for the Pauli statistics of three parties,
//! and the explicit separable decompositions of the mapped states they
//! generate.
//!
//! Two directions are covered. In the A→BC forms Alice answers from a
//! classical response function and Bob and Charlie hold quantum states. In
//! the AB→C forms Alice and Bob answer classically and only Charlie holds a
//! quantum state. The hybrid forms allow one quantum pair per term, which is
//! what the absence of genuine steering permits.
//!
//! A response `[f64; 3]` stores `p(+|σ_i, λ)` for `i = x, y, z`.

mod conditional;
mod decompose;
mod table;

pub use conditional::{conditional_state_bc, conditional_state_c, check_povm, BlochCoefficients, ConditionalState};
pub use decompose::{
    reconstruct_tau1_decomposition, reconstruct_tau2_decomposition, outcome_matrix,
    AliceComponent, FactorRole, PairComponent, PairFactor, ProductFactor, Tau1Decomposition,
    Tau2Decomposition,
};
pub use table::{all_events, outcome_index, setting_index, JointTable};

use crate::error::{Error, Result};
use crate::qmat::{check_state, kron, partial_trace_qubit, permute_qubits, ComplexMatrix};
use crate::states::{bloch_qubit, pauli, pauli_projector, Axis, Outcome};

/// Slack on probability normalization and no-signalling.
pub const EPS_MODEL: f64 = 1e-12;

pub type Response = [f64; 3];

/// `2p(+|σ_i) − 1` for each axis.
pub fn response_bloch(r: &Response) -> [f64; 3] {
    r.map(|p| 2.0 * p - 1.0)
}

/// `p(a|σ_i)` of a response function.
pub fn response_prob(r: &Response, axis: Axis, outcome: Outcome) -> f64 {
    let p = r[axis.index() - 1];
    match outcome {
        Outcome::Plus => p,
        Outcome::Minus => 1.0 - p,
    }
}

/// Two-party classical box `p(ab|σ_i^A, σ_j^B)` indexed `[i][j][outcome]`,
/// outcomes ordered `++, +−, −+, −−`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointResponse(pub [[[f64; 4]; 3]; 3]);

fn pair_index(a: Outcome, b: Outcome) -> usize {
    2 * (a == Outcome::Minus) as usize + (b == Outcome::Minus) as usize
}

impl JointResponse {
    /// Box of two independent response functions.
    pub fn product(alice: &Response, bob: &Response) -> Self {
        let mut out = [[[0.0; 4]; 3]; 3];
        for i in Axis::ALL {
            for j in Axis::ALL {
                for a in Outcome::ALL {
                    for b in Outcome::ALL {
                        out[i.index() - 1][j.index() - 1][pair_index(a, b)] =
                            response_prob(alice, i, a) * response_prob(bob, j, b);
                    }
                }
            }
        }
        JointResponse(out)
    }

    pub fn prob(&self, i: Axis, j: Axis, a: Outcome, b: Outcome) -> f64 {
        self.0[i.index() - 1][j.index() - 1][pair_index(a, b)]
    }

    /// Alice's `2p(+|σ_i) − 1`, read off with Bob's `x` setting.
    pub fn alice_bloch(&self) -> [f64; 3] {
        Axis::ALL.map(|i| {
            let p = &self.0[i.index() - 1][0];
            p[0] + p[1] - p[2] - p[3]
        })
    }

    pub fn bob_bloch(&self) -> [f64; 3] {
        Axis::ALL.map(|j| {
            let p = &self.0[0][j.index() - 1];
            p[0] - p[1] + p[2] - p[3]
        })
    }

    /// `p(++) − p(+−) − p(−+) + p(−−)` per setting pair.
    pub fn correlations(&self) -> [[f64; 3]; 3] {
        let mut c = [[0.0; 3]; 3];
        for (i, row) in self.0.iter().enumerate() {
            for (j, p) in row.iter().enumerate() {
                c[i][j] = p[0] - p[1] - p[2] + p[3];
            }
        }
        c
    }

    pub fn validate(&self) -> Result<()> {
        for row in &self.0 {
            for p in row {
                if p.iter().any(|&x| !(-EPS_MODEL..=1.0 + EPS_MODEL).contains(&x)) {
                    return Err(Error::InvalidModel(format!("joint probabilities {p:?} outside [0, 1]")));
                }
                let s: f64 = p.iter().sum();
                if (s - 1.0).abs() > EPS_MODEL {
                    return Err(Error::InvalidModel(format!("joint probabilities sum to {s}")));
                }
            }
        }
        // no-signalling: each marginal must not depend on the other party's setting
        for i in 0..3 {
            for j in 1..3 {
                let a0 = self.0[i][0][0] + self.0[i][0][1];
                let aj = self.0[i][j][0] + self.0[i][j][1];
                let b0 = self.0[0][i][0] + self.0[0][i][2];
                let bj = self.0[j][i][0] + self.0[j][i][2];
                if (a0 - aj).abs() > EPS_MODEL || (b0 - bj).abs() > EPS_MODEL {
                    return Err(Error::InvalidModel("joint response signals between parties".into()));
                }
            }
        }
        Ok(())
    }

    /// `¼(I + Σα_i σ_i⊗I + Σβ_j I⊗σ_j + Σc_ij σ_i⊗σ_j)`, the Hermitian
    /// operator with the same Pauli statistics as the box.
    pub fn operator(&self) -> ComplexMatrix {
        two_qubit_bloch(&self.alice_bloch(), &self.bob_bloch(), &self.correlations(), 1.0)
    }
}

/// `¼(I + μ(Σa_i σ_i⊗I + Σb_j I⊗σ_j + Σc_ij σ_i⊗σ_j))`
pub fn two_qubit_bloch(a: &[f64; 3], b: &[f64; 3], c: &[[f64; 3]; 3], mu: f64) -> ComplexMatrix {
    let i2 = ComplexMatrix::identity(2);
    let mut out = ComplexMatrix::identity(4);
    for x in Axis::ALL {
        let ix = x.index() - 1;
        out = &out + &kron(&pauli(x), &i2).scale(mu * a[ix]);
        out = &out + &kron(&i2, &pauli(x)).scale(mu * b[ix]);
        for y in Axis::ALL {
            out = &out + &kron(&pauli(x), &pauli(y)).scale(mu * c[ix][y.index() - 1]);
        }
    }
    out.scale(0.25)
}

fn check_response(r: &Response) -> Result<()> {
    if r.iter().all(|&p| (-EPS_MODEL..=1.0 + EPS_MODEL).contains(&p)) {
        Ok(())
    } else {
        Err(Error::InvalidModel(format!("response {r:?} outside [0, 1]")))
    }
}

fn check_density(m: &ComplexMatrix, dim: usize, what: &str) -> Result<()> {
    if m.rows() != dim || m.cols() != dim {
        return Err(Error::InvalidModel(format!(
            "{what} must be {dim}x{dim}, found {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let check = check_state(m);
    if check.valid {
        Ok(())
    } else {
        Err(Error::InvalidModel(format!("{what}: {}", check.detail)))
    }
}

fn check_weights(weights: impl Iterator<Item = f64>) -> Result<()> {
    let mut total = 0.0;
    for w in weights {
        if w.is_nan() || w < 0.0 {
            return Err(Error::InvalidModel(format!("negative weight {w}")));
        }
        total += w;
    }
    if (total - 1.0).abs() > EPS_MODEL {
        return Err(Error::InvalidModel(format!("weights sum to {total}")));
    }
    Ok(())
}

/// Classical Alice, quantum Bob and Charlie without correlations between
/// the trusted parties beyond the shared index.
#[derive(Debug, Clone)]
pub struct LocalTermA {
    pub weight: f64,
    pub alice: Response,
    pub bob: ComplexMatrix,
    pub charlie: ComplexMatrix,
}

/// One branch of a hybrid model in the A→BC direction.
#[derive(Debug, Clone)]
pub enum HybridTermA {
    /// Alice classical, Bob and Charlie share a two-qubit state.
    Unsteered { weight: f64, alice: Response, bc: ComplexMatrix },
    /// Alice and Bob share a two-qubit state, Charlie holds a local state.
    SteersBob { weight: f64, ab: ComplexMatrix, charlie: ComplexMatrix },
    /// Alice and Charlie share a two-qubit state, Bob holds a local state.
    SteersCharlie { weight: f64, ac: ComplexMatrix, bob: ComplexMatrix },
}

/// Classical Alice and Bob, quantum Charlie.
#[derive(Debug, Clone)]
pub struct LocalTermAB {
    pub weight: f64,
    pub alice: Response,
    pub bob: Response,
    pub charlie: ComplexMatrix,
}

/// One branch of a hybrid model in the AB→C direction.
#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)]
pub enum HybridTermAB {
    /// Alice and Bob answer jointly from a no-signalling box; Charlie local.
    Joint { weight: f64, ab: JointResponse, charlie: ComplexMatrix },
    /// Alice classical, Bob and Charlie share a two-qubit state.
    BobSteers { weight: f64, alice: Response, bc: ComplexMatrix },
    /// Bob classical, Alice and Charlie share a two-qubit state.
    AliceSteers { weight: f64, bob: Response, ac: ComplexMatrix },
}

impl HybridTermA {
    pub fn weight(&self) -> f64 {
        match self {
            HybridTermA::Unsteered { weight, .. }
            | HybridTermA::SteersBob { weight, .. }
            | HybridTermA::SteersCharlie { weight, .. } => *weight,
        }
    }
}

impl HybridTermAB {
    pub fn weight(&self) -> f64 {
        match self {
            HybridTermAB::Joint { weight, .. }
            | HybridTermAB::BobSteers { weight, .. }
            | HybridTermAB::AliceSteers { weight, .. } => *weight,
        }
    }
}

#[derive(Debug, Clone)]
pub enum LhsModel {
    AToBc(Vec<LocalTermA>),
    AToBcHybrid(Vec<HybridTermA>),
    AbToC(Vec<LocalTermAB>),
    AbToCHybrid(Vec<HybridTermAB>),
}

impl LhsModel {
    pub fn form_name(&self) -> &'static str {
        match self {
            LhsModel::AToBc(_) => "a-to-bc",
            LhsModel::AToBcHybrid(_) => "a-to-bc hybrid",
            LhsModel::AbToC(_) => "ab-to-c",
            LhsModel::AbToCHybrid(_) => "ab-to-c hybrid",
        }
    }

    pub fn len(&self) -> usize {
        match self {
            LhsModel::AToBc(t) => t.len(),
            LhsModel::AToBcHybrid(t) => t.len(),
            LhsModel::AbToC(t) => t.len(),
            LhsModel::AbToCHybrid(t) => t.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            LhsModel::AToBc(terms) => {
                check_weights(terms.iter().map(|t| t.weight))?;
                for t in terms {
                    check_response(&t.alice)?;
                    check_density(&t.bob, 2, "Bob's hidden state")?;
                    check_density(&t.charlie, 2, "Charlie's hidden state")?;
                }
            }
            LhsModel::AToBcHybrid(terms) => {
                check_weights(terms.iter().map(HybridTermA::weight))?;
                for t in terms {
                    match t {
                        HybridTermA::Unsteered { alice, bc, .. } => {
                            check_response(alice)?;
                            check_density(bc, 4, "BC state")?;
                        }
                        HybridTermA::SteersBob { ab, charlie, .. } => {
                            check_density(ab, 4, "AB state")?;
                            check_density(charlie, 2, "Charlie's hidden state")?;
                        }
                        HybridTermA::SteersCharlie { ac, bob, .. } => {
                            check_density(ac, 4, "AC state")?;
                            check_density(bob, 2, "Bob's hidden state")?;
                        }
                    }
                }
            }
            LhsModel::AbToC(terms) => {
                check_weights(terms.iter().map(|t| t.weight))?;
                for t in terms {
                    check_response(&t.alice)?;
                    check_response(&t.bob)?;
                    check_density(&t.charlie, 2, "Charlie's hidden state")?;
                }
            }
            LhsModel::AbToCHybrid(terms) => {
                check_weights(terms.iter().map(HybridTermAB::weight))?;
                for t in terms {
                    match t {
                        HybridTermAB::Joint { ab, charlie, .. } => {
                            ab.validate()?;
                            check_density(charlie, 2, "Charlie's hidden state")?;
                        }
                        HybridTermAB::BobSteers { alice, bc, .. } => {
                            check_response(alice)?;
                            check_density(bc, 4, "BC state")?;
                        }
                        HybridTermAB::AliceSteers { bob, ac, .. } => {
                            check_response(bob)?;
                            check_density(ac, 4, "AC state")?;
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Hermitian 8×8 operator whose Pauli statistics equal the model's.
    /// Classical responses enter as `½(I + Σ(2p_i − 1)σ_i)`, which need not
    /// be positive, so the result is in general only a quasi-state.
    pub fn statistics_operator(&self) -> ComplexMatrix {
        let resp = |r: &Response| bloch_qubit(response_bloch(r));
        // (A, C) ⊗ B reordered to A, B, C
        let ac_b = |ac: &ComplexMatrix, b: &ComplexMatrix| {
            permute_qubits(&kron(ac, b), &[0, 2, 1]).expect("8x8")
        };
        let mut out = ComplexMatrix::zeros(8, 8);
        let mut add = |w: f64, m: ComplexMatrix| out = &out + &m.scale(w);
        match self {
            LhsModel::AToBc(terms) => {
                for t in terms {
                    add(t.weight, kron(&kron(&resp(&t.alice), &t.bob), &t.charlie));
                }
            }
            LhsModel::AToBcHybrid(terms) => {
                for t in terms {
                    match t {
                        HybridTermA::Unsteered { weight, alice, bc } => add(*weight, kron(&resp(alice), bc)),
                        HybridTermA::SteersBob { weight, ab, charlie } => add(*weight, kron(ab, charlie)),
                        HybridTermA::SteersCharlie { weight, ac, bob } => add(*weight, ac_b(ac, bob)),
                    }
                }
            }
            LhsModel::AbToC(terms) => {
                for t in terms {
                    add(t.weight, kron(&kron(&resp(&t.alice), &resp(&t.bob)), &t.charlie));
                }
            }
            LhsModel::AbToCHybrid(terms) => {
                for t in terms {
                    match t {
                        HybridTermAB::Joint { weight, ab, charlie } => add(*weight, kron(&ab.operator(), charlie)),
                        HybridTermAB::BobSteers { weight, alice, bc } => add(*weight, kron(&resp(alice), bc)),
                        HybridTermAB::AliceSteers { weight, bob, ac } => add(*weight, ac_b(ac, &resp(bob))),
                    }
                }
            }
        }
        out
    }

    /// Pauli statistics computed term by term from the model's probabilities.
    pub fn joint_table(&self) -> JointTable {
        let q1 = |m: &ComplexMatrix, ax: Axis, o: Outcome| pauli_projector(ax, o).trace_product(m).re;
        let q2 = |m: &ComplexMatrix, x: (Axis, Outcome), y: (Axis, Outcome)| {
            kron(&pauli_projector(x.0, x.1), &pauli_projector(y.0, y.1))
                .trace_product(m)
                .re
        };
        JointTable::from_fn(|[i, j, k], [a, b, c]| match self {
            LhsModel::AToBc(terms) => terms
                .iter()
                .map(|t| t.weight * response_prob(&t.alice, i, a) * q1(&t.bob, j, b) * q1(&t.charlie, k, c))
                .sum(),
            LhsModel::AToBcHybrid(terms) => terms
                .iter()
                .map(|t| match t {
                    HybridTermA::Unsteered { weight, alice, bc } => {
                        weight * response_prob(alice, i, a) * q2(bc, (j, b), (k, c))
                    }
                    HybridTermA::SteersBob { weight, ab, charlie } => {
                        weight * q2(ab, (i, a), (j, b)) * q1(charlie, k, c)
                    }
                    HybridTermA::SteersCharlie { weight, ac, bob } => {
                        weight * q2(ac, (i, a), (k, c)) * q1(bob, j, b)
                    }
                })
                .sum(),
            LhsModel::AbToC(terms) => terms
                .iter()
                .map(|t| {
                    t.weight * response_prob(&t.alice, i, a) * response_prob(&t.bob, j, b) * q1(&t.charlie, k, c)
                })
                .sum(),
            LhsModel::AbToCHybrid(terms) => terms
                .iter()
                .map(|t| match t {
                    HybridTermAB::Joint { weight, ab, charlie } => weight * ab.prob(i, j, a, b) * q1(charlie, k, c),
                    HybridTermAB::BobSteers { weight, alice, bc } => {
                        weight * response_prob(alice, i, a) * q2(bc, (j, b), (k, c))
                    }
                    HybridTermAB::AliceSteers { weight, bob, ac } => {
                        weight * response_prob(bob, j, b) * q2(ac, (i, a), (k, c))
                    }
                })
                .sum(),
        })
    }
}

/// Joint probability `p(x, y | σ_s, σ_t)` of a two-qubit state and the
/// marginal of its second qubit, used to form conditional Bloch vectors.
pub(crate) fn pair_probs(
    pair: &ComplexMatrix,
    s: Axis,
    x: Outcome,
    t: Axis,
    y: Outcome,
) -> f64 {
    kron(&pauli_projector(s, x), &pauli_projector(t, y))
        .trace_product(pair)
        .re
}

/// Bloch vector of the first qubit of `pair` conditioned on outcome `y` of
/// `σ_t` on the second qubit, together with `p(y|σ_t)`. `None` when that
/// outcome has (numerically) zero probability.
pub(crate) fn conditional_bloch_first(pair: &ComplexMatrix, t: Axis, y: Outcome) -> (f64, Option<[f64; 3]>) {
    let second = partial_trace_qubit(pair, 0).expect("4x4");
    let py = pauli_projector(t, y).trace_product(&second).re;
    if py <= EPS_MODEL {
        return (py.max(0.0), None);
    }
    let v = Axis::ALL.map(|s| {
        (pair_probs(pair, s, Outcome::Plus, t, y) - pair_probs(pair, s, Outcome::Minus, t, y)) / py
    });
    (py, Some(v))
}
