//! Seeded random generators shared by the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use tristeer::lhsmodel::{
    HybridTermA, HybridTermAB, JointResponse, LhsModel, LocalTermA, LocalTermAB, Response,
};
use tristeer::qmat::{kron, ComplexMatrix, Subsystem, ThreeQubitState, C64};
use tristeer::states::PureState;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random unit vector in `C^n`.
pub fn haar_vector(rng: &mut impl Rng, n: usize) -> Vec<C64> {
    let v: Vec<C64> = (0..n).map(|_| gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

pub fn haar_pure(rng: &mut impl Rng) -> PureState {
    let v = haar_vector(rng, 8);
    PureState::normalized(v.try_into().unwrap()).unwrap()
}

/// Random density matrix `GG†/Tr(GG†)` with Ginibre `G`.
pub fn random_density(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(n, n, |_, _| gaussian(rng));
    let m = g.matmul(&g.adjoint());
    let t = m.trace().re;
    m.scale(1.0 / t)
}

pub fn random_state(rng: &mut impl Rng) -> ThreeQubitState {
    ThreeQubitState::new(random_density(rng, 8)).unwrap()
}

pub fn random_hermitian(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(n, n, |_, _| gaussian(rng));
    (&g + &g.adjoint()).scale(0.5)
}

/// Haar-random unitary from the Gram–Schmidt of a Ginibre matrix.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v: Vec<C64> = (0..n).map(|_| gaussian(rng)).collect();
        for u in &cols {
            let dot: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= dot * y;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    ComplexMatrix::from_fn(n, n, |r, c| cols[c][r])
}

/// Pure state that is a product across `cut`: a random qubit for the cut
/// party times a random two-qubit state for the other two.
pub fn random_biseparable_pure(rng: &mut impl Rng, cut: Subsystem) -> PureState {
    let q = haar_vector(rng, 2);
    let pair = haar_vector(rng, 4);
    let mut amps = [C64::new(0.0, 0.0); 8];
    for (idx, amp) in amps.iter_mut().enumerate() {
        let (a, b, c) = (idx >> 2 & 1, idx >> 1 & 1, idx & 1);
        *amp = match cut {
            Subsystem::A => q[a] * pair[2 * b + c],
            Subsystem::B => q[b] * pair[2 * a + c],
            Subsystem::C => q[c] * pair[2 * a + b],
        };
    }
    PureState::normalized(amps).unwrap()
}

pub fn random_weights(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() + 1e-3).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|x| x / total).collect()
}

/// Convex mixture of biseparable pure states over randomly chosen cuts.
pub fn random_biseparable_mixture(rng: &mut impl Rng, terms: usize) -> ThreeQubitState {
    let mut m = ComplexMatrix::zeros(8, 8);
    for w in random_weights(rng, terms) {
        let cut = Subsystem::ALL[rng.gen_range(0..3)];
        m = &m + &random_biseparable_pure(rng, cut).projector().scale(w);
    }
    ThreeQubitState::new(m).unwrap()
}

/// Convex mixture of products of three random qubit states.
pub fn random_fully_separable(rng: &mut impl Rng, terms: usize) -> ThreeQubitState {
    let mut m = ComplexMatrix::zeros(8, 8);
    for w in random_weights(rng, terms) {
        let a = random_density(rng, 2);
        let b = random_density(rng, 2);
        let c = random_density(rng, 2);
        m = &m + &kron(&kron(&a, &b), &c).scale(w);
    }
    ThreeQubitState::new(m).unwrap()
}

/// Mostly uniform probabilities, sometimes deterministic ones.
pub fn random_response(rng: &mut impl Rng) -> Response {
    if rng.gen_bool(0.25) {
        [0, 1, 2].map(|_| if rng.gen_bool(0.5) { 1.0 } else { 0.0 })
    } else {
        [0, 1, 2].map(|_| rng.gen::<f64>())
    }
}

/// Box with `p(ab|ij) = ¼(1 + ab·s_ij)`.
pub fn correlation_box(s: [[f64; 3]; 3]) -> JointResponse {
    let mut out = [[[0.0; 4]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let c = s[i][j];
            out[i][j] = [0.25 * (1.0 + c), 0.25 * (1.0 - c), 0.25 * (1.0 - c), 0.25 * (1.0 + c)];
        }
    }
    JointResponse(out)
}

/// No-signalling box: a mixture of product boxes and correlation boxes with
/// random sign patterns.
pub fn random_ns_box(rng: &mut impl Rng) -> JointResponse {
    let parts = 3;
    let weights = random_weights(rng, parts);
    let mut out = [[[0.0; 4]; 3]; 3];
    for w in weights {
        let part = if rng.gen_bool(0.5) {
            JointResponse::product(&random_response(rng), &random_response(rng))
        } else {
            let s = [[0.0; 3]; 3].map(|row: [f64; 3]| row.map(|_| if rng.gen_bool(0.5) { 1.0 } else { -1.0 }));
            correlation_box(s)
        };
        for i in 0..3 {
            for j in 0..3 {
                for o in 0..4 {
                    out[i][j][o] += w * part.0[i][j][o];
                }
            }
        }
    }
    JointResponse(out)
}

pub fn random_local_a(rng: &mut impl Rng, terms: usize) -> LhsModel {
    LhsModel::AToBc(
        random_weights(rng, terms)
            .into_iter()
            .map(|weight| LocalTermA {
                weight,
                alice: random_response(rng),
                bob: random_density(rng, 2),
                charlie: random_density(rng, 2),
            })
            .collect(),
    )
}

pub fn random_hybrid_a(rng: &mut impl Rng, terms: usize) -> LhsModel {
    LhsModel::AToBcHybrid(
        random_weights(rng, terms)
            .into_iter()
            .map(|weight| match rng.gen_range(0..3) {
                0 => HybridTermA::Unsteered {
                    weight,
                    alice: random_response(rng),
                    bc: random_density(rng, 4),
                },
                1 => HybridTermA::SteersBob {
                    weight,
                    ab: random_density(rng, 4),
                    charlie: random_density(rng, 2),
                },
                _ => HybridTermA::SteersCharlie {
                    weight,
                    ac: random_density(rng, 4),
                    bob: random_density(rng, 2),
                },
            })
            .collect(),
    )
}

pub fn random_local_ab(rng: &mut impl Rng, terms: usize) -> LhsModel {
    LhsModel::AbToC(
        random_weights(rng, terms)
            .into_iter()
            .map(|weight| LocalTermAB {
                weight,
                alice: random_response(rng),
                bob: random_response(rng),
                charlie: random_density(rng, 2),
            })
            .collect(),
    )
}

pub fn random_hybrid_ab(rng: &mut impl Rng, terms: usize) -> LhsModel {
    LhsModel::AbToCHybrid(
        random_weights(rng, terms)
            .into_iter()
            .map(|weight| match rng.gen_range(0..3) {
                0 => HybridTermAB::Joint {
                    weight,
                    ab: random_ns_box(rng),
                    charlie: random_density(rng, 2),
                },
                1 => HybridTermAB::BobSteers {
                    weight,
                    alice: random_response(rng),
                    bc: random_density(rng, 4),
                },
                _ => HybridTermAB::AliceSteers {
                    weight,
                    bob: random_response(rng),
                    ac: random_density(rng, 4),
                },
            })
            .collect(),
    )
}
