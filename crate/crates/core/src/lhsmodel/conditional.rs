//! Unnormalized states left on the untrusted side after the trusted parties
//! measure, and their Pauli (Bloch) coefficients.

use crate::error::{Error, Result};
use crate::qmat::{hermitian_eigenvalues, kron, partial_trace_qubit, ComplexMatrix, ThreeQubitState};
use crate::states::{pauli, Axis};

use super::two_qubit_bloch;

const EPS_POVM: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum BlochCoefficients {
    /// `r_i = Tr[δ σ_i]`
    Qubit([f64; 3]),
    /// `a_i = Tr[δ σ_i⊗I]`, `b_i = Tr[δ I⊗σ_i]`, `c_ij = Tr[δ σ_i⊗σ_j]`
    TwoQubit {
        a: [f64; 3],
        b: [f64; 3],
        c: [[f64; 3]; 3],
    },
}

#[derive(Debug, Clone)]
pub struct ConditionalState {
    pub matrix: ComplexMatrix,
    /// Trace of `matrix`: the probability of the conditioning outcomes.
    pub weight: f64,
    pub bloch: BlochCoefficients,
}

impl ConditionalState {
    /// Rebuilds the matrix from `weight` and the Bloch coefficients.
    pub fn from_coefficients(&self) -> ComplexMatrix {
        match &self.bloch {
            BlochCoefficients::Qubit(r) => {
                let mut out = ComplexMatrix::identity(2).scale(self.weight);
                for x in Axis::ALL {
                    out = &out + &pauli(x).scale(r[x.index() - 1]);
                }
                out.scale(0.5)
            }
            BlochCoefficients::TwoQubit { a, b, c } => {
                // two_qubit_bloch normalizes the identity to 1, so fold the weight in
                let unit = two_qubit_bloch(a, b, c, 1.0);
                &unit + &ComplexMatrix::identity(4).scale(0.25 * (self.weight - 1.0))
            }
        }
    }
}

/// Checks `0 ≤ M ≤ I` for a 2×2 measurement operator.
pub fn check_povm(m: &ComplexMatrix) -> Result<()> {
    if m.rows() != 2 || m.cols() != 2 {
        return Err(Error::InvalidPovm(format!("expected 2x2, found {}x{}", m.rows(), m.cols())));
    }
    if !m.is_hermitian(EPS_POVM) {
        return Err(Error::InvalidPovm("not Hermitian".into()));
    }
    let ev = hermitian_eigenvalues(m).map_err(|e| Error::InvalidPovm(e.to_string()))?;
    if ev[0] < -EPS_POVM || ev[1] > 1.0 + EPS_POVM {
        return Err(Error::InvalidPovm(format!(
            "eigenvalues {:.3e}, {:.3e} outside [0, 1]",
            ev[0], ev[1]
        )));
    }
    Ok(())
}

fn tr_pauli(m: &ComplexMatrix, op: &ComplexMatrix) -> f64 {
    op.trace_product(m).re
}

/// `Tr_BC[(I₂ ⊗ M_b ⊗ M_c)·τ]`: Alice's unnormalized state after Bob and
/// Charlie obtain the outcomes described by `mb` and `mc`.
pub fn conditional_state_bc(
    tau: &ThreeQubitState,
    mb: &ComplexMatrix,
    mc: &ComplexMatrix,
) -> Result<ConditionalState> {
    check_povm(mb)?;
    check_povm(mc)?;
    let op = kron(&kron(&ComplexMatrix::identity(2), mb), mc);
    let full = op.matmul(tau.matrix());
    let matrix = partial_trace_qubit(&partial_trace_qubit(&full, 2)?, 1)?;
    let weight = matrix.trace().re;
    let r = Axis::ALL.map(|x| tr_pauli(&matrix, &pauli(x)));
    Ok(ConditionalState {
        matrix,
        weight,
        bloch: BlochCoefficients::Qubit(r),
    })
}

/// `Tr_C[(I₄ ⊗ M_c)·τ]`: the unnormalized two-qubit state of Alice and Bob
/// after Charlie's outcome `mc`.
pub fn conditional_state_c(tau: &ThreeQubitState, mc: &ComplexMatrix) -> Result<ConditionalState> {
    check_povm(mc)?;
    let op = kron(&ComplexMatrix::identity(4), mc);
    let matrix = partial_trace_qubit(&op.matmul(tau.matrix()), 2)?;
    let weight = matrix.trace().re;
    let i2 = ComplexMatrix::identity(2);
    let a = Axis::ALL.map(|x| tr_pauli(&matrix, &kron(&pauli(x), &i2)));
    let b = Axis::ALL.map(|x| tr_pauli(&matrix, &kron(&i2, &pauli(x))));
    let mut c = [[0.0; 3]; 3];
    for x in Axis::ALL {
        for y in Axis::ALL {
            c[x.index() - 1][y.index() - 1] = tr_pauli(&matrix, &kron(&pauli(x), &pauli(y)));
        }
    }
    Ok(ConditionalState {
        matrix,
        weight,
        bloch: BlochCoefficients::TwoQubit { a, b, c },
    })
}
