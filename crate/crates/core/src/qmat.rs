//! Dense complex linear algebra at the fixed sizes used for three qubits.
//!
//! Basis convention: computational basis `|q_A q_B q_C⟩` with `q_A` the most
//! significant bit, so index 0 is `|000⟩` and index 7 is `|111⟩`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Property, Result};

pub type C64 = Complex64;

/// Hermiticity tolerance for density matrices.
pub const EPS_HERM: f64 = 1e-10;
/// Allowed deviation of a density matrix trace from one.
pub const EPS_TRACE: f64 = 1e-10;
/// Smallest eigenvalue still accepted as positive semidefinite.
pub const EPS_PSD: f64 = -1e-9;
/// Entrywise comparison tolerance for exact identities.
pub const EPS_ARITH: f64 = 1e-12;

const MAX_SWEEPS: usize = 64;

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    /// Row-major constructor. Fails on a length mismatch or a non-finite entry.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: format!("{rows}x{cols} = {} entries", rows * cols),
                found: format!("{} entries", data.len()),
            });
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / cols,
                col: pos % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |r, c| if r == c { C64::new(diag[r], 0.0) } else { C64::new(0.0, 0.0) })
    }

    /// Real-valued matrix from nested rows; panics on ragged input.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let cols = rows[0].len();
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_fn(rows.len(), cols, |r, c| C64::new(rows[r][c], 0.0))
    }

    /// `|v⟩⟨v|`
    pub fn outer(v: &[C64]) -> Self {
        let n = v.len();
        Self::from_fn(n, n, |r, c| v[r] * v[c].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, k: f64) -> Self {
        self.map(|z| z * k)
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for c in 0..rhs.cols {
                    out.data[r * rhs.cols + c] += a * rhs[(k, c)];
                }
            }
        }
        out
    }

    /// `Tr(self · rhs)` without forming the product.
    pub fn trace_product(&self, rhs: &Self) -> C64 {
        assert_eq!(self.cols, rhs.rows);
        assert_eq!(self.rows, rhs.cols);
        let mut acc = C64::new(0.0, 0.0);
        for r in 0..self.rows {
            for k in 0..self.cols {
                acc += self[(r, k)] * rhs[(k, r)];
            }
        }
        acc
    }

    /// Largest entrywise modulus of `self - other`; panics on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |M - M†|`, or infinity for a non-square matrix.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for r in 0..self.rows {
            for c in r..self.cols {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of bounds");
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of bounds");
        &mut self.data[r * self.cols + c]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product; dimensions multiply.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(a.rows * b.rows, a.cols * b.cols, |r, c| {
        a[(r / b.rows, c / b.cols)] * b[(r % b.rows, c % b.cols)]
    })
}

/// One of the three qubit factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Subsystem {
    A,
    B,
    C,
}

impl Subsystem {
    pub const ALL: [Subsystem; 3] = [Subsystem::A, Subsystem::B, Subsystem::C];

    /// Position of the factor, 0 for the most significant qubit.
    pub fn position(self) -> usize {
        match self {
            Subsystem::A => 0,
            Subsystem::B => 1,
            Subsystem::C => 2,
        }
    }

    /// Name of the bipartition that isolates this party, e.g. `A|BC`.
    pub fn cut_name(self) -> &'static str {
        match self {
            Subsystem::A => "A|BC",
            Subsystem::B => "B|AC",
            Subsystem::C => "C|AB",
        }
    }
}

impl fmt::Display for Subsystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Subsystem::A => "A",
            Subsystem::B => "B",
            Subsystem::C => "C",
        })
    }
}

fn qubit_count(m: &ComplexMatrix) -> Result<usize> {
    let n = m.rows;
    if !m.is_square() || !n.is_power_of_two() || n < 2 {
        return Err(Error::DimensionMismatch {
            expected: "square 2^n x 2^n matrix".into(),
            found: format!("{}x{}", m.rows, m.cols),
        });
    }
    Ok(n.trailing_zeros() as usize)
}

fn expect_dim(m: &ComplexMatrix, n: usize) -> Result<()> {
    if m.rows != n || m.cols != n {
        return Err(Error::DimensionMismatch {
            expected: format!("{n}x{n}"),
            found: format!("{}x{}", m.rows, m.cols),
        });
    }
    Ok(())
}

/// Inserts `bit` at bit position `shift` of `x`.
fn insert_bit(x: usize, shift: usize, bit: usize) -> usize {
    let low = x & ((1 << shift) - 1);
    let high = x >> shift;
    (high << (shift + 1)) | (bit << shift) | low
}

/// Traces out qubit `q` (0 = most significant) of a `2^n` square matrix.
pub fn partial_trace_qubit(m: &ComplexMatrix, q: usize) -> Result<ComplexMatrix> {
    let n = qubit_count(m)?;
    if q >= n || n < 2 {
        return Err(Error::DimensionMismatch {
            expected: format!("qubit index below {n} with at least two qubits"),
            found: format!("qubit {q}"),
        });
    }
    let shift = n - 1 - q;
    let dim = 1 << (n - 1);
    Ok(ComplexMatrix::from_fn(dim, dim, |r, c| {
        (0..2)
            .map(|b| m[(insert_bit(r, shift, b), insert_bit(c, shift, b))])
            .sum()
    }))
}

/// Partial transpose of qubit `q` of a `2^n` square matrix.
pub fn partial_transpose_qubit(m: &ComplexMatrix, q: usize) -> Result<ComplexMatrix> {
    let n = qubit_count(m)?;
    if q >= n {
        return Err(Error::DimensionMismatch {
            expected: format!("qubit index below {n}"),
            found: format!("qubit {q}"),
        });
    }
    let mask = 1 << (n - 1 - q);
    Ok(ComplexMatrix::from_fn(m.rows, m.cols, |r, c| {
        let r2 = (r & !mask) | (c & mask);
        let c2 = (c & !mask) | (r & mask);
        m[(r2, c2)]
    }))
}

/// Reorders qubit factors: qubit `p` of the output is qubit `order[p]` of the input.
pub fn permute_qubits(m: &ComplexMatrix, order: &[usize]) -> Result<ComplexMatrix> {
    let n = qubit_count(m)?;
    let mut seen = vec![false; n];
    if order.len() != n || order.iter().any(|&q| q >= n || std::mem::replace(&mut seen[q], true)) {
        return Err(Error::DimensionMismatch {
            expected: format!("permutation of 0..{n}"),
            found: format!("{order:?}"),
        });
    }
    let map = |x: usize| {
        let mut old = 0;
        for (p, &q) in order.iter().enumerate() {
            let bit = (x >> (n - 1 - p)) & 1;
            old |= bit << (n - 1 - q);
        }
        old
    };
    Ok(ComplexMatrix::from_fn(m.rows, m.cols, |r, c| m[(map(r), map(c))]))
}

/// Traces out one party of an 8×8 three-qubit operator; the other two keep their order.
pub fn partial_trace(rho: &ComplexMatrix, over: Subsystem) -> Result<ComplexMatrix> {
    expect_dim(rho, 8)?;
    partial_trace_qubit(rho, over.position())
}

/// Single-party marginal of an 8×8 operator.
pub fn marginal(rho: &ComplexMatrix, keep: Subsystem) -> Result<ComplexMatrix> {
    expect_dim(rho, 8)?;
    let mut others: Vec<usize> = Subsystem::ALL
        .iter()
        .filter(|&&s| s != keep)
        .map(|s| s.position())
        .collect();
    // trace the higher position first so the lower index stays valid
    others.sort_unstable_by(|a, b| b.cmp(a));
    let once = partial_trace_qubit(rho, others[0])?;
    partial_trace_qubit(&once, others[1])
}

/// Partial transpose with respect to one party of an 8×8 operator.
pub fn partial_transpose(rho: &ComplexMatrix, over: Subsystem) -> Result<ComplexMatrix> {
    expect_dim(rho, 8)?;
    partial_transpose_qubit(rho, over.position())
}

/// Spectrum and orthonormal eigenvectors (as columns) of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        (0..self.vectors.rows).map(|r| self.vectors[(r, k)]).collect()
    }
}

/// Cyclic complex Jacobi diagonalization. Eigenvalues are returned ascending.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<HermitianEigen> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: "square matrix".into(),
            found: format!("{}x{}", m.rows, m.cols),
        });
    }
    let defect = m.hermiticity_defect();
    if defect > EPS_HERM * m.max_abs().max(1.0) {
        return Err(Error::NotHermitian(defect));
    }
    let n = m.rows;
    // symmetrize so rounding in the input cannot leak into the rotations
    let mut a = ComplexMatrix::from_fn(n, n, |r, c| (m[(r, c)] + m[(c, r)].conj()) * 0.5);
    let mut v = ComplexMatrix::identity(n);
    let frob: f64 = a.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let stop = (f64::EPSILON * frob).powi(2);

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| a[(p, q)].norm_sqr())
            .sum();
        if off <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let phase = apq / r;
                let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * r);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let upp = C64::new(c, 0.0);
                let upq = C64::new(s, 0.0);
                let uqp = phase.conj() * -s;
                let uqq = phase.conj() * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = akp * upp + akq * uqp;
                    a[(k, q)] = akp * upq + akq * uqq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = upp.conj() * apk + uqp.conj() * aqk;
                    a[(q, k)] = upq.conj() * apk + uqq.conj() * aqk;
                }
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = vkp * upp + vkq * uqp;
                    v[(k, q)] = vkp * upq + vkq * uqq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(HermitianEigen { values, vectors })
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(hermitian_eigen(m)?.values)
}

pub fn min_eigenvalue(m: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(m)?[0])
}

/// Verdict of [`is_density_matrix`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityCheck {
    pub valid: bool,
    pub violation: Option<Property>,
    pub detail: String,
}

impl DensityCheck {
    fn ok() -> Self {
        Self {
            valid: true,
            violation: None,
            detail: "valid density matrix".into(),
        }
    }

    fn fail(property: Property, detail: String) -> Self {
        Self {
            valid: false,
            violation: Some(property),
            detail,
        }
    }

    pub fn into_result(self) -> Result<()> {
        match self.violation {
            None => Ok(()),
            Some(property) => Err(Error::InvalidState {
                property,
                detail: self.detail,
            }),
        }
    }
}

fn check_density(m: &ComplexMatrix, herm_tol: f64, trace_tol: f64, psd_floor: f64) -> DensityCheck {
    let defect = m.hermiticity_defect();
    if defect > herm_tol {
        let detail = if m.is_square() {
            format!("max |M - M†| = {defect:.3e} exceeds {herm_tol:.0e}")
        } else {
            format!("matrix is {}x{}, not square", m.rows, m.cols)
        };
        return DensityCheck::fail(Property::Hermiticity, detail);
    }
    let tr = m.trace().re;
    if (tr - 1.0).abs() > trace_tol {
        return DensityCheck::fail(Property::Trace, format!("trace = {tr} differs from 1"));
    }
    match min_eigenvalue(m) {
        Ok(lmin) if lmin >= psd_floor => DensityCheck::ok(),
        Ok(lmin) => DensityCheck::fail(
            Property::Positivity,
            format!("minimum eigenvalue {lmin:.3e} below {psd_floor:.0e}"),
        ),
        Err(e) => DensityCheck::fail(Property::Hermiticity, e.to_string()),
    }
}

/// Checks Hermiticity, unit trace and positivity, in that order, all at tolerance `eps`.
/// The diagnostic names the first violated property.
pub fn is_density_matrix(m: &ComplexMatrix, eps: f64) -> DensityCheck {
    check_density(m, eps, eps, -eps)
}

/// Density check with the fixed library tolerances.
pub fn check_state(m: &ComplexMatrix) -> DensityCheck {
    check_density(m, EPS_HERM, EPS_TRACE, EPS_PSD)
}

/// A validated 8×8 three-qubit density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ThreeQubitState {
    matrix: ComplexMatrix,
    label: Option<String>,
}

impl ThreeQubitState {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        expect_dim(&matrix, 8)?;
        check_state(&matrix).into_result()?;
        Ok(Self { matrix, label: None })
    }

    /// `I₈/8`
    pub fn maximally_mixed() -> Self {
        Self {
            matrix: ComplexMatrix::identity(8).scale(0.125),
            label: Some("maximally mixed".into()),
        }
    }

    pub(crate) fn from_valid(matrix: ComplexMatrix) -> Self {
        debug_assert_eq!((matrix.rows, matrix.cols), (8, 8));
        Self { matrix, label: None }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// Entry `τ_ij` with 1-based indices as printed in the literature.
    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.matrix[(i - 1, j - 1)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn sigma_z() -> ComplexMatrix {
        ComplexMatrix::from_real_diagonal(&[1.0, -1.0])
    }

    fn sigma_x() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
    }

    fn ghz_projector() -> ComplexMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut v = vec![c(0.0); 8];
        v[0] = c(h);
        v[7] = c(h);
        ComplexMatrix::outer(&v)
    }

    #[test]
    fn new_rejects_bad_shapes_and_nan() {
        assert!(matches!(
            ComplexMatrix::new(2, 2, vec![c(1.0); 3]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            ComplexMatrix::new(1, 2, vec![c(1.0), C64::new(f64::NAN, 0.0)]),
            Err(Error::NonFinite { row: 0, col: 1 })
        ));
    }

    #[test]
    fn kron_identity_and_pauli() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));
        assert_eq!(
            kron(&sigma_z(), &i2),
            ComplexMatrix::from_real_diagonal(&[1.0, 1.0, -1.0, -1.0])
        );
    }

    #[test]
    fn kron_zero_projector_with_bell() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = ComplexMatrix::outer(&[c(h), c(0.0), c(0.0), c(h)]);
        let p0 = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
        let k = kron(&p0, &bell);
        // expected: 1/2 at 1-based (1,1), (1,4), (4,1), (4,4)
        for r in 0..8 {
            for col in 0..8 {
                let want = if [0, 3].contains(&r) && [0, 3].contains(&col) { 0.5 } else { 0.0 };
                assert!((k[(r, col)] - c(want)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn partial_trace_of_ghz() {
        let out = partial_trace(&ghz_projector(), Subsystem::A).unwrap();
        let want = ComplexMatrix::from_real_diagonal(&[0.5, 0.0, 0.0, 0.5]);
        assert!(out.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn partial_trace_of_maximally_mixed() {
        let out = partial_trace(&ComplexMatrix::identity(8).scale(0.125), Subsystem::A).unwrap();
        assert!(out.max_abs_diff(&ComplexMatrix::identity(4).scale(0.25)) < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_wrong_size() {
        assert!(partial_trace(&ComplexMatrix::identity(4), Subsystem::A).is_err());
        assert!(partial_transpose(&ComplexMatrix::identity(4), Subsystem::A).is_err());
    }

    #[test]
    fn marginal_picks_the_right_party() {
        let p0 = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
        let p1 = ComplexMatrix::from_real_diagonal(&[0.0, 1.0]);
        let plus = ComplexMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]);
        let rho = kron(&kron(&p0, &p1), &plus);
        assert!(marginal(&rho, Subsystem::A).unwrap().max_abs_diff(&p0) < 1e-15);
        assert!(marginal(&rho, Subsystem::B).unwrap().max_abs_diff(&p1) < 1e-15);
        assert!(marginal(&rho, Subsystem::C).unwrap().max_abs_diff(&plus) < 1e-15);
    }

    #[test]
    fn permute_moves_factors() {
        let p0 = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
        let p1 = ComplexMatrix::from_real_diagonal(&[0.0, 1.0]);
        let x = sigma_x();
        let acb = kron(&kron(&p0, &p1), &x);
        let abc = permute_qubits(&acb, &[0, 2, 1]).unwrap();
        assert_eq!(abc, kron(&kron(&p0, &x), &p1));
        assert!(permute_qubits(&acb, &[0, 0, 1]).is_err());
    }

    #[test]
    fn partial_transpose_ghz_is_npt() {
        let pt = partial_transpose(&ghz_projector(), Subsystem::A).unwrap();
        let ev = hermitian_eigenvalues(&pt).unwrap();
        assert!((ev[0] + 0.5).abs() < 1e-12);
    }

    #[test]
    fn partial_transpose_fixed_point_and_involution() {
        let mixed = ComplexMatrix::identity(8).scale(0.125);
        assert_eq!(partial_transpose(&mixed, Subsystem::B).unwrap(), mixed);
        let g = ghz_projector();
        let twice =
            partial_transpose(&partial_transpose(&g, Subsystem::C).unwrap(), Subsystem::C).unwrap();
        assert_eq!(twice, g);
    }

    #[test]
    fn eigenvalues_of_simple_matrices() {
        let d = ComplexMatrix::from_real_diagonal(&[3.0, 1.0, 2.0]);
        assert_eq!(hermitian_eigenvalues(&d).unwrap(), vec![1.0, 2.0, 3.0]);
        let ev = hermitian_eigenvalues(&sigma_x()).unwrap();
        assert!((ev[0] + 1.0).abs() < 1e-14 && (ev[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigen_handles_complex_entries() {
        let sy = ComplexMatrix::new(
            2,
            2,
            vec![c(0.0), C64::new(0.0, -1.0), C64::new(0.0, 1.0), c(0.0)],
        )
        .unwrap();
        let eig = hermitian_eigen(&sy).unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-14);
        for k in 0..2 {
            let v = eig.vector(k);
            for r in 0..2 {
                let mv: C64 = (0..2).map(|j| sy[(r, j)] * v[j]).sum();
                assert!((mv - v[r] * eig.values[k]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn eigen_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(hermitian_eigenvalues(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn density_checks_name_the_violation() {
        assert!(is_density_matrix(&ComplexMatrix::identity(8).scale(0.125), 1e-10).valid);
        let z = is_density_matrix(&sigma_z(), 1e-10);
        assert_eq!(z.violation, Some(Property::Trace));
        let neg = is_density_matrix(&ComplexMatrix::from_real_diagonal(&[1.5, -0.5]), 1e-10);
        assert_eq!(neg.violation, Some(Property::Positivity));
        let nh = is_density_matrix(
            &ComplexMatrix::from_real_rows(&[&[0.5, 0.1], &[0.0, 0.5]]),
            1e-10,
        );
        assert_eq!(nh.violation, Some(Property::Hermiticity));
    }

    #[test]
    fn three_qubit_state_validates() {
        assert!(ThreeQubitState::new(ComplexMatrix::identity(8).scale(0.125)).is_ok());
        assert!(ThreeQubitState::new(ComplexMatrix::identity(4).scale(0.25)).is_err());
        let err = ThreeQubitState::new(ComplexMatrix::identity(8).scale(0.1)).unwrap_err();
        assert!(matches!(err, Error::InvalidState { property: Property::Trace, .. }));
    }
}
