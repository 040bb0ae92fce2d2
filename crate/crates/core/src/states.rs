//! Named three-qubit states, Pauli projectors, white-noise families and the
//! JSON state-file format.
//!
//! State file layout:
//!
//! ```json
//! { "dim": 8, "matrix": [[[re, im], ... 8 entries], ... 8 rows], "label": "optional" }
//! ```
//!
//! Rows are listed top to bottom in the `|q_A q_B q_C⟩` basis (A most
//! significant), so the literature's 1-based entry `τ_ij` sits at
//! `matrix[i-1][j-1]`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmat::{ComplexMatrix, ThreeQubitState, C64};

const NORM_TOL: f64 = 1e-12;

fn check_unit_interval(name: &'static str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::OutOfRange {
            name,
            value,
            min: 0.0,
            max: 1.0,
        });
    }
    Ok(())
}

/// Unit-norm three-qubit state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: [C64; 8],
}

impl PureState {
    pub fn new(amplitudes: [C64; 8]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::OutOfRange {
                name: "norm",
                value: norm,
                min: 1.0,
                max: 1.0,
            });
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes a nonzero vector.
    pub fn normalized(amplitudes: [C64; 8]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Parse("cannot normalize a zero or non-finite vector".into()));
        }
        let mut amps = amplitudes;
        for z in &mut amps {
            *z /= norm;
        }
        Ok(Self { amplitudes: amps })
    }

    pub fn amplitudes(&self) -> &[C64; 8] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes)
    }

    pub fn density(&self) -> ThreeQubitState {
        ThreeQubitState::from_valid(self.projector())
    }
}

/// `a|000⟩ + √(1−a²)|111⟩`
pub fn ghz(a: f64) -> Result<PureState> {
    check_unit_interval("a", a)?;
    let mut amps = [C64::new(0.0, 0.0); 8];
    amps[0] = C64::new(a, 0.0);
    amps[7] = C64::new((1.0 - a * a).max(0.0).sqrt(), 0.0);
    PureState::new(amps)
}

/// Balanced GHZ state `(|000⟩ + |111⟩)/√2`.
pub fn ghz_balanced() -> PureState {
    ghz(FRAC_1_SQRT_2).expect("1/sqrt(2) is in range")
}

/// `(|001⟩ + |010⟩ + |100⟩)/√3`
pub fn w_state() -> PureState {
    let k = C64::new(1.0 / 3f64.sqrt(), 0.0);
    let mut amps = [C64::new(0.0, 0.0); 8];
    for i in [1, 2, 4] {
        amps[i] = k;
    }
    PureState::new(amps).expect("W state is normalized")
}

/// `(1−p)/8·I₈ + p·|ψ⟩⟨ψ|`
pub fn noisy(pure: &PureState, p: f64) -> Result<ThreeQubitState> {
    check_unit_interval("p", p)?;
    Ok(ThreeQubitState::from_valid(white_noise_mix(&pure.projector(), p)))
}

fn white_noise_mix(target: &ComplexMatrix, p: f64) -> ComplexMatrix {
    let noise = (1.0 - p) / 8.0;
    let mut out = target.scale(p);
    for i in 0..8 {
        out[(i, i)] += noise;
    }
    out
}

/// One-parameter white-noise family `p ↦ (1−p)/8·I₈ + p·σ`.
#[derive(Debug, Clone)]
pub struct NoisyFamily {
    label: String,
    target: ThreeQubitState,
}

impl NoisyFamily {
    pub fn from_pure(label: impl Into<String>, pure: &PureState) -> Self {
        Self {
            label: label.into(),
            target: pure.density(),
        }
    }

    /// Family built around an arbitrary (possibly mixed) target state.
    pub fn from_state(label: impl Into<String>, target: ThreeQubitState) -> Self {
        Self {
            label: label.into(),
            target,
        }
    }

    pub fn ghz() -> Self {
        Self::from_pure("ghz", &ghz_balanced())
    }

    pub fn w() -> Self {
        Self::from_pure("w", &w_state())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn parameter_name(&self) -> &'static str {
        "p"
    }

    pub fn target(&self) -> &ThreeQubitState {
        &self.target
    }

    pub fn at(&self, p: f64) -> Result<ThreeQubitState> {
        check_unit_interval("p", p)?;
        Ok(ThreeQubitState::from_valid(white_noise_mix(self.target.matrix(), p))
            .with_label(format!("{} (p = {p})", self.label)))
    }
}

/// Pauli measurement axis; index 1, 2, 3 for x, y, z.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    /// 1-based index (x = 1, y = 2, z = 3).
    pub fn index(self) -> usize {
        match self {
            Axis::X => 1,
            Axis::Y => 2,
            Axis::Z => 3,
        }
    }
}

/// Measurement outcome of a two-outcome Pauli measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub const ALL: [Outcome; 2] = [Outcome::Plus, Outcome::Minus];

    pub fn sign(self) -> f64 {
        match self {
            Outcome::Plus => 1.0,
            Outcome::Minus => -1.0,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Plus => "+",
            Outcome::Minus => "-",
        })
    }
}

pub fn pauli(axis: Axis) -> ComplexMatrix {
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let data = match axis {
        Axis::X => vec![z, one, one, z],
        Axis::Y => vec![z, -i, i, z],
        Axis::Z => vec![one, z, z, -one],
    };
    ComplexMatrix::new(2, 2, data).expect("2x2")
}

/// Eigenprojector `σ_i^±` of a Pauli matrix.
pub fn pauli_projector(axis: Axis, outcome: Outcome) -> ComplexMatrix {
    let half_sigma = pauli(axis).scale(0.5 * outcome.sign());
    &ComplexMatrix::identity(2).scale(0.5) + &half_sigma
}

/// `½(I + n·σ)` for a real Bloch vector `n`.
pub fn bloch_qubit(n: [f64; 3]) -> ComplexMatrix {
    let mut out = ComplexMatrix::identity(2).scale(0.5);
    for (axis, &ni) in Axis::ALL.iter().zip(&n) {
        out = &out + &pauli(*axis).scale(0.5 * ni);
    }
    out
}

/// The two projectors of one Pauli measurement.
#[derive(Debug, Clone)]
pub struct PauliSetting {
    pub axis: Axis,
    pub plus: ComplexMatrix,
    pub minus: ComplexMatrix,
}

impl PauliSetting {
    pub fn new(axis: Axis) -> Self {
        Self {
            axis,
            plus: pauli_projector(axis, Outcome::Plus),
            minus: pauli_projector(axis, Outcome::Minus),
        }
    }

    pub fn projector(&self, outcome: Outcome) -> &ComplexMatrix {
        match outcome {
            Outcome::Plus => &self.plus,
            Outcome::Minus => &self.minus,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct StateFile {
    dim: usize,
    matrix: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

/// Parses and validates a state file.
pub fn parse_state(json: &str) -> Result<ThreeQubitState> {
    let file: StateFile = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
    if file.dim != 8 {
        return Err(Error::DimensionMismatch {
            expected: "dim = 8".into(),
            found: format!("dim = {}", file.dim),
        });
    }
    if file.matrix.len() != 8 || file.matrix.iter().any(|row| row.len() != 8) {
        return Err(Error::DimensionMismatch {
            expected: "8 rows of 8 [re, im] pairs".into(),
            found: format!(
                "{} rows with lengths {:?}",
                file.matrix.len(),
                file.matrix.iter().map(Vec::len).collect::<Vec<_>>()
            ),
        });
    }
    let data = file
        .matrix
        .iter()
        .flatten()
        .map(|&[re, im]| C64::new(re, im))
        .collect();
    let state = ThreeQubitState::new(ComplexMatrix::new(8, 8, data)?)?;
    Ok(match file.label {
        Some(label) => state.with_label(label),
        None => state,
    })
}

pub fn load_state(path: impl AsRef<Path>) -> Result<ThreeQubitState> {
    parse_state(&std::fs::read_to_string(path)?)
}

/// Canonical serialization; `parse_state` followed by this function is the
/// canonical form of any valid state file.
pub fn state_to_json(state: &ThreeQubitState) -> String {
    let m = state.matrix();
    let file = StateFile {
        dim: 8,
        matrix: (0..8)
            .map(|r| (0..8).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
            .collect(),
        label: state.label().map(str::to_owned),
    };
    let mut s = serde_json::to_string(&file).expect("state file serializes");
    s.push('\n');
    s
}

pub fn save_state(path: impl AsRef<Path>, state: &ThreeQubitState) -> Result<()> {
    std::fs::write(path, state_to_json(state))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Property;
    use crate::qmat::{partial_trace, Subsystem};

    #[test]
    fn ghz_amplitudes() {
        let g = ghz(1.0).unwrap();
        assert_eq!(g.amplitudes()[0], C64::new(1.0, 0.0));
        assert_eq!(g.amplitudes()[7], C64::new(0.0, 0.0));
        let g = ghz(0.6).unwrap();
        assert!((g.amplitudes()[7].re - 0.8).abs() < 1e-15);
        assert!(g.amplitudes()[1..7].iter().all(|z| z.norm() == 0.0));
        let b = ghz_balanced();
        assert!((b.amplitudes()[0].re - FRAC_1_SQRT_2).abs() < 1e-16);
        assert!((b.amplitudes()[7].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(ghz(1.2).is_err());
        assert!(ghz(-0.1).is_err());
    }

    #[test]
    fn w_state_layout() {
        let w = w_state();
        assert!((w.norm() - 1.0).abs() < 1e-15);
        assert!((w.amplitudes()[1].re - 1.0 / 3f64.sqrt()).abs() < 1e-16);
        let bc = partial_trace(&w.projector(), Subsystem::A).unwrap();
        let diag: Vec<f64> = (0..4).map(|i| bc[(i, i)].re).collect();
        for (got, want) in diag.iter().zip([1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.0]) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn noisy_endpoints_and_entry() {
        let g = ghz_balanced();
        let zero = noisy(&g, 0.0).unwrap();
        assert!(zero.matrix().max_abs_diff(ThreeQubitState::maximally_mixed().matrix()) < 1e-16);
        let one = noisy(&g, 1.0).unwrap();
        assert!(one.matrix().max_abs_diff(&g.projector()) < 1e-16);
        let half = noisy(&g, 0.5).unwrap();
        assert!((half.entry(1, 8).re - 0.25).abs() < 1e-15);
        assert!(noisy(&g, 1.5).is_err());
    }

    #[test]
    fn pauli_projectors_resolve_identity() {
        for axis in Axis::ALL {
            let s = PauliSetting::new(axis);
            let sum = &s.plus + &s.minus;
            assert!(sum.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);
            assert!((&s.plus * &s.plus).max_abs_diff(&s.plus) < 1e-15);
            assert!((s.plus.trace().re - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn state_file_round_trip_and_errors() {
        let s = noisy(&w_state(), 0.3).unwrap();
        let json = state_to_json(&s);
        let back = parse_state(&json).unwrap();
        assert_eq!(back.matrix(), s.matrix());
        assert_eq!(state_to_json(&back), json);

        let file = StateFile {
            dim: 8,
            matrix: (0..8)
                .map(|r| (0..8).map(|c| if r == c { [0.9 / 8.0, 0.0] } else { [0.0, 0.0] }).collect())
                .collect(),
            label: None,
        };
        let bad_trace = serde_json::to_string(&file).unwrap();
        let err = parse_state(&bad_trace).unwrap_err();
        assert!(matches!(err, Error::InvalidState { property: Property::Trace, .. }));

        assert!(matches!(
            parse_state("{\"dim\": 4, \"matrix\": []}"),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(parse_state("not json"), Err(Error::Parse(_))));
    }
}
