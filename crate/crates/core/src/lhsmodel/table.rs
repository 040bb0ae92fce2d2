//! Dense Pauli joint-probability tables: 27 setting triples × 8 outcome triples.

use crate::qmat::{kron, ComplexMatrix};
use crate::states::{pauli_projector, Axis, Outcome};

/// Row index of a setting triple.
pub fn setting_index(i: Axis, j: Axis, k: Axis) -> usize {
    9 * (i.index() - 1) + 3 * (j.index() - 1) + (k.index() - 1)
}

/// Column index of an outcome triple; bit value 0 means `+`.
pub fn outcome_index(a: Outcome, b: Outcome, c: Outcome) -> usize {
    let bit = |o: Outcome| (o == Outcome::Minus) as usize;
    4 * bit(a) + 2 * bit(b) + bit(c)
}

/// Every `(i, j, k, a, b, c)` with its `(row, col)` position.
pub fn all_events() -> impl Iterator<Item = ([Axis; 3], [Outcome; 3], usize, usize)> {
    Axis::ALL.into_iter().flat_map(|i| {
        Axis::ALL.into_iter().flat_map(move |j| {
            Axis::ALL.into_iter().flat_map(move |k| {
                Outcome::ALL.into_iter().flat_map(move |a| {
                    Outcome::ALL.into_iter().flat_map(move |b| {
                        Outcome::ALL.into_iter().map(move |c| {
                            (
                                [i, j, k],
                                [a, b, c],
                                setting_index(i, j, k),
                                outcome_index(a, b, c),
                            )
                        })
                    })
                })
            })
        })
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct JointTable(pub [[f64; 8]; 27]);

impl JointTable {
    pub fn zeros() -> Self {
        JointTable([[0.0; 8]; 27])
    }

    /// Builds a table entry by entry from a probability function.
    pub fn from_fn(mut f: impl FnMut([Axis; 3], [Outcome; 3]) -> f64) -> Self {
        let mut t = Self::zeros();
        for (s, o, r, c) in all_events() {
            t.0[r][c] = f(s, o);
        }
        t
    }

    /// `Tr[(Π_a^i ⊗ Π_b^j ⊗ Π_c^k)·M]` for every setting and outcome. `M`
    /// only needs to be Hermitian, so quasi-states are accepted.
    pub fn from_operator(m: &ComplexMatrix) -> Self {
        let proj = |ax: Axis, o: Outcome| pauli_projector(ax, o);
        Self::from_fn(|[i, j, k], [a, b, c]| {
            let p = kron(&kron(&proj(i, a), &proj(j, b)), &proj(k, c));
            p.trace_product(m).re
        })
    }

    pub fn get(&self, settings: [Axis; 3], outcomes: [Outcome; 3]) -> f64 {
        let [i, j, k] = settings;
        let [a, b, c] = outcomes;
        self.0[setting_index(i, j, k)][outcome_index(a, b, c)]
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    /// Largest deviation of a per-setting sum from 1.
    pub fn normalization_defect(&self) -> f64 {
        self.0
            .iter()
            .map(|row| (row.iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}
