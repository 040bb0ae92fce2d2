//! Entanglement criteria on three-qubit states. Each criterion reduces to a
//! signed margin `lhs − rhs`; the state is flagged when the margin exceeds
//! [`EPS_CRIT`]. Entry indices are 1-based in the `|q_A q_B q_C⟩` basis, so
//! `τ18` couples `|000⟩` and `|111⟩`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::qmat::{min_eigenvalue, partial_transpose, Subsystem, ThreeQubitState, C64};
use crate::states::PureState;

/// Strict-inequality slack: a margin must exceed this to count as detection.
pub const EPS_CRIT: f64 = 1e-10;

/// Slack for the pure-state biseparability inequalities.
pub const EPS_BISEP: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CriterionId {
    #[serde(rename = "GHZ_GME")]
    GhzGme,
    #[serde(rename = "GHZ_ENT")]
    GhzEnt,
    #[serde(rename = "PROP1_GME")]
    Prop1Gme,
    #[serde(rename = "W_GME_REF")]
    WGmeRef,
    #[serde(rename = "PPT_ENT")]
    PptEnt,
}

impl CriterionId {
    pub const ALL: [CriterionId; 5] = [
        CriterionId::GhzGme,
        CriterionId::GhzEnt,
        CriterionId::Prop1Gme,
        CriterionId::WGmeRef,
        CriterionId::PptEnt,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CriterionId::GhzGme => "GHZ_GME",
            CriterionId::GhzEnt => "GHZ_ENT",
            CriterionId::Prop1Gme => "PROP1_GME",
            CriterionId::WGmeRef => "W_GME_REF",
            CriterionId::PptEnt => "PPT_ENT",
        }
    }

    /// True when detection implies genuine tripartite entanglement rather
    /// than just failure of full separability.
    pub fn is_genuine(self) -> bool {
        matches!(
            self,
            CriterionId::GhzGme | CriterionId::Prop1Gme | CriterionId::WGmeRef
        )
    }

    pub fn evaluate(self, tau: &ThreeQubitState) -> CriterionVerdict {
        match self {
            CriterionId::GhzGme => ghz_gme(tau),
            CriterionId::GhzEnt => ghz_ent(tau),
            CriterionId::Prop1Gme => prop1_gme(tau),
            CriterionId::WGmeRef => w_gme_ref(tau),
            CriterionId::PptEnt => ppt_ent(tau),
        }
    }
}

impl fmt::Display for CriterionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CriterionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let up = s.trim().to_ascii_uppercase().replace('-', "_");
        CriterionId::ALL
            .into_iter()
            .find(|c| c.as_str() == up)
            .ok_or_else(|| Error::Parse(format!("unknown criterion `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionVerdict {
    pub id: CriterionId,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub detected: bool,
    pub detail: String,
}

impl CriterionVerdict {
    fn new(id: CriterionId, lhs: f64, rhs: f64, detail: String) -> Self {
        let margin = lhs - rhs;
        Self {
            id,
            lhs,
            rhs,
            margin,
            detected: margin > EPS_CRIT,
            detail,
        }
    }
}

/// Diagonal entry, clamped at zero so round-off never reaches `sqrt`.
fn diag(t: &ThreeQubitState, i: usize) -> f64 {
    t.entry(i, i).re.max(0.0)
}

fn abs(t: &ThreeQubitState, i: usize, j: usize) -> f64 {
    t.entry(i, j).norm()
}

fn geo(t: &ThreeQubitState, i: usize, j: usize) -> f64 {
    (diag(t, i) * diag(t, j)).sqrt()
}

/// Diagonal pairs matched against `|τ18|`, one per single-party cut.
const GHZ_PAIRS: [(Subsystem, usize, usize); 3] = [
    (Subsystem::A, 4, 5),
    (Subsystem::B, 3, 6),
    (Subsystem::C, 2, 7),
];

/// `|τ18| > √(τ22τ77) + √(τ33τ66) + √(τ44τ55)` certifies genuine
/// tripartite entanglement.
pub fn ghz_gme(tau: &ThreeQubitState) -> CriterionVerdict {
    let lhs = abs(tau, 1, 8);
    let rhs: f64 = GHZ_PAIRS.iter().map(|&(_, i, j)| geo(tau, i, j)).sum();
    CriterionVerdict::new(CriterionId::GhzGme, lhs, rhs, "|t18| vs sum over all cuts".into())
}

/// `|τ18| > √(τ44τ55)` certifies that the state is not fully separable.
///
/// The scalar margin always uses the A|BC pair `(4, 5)`. The other two pairs
/// are evaluated as well and any that fire are listed in `detail`.
pub fn ghz_ent(tau: &ThreeQubitState) -> CriterionVerdict {
    let lhs = abs(tau, 1, 8);
    let (_, i, j) = GHZ_PAIRS[0];
    let rhs = geo(tau, i, j);
    let fired: Vec<String> = GHZ_PAIRS
        .iter()
        .filter(|&&(_, i, j)| lhs - geo(tau, i, j) > EPS_CRIT)
        .map(|&(s, i, j)| format!("{} (t{i}{i}, t{j}{j})", s.cut_name()))
        .collect();
    let detail = if fired.is_empty() {
        "no pair fired".to_string()
    } else {
        format!("fired: {}", fired.join(", "))
    };
    CriterionVerdict::new(CriterionId::GhzEnt, lhs, rhs, detail)
}

fn w_coherences(tau: &ThreeQubitState) -> f64 {
    abs(tau, 2, 3) + abs(tau, 2, 5) + abs(tau, 3, 5)
}

/// `|τ23|+|τ25|+|τ35| > ½(2τ11+τ44+τ66+τ77) + ½(τ22+τ33+τ55)` certifies
/// genuine tripartite entanglement.
pub fn prop1_gme(tau: &ThreeQubitState) -> CriterionVerdict {
    let d = |i| diag(tau, i);
    let lhs = w_coherences(tau);
    let rhs = 0.5 * (2.0 * d(1) + d(4) + d(6) + d(7)) + 0.5 * (d(2) + d(3) + d(5));
    CriterionVerdict::new(CriterionId::Prop1Gme, lhs, rhs, "W-type coherences".into())
}

/// Older W-type criterion with square-root terms in place of the arithmetic
/// means, kept for comparison.
pub fn w_gme_ref(tau: &ThreeQubitState) -> CriterionVerdict {
    let d = |i| diag(tau, i);
    let lhs = w_coherences(tau);
    let rhs = geo(tau, 1, 4) + geo(tau, 1, 6) + geo(tau, 1, 7) + 0.5 * (d(2) + d(3) + d(5));
    CriterionVerdict::new(CriterionId::WGmeRef, lhs, rhs, "W-type coherences".into())
}

/// Partial-transpose test on each single-party cut. The margin is the
/// negated smallest eigenvalue found across the three transposes.
pub fn ppt_ent(tau: &ThreeQubitState) -> CriterionVerdict {
    let mut worst = f64::INFINITY;
    let mut negative = Vec::new();
    for s in Subsystem::ALL {
        let pt = partial_transpose(tau.matrix(), s).expect("8x8 state");
        let lmin = min_eigenvalue(&pt).expect("partial transpose is Hermitian");
        if -lmin > EPS_CRIT {
            negative.push(format!("{} ({lmin:.3e})", s.cut_name()));
        }
        worst = worst.min(lmin);
    }
    let detail = if negative.is_empty() {
        "all partial transposes PSD".to_string()
    } else {
        format!("negative: {}", negative.join(", "))
    };
    CriterionVerdict::new(CriterionId::PptEnt, -worst, 0.0, detail)
}

pub fn evaluate_all(tau: &ThreeQubitState) -> Vec<CriterionVerdict> {
    CriterionId::ALL.iter().map(|c| c.evaluate(tau)).collect()
}

/// Slack `rhs − lhs` of the three entry inequalities that every pure state
/// product across `cut` must satisfy. All three are `≥ 0` for such states.
pub fn biseparable_margins(psi: &PureState, cut: Subsystem) -> [f64; 3] {
    let a = psi.amplitudes();
    // σ_ij = a_i conj(a_j), 1-based
    let s = |i: usize, j: usize| -> C64 { a[i - 1] * a[j - 1].conj() };
    let d = |i: usize| s(i, i).re;
    let bound = |k: (usize, usize), i: usize, j: usize| 0.5 * (d(i) + d(j)) - s(k.0, k.1).norm();
    match cut {
        Subsystem::A => [
            bound((2, 5), 1, 6),
            bound((3, 5), 1, 7),
            bound((2, 3), 2, 3),
        ],
        Subsystem::B => [
            bound((2, 3), 1, 4),
            bound((3, 5), 1, 7),
            bound((2, 5), 2, 5),
        ],
        Subsystem::C => [
            bound((2, 3), 1, 4),
            bound((2, 5), 1, 6),
            bound((3, 5), 3, 5),
        ],
    }
}

/// Whether all three biseparability inequalities for `cut` hold.
pub fn pure_biseparable_check(psi: &PureState, cut: Subsystem) -> bool {
    biseparable_margins(psi, cut).iter().all(|&m| m >= -EPS_BISEP)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::{kron, ComplexMatrix};
    use crate::states::{ghz, noisy, w_state};
    use crate::taumap::build_tau1;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn maximally_mixed_margins() {
        let m = ThreeQubitState::maximally_mixed();
        let v = ghz_gme(&m);
        assert!(!v.detected);
        assert!((v.margin + 3.0 / 8.0).abs() < 1e-15);
        assert!(!ghz_ent(&m).detected);
        let v = prop1_gme(&m);
        assert!((v.margin + 0.5).abs() < 1e-15);
        assert!(!w_gme_ref(&m).detected);
        let v = ppt_ent(&m);
        assert!(!v.detected);
        assert!((v.margin + 0.125).abs() < 1e-12);
        assert_eq!(v.rhs, 0.0);
    }

    #[test]
    fn pure_ghz_family() {
        for a in [0.1, 0.4, 0.8, 0.95] {
            let rho = ghz(a).unwrap().density();
            let v = ghz_gme(&rho);
            assert!((v.margin - a * (1.0 - a * a).sqrt()).abs() < 1e-14);
            assert!(v.detected);
            assert!(ghz_ent(&rho).detected);
            assert!(ppt_ent(&rho).detected);
        }
    }

    #[test]
    fn pure_w() {
        let rho = w_state().density();
        let v = prop1_gme(&rho);
        assert!((v.margin - 0.5).abs() < 1e-14);
        assert!(v.detected);
        let v = w_gme_ref(&rho);
        assert!((v.margin - 0.5).abs() < 1e-14);
        assert!(v.detected);
    }

    #[test]
    fn ghz_ent_detail_lists_every_firing_cut() {
        // noisy GHZ on τ¹ just above 0.3: pairs (2,7) and (3,6) fire, (4,5) does not
        let tau = build_tau1(&noisy(&crate::states::ghz_balanced(), 0.35).unwrap(), 1.0 / 3f64.sqrt())
            .unwrap();
        let v = ghz_ent(tau.state());
        assert!(!v.detected);
        assert!(v.detail.contains("C|AB"), "{}", v.detail);
        assert!(v.detail.contains("B|AC"), "{}", v.detail);
        assert!(!v.detail.contains("A|BC"), "{}", v.detail);
    }

    #[test]
    fn ppt_on_product_state_is_quiet() {
        let q0 = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
        let plus = ComplexMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]);
        let m = kron(&kron(&q0, &plus), &q0);
        let rho = ThreeQubitState::new(m).unwrap();
        let v = ppt_ent(&rho);
        assert!(!v.detected);
        assert!(v.detail.contains("PSD"));
    }

    #[test]
    fn gme_implies_ent() {
        for p in [0.5, 0.7, 0.9, 1.0] {
            let tau = build_tau1(&noisy(&crate::states::ghz_balanced(), p).unwrap(), 1.0 / 3f64.sqrt())
                .unwrap();
            let g = ghz_gme(tau.state());
            let e = ghz_ent(tau.state());
            assert!(g.margin <= e.margin);
        }
    }

    #[test]
    fn criterion_ids_parse() {
        for id in CriterionId::ALL {
            assert_eq!(id.as_str().parse::<CriterionId>().unwrap(), id);
            assert_eq!(id.as_str().to_lowercase().parse::<CriterionId>().unwrap(), id);
        }
        assert!("GHZ".parse::<CriterionId>().is_err());
        assert_eq!(serde_json::to_string(&CriterionId::WGmeRef).unwrap(), "\"W_GME_REF\"");
    }

    #[test]
    fn biseparable_inequalities() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        // |0⟩_A ⊗ (|01⟩+|10⟩)/√2
        let mut amps = [c(0.0); 8];
        amps[1] = c(h);
        amps[2] = c(h);
        let psi = PureState::new(amps).unwrap();
        assert!(pure_biseparable_check(&psi, Subsystem::A));
        let w = w_state();
        assert!(!pure_biseparable_check(&w, Subsystem::A));
        assert!(!pure_biseparable_check(&w, Subsystem::B));
        assert!(!pure_biseparable_check(&w, Subsystem::C));
    }
}
