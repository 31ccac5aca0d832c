//! One verification pipeline per structural result: each constructs both
//! sides of an asserted isomorphism as pro/ind systems connected by an
//! explicit natural map and renders a bounded verdict.

mod cofinite;
mod comparisons;
mod diagonal_checks;
mod mgm;

pub use cofinite::{
    check_cofiniteness, prufer_system, rationals_system, repeated_sum_system, CofinitenessInput,
};
pub use comparisons::{
    check_completion_of_torsion, check_telescope_koszul, check_torsion_completion_invariance,
    check_torsion_of_completion,
};
pub use diagonal_checks::{
    check_diagonal_completed, check_diagonal_fg, check_diagonal_torsion, serre_chi, SerreChi,
};
pub use mgm::{check_mgm_complete_side, check_mgm_torsion_side};

use crate::towers::TowerStatus;

/// Stable identifiers for the shipped checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckId {
    TorsionCompletionInvariance,
    TorsionOfCompletion,
    CompletionOfTorsion,
    MgmTorsionSide,
    MgmCompleteSide,
    DiagonalTorsion,
    DiagonalFg,
    DiagonalCompleted,
    Cofiniteness,
    SerreMultiplicity,
    Wpr,
    Psi,
    TelescopeKoszul,
    ZeroMap,
}

impl CheckId {
    pub fn name(&self) -> &'static str {
        match self {
            CheckId::TorsionCompletionInvariance => "torsion-completion-invariance",
            CheckId::TorsionOfCompletion => "torsion-of-completion",
            CheckId::CompletionOfTorsion => "completion-of-torsion",
            CheckId::MgmTorsionSide => "mgm-tor",
            CheckId::MgmCompleteSide => "mgm-com",
            CheckId::DiagonalTorsion => "diagonal-torsion",
            CheckId::DiagonalFg => "diagonal-fg",
            CheckId::DiagonalCompleted => "diagonal-completed",
            CheckId::Cofiniteness => "cofiniteness",
            CheckId::SerreMultiplicity => "serre",
            CheckId::Wpr => "wpr",
            CheckId::Psi => "psi",
            CheckId::TelescopeKoszul => "telescope-koszul",
            CheckId::ZeroMap => "zero-map",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Verified,
    Failed(String),
    Inconclusive(String),
}

impl Verdict {
    pub fn ok(&self) -> bool {
        matches!(self, Verdict::Verified)
    }

    pub fn from_status(status: &TowerStatus, context: &str) -> Verdict {
        match status {
            s if s.is_verified() => Verdict::Verified,
            TowerStatus::Failed { level, detail } => {
                Verdict::Failed(format!("{}: failed at level {}: {}", context, level, detail))
            }
            TowerStatus::Inconclusive { level, detail } => {
                Verdict::Inconclusive(format!("{}: stuck at level {}: {}", context, level, detail))
            }
            _ => unreachable!(),
        }
    }

    /// Combine: any failure dominates, then any inconclusive.
    pub fn merge(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Failed(a), _) => Verdict::Failed(a),
            (_, Verdict::Failed(b)) => Verdict::Failed(b),
            (Verdict::Inconclusive(a), _) => Verdict::Inconclusive(a),
            (_, Verdict::Inconclusive(b)) => Verdict::Inconclusive(b),
            _ => Verdict::Verified,
        }
    }
}

/// Outcome of one pipeline run: deterministic given inputs and bound.
#[derive(Clone, Debug)]
pub struct TheoremInstance {
    pub id: CheckId,
    pub description: String,
    pub bound: u32,
    pub verdict: Verdict,
    pub trace: Vec<String>,
}

impl TheoremInstance {
    pub fn ok(&self) -> bool {
        self.verdict.ok()
    }
}
