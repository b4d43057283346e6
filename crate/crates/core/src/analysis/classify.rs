use serde::{Deserialize, Serialize};

use super::annealed::annealed_critical_point;
use crate::excursion::ExcursionLaw;
use crate::Real;

/// Kind of depinning transition of a law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TransitionCase {
    /// Recurrent, `M_E(b_E) = ∞`: no transition.
    #[serde(rename = "Thm2_i")]
    Thm2I,
    /// Recurrent, `M_E(b_E) < ∞`, `b_E' = ∞`: continuous transition.
    #[serde(rename = "Thm2_ii")]
    Thm2II,
    /// Recurrent, `M_E(b_E) < ∞`, `b_E' < ∞`: discontinuous transition.
    #[serde(rename = "Thm2_iii")]
    Thm2III,
    /// Transient with exponential excursion tails: first order, with a gap
    /// between quenched and annealed critical points.
    #[serde(rename = "Thm1_transient_exp")]
    Thm1TransientExp,
    /// No exponential tails (`b_E = 0`): not covered.
    #[serde(rename = "heavy_tail_unsupported")]
    HeavyTailUnsupported,
}

impl TransitionCase {
    pub fn as_str(&self) -> &'static str {
        match self {
            TransitionCase::Thm2I => "Thm2_i",
            TransitionCase::Thm2II => "Thm2_ii",
            TransitionCase::Thm2III => "Thm2_iii",
            TransitionCase::Thm1TransientExp => "Thm1_transient_exp",
            TransitionCase::HeavyTailUnsupported => "heavy_tail_unsupported",
        }
    }
}

/// Annealed side of the phase diagram at one `β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnealedPhase<S> {
    pub case: TransitionCase,
    pub u_c: S,
    /// Limit of the annealed contact fraction as `u ↓ u_c` (0 when continuous
    /// or absent).
    pub jump: S,
}

pub fn transition_case<S: Real>(law: &ExcursionLaw<S>) -> TransitionCase {
    let b_e = law.b_e();
    if !(b_e > S::zero()) {
        return TransitionCase::HeavyTailUnsupported;
    }
    if !law.is_recurrent() {
        return TransitionCase::Thm1TransientExp;
    }
    match law.analytics().log_sum_gamma {
        None => TransitionCase::Thm2I,
        Some(_) if law.b_e_prime().is_infinite() => TransitionCase::Thm2II,
        Some(_) => TransitionCase::Thm2III,
    }
}

/// Classifies the transition and computes `u_c^a` and the annealed jump.
///
/// In case (iii) the jump is `1/b_E'`, the right end of the affine piece of
/// `ĝ`: just above `u_c` the variational maximiser leaves 0 and lands on the
/// tangency point of the line with slope `λ` at the end of that piece. For
/// transient laws the maximiser jumps from 0 to `1/m_E`, where `g` switches
/// from `r δ` to `ĝ`.
pub fn classify_transition<S: Real>(law: &ExcursionLaw<S>, beta: S, log_mv: S) -> AnnealedPhase<S> {
    let case = transition_case(law);
    let u_c = annealed_critical_point(law, beta, log_mv);
    let jump = match case {
        TransitionCase::Thm2III => law.b_e_prime().recip(),
        TransitionCase::Thm1TransientExp => law.m_e().recip(),
        _ => S::zero(),
    };
    AnnealedPhase { case, u_c, jump }
}
