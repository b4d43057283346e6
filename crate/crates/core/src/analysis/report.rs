use serde::Serialize;

use super::annealed::{annealed_contact_fraction, annealed_critical_point, annealed_free_energy};
use super::classify::{classify_transition, TransitionCase};
use super::loosened::{
    coupled_check, loosened_shift, partial_loosening_rate, partial_loosening_shift, translation_residual,
};
use super::quenched::{quenched_critical_point, quenched_sample, CriticalSearch};
use crate::error::{Error, Result};
use crate::excursion::{ExcursionLaw, Family};
use crate::ratefun::RateProfile;
use crate::renewal::PinningModel;

/// Outcome of one verification inside a report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(serialize_with = "ext::f64")]
    pub residual: f64,
}

impl Check {
    fn new(name: &str, passed: bool, residual: f64) -> Self {
        Check {
            name: name.to_string(),
            passed,
            residual,
        }
    }
}

/// Phase-diagram summary of one law at one `(β, σ)`.
///
/// Non-finite numbers serialise as the strings `"inf"`, `"-inf"`, `"nan"`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseReport {
    pub law: Family<f64>,
    pub beta: f64,
    pub sigma: f64,
    #[serde(serialize_with = "ext::f64")]
    pub u_c_annealed: f64,
    #[serde(serialize_with = "ext::opt")]
    pub u_c_quenched_estimate: Option<f64>,
    /// Uncertainty of the quenched estimate (bisection width plus fit residual).
    #[serde(serialize_with = "ext::opt")]
    pub u_c_quenched_stderr: Option<f64>,
    pub transition_case: TransitionCase,
    #[serde(serialize_with = "ext::f64")]
    pub annealed_jump: f64,
    #[serde(serialize_with = "ext::opt")]
    pub quenched_jump_lower_bound: Option<f64>,
    #[serde(serialize_with = "ext::f64")]
    pub gap_lower_bound: f64,
    #[serde(serialize_with = "ext::opt")]
    pub loosened_shift: Option<f64>,
    /// Quenched contact fraction of the partially loosened system just above
    /// its translated critical point.
    #[serde(serialize_with = "ext::opt")]
    pub y: Option<f64>,
    #[serde(serialize_with = "ext::opt")]
    pub delta0: Option<f64>,
    pub checks: Vec<Check>,
}

/// Simulation sizes for the quenched parts of a report.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportBudget {
    pub ladder: Vec<usize>,
    pub replicas: usize,
    pub master_seed: u64,
    /// Distance above the quenched critical estimate where jumps are read.
    pub margin: f64,
    pub scan_points: usize,
    /// Size and replicas of the coupled weight-ratio check.
    pub coupled_n: usize,
    pub coupled_replicas: usize,
    /// Bisection width for quenched critical points.
    pub tol: f64,
}

impl Default for ReportBudget {
    fn default() -> Self {
        ReportBudget {
            ladder: vec![1 << 11, 1 << 12, 1 << 13],
            replicas: 16,
            master_seed: 1,
            margin: 0.05,
            scan_points: 8,
            coupled_n: 1 << 12,
            coupled_replicas: 8,
            tol: 1e-4,
        }
    }
}

impl ReportBudget {
    pub fn n_max(&self) -> usize {
        self.ladder.last().copied().unwrap_or(1 << 12)
    }
}

fn gaussian_log_mv(beta: f64, sigma: f64) -> f64 {
    0.5 * beta * beta * sigma * sigma
}

fn base_report(law: &ExcursionLaw<f64>, beta: f64, sigma: f64) -> PhaseReport {
    let log_mv = gaussian_log_mv(beta, sigma);
    let phase = classify_transition(law, beta, log_mv);
    PhaseReport {
        law: law.family().clone(),
        beta,
        sigma,
        u_c_annealed: phase.u_c,
        u_c_quenched_estimate: None,
        u_c_quenched_stderr: None,
        transition_case: phase.case,
        annealed_jump: phase.jump,
        quenched_jump_lower_bound: None,
        gap_lower_bound: 0.0,
        loosened_shift: None,
        y: None,
        delta0: None,
        checks: Vec::new(),
    }
}

/// Annealed part of the report: case, `u_c^a` and the annealed jump.
pub fn classify_report(law: &ExcursionLaw<f64>, beta: f64, sigma: f64) -> PhaseReport {
    base_report(law, beta, sigma)
}

/// Full report, dispatching on the transition case.
pub fn phase_report(law: &ExcursionLaw<f64>, beta: f64, sigma: f64, budget: &ReportBudget) -> Result<PhaseReport> {
    match classify_transition(law, beta, gaussian_log_mv(beta, sigma)).case {
        TransitionCase::Thm1TransientExp => theorem1_report(law, beta, sigma, budget),
        TransitionCase::Thm2II | TransitionCase::Thm2III => theorem2_report(law, beta, sigma, budget),
        _ => Ok(base_report(law, beta, sigma)),
    }
}

/// Recurrent laws with summable prefactors: deterministic translation identity
/// on a `u` grid around `u_c` and the coupled quenched weight-ratio identity.
pub fn theorem2_report(law: &ExcursionLaw<f64>, beta: f64, sigma: f64, budget: &ReportBudget) -> Result<PhaseReport> {
    let mut rep = base_report(law, beta, sigma);
    let shift = loosened_shift(law, beta)?;
    rep.loosened_shift = Some(shift);
    let u_c = annealed_critical_point(law, beta, 0.0);
    let mut worst = 0.0f64;
    let mut worst_clamped = 0.0f64;
    for i in 0..=20 {
        let u = u_c - 1.0 + 0.1 * i as f64;
        let t = translation_residual(law, beta, u)?;
        worst = worst.max(t.residual.abs());
        worst_clamped = worst_clamped.max(t.clamped_residual.abs());
    }
    rep.checks.push(Check::new("translation_identity", worst < 1e-8, worst));
    rep.checks.push(Check::new(
        "translation_identity_clamped",
        worst_clamped < 1e-8,
        worst_clamped,
    ));
    let loose = law.loosen()?;
    let n = budget.coupled_n.min(2048);
    let model = PinningModel::gaussian(law.clone(), beta, u_c + budget.margin, sigma)?;
    let rows = coupled_check(
        &model,
        &loose,
        law.b_e(),
        shift,
        n,
        budget.coupled_replicas,
        budget.master_seed,
    )?;
    let res = rows.iter().map(|r| r.residual()).fold(0.0, f64::max);
    rep.checks.push(Check::new("weight_ratio_identity", res < 1e-6, res));
    Ok(rep)
}

/// Transient laws with exponential tails: quenched critical point, gap and
/// jump bounds, and the partial-loosening correspondences.
pub fn theorem1_report(law: &ExcursionLaw<f64>, beta: f64, sigma: f64, budget: &ReportBudget) -> Result<PhaseReport> {
    let mut rep = base_report(law, beta, sigma);
    if rep.transition_case != TransitionCase::Thm1TransientExp {
        return Err(Error::Unsupported(format!(
            "quenched gap analysis needs a transient law with exponential tails, got {}",
            rep.transition_case.as_str()
        )));
    }
    let log_mv = gaussian_log_mv(beta, sigma);
    let profile = RateProfile::with_disorder(law.clone(), beta, log_mv);
    let u_ca = rep.u_c_annealed;
    let delta0 = profile
        .delta0()
        .ok_or_else(|| Error::Unsupported("δ₀ undefined for this law".into()))?;
    rep.delta0 = Some(delta0);
    let jump_lb = match law.analytics().big_a {
        Some(big_a) => 1.0 / big_a as f64,
        None => delta0,
    };
    rep.quenched_jump_lower_bound = Some(jump_lb);
    rep.gap_lower_bound = log_mv * delta0 * delta0 / beta;

    // u_c^q lies between u_c^a and the deterministic critical point r/β.
    let search = CriticalSearch {
        u_lo: u_ca - 0.1,
        u_hi: law.r() / beta + 0.25,
        tol: budget.tol,
    };
    let crit = quenched_critical_point(
        law,
        beta,
        sigma,
        &budget.ladder,
        budget.replicas,
        budget.master_seed,
        search,
    )?;
    let (est, unc) = (crit.estimate, crit.uncertainty);
    rep.u_c_quenched_estimate = Some(est);
    rep.u_c_quenched_stderr = Some(unc);
    rep.checks.push(Check::new(
        "quenched_not_below_annealed",
        est >= u_ca - 2.0 * unc,
        est - u_ca,
    ));
    let gap_margin = est - (u_ca + rep.gap_lower_bound);
    rep.checks.push(Check::new("gap", gap_margin >= -2.0 * unc, gap_margin));

    let n = budget.n_max();
    let model = PinningModel::gaussian(law.clone(), beta, est + budget.margin, sigma)?;
    let above = quenched_sample(&model, n, budget.replicas, budget.master_seed)?;
    let c_above = above.contact_fraction.mean;
    rep.checks
        .push(Check::new("jump", c_above >= jump_lb - 2e-2, c_above - jump_lb));

    // Quenched free energy below the variational bound on a u grid.
    let mut worst = f64::NEG_INFINITY;
    let allowance = 10.0 / (beta * n as f64);
    for i in 0..budget.scan_points.max(1) {
        let u = u_ca + i as f64 / budget.scan_points.max(1) as f64;
        let s = quenched_sample(&model.with_u(u), n, budget.replicas, budget.master_seed)?;
        let bound = profile.quenched_upper_bound(beta, u, log_mv);
        worst = worst.max(s.free_energy.mean - bound - 3.0 * s.free_energy.stderr - allowance);
    }
    rep.checks
        .push(Check::new("quenched_below_variational_bound", worst <= 0.0, worst));

    // Partial loosening: exact coupled identity and translated contact curves.
    let b = partial_loosening_rate(law);
    let shift = partial_loosening_shift(law, beta, b)?;
    rep.loosened_shift = Some(shift);
    let hat = law.partially_loosen(b)?;
    let rows = coupled_check(
        &model,
        &hat,
        b,
        shift,
        budget.coupled_n,
        budget.coupled_replicas,
        budget.master_seed,
    )?;
    let res = rows.iter().map(|r| r.residual()).fold(0.0, f64::max);
    rep.checks
        .push(Check::new("partial_loosening_identity", res < 1e-6, res));
    let hat_model = model.with_law(hat).with_u(est + budget.margin + shift);
    let hat_above = quenched_sample(&hat_model, n, budget.replicas, budget.master_seed)?;
    let y = hat_above.contact_fraction.mean;
    rep.y = Some(y);
    let diff = (y - c_above).abs();
    rep.checks
        .push(Check::new("contact_curve_translation", diff < 2e-2, diff));
    rep.checks.push(Check::new("y_positive", y > 0.0, y));
    Ok(rep)
}

/// One row of a `(β, u)` scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[allow(non_snake_case)]
pub struct ScanRow {
    pub beta: f64,
    pub u: f64,
    pub f_annealed: f64,
    pub f_quenched: f64,
    pub stderr: f64,
    pub C_annealed: f64,
    pub C_quenched: f64,
    pub bound_qfreeineq: f64,
}

/// Annealed and quenched free energies, contact fractions and the variational
/// quenched bound at each `u`.
pub fn scan(
    law: &ExcursionLaw<f64>,
    beta: f64,
    sigma: f64,
    us: &[f64],
    n: usize,
    replicas: usize,
    master_seed: u64,
) -> Result<Vec<ScanRow>> {
    let log_mv = gaussian_log_mv(beta, sigma);
    let profile = RateProfile::with_disorder(law.clone(), beta, log_mv);
    us.iter()
        .map(|&u| {
            let model = PinningModel::gaussian(law.clone(), beta, u, sigma)?;
            let s = quenched_sample(&model, n, replicas, master_seed)?;
            let c_a = match annealed_contact_fraction(law, beta, u, log_mv) {
                Ok(c) => c,
                Err(Error::AtCriticalPoint { .. }) => profile.variational_annealed(beta, u, log_mv).1,
                Err(e) => return Err(e),
            };
            Ok(ScanRow {
                beta,
                u,
                f_annealed: annealed_free_energy(law, beta, u, log_mv),
                f_quenched: s.free_energy.mean,
                stderr: s.free_energy.stderr,
                C_annealed: c_a,
                C_quenched: s.contact_fraction.mean,
                bound_qfreeineq: profile.quenched_upper_bound(beta, u, log_mv),
            })
        })
        .collect()
}

/// Serialisation of extended reals.
pub mod ext {
    use serde::Serializer;

    pub fn f64<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    pub fn opt<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) => f64(x, s),
            None => s.serialize_none(),
        }
    }
}
