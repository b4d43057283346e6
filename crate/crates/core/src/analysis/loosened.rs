use rayon::prelude::*;
use serde::Serialize;

use super::annealed::annealed_root;
use super::quenched::replica_fields;
use crate::error::{Error, Result};
use crate::excursion::ExcursionLaw;
use crate::renewal::{solve_with, PinningModel, RecursionOptions, Window};
use crate::Real;

/// Both sides of the translation identity between a recurrent law and its
/// loosened law, `βf(u) = βf̃(u + β⁻¹ log M_E(b_E)) - b_E` (deterministic).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TranslationResidual<S> {
    pub u: S,
    /// `βf(u)` without clamping.
    pub lhs: S,
    /// `βf̃(ũ) - b_E`.
    pub rhs: S,
    pub residual: S,
    /// Residual when the original free energy is clamped at 0.
    pub clamped_residual: S,
}

/// `β⁻¹ log M_E(b_E)` for recurrent laws with summable prefactors.
pub fn loosened_shift<S: Real>(law: &ExcursionLaw<S>, beta: S) -> Result<S> {
    if !law.is_recurrent() {
        return Err(Error::NotRecurrent(format!("mass_inf = {}", law.mass_inf())));
    }
    law.analytics()
        .log_sum_gamma
        .map(|l| l / beta)
        .ok_or_else(|| Error::DivergentSum("M_E(b_E) is infinite".into()))
}

/// Rate used for partial loosening of a transient law: `min(b_E, 1)/2`.
pub fn partial_loosening_rate<S: Real>(law: &ExcursionLaw<S>) -> S {
    law.b_e().min(S::one()) * S::lit(0.5)
}

/// `β⁻¹ log M_E^f(b)`, the pinning shift of the partially loosened system.
pub fn partial_loosening_shift<S: Real>(law: &ExcursionLaw<S>, beta: S, b: S) -> Result<S> {
    Ok(law.log_mgf_finite(b)? / beta)
}

/// Deterministic translation identity at `u` from two independent root solves.
pub fn translation_residual<S: Real>(law: &ExcursionLaw<S>, beta: S, u: S) -> Result<TranslationResidual<S>> {
    let loose = law.loosen()?;
    let shift = loosened_shift(law, beta)?;
    let lhs = annealed_root(law, beta * u);
    let rhs = annealed_root(&loose, beta * (u + shift)) - law.b_e();
    Ok(TranslationResidual {
        u,
        lhs,
        rhs,
        residual: lhs - rhs,
        clamped_residual: lhs.max(S::zero()) - rhs,
    })
}

/// Finite-volume weight-ratio identity on one replica.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoupledRow<S> {
    pub seed: u64,
    /// `max_k |log Ẑ^c_k(û) - log Z^c_k(u) - b k|`.
    pub constrained_residual: S,
    /// `|log Ẑ_N(û) - log sum_k Z^c_k(u) e^{b k} P̂(E > N - k)|`.
    pub free_residual: S,
    pub contact_fraction: S,
    pub contact_fraction_loosened: S,
}

impl<S: Real> CoupledRow<S> {
    pub fn residual(&self) -> S {
        self.constrained_residual.max(self.free_residual)
    }
}

/// Solves the original model at `u` and the model with excursion law `other`
/// at `u + shift` on identical disorder, and measures the exact identity
/// implied by the trajectory weight ratio `e^{b T_N} P̂(E > N - T_N)/P(E > N - T_N)`.
///
/// Both recursions run without truncation so the identity is exact up to
/// rounding.
pub fn coupled_check<S: Real>(
    model: &PinningModel<S>,
    other: &ExcursionLaw<S>,
    b: S,
    shift: S,
    n: usize,
    replicas: usize,
    master_seed: u64,
) -> Result<Vec<CoupledRow<S>>> {
    let fields = replica_fields(model, n, replicas, master_seed);
    let twin = model.with_law(other.clone()).with_u(model.u + shift);
    let opts = RecursionOptions {
        window: Window::Full,
        ..Default::default()
    };
    let other_ls = other.log_survival_table(n);
    fields
        .par_iter()
        .map(|f| {
            let a = solve_with(model, f, n, &opts)?;
            let c = solve_with(&twin, f, n, &opts)?;
            let mut cres = S::zero();
            for k in 0..=n {
                let want = a.log_zc[k] + b * S::from_usize_lossy(k);
                if a.log_zc[k].is_finite() {
                    cres = cres.max((c.log_zc[k] - want).abs());
                } else if c.log_zc[k].is_finite() {
                    cres = S::infinity();
                }
            }
            let rebuilt = crate::numerics::log_sum_exp(
                (0..=n).map(|k| a.log_zc[k] + b * S::from_usize_lossy(k) + other_ls[n - k]),
            );
            Ok(CoupledRow {
                seed: f.seed,
                constrained_residual: cres,
                free_residual: (c.log_z_free - rebuilt).abs(),
                contact_fraction: a.contact_fraction(),
                contact_fraction_loosened: c.contact_fraction(),
            })
        })
        .collect()
}
