use super::{DisorderField, PartitionResult, PinningModel};
use crate::error::{Error, Result};
use crate::excursion::ExcursionLaw;
use crate::numerics::LogSum;
use crate::Real;

/// Tail mass of the excursion law ignored by the windowed recursion.
const WINDOW_TAIL: f64 = 1e-14;

/// Largest `N` for the full quadratic recursion.
pub const FULL_RECURSION_CAP: usize = 1 << 16;

/// How far back the renewal sum reaches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Window {
    /// Windowed for transient laws with exponential tails, full otherwise.
    Auto,
    /// Every excursion length up to `k`.
    Full,
    /// Excursions up to the given length only.
    Fixed(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RecursionOptions {
    pub window: Window,
    /// Maximum `N` accepted for the full recursion.
    pub full_cap: usize,
}

impl Default for RecursionOptions {
    fn default() -> Self {
        RecursionOptions {
            window: Window::Auto,
            full_cap: FULL_RECURSION_CAP,
        }
    }
}

/// Window length for `law`, `None` meaning the full recursion.
///
/// Only transient laws with exponential tails are windowed: there every
/// dropped trajectory, one with an excursion longer than the window, is
/// dominated by the trajectory that escapes at the start of that excursion,
/// so the relative error stays at the tail mass. Recurrent laws have no such
/// escape branch and keep the full sum.
fn window_for<S: Real>(law: &ExcursionLaw<S>, n: usize, opts: &RecursionOptions) -> Result<Option<usize>> {
    let w = match opts.window {
        Window::Full => None,
        Window::Fixed(w) => Some(w),
        Window::Auto => {
            if !law.is_recurrent() && law.has_exponential_tails() {
                law.truncation_window(S::lit(WINDOW_TAIL)).map(|w| w as usize)
            } else if let Some(big_a) = law.analytics().big_a {
                Some(big_a as usize)
            } else {
                None
            }
        }
    };
    match w {
        Some(w) if w < n => Ok(Some(w)),
        _ if n > opts.full_cap => Err(Error::CapExceeded { n, cap: opts.full_cap }),
        _ => Ok(None),
    }
}

/// Support of the law up to `n_max` as `(n, log P(E = n))`.
fn support<S: Real>(law: &ExcursionLaw<S>, n_max: usize) -> Vec<(usize, S)> {
    law.log_pmf_table(n_max)
        .into_iter()
        .enumerate()
        .filter(|&(n, l)| n > 0 && l > S::neg_infinity())
        .collect()
}

/// `log Z^c_k`, `k = 0..=n`, and the constrained mean contact numbers.
fn constrained_core<S: Real>(
    model: &PinningModel<S>,
    field: &DisorderField<S>,
    n: usize,
    window: Option<usize>,
) -> (Vec<S>, Vec<S>) {
    assert!(field.len() >= n, "disorder field shorter than the system");
    let reach = window.unwrap_or(n).min(n);
    let sup = support(&model.law, reach);
    let mut log_z = vec![S::neg_infinity(); n + 1];
    let mut contacts = vec![S::zero(); n + 1];
    log_z[0] = S::zero();
    let mut terms: Vec<(S, S)> = Vec::with_capacity(sup.len());
    for k in 1..=n {
        terms.clear();
        let mut max = S::neg_infinity();
        for &(len, lp) in &sup {
            if len > k {
                break;
            }
            let prev = log_z[k - len];
            if prev == S::neg_infinity() {
                continue;
            }
            let t = lp + prev;
            if t > max {
                max = t;
            }
            terms.push((t, contacts[k - len]));
        }
        if max == S::neg_infinity() {
            continue;
        }
        let mut sum = S::zero();
        let mut weighted = S::zero();
        for &(t, c) in &terms {
            let w = (t - max).exp();
            sum = sum + w;
            weighted = weighted + w * c;
        }
        log_z[k] = model.beta * (model.u + field.get(k)) + max + sum.ln();
        contacts[k] = S::one() + weighted / sum;
    }
    (log_z, contacts)
}

/// `log Z^c_k` for `k = 0..=n`.
pub fn constrained_log_z<S: Real>(model: &PinningModel<S>, field: &DisorderField<S>, n: usize) -> Result<Vec<S>> {
    let window = window_for(&model.law, n, &RecursionOptions::default())?;
    Ok(constrained_core(model, field, n, window).0)
}

/// `log Z_N = log sum_k Z^c_k P(E > N - k)` from the constrained values.
pub fn free_log_z<S: Real>(law: &ExcursionLaw<S>, log_zc: &[S]) -> S {
    let n = log_zc.len() - 1;
    let ls = law.log_survival_table(n);
    let mut acc = LogSum::new();
    for (k, &z) in log_zc.iter().enumerate() {
        acc.add(z + ls[n - k]);
    }
    acc.value()
}

/// Full solve with default options.
pub fn solve<S: Real>(model: &PinningModel<S>, field: &DisorderField<S>, n: usize) -> Result<PartitionResult<S>> {
    solve_with(model, field, n, &RecursionOptions::default())
}

/// Constrained values, free value and exact mean contact numbers.
pub fn solve_with<S: Real>(
    model: &PinningModel<S>,
    field: &DisorderField<S>,
    n: usize,
    opts: &RecursionOptions,
) -> Result<PartitionResult<S>> {
    if field.len() < n {
        return Err(Error::InvalidArgument(format!(
            "disorder field has {} sites, need {n}",
            field.len()
        )));
    }
    let window = window_for(&model.law, n, opts)?;
    let (log_zc, contacts) = constrained_core(model, field, n, window);
    let ls = model.law.log_survival_table(n);
    let mut max = S::neg_infinity();
    for k in 0..=n {
        max = max.max(log_zc[k] + ls[n - k]);
    }
    let mut sum = S::zero();
    let mut weighted = S::zero();
    for k in 0..=n {
        let w = (log_zc[k] + ls[n - k] - max).exp();
        sum = sum + w;
        weighted = weighted + w * contacts[k];
    }
    Ok(PartitionResult {
        n,
        log_z_free: max + sum.ln(),
        mean_contacts: weighted / sum,
        mean_contacts_constrained: contacts[n],
        log_zc,
        seed: field.seed,
        window,
    })
}
