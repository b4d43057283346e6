use std::cell::RefCell;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::excursion::ExcursionLaw;
use crate::numerics::bisect_predicate;
use crate::renewal::{replica_seed, DisorderField, PinningModel};
use crate::Real;

/// Replica mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate<S> {
    pub mean: S,
    pub stderr: S,
}

impl<S: Real> Estimate<S> {
    pub fn from_samples(xs: &[S]) -> Self {
        let n = S::from_usize_lossy(xs.len());
        let mean = xs.iter().copied().sum::<S>() / n;
        let stderr = if xs.len() > 1 {
            let ss: S = xs.iter().map(|&x| (x - mean) * (x - mean)).sum();
            (ss / (n - S::one()) / n).sqrt()
        } else {
            S::zero()
        };
        Estimate { mean, stderr }
    }
}

/// Per-replica simulation output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReplicaRow<S> {
    pub seed: u64,
    pub log_z_free: S,
    pub log_z_constrained: S,
    pub contact_fraction: S,
}

/// Replica averages of `log Z_N / (β N)` and `<L_N>/N`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuenchedSample<S> {
    pub n: usize,
    pub free_energy: Estimate<S>,
    pub contact_fraction: Estimate<S>,
    pub rows: Vec<ReplicaRow<S>>,
}

/// Disorder fields of `replicas` replicas derived from `master_seed`.
pub fn replica_fields<S: Real>(
    model: &PinningModel<S>,
    n: usize,
    replicas: usize,
    master_seed: u64,
) -> Vec<DisorderField<S>> {
    (0..replicas)
        .into_par_iter()
        .map(|i| model.field(replica_seed(master_seed, i as u64), n))
        .collect()
}

/// Solves every field in parallel; results are in field order.
pub fn sample_fields<S: Real>(
    model: &PinningModel<S>,
    fields: &[DisorderField<S>],
    n: usize,
) -> Result<QuenchedSample<S>> {
    let rows: Vec<ReplicaRow<S>> = fields
        .par_iter()
        .map(|f| {
            model.solve(f, n).map(|r| ReplicaRow {
                seed: f.seed,
                log_z_free: r.log_z_free,
                log_z_constrained: r.log_z_constrained(),
                contact_fraction: r.contact_fraction(),
            })
        })
        .collect::<Result<_>>()?;
    let scale = model.beta * S::from_usize_lossy(n);
    let fs: Vec<S> = rows.iter().map(|r| r.log_z_free / scale).collect();
    let cs: Vec<S> = rows.iter().map(|r| r.contact_fraction).collect();
    Ok(QuenchedSample {
        n,
        free_energy: Estimate::from_samples(&fs),
        contact_fraction: Estimate::from_samples(&cs),
        rows,
    })
}

/// Replica simulation of `model` at size `n`.
pub fn quenched_sample<S: Real>(
    model: &PinningModel<S>,
    n: usize,
    replicas: usize,
    master_seed: u64,
) -> Result<QuenchedSample<S>> {
    if n == 0 || replicas == 0 {
        return Err(Error::InvalidArgument("need N >= 1 and at least one replica".into()));
    }
    let fields = replica_fields(model, n, replicas, master_seed);
    sample_fields(model, &fields, n)
}

/// `f^q_N` estimate and standard error.
pub fn quenched_free_energy<S: Real>(
    model: &PinningModel<S>,
    n: usize,
    replicas: usize,
    master_seed: u64,
) -> Result<Estimate<S>> {
    Ok(quenched_sample(model, n, replicas, master_seed)?.free_energy)
}

/// `<L_N>/N` estimate and standard error.
pub fn quenched_contact_fraction<S: Real>(
    model: &PinningModel<S>,
    n: usize,
    replicas: usize,
    master_seed: u64,
) -> Result<Estimate<S>> {
    Ok(quenched_sample(model, n, replicas, master_seed)?.contact_fraction)
}

/// Search settings for [`quenched_critical_point`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalSearch<S> {
    pub u_lo: S,
    pub u_hi: S,
    /// Bisection bracket width.
    pub tol: S,
}

/// Threshold crossing at one system size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LadderPoint<S> {
    pub n: usize,
    pub u_c: S,
    pub width: S,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalEstimate<S> {
    /// Extrapolation of the crossings to `1/N = 0`.
    pub estimate: S,
    /// Bisection width plus the RMS residual of the `1/N` fit.
    pub uncertainty: S,
    pub ladder: Vec<LadderPoint<S>>,
}

/// Positivity criterion `f̂ > max(5 stderr, 10/(β N))`.
pub fn positivity_criterion<S: Real>(est: &Estimate<S>, beta: S, n: usize) -> bool {
    let eps = (S::lit(5.0) * est.stderr).max(S::lit(10.0) / (beta * S::from_usize_lossy(n)));
    est.mean > eps
}

/// Quenched critical point from `u > u_c^q ⇔ f^q(u) > 0`.
///
/// For each `N` in the ladder the same replica fields are used at every `u`
/// (so each replica's free energy is monotone in `u`), and the crossing of the
/// positivity criterion is bisected. The crossings are then fitted as
/// `u_N = u_∞ + c/N` by least squares.
pub fn quenched_critical_point<S: Real>(
    law: &ExcursionLaw<S>,
    beta: S,
    sigma: S,
    ladder: &[usize],
    replicas: usize,
    master_seed: u64,
    search: CriticalSearch<S>,
) -> Result<CriticalEstimate<S>> {
    if ladder.is_empty() || ladder.windows(2).any(|w| w[0] >= w[1]) || ladder[0] == 0 {
        return Err(Error::InvalidArgument(
            "N ladder must be nonempty and strictly increasing".into(),
        ));
    }
    if replicas == 0 {
        return Err(Error::InvalidArgument("need at least one replica".into()));
    }
    let base = PinningModel::gaussian(law.clone(), beta, search.u_lo, sigma)?;
    let mut points = Vec::with_capacity(ladder.len());
    for &n in ladder {
        let fields = replica_fields(&base, n, replicas, master_seed);
        let failure = RefCell::new(None);
        let pred = |u: S| -> bool {
            match sample_fields(&base.with_u(u), &fields, n) {
                Ok(s) => positivity_criterion(&s.free_energy, beta, n),
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    true
                }
            }
        };
        if pred(search.u_lo) || !pred(search.u_hi) {
            if let Some(e) = failure.take() {
                return Err(e);
            }
            return Err(Error::NoBracket(format!(
                "positivity criterion does not change sign on [{}, {}] at N = {n}",
                search.u_lo, search.u_hi
            )));
        }
        let br = bisect_predicate(search.u_lo, search.u_hi, search.tol, pred);
        if let Some(e) = failure.take() {
            return Err(e);
        }
        points.push(LadderPoint {
            n,
            u_c: br.mid(),
            width: br.width(),
        });
    }
    let (estimate, residual) = fit_inverse_n(&points);
    let width = points.iter().map(|p| p.width).fold(S::zero(), S::max);
    Ok(CriticalEstimate {
        estimate,
        uncertainty: width + residual,
        ladder: points,
    })
}

/// Least-squares fit `u = a + c x` with `x = 1/N`; returns `(a, rms residual)`.
pub(crate) fn fit_inverse_n<S: Real>(points: &[LadderPoint<S>]) -> (S, S) {
    let m = points.len();
    if m == 1 {
        return (points[0].u_c, S::zero());
    }
    let mf = S::from_usize_lossy(m);
    let xs: Vec<S> = points.iter().map(|p| S::from_usize_lossy(p.n).recip()).collect();
    let x_mean = xs.iter().copied().sum::<S>() / mf;
    let y_mean = points.iter().map(|p| p.u_c).sum::<S>() / mf;
    let sxx: S = xs.iter().map(|&x| (x - x_mean) * (x - x_mean)).sum();
    let sxy: S = xs
        .iter()
        .zip(points)
        .map(|(&x, p)| (x - x_mean) * (p.u_c - y_mean))
        .sum();
    let c = sxy / sxx;
    let a = y_mean - c * x_mean;
    let rss: S = xs
        .iter()
        .zip(points)
        .map(|(&x, p)| {
            let r = p.u_c - a - c * x;
            r * r
        })
        .sum();
    let dof = if m > 2 { mf - S::lit(2.0) } else { S::one() };
    (a, (rss / dof).sqrt())
}
