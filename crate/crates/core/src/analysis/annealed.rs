use crate::error::{Error, Result};
use crate::excursion::ExcursionLaw;
use crate::numerics::safeguarded_root;
use crate::Real;

/// Relative distance to `u_c` inside which the annealed contact fraction is
/// reported as undefined.
const CRITICAL_TOL: f64 = 1e-9;

/// `β f^a` for `λ = β u + log M_V(β)`: the root `x` of
/// `sum_n P(E = n) e^{-x n} = e^{-λ}` with `x > -b_E`.
///
/// Without an admissible root the value is `0` for transient laws (escape
/// branch) and `-b_E` for recurrent laws (no contacts, `ĝ(0) = b_E`).
pub fn annealed_root<S: Real>(law: &ExcursionLaw<S>, lambda: S) -> S {
    let target = -lambda;
    // F(x) = log U_0(-x) - target, decreasing in x.
    let f = |x: S| law.log_u(0, -x).map(|l| l - target).unwrap_or(S::infinity());
    let b_e = law.b_e();
    let lo = if !law.is_recurrent() {
        if f(S::zero()) <= S::zero() {
            return S::zero();
        }
        S::zero()
    } else if b_e.is_finite() {
        let at_edge = law.analytics().log_sum_gamma.map(|l| l - target);
        match at_edge {
            Some(v) if v <= S::zero() => return -b_e,
            _ => -b_e,
        }
    } else {
        let mut lo = -S::one();
        while f(lo) <= S::zero() {
            lo = lo * S::lit(2.0);
        }
        lo
    };
    let mut hi = lo.max(S::zero()) + S::one();
    while f(hi) > S::zero() {
        hi = hi + (hi - lo);
    }
    safeguarded_root(lo, hi, |x| {
        let neg = -f(x);
        let mean = law.log_moments(-x).map(|m| m.mean()).unwrap_or(S::infinity());
        (neg, mean)
    })
}

/// Annealed free energy `f^a(β, u)`.
pub fn annealed_free_energy<S: Real>(law: &ExcursionLaw<S>, beta: S, u: S, log_mv: S) -> S {
    annealed_root(law, beta * u + log_mv) / beta
}

/// Annealed critical point.
///
/// `(r - log M_V)/β` for transient and heavy-tailed recurrent laws,
/// `-(log M_E(b_E) + log M_V)/β` for recurrent laws with exponential tails,
/// and `-∞` when `M_E(b_E) = ∞` (no transition).
pub fn annealed_critical_point<S: Real>(law: &ExcursionLaw<S>, beta: S, log_mv: S) -> S {
    if !law.is_recurrent() {
        return (law.r() - log_mv) / beta;
    }
    if !law.b_e().is_finite() {
        return S::neg_infinity();
    }
    match law.analytics().log_sum_gamma {
        Some(l) => -(l + log_mv) / beta,
        None => S::neg_infinity(),
    }
}

/// `C^a = ∂f^a/∂u = U_0(-x)/U_1(-x)` at the root `x`; zero on the subcritical
/// branch.
pub fn annealed_contact_fraction<S: Real>(law: &ExcursionLaw<S>, beta: S, u: S, log_mv: S) -> Result<S> {
    let u_c = annealed_critical_point(law, beta, log_mv);
    if u_c.is_finite() && (u - u_c).abs() <= S::lit(CRITICAL_TOL) * (S::one() + u_c.abs()) {
        return Err(Error::AtCriticalPoint {
            u: u.to_f64_lossy(),
            u_c: u_c.to_f64_lossy(),
        });
    }
    if u < u_c {
        return Ok(S::zero());
    }
    let x = annealed_root(law, beta * u + log_mv);
    let m = law.log_moments(-x)?;
    Ok((m.u0 - m.u1).exp())
}
