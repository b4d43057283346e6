//! Rate functions of the mean excursion length and the contact-density
//! functionals built from them.
//!
//! With `t` a mean excursion length and `δ = 1/t` a contact density:
//!
//! * `I^f(t) = sup_{x <= b_E} (t x - log M_E^f(x))`, `I = I^f + r`,
//!   `J(t) = sup_x (t x - log M_E(x))`;
//! * `ĝ^f(δ) = δ I^f(1/δ)` with `ĝ^f(0) = b_E`, `ĝ = ĝ^f + r δ`;
//! * `g(δ) = δ J(1/δ)`: for transient laws `g(0) = 0` and `g(δ) = r δ` up to
//!   `1/m_E`; for recurrent laws `g = ĝ`, so `g(0) = b_E`;
//! * `h(δ) = ĝ(δ) + log M_V(β) δ²` (`log M_V(β) = β²σ²/2` for Gaussian
//!   disorder).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::excursion::ExcursionLaw;
use crate::numerics::{bisect_predicate, golden_max};
use crate::Real;

/// Bracket width for every scalar optimisation in this module.
const OPT_TOL: f64 = 1e-11;

/// One row of a tabulated profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateRow<S> {
    pub delta: S,
    pub g: S,
    pub ghat: S,
    pub ghat_f: S,
    pub h: S,
}

/// Scalar characteristics of a profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateSummary<S> {
    pub b_e: S,
    pub r: S,
    pub m_e: S,
    pub b_e_prime: S,
    pub x_star: S,
    pub delta0: Option<S>,
}

/// Queryable rate functions of one excursion law, together with the disorder
/// strength `log M_V(β)` that enters `h` and `δ₀`.
#[derive(Debug, Clone)]
pub struct RateProfile<S: Real> {
    law: ExcursionLaw<S>,
    beta: S,
    log_mv: S,
    x_star: S,
    delta0: Option<S>,
}

impl<S: Real> RateProfile<S> {
    /// Profile without disorder (`β = 1`, `log M_V = 0`).
    pub fn new(law: ExcursionLaw<S>) -> Self {
        Self::with_disorder(law, S::one(), S::zero())
    }

    /// Profile for inverse temperature `beta` and disorder log-mgf `log_mv`.
    pub fn with_disorder(law: ExcursionLaw<S>, beta: S, log_mv: S) -> Self {
        let mut p = RateProfile {
            law,
            beta,
            log_mv,
            x_star: S::zero(),
            delta0: None,
        };
        p.x_star = p.argmin_ghat();
        p.delta0 = p.compute_delta0().ok();
        p
    }

    /// Profile for Gaussian disorder of standard deviation `sigma`.
    pub fn gaussian(law: ExcursionLaw<S>, beta: S, sigma: S) -> Self {
        let log_mv = S::lit(0.5) * beta * beta * sigma * sigma;
        Self::with_disorder(law, beta, log_mv)
    }

    pub fn law(&self) -> &ExcursionLaw<S> {
        &self.law
    }

    pub fn beta(&self) -> S {
        self.beta
    }

    pub fn log_mv(&self) -> S {
        self.log_mv
    }

    /// Argmin of `ĝ` over `[0, 1/a]`.
    pub fn x_star(&self) -> S {
        self.x_star
    }

    /// Jump bound `δ₀`; `None` unless the law is transient with `b_E > 0`.
    pub fn delta0(&self) -> Option<S> {
        self.delta0
    }

    pub fn summary(&self) -> RateSummary<S> {
        let a = self.law.analytics();
        RateSummary {
            b_e: a.b_e,
            r: a.r,
            m_e: a.m_e,
            b_e_prime: a.b_e_prime,
            x_star: self.x_star,
            delta0: self.delta0,
        }
    }

    fn a(&self) -> S {
        S::from_u64_lossy(self.law.analytics().a)
    }

    fn big_a(&self) -> S {
        self.law
            .analytics()
            .big_a
            .map(S::from_u64_lossy)
            .unwrap_or(S::infinity())
    }

    /// Interval of densities on which `ĝ` is finite (up to the point 0).
    fn ghat_domain(&self) -> (S, S) {
        let lo = if self.big_a().is_finite() {
            self.big_a().recip()
        } else {
            S::zero()
        };
        (lo, self.a().recip())
    }

    /// Maximiser `x̂(t)` of `t x - log M_E^f(x)` and the value `I^f(t)`.
    ///
    /// Only called for `a < t < A` and `t < b_E'`, where the maximiser is an
    /// interior critical point.
    fn legendre(&self, t: S) -> (S, S) {
        let x = self.law.mean_tilt(t);
        let log_mf = self.law.log_u(0, x).unwrap_or(S::infinity()) + self.law.r();
        (t * x - log_mf, x)
    }

    /// `I^f(t)`, the rate function of the mean length of finite excursions.
    pub fn rate_i_f(&self, t: S) -> S {
        let a = self.a();
        let big_a = self.big_a();
        let an = self.law.analytics();
        if t.is_nan() || t < a || t > big_a {
            return S::infinity();
        }
        if t == a {
            return -(self.law.log_pmf(an.a) + an.r);
        }
        if t == big_a {
            return -(self.law.log_pmf(an.big_a.unwrap_or(0)) + an.r);
        }
        if an.b_e.is_finite() && t >= an.b_e_prime {
            // Maximiser stuck at the boundary b_E: affine branch.
            let log_mf_b = an.log_sum_gamma.map(|l| l + an.r).unwrap_or(S::infinity());
            return t * an.b_e - log_mf_b;
        }
        self.legendre(t).0
    }

    /// `I(t) = I^f(t) + r`.
    pub fn rate_i(&self, t: S) -> S {
        self.rate_i_f(t) + self.law.r()
    }

    /// `J(t) = sup_x (t x - log M_E(x))`; flat at `r` beyond `m_E` for
    /// transient laws.
    pub fn rate_j(&self, t: S) -> S {
        if !self.law.is_recurrent() && t >= self.law.m_e() && t >= self.a() {
            return self.law.r();
        }
        self.rate_i(t)
    }

    /// `ĝ^f(δ) = δ I^f(1/δ)`, `ĝ^f(0) = b_E`.
    pub fn ghat_f(&self, delta: S) -> S {
        if delta.is_nan() || delta < S::zero() {
            return S::infinity();
        }
        if delta == S::zero() {
            return self.law.b_e();
        }
        let t = delta.recip();
        let an = self.law.analytics();
        if an.b_e.is_finite() && t >= an.b_e_prime && t >= self.a() {
            // Affine part, written so it is exactly linear in δ.
            let log_mf_b = an.log_sum_gamma.map(|l| l + an.r).unwrap_or(S::infinity());
            return an.b_e - delta * log_mf_b;
        }
        let v = self.rate_i_f(t);
        if v.is_infinite() {
            return v;
        }
        delta * v
    }

    /// `ĝ(δ) = ĝ^f(δ) + r δ`.
    pub fn ghat(&self, delta: S) -> S {
        self.ghat_f(delta) + self.law.r() * delta
    }

    /// `g(δ) = δ J(1/δ)`.
    pub fn g(&self, delta: S) -> S {
        if self.law.is_recurrent() {
            return self.ghat(delta);
        }
        if delta.is_nan() || delta < S::zero() || delta > self.a().recip() {
            return S::infinity();
        }
        if delta * self.law.m_e() <= S::one() {
            return self.law.r() * delta;
        }
        self.ghat(delta)
    }

    /// `h(δ) = ĝ(δ) + log M_V(β) δ²`.
    pub fn h(&self, delta: S) -> S {
        self.ghat(delta) + self.log_mv * delta * delta
    }

    pub fn row(&self, delta: S) -> RateRow<S> {
        RateRow {
            delta,
            g: self.g(delta),
            ghat: self.ghat(delta),
            ghat_f: self.ghat_f(delta),
            h: self.h(delta),
        }
    }

    pub fn table(&self, grid: &[S]) -> Vec<RateRow<S>> {
        grid.iter().map(|&d| self.row(d)).collect()
    }

    fn argmin_ghat(&self) -> S {
        let (lo, hi) = self.ghat_domain();
        let (x, v) = golden_max(lo, hi, S::lit(OPT_TOL), |d| -self.ghat(d));
        if lo > S::zero() && -self.ghat(S::zero()) > v {
            return S::zero();
        }
        x
    }

    fn compute_delta0(&self) -> Result<S> {
        let law = &self.law;
        if law.is_recurrent() {
            return Err(Error::Unsupported("δ₀ is defined for transient laws".into()));
        }
        if !law.has_exponential_tails() {
            return Err(Error::Unsupported("δ₀ needs exponential excursion tails".into()));
        }
        let m = law.b_e().min(S::one());
        let level = m * S::lit(0.5);
        let mut cap = m / (S::lit(4.0) * (self.log_mv + law.r()));
        if law.m_e().is_finite() {
            cap = cap.min(law.m_e().recip());
        }
        let (lo, _) = self.ghat_domain();
        if lo >= cap {
            return Ok(cap);
        }
        let (dmin, hmin) = golden_max(lo, cap, S::lit(OPT_TOL), |d| -self.h(d));
        let hmin = -hmin;
        if hmin > level {
            return Ok(cap);
        }
        // h is convex, so {h <= level} starts at a single crossing left of dmin.
        let br = bisect_predicate(lo, dmin, S::lit(OPT_TOL), |d| self.h(d) <= level);
        Ok(br.lo)
    }

    /// `δ₀` for explicit disorder strength (see [`RateProfile::delta0`]).
    pub fn delta0_for(&self, log_mv: S) -> Result<S> {
        let mut p = self.clone();
        p.log_mv = log_mv;
        p.compute_delta0()
    }

    /// `sup_δ (λ δ - g(δ))` with `λ = β u + log M_V(β)`, and its maximiser.
    ///
    /// This is `β f^a(β, u)`; the maximiser is the annealed contact fraction.
    pub fn variational_annealed(&self, beta: S, u: S, log_mv: S) -> (S, S) {
        let lambda = beta * u + log_mv;
        let (dom_lo, hi) = if self.law.is_recurrent() {
            self.ghat_domain()
        } else {
            (S::zero(), self.a().recip())
        };
        let obj = |d: S| lambda * d - self.g(d);
        let mut best = golden_max(dom_lo, hi, S::lit(OPT_TOL), obj);
        if dom_lo > S::zero() {
            let v0 = obj(S::zero());
            if v0 > best.1 {
                best = (S::zero(), v0);
            }
        }
        (best.1, best.0)
    }

    /// Upper bound on `f^q(β, u)`:
    /// `max(sup_δ (λ δ - ĝ(δ) - log M_V(β) δ²), 0) / β`.
    pub fn quenched_upper_bound(&self, beta: S, u: S, log_mv: S) -> S {
        let lambda = beta * u + log_mv;
        let (lo, hi) = self.ghat_domain();
        let obj = |d: S| lambda * d - self.ghat(d) - log_mv * d * d;
        let (_, v) = golden_max(lo, hi, S::lit(OPT_TOL), obj);
        v.max(obj(S::zero())).max(S::zero()) / beta
    }
}
