//! Excursion-length laws on `{1, 2, ...} ∪ {∞}`.
//!
//! Every law is stored in a single parametrisation,
//!
//! ```text
//! P(E = step * k) = exp(log_scale + theta * step * k) * c_k,   P(E = ∞) = mass_inf,
//! ```
//!
//! where `c_k` is a subexponential [`Kernel`]. For the two kernels with an
//! infinite support the decay rate is `b_E = -theta` and the prefactors are
//! `gamma_n = exp(log_scale) * c_k`; for finite tables `b_E = ∞`. Tilting,
//! loosening and lattice dilation only move `theta`, `log_scale` and `step`,
//! which keeps every transform exact.

mod family;
mod kernel;

use serde::{Deserialize, Serialize};

pub use family::Family;
pub use kernel::Kernel;

use crate::error::{Error, Result};
use crate::numerics::{log_add_exp, log_power_exp_sum, LogSum};
use crate::Real;

/// Tolerance on `sum pmf + mass_inf = 1` accepted from user input.
const MASS_TOL: f64 = 1e-12;

/// Cached tail analytics of a law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Analytics<S> {
    /// Exponential decay rate `b_E` (`+inf` for finite support).
    pub b_e: S,
    /// `r = -log P(E < ∞)`.
    pub r: S,
    /// `P(E < ∞)`.
    pub p_finite: S,
    /// `m_E = E(E | E < ∞)` (possibly `+inf`).
    pub m_e: S,
    /// Smallest point of the support.
    pub a: u64,
    /// Largest finite point of the support, `None` if unbounded.
    pub big_a: Option<u64>,
    /// `lim_{x -> b_E} (log M_E^f)'(x)` (possibly `+inf`).
    pub b_e_prime: S,
    /// `log sum_n gamma_n = log sum_n P(E = n) e^{b_E n}`, `None` when the sum
    /// diverges or `b_E = ∞`.
    pub log_sum_gamma: Option<S>,
    /// Period of the support.
    pub lattice: u64,
}

/// Law of the excursion length `E_1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "Family<S>", try_from = "Family<S>")]
#[serde(bound = "S: Real")]
pub struct ExcursionLaw<S: Real> {
    family: Family<S>,
    kernel: Kernel<S>,
    step: u64,
    theta: S,
    log_scale: S,
    mass_inf: S,
    analytics: Analytics<S>,
}

impl<S: Real> From<ExcursionLaw<S>> for Family<S> {
    fn from(law: ExcursionLaw<S>) -> Self {
        law.family
    }
}

impl<S: Real> TryFrom<Family<S>> for ExcursionLaw<S> {
    type Error = Error;

    fn try_from(family: Family<S>) -> Result<Self> {
        ExcursionLaw::from_family(family)
    }
}

/// Log-moments `log U_j(x)` with `U_j(x) = sum_n n^j P(E = n) e^{x n}`.
#[derive(Debug, Clone, Copy)]
pub struct LogMoments<S> {
    pub u0: S,
    pub u1: S,
    pub u2: S,
}

impl<S: Real> LogMoments<S> {
    /// `(log U_0)'(x)`, the mean of the law tilted by `e^{x n}`.
    pub fn mean(&self) -> S {
        (self.u1 - self.u0).exp()
    }

    /// `(log U_0)''(x)`, the variance of the tilted law.
    pub fn variance(&self) -> S {
        let m = self.mean();
        ((self.u2 - self.u0).exp() - m * m).max(S::zero())
    }
}

impl<S: Real> ExcursionLaw<S> {
    /// Builds a law from its serializable description.
    pub fn from_family(family: Family<S>) -> Result<Self> {
        match family {
            Family::BiasedRw { p } => Self::biased_rw(p),
            Family::GeometricPrefactor {
                b,
                c,
                kappa,
                finite_mass,
            } => Self::power_family(b, c, kappa, finite_mass, false),
            Family::PowerLaw { c, kappa, finite_mass } => Self::power_family(S::zero(), c, kappa, finite_mass, true),
            Family::FiniteSupport { weights, mass_inf } => {
                let w: Vec<(u64, S)> = weights.into_iter().collect();
                Self::finite_support(&w, mass_inf)
            }
            Family::Structured {
                kernel,
                step,
                theta,
                log_scale,
                mass_inf,
            } => Self::structured(kernel, step, theta, log_scale, mass_inf),
        }
    }

    /// Excursions from 0 of the walk stepping `+1` with probability `p`.
    ///
    /// `P(E = 2k) = (4p(1-p))^k s(2k)` with `s` the simple-random-walk
    /// first-return law; `P(E = ∞) = |2p - 1|`.
    pub fn biased_rw(p: S) -> Result<Self> {
        if !(p > S::zero() && p < S::one()) {
            return Err(Error::InvalidLaw(format!("biased walk needs 0 < p < 1, got {p}")));
        }
        let q = S::one() - p;
        let theta = S::lit(0.5) * (S::lit(4.0) * p * q).ln();
        let mut law = Self::build(Kernel::Catalan, 2, theta, S::zero(), (p - q).abs())?;
        law.family = Family::BiasedRw { p };
        Ok(law)
    }

    /// `P(E = n) = kappa n^{-c} e^{-b n}`; the mass at infinity is whatever
    /// `kappa` leaves over.
    pub fn geometric_prefactor(b: S, c: S, kappa: S) -> Result<Self> {
        Self::power_family(b, c, Some(kappa), None, false)
    }

    /// Recurrent geometric-prefactor law (`kappa` chosen so the pmf sums to 1).
    pub fn geometric_prefactor_normalized(b: S, c: S) -> Result<Self> {
        Self::power_family(b, c, None, None, false)
    }

    /// Geometric-prefactor law with `P(E < ∞) = finite_mass`.
    pub fn geometric_prefactor_with_finite_mass(b: S, c: S, finite_mass: S) -> Result<Self> {
        Self::power_family(b, c, None, Some(finite_mass), false)
    }

    /// `P(E = n) = kappa n^{-c}`, `c > 1`.
    pub fn power_law(c: S, kappa: S) -> Result<Self> {
        Self::power_family(S::zero(), c, Some(kappa), None, true)
    }

    pub fn power_law_normalized(c: S) -> Result<Self> {
        Self::power_family(S::zero(), c, None, None, true)
    }

    fn power_family(b: S, c: S, kappa: Option<S>, finite_mass: Option<S>, pure_power: bool) -> Result<Self> {
        if !(b >= S::zero()) || !b.is_finite() {
            return Err(Error::InvalidLaw(format!("decay rate b = {b} must be finite and >= 0")));
        }
        let log_total = log_power_exp_sum(c, b, 1)
            .map_err(|e| Error::InvalidLaw(format!("prefactor sum does not converge: {e}")))?;
        let (log_kappa, mass_inf) = match (kappa, finite_mass) {
            (Some(_), Some(_)) => return Err(Error::InvalidLaw("give either kappa or finite_mass, not both".into())),
            (Some(k), None) => {
                if !(k > S::zero()) {
                    return Err(Error::InvalidLaw(format!("kappa = {k} must be positive")));
                }
                let finite = (k.ln() + log_total).exp();
                (k.ln(), S::one() - finite)
            }
            (None, fm) => {
                let fm = fm.unwrap_or(S::one());
                if !(fm > S::zero() && fm <= S::one()) {
                    return Err(Error::InvalidLaw(format!("finite mass {fm} outside (0, 1]")));
                }
                (fm.ln() - log_total, S::one() - fm)
            }
        };
        let mass_inf = clean_mass_inf(mass_inf)?;
        let mut law = Self::build(Kernel::Power { c }, 1, -b, log_kappa, mass_inf)?;
        let kappa = Some(log_kappa.exp());
        law.family = if pure_power {
            Family::PowerLaw {
                c,
                kappa,
                finite_mass: None,
            }
        } else {
            Family::GeometricPrefactor {
                b,
                c,
                kappa,
                finite_mass: None,
            }
        };
        Ok(law)
    }

    /// Finite table `n -> P(E = n)`. When `mass_inf` is omitted it is set to
    /// the missing mass; otherwise the total must be 1 within `1e-12`.
    pub fn finite_support(weights: &[(u64, S)], mass_inf: Option<S>) -> Result<Self> {
        let mut w: Vec<(u64, S)> = weights.iter().copied().filter(|&(_, p)| p != S::zero()).collect();
        w.sort_by_key(|&(n, _)| n);
        let total: S = w.iter().map(|&(_, p)| p).sum();
        let mass_inf = match mass_inf {
            Some(m) => {
                if (total + m - S::one()).abs() > S::lit(MASS_TOL).max(S::epsilon() * S::lit(8.0)) {
                    return Err(Error::InvalidLaw(format!(
                        "weights sum to {total} and mass_inf is {m}; total must be 1"
                    )));
                }
                m
            }
            None => S::one() - total,
        };
        let mass_inf = clean_mass_inf(mass_inf)?;
        let mut law = Self::build(Kernel::Table { weights: w.clone() }, 1, S::zero(), S::zero(), mass_inf)?;
        law.family = Family::FiniteSupport {
            weights: w.into_iter().collect(),
            mass_inf: Some(mass_inf),
        };
        Ok(law)
    }

    /// Law given directly in the internal parametrisation.
    pub fn structured(kernel: Kernel<S>, step: u64, theta: S, log_scale: S, mass_inf: S) -> Result<Self> {
        Self::build(kernel, step, theta, log_scale, mass_inf)
    }

    fn build(kernel: Kernel<S>, step: u64, theta: S, log_scale: S, mass_inf: S) -> Result<Self> {
        kernel.validate()?;
        if step == 0 {
            return Err(Error::InvalidLaw("lattice step must be positive".into()));
        }
        if !theta.is_finite() || !log_scale.is_finite() {
            return Err(Error::InvalidLaw("theta and log_scale must be finite".into()));
        }
        if kernel.has_radius() && theta > S::zero() {
            return Err(Error::InvalidLaw(format!(
                "exponential factor {theta} > 0 is not summable"
            )));
        }
        if !(mass_inf >= S::zero() && mass_inf < S::one()) {
            return Err(Error::InvalidLaw(format!("mass at infinity {mass_inf} outside [0, 1)")));
        }
        let mut law = ExcursionLaw {
            family: Family::Structured {
                kernel: kernel.clone(),
                step,
                theta,
                log_scale,
                mass_inf,
            },
            kernel,
            step,
            theta,
            log_scale,
            mass_inf,
            analytics: Analytics {
                b_e: S::zero(),
                r: S::zero(),
                p_finite: S::one(),
                m_e: S::zero(),
                a: 1,
                big_a: None,
                b_e_prime: S::zero(),
                log_sum_gamma: None,
                lattice: 1,
            },
        };
        let log_finite = law
            .log_u(0, S::zero())
            .map_err(|e| Error::InvalidLaw(format!("law does not have a finite total mass: {e}")))?;
        let finite = log_finite.exp();
        let tol = S::lit(1e-10).max(S::epsilon() * S::lit(64.0));
        if (finite + mass_inf - S::one()).abs() > tol {
            return Err(Error::InvalidLaw(format!(
                "finite mass {finite} plus mass at infinity {mass_inf} is not 1"
            )));
        }
        law.analytics = law.compute_analytics()?;
        Ok(law)
    }

    fn compute_analytics(&self) -> Result<Analytics<S>> {
        let p_finite = S::one() - self.mass_inf;
        let r = -(-self.mass_inf).ln_1p();
        let b_e = if self.kernel.has_radius() {
            -self.theta
        } else {
            S::infinity()
        };
        let log_sum_gamma = if b_e.is_finite() { self.log_u(0, b_e).ok() } else { None };
        let m_e = match self.log_u(1, S::zero()) {
            Ok(l1) => (l1 - self.log_u(0, S::zero())?).exp(),
            Err(_) => S::infinity(),
        };
        let a = self.step * self.kernel.min_index();
        let big_a = self.kernel.max_index().map(|k| k * self.step);
        let b_e_prime = match (b_e.is_finite(), log_sum_gamma, big_a) {
            (false, _, Some(big)) => S::from_u64_lossy(big),
            (true, Some(l0), _) => match self.log_u(1, b_e) {
                Ok(l1) => (l1 - l0).exp(),
                Err(_) => S::infinity(),
            },
            _ => S::infinity(),
        };
        Ok(Analytics {
            b_e,
            r,
            p_finite,
            m_e,
            a,
            big_a,
            b_e_prime,
            log_sum_gamma,
            lattice: self.step * self.kernel.period(),
        })
    }

    /// `log U_j(x) = log sum_n n^j P(E = n) e^{x n}`.
    pub fn log_u(&self, j: u32, x: S) -> Result<S> {
        let step = S::from_u64_lossy(self.step);
        let zeta = (self.theta + x) * step;
        Ok(self.log_scale + S::from_u64_lossy(j as u64) * step.ln() + self.kernel.log_moment(j, zeta)?)
    }

    /// `log U_0, log U_1, log U_2` at `x`; `U_1`, `U_2` may be `+inf`.
    pub fn log_moments(&self, x: S) -> Result<LogMoments<S>> {
        let u0 = self.log_u(0, x)?;
        let u1 = self.log_u(1, x).unwrap_or(S::infinity());
        let u2 = self.log_u(2, x).unwrap_or(S::infinity());
        Ok(LogMoments { u0, u1, u2 })
    }

    pub fn family(&self) -> &Family<S> {
        &self.family
    }

    pub fn kernel(&self) -> &Kernel<S> {
        &self.kernel
    }

    /// Spacing of the index grid `n = step * k`.
    pub fn step(&self) -> u64 {
        self.step
    }

    /// Exponential factor per unit length (`-b_E` for unbounded supports).
    pub fn theta(&self) -> S {
        self.theta
    }

    pub fn log_scale(&self) -> S {
        self.log_scale
    }

    pub fn analytics(&self) -> &Analytics<S> {
        &self.analytics
    }

    pub fn b_e(&self) -> S {
        self.analytics.b_e
    }

    pub fn r(&self) -> S {
        self.analytics.r
    }

    pub fn m_e(&self) -> S {
        self.analytics.m_e
    }

    pub fn lattice(&self) -> u64 {
        self.analytics.lattice
    }

    pub fn is_recurrent(&self) -> bool {
        self.mass_inf == S::zero()
    }

    /// `b_E > 0`.
    pub fn has_exponential_tails(&self) -> bool {
        self.analytics.b_e > S::zero()
    }

    /// `P(E = ∞)`.
    pub fn mass_inf(&self) -> S {
        self.mass_inf
    }

    /// `log P(E = n)` (`-inf` off the lattice).
    pub fn log_pmf(&self, n: u64) -> S {
        if n == 0 || n % self.step != 0 {
            return S::neg_infinity();
        }
        self.log_scale + self.theta * S::from_u64_lossy(n) + self.kernel.log_weight(n / self.step)
    }

    /// `P(E = n)`.
    pub fn pmf(&self, n: u64) -> S {
        self.log_pmf(n).exp()
    }

    /// `log P(E = n)` for `n = 0..=n_max` (entry 0 is `-inf`).
    pub fn log_pmf_table(&self, n_max: usize) -> Vec<S> {
        let mut out = vec![S::neg_infinity(); n_max + 1];
        let k_max = n_max as u64 / self.step;
        let lw = self.kernel.log_weights(k_max);
        for k in 1..=k_max {
            let n = k * self.step;
            out[n as usize] = self.log_scale + self.theta * S::from_u64_lossy(n) + lw[k as usize];
        }
        out
    }

    /// `log sum_{m > n} P(E = m)` (finite part of the tail only).
    pub fn log_finite_tail(&self, n: u64) -> S {
        let k0 = n / self.step;
        let zeta = self.theta * S::from_u64_lossy(self.step);
        match self.kernel.log_tail(k0, zeta) {
            Ok(t) => self.log_scale + t,
            Err(_) => S::infinity(),
        }
    }

    /// `P(E > n) = P(E = ∞) + sum_{m > n} P(E = m)`.
    pub fn survival(&self, n: u64) -> S {
        self.log_survival(n).exp()
    }

    pub fn log_survival(&self, n: u64) -> S {
        if n == 0 {
            return S::zero();
        }
        log_add_exp(self.mass_inf.ln(), self.log_finite_tail(n))
    }

    /// `log P(E > n)` for `n = 0..=n_max`.
    ///
    /// Computed by backward accumulation from a certified tail at `n_max`, so
    /// exponentially small survival probabilities keep full relative accuracy.
    pub fn log_survival_table(&self, n_max: usize) -> Vec<S> {
        let lp = self.log_pmf_table(n_max);
        let mut finite = vec![S::neg_infinity(); n_max + 1];
        let mut acc = self.log_finite_tail(n_max as u64);
        finite[n_max] = acc;
        for n in (1..=n_max).rev() {
            acc = log_add_exp(acc, lp[n]);
            finite[n - 1] = acc;
        }
        let li = self.mass_inf.ln();
        let mut out: Vec<S> = finite.into_iter().map(|f| log_add_exp(li, f)).collect();
        out[0] = S::zero();
        out
    }

    /// Smallest `n` with `sum_{m > n} P(E = m) <= tol`, or `None` for laws
    /// without exponential tails.
    pub fn truncation_window(&self, tol: S) -> Option<u64> {
        if let Some(big_a) = self.analytics.big_a {
            return Some(big_a);
        }
        if !(self.analytics.b_e > S::zero()) {
            return None;
        }
        let target = tol.ln();
        let mut hi = self.step;
        while self.log_finite_tail(hi) > target {
            hi *= 2;
            if hi > 1 << 40 {
                return None;
            }
        }
        let mut lo = 0;
        while hi - lo > self.step {
            let mid = (lo + hi) / 2 / self.step * self.step;
            let mid = if mid <= lo { lo + self.step } else { mid };
            if mid >= hi {
                break;
            }
            if self.log_finite_tail(mid) > target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(hi)
    }

    /// `M_E^f(x) = E(e^{x E} | E < ∞)`.
    ///
    /// Fails with [`Error::DivergentSum`] beyond `b_E`, or at `b_E` when the
    /// prefactors are not summable.
    pub fn mgf_finite(&self, x: S) -> Result<S> {
        Ok(self.log_mgf_finite(x)?.exp())
    }

    pub fn log_mgf_finite(&self, x: S) -> Result<S> {
        if x > self.analytics.b_e {
            return Err(Error::DivergentSum(format!(
                "x = {x} exceeds the decay rate b_E = {}",
                self.analytics.b_e
            )));
        }
        Ok(self.log_u(0, x)? + self.analytics.r)
    }

    /// `M_E(x) = E e^{x E}` as an extended real, with `M_E(0) = P(E < ∞)`.
    pub fn mgf(&self, x: S) -> S {
        if x == S::zero() {
            return self.analytics.p_finite;
        }
        if x > S::zero() && !self.is_recurrent() {
            return S::infinity();
        }
        self.log_u(0, x).map(|l| l.exp()).unwrap_or(S::infinity())
    }

    /// `(log M_E^f)'(x)`, the mean of the law tilted by `e^{x n}`.
    pub fn log_mgf_finite_derivative(&self, x: S) -> Result<S> {
        if x > self.analytics.b_e {
            return Err(Error::DivergentSum(format!("x = {x} exceeds b_E")));
        }
        let l0 = self.log_u(0, x)?;
        Ok(match self.log_u(1, x) {
            Ok(l1) => (l1 - l0).exp(),
            Err(_) => S::infinity(),
        })
    }

    /// Tilt `x <= b_E` at which the law tilted by `e^{x n}` has mean `t`,
    /// i.e. the root of `(log M_E^f)'(x) = t`.
    ///
    /// Saturates at `b_E` for `t >= b_E'`; requires `a < t` and, for bounded
    /// supports, `t < A`.
    pub fn mean_tilt(&self, t: S) -> S {
        let an = &self.analytics;
        if an.b_e.is_finite() && t >= an.b_e_prime {
            return an.b_e;
        }
        let f = |x: S| -> (S, S) {
            match self.log_moments(x) {
                Ok(m) => (m.mean() - t, m.variance()),
                Err(_) => (S::infinity(), S::nan()),
            }
        };
        let mut hi = if an.b_e.is_finite() { an.b_e } else { S::one() };
        if !an.b_e.is_finite() {
            while f(hi).0 <= S::zero() && hi < S::lit(1e6) {
                hi = hi * S::lit(2.0);
            }
        }
        let mut lo = hi.min(S::zero()) - S::one();
        let mut guard = 0;
        while f(lo).0 >= S::zero() && guard < 200 {
            lo = lo - (S::one() + lo.abs());
            guard += 1;
        }
        crate::numerics::safeguarded_root(lo, hi, f)
    }

    /// `b_E' = lim_{x -> b_E} (log M_E^f)'(x) = sum n gamma_n / sum gamma_n`.
    pub fn b_e_prime(&self) -> S {
        self.analytics.b_e_prime
    }

    /// `M_E^f(b_E) = sum_n gamma_n / P(E < ∞)`, `None` if infinite.
    pub fn mgf_finite_at_b_e(&self) -> Option<S> {
        self.analytics.log_sum_gamma.map(|l| (l + self.analytics.r).exp())
    }

    /// Prefactor `gamma_n = P(E = n) e^{b_E n}` (requires `b_E < ∞`).
    pub fn gamma(&self, n: u64) -> S {
        if n == 0 || n % self.step != 0 || !self.analytics.b_e.is_finite() {
            return S::zero();
        }
        (self.log_scale + self.kernel.log_weight(n / self.step)).exp()
    }

    /// Recurrent law `P'(E = n) ∝ P(E = n) e^{alpha n}`.
    pub fn tilt(&self, alpha: S) -> Result<Self> {
        if self.kernel.has_radius() && alpha > self.analytics.b_e {
            return Err(Error::DivergentSum(format!("tilt {alpha} exceeds b_E")));
        }
        let log_norm = self.log_u(0, alpha)?;
        Self::build(
            self.kernel.clone(),
            self.step,
            self.theta + alpha,
            self.log_scale - log_norm,
            S::zero(),
        )
    }

    /// The law conditioned on `{E < ∞}`.
    pub fn conditioned(&self) -> Result<Self> {
        self.tilt(S::zero())
    }

    /// Prefactor law `gamma_n / sum gamma`, which has no exponential decay.
    pub fn loosen(&self) -> Result<Self> {
        if !self.is_recurrent() {
            return Err(Error::NotRecurrent(format!("mass_inf = {}", self.mass_inf)));
        }
        if !self.analytics.b_e.is_finite() {
            return Err(Error::Unsupported(
                "finite support has b_E = ∞ and no prefactors".into(),
            ));
        }
        let log_sum_gamma = self
            .analytics
            .log_sum_gamma
            .ok_or_else(|| Error::DivergentSum("sum of prefactors diverges: there is no transition".into()))?;
        Self::build(
            self.kernel.clone(),
            self.step,
            self.theta + self.analytics.b_e,
            self.log_scale - log_sum_gamma,
            S::zero(),
        )
    }

    /// Tilt by `e^{b n}` keeping `P(E < ∞)` and `P(E = ∞)` unchanged:
    /// `P'(E = n) = P(E = n) e^{b n} / M_E^f(b)`.
    pub fn partially_loosen(&self, b: S) -> Result<Self> {
        if !(b > S::zero() && b < self.analytics.b_e) {
            return Err(Error::InvalidArgument(format!(
                "partial loosening needs 0 < b < b_E = {}, got {b}",
                self.analytics.b_e
            )));
        }
        let log_mf = self.log_mgf_finite(b)?;
        Self::build(
            self.kernel.clone(),
            self.step,
            self.theta + b,
            self.log_scale - log_mf,
            self.mass_inf,
        )
    }

    /// Law of `factor * E`.
    pub fn dilate(&self, factor: u64) -> Result<Self> {
        if factor == 0 {
            return Err(Error::InvalidArgument("dilation factor must be positive".into()));
        }
        Self::build(
            self.kernel.clone(),
            self.step * factor,
            self.theta / S::from_u64_lossy(factor),
            self.log_scale,
            self.mass_inf,
        )
    }

    /// `sum_{n <= n_max} P(E = n)` accumulated smallest-first plus the
    /// certified tail and the mass at infinity; equals 1 for a valid law.
    pub fn total_mass_check(&self, n_max: usize) -> S {
        let lp = self.log_pmf_table(n_max);
        let mut acc = LogSum::new();
        acc.add(self.log_finite_tail(n_max as u64));
        for &l in lp.iter().rev() {
            acc.add(l);
        }
        acc.value().exp() + self.mass_inf
    }
}

fn clean_mass_inf<S: Real>(m: S) -> Result<S> {
    let tol = S::lit(MASS_TOL).max(S::epsilon() * S::lit(8.0));
    if m < -tol {
        return Err(Error::InvalidLaw(format!("weights exceed total mass 1 by {}", -m)));
    }
    Ok(if m.abs() <= tol { S::zero() } else { m })
}

#[cfg(test)]
mod tests;
