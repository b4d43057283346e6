//! Exact finite-volume partition functions.
//!
//! With contact times `0 = τ_0 < τ_1 < ...` and site rewards
//! `β (u + V_i)`, the constrained partition function obeys
//!
//! ```text
//! Z^c_0 = 1,   Z^c_k = e^{β(u + V_k)} sum_{n=1}^{k} P(E = n) Z^c_{k-n},
//! ```
//!
//! and the free one splits over the last contact:
//! `Z_N = sum_k Z^c_k P(E > N - k)`. Everything is carried in log space.

mod brute;
mod disorder;
mod dp;
mod recursion;

use serde::{Deserialize, Serialize};

pub use brute::{brute_force, BruteForce, BRUTE_FORCE_CAP};
pub use disorder::{replica_seed, DisorderField};
pub use dp::{contact_count_dp, contact_count_dp_with_cap, DP_CAP};
pub use recursion::{constrained_log_z, free_log_z, solve, solve_with, RecursionOptions, Window};

use crate::error::{Error, Result};
use crate::excursion::ExcursionLaw;
use crate::Real;

/// Site disorder of a pinning model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
#[serde(bound = "S: Real")]
pub enum Disorder<S> {
    Deterministic,
    Gaussian { sigma: S },
}

/// Polymer pinned at a defect line with excursion law `law`.
#[derive(Debug, Clone, PartialEq)]
pub struct PinningModel<S: Real> {
    pub law: ExcursionLaw<S>,
    pub beta: S,
    pub u: S,
    pub disorder: Disorder<S>,
}

impl<S: Real> PinningModel<S> {
    pub fn new(law: ExcursionLaw<S>, beta: S, u: S, disorder: Disorder<S>) -> Result<Self> {
        if !(beta > S::zero()) || !beta.is_finite() {
            return Err(Error::InvalidArgument(format!("beta = {beta} must be positive")));
        }
        if !u.is_finite() {
            return Err(Error::InvalidArgument(format!("u = {u} must be finite")));
        }
        if let Disorder::Gaussian { sigma } = disorder {
            if !(sigma >= S::zero()) || !sigma.is_finite() {
                return Err(Error::InvalidArgument(format!("sigma = {sigma} must be >= 0")));
            }
        }
        Ok(PinningModel { law, beta, u, disorder })
    }

    pub fn deterministic(law: ExcursionLaw<S>, beta: S, u: S) -> Result<Self> {
        Self::new(law, beta, u, Disorder::Deterministic)
    }

    pub fn gaussian(law: ExcursionLaw<S>, beta: S, u: S, sigma: S) -> Result<Self> {
        Self::new(law, beta, u, Disorder::Gaussian { sigma })
    }

    pub fn sigma(&self) -> S {
        match self.disorder {
            Disorder::Deterministic => S::zero(),
            Disorder::Gaussian { sigma } => sigma,
        }
    }

    /// `log E e^{β V} = β² σ² / 2`.
    pub fn log_mv(&self) -> S {
        let s = self.sigma();
        S::lit(0.5) * self.beta * self.beta * s * s
    }

    /// The same model at pinning strength `u`.
    pub fn with_u(&self, u: S) -> Self {
        PinningModel { u, ..self.clone() }
    }

    /// The same model with excursion law `law`.
    pub fn with_law(&self, law: ExcursionLaw<S>) -> Self {
        PinningModel { law, ..self.clone() }
    }

    /// Disorder realisation of length `n` for this model.
    pub fn field(&self, seed: u64, n: usize) -> DisorderField<S> {
        DisorderField::sample(seed, n, self.sigma())
    }

    pub fn solve(&self, field: &DisorderField<S>, n: usize) -> Result<PartitionResult<S>> {
        solve(self, field, n)
    }
}

/// Finite-volume partition data of one realisation.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "S: Real")]
pub struct PartitionResult<S: Real> {
    pub n: usize,
    /// `log Z^c_k` for `k = 0..=n`.
    pub log_zc: Vec<S>,
    pub log_z_free: S,
    /// Exact `<L_N>` under the free Gibbs measure.
    pub mean_contacts: S,
    /// Exact `<L_N>` under the constrained Gibbs measure.
    pub mean_contacts_constrained: S,
    pub seed: u64,
    /// Convolution window used, `None` for the full recursion.
    pub window: Option<usize>,
}

impl<S: Real> PartitionResult<S> {
    pub fn log_z_constrained(&self) -> S {
        self.log_zc[self.n]
    }

    /// `<L_N> / N`.
    pub fn contact_fraction(&self) -> S {
        self.mean_contacts / S::from_usize_lossy(self.n)
    }
}
