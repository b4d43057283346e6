use super::{DisorderField, PinningModel};
use crate::error::{Error, Result};
use crate::numerics::LogSum;
use crate::Real;

/// Largest `N` accepted by [`brute_force`].
pub const BRUTE_FORCE_CAP: usize = 20;

/// Exhaustive partition data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BruteForce<S> {
    pub log_z_free: S,
    pub log_z_constrained: S,
    pub mean_contacts: S,
}

/// Sums the Gibbs weight of every contact set `{t_1 < ... < t_k} ⊂ {1..N}`.
///
/// Each set has weight `prod_j P(E = t_j - t_{j-1}) e^{β(u + V_{t_j})}`
/// times `P(E > N - t_k)`; constrained sets are those containing `N`.
pub fn brute_force<S: Real>(model: &PinningModel<S>, field: &DisorderField<S>, n: usize) -> Result<BruteForce<S>> {
    if n > BRUTE_FORCE_CAP {
        return Err(Error::CapExceeded {
            n,
            cap: BRUTE_FORCE_CAP,
        });
    }
    let law = &model.law;
    let lp: Vec<S> = (0..=n as u64).map(|m| law.log_pmf(m)).collect();
    let ls: Vec<S> = (0..=n as u64).map(|m| law.log_survival(m)).collect();
    let reward: Vec<S> = (1..=n).map(|i| model.beta * (model.u + field.get(i))).collect();
    let mut free = LogSum::new();
    let mut constrained = LogSum::new();
    let mut contacts = LogSum::new();
    for mask in 0u32..(1u32 << n) {
        let mut w = S::zero();
        let mut last = 0usize;
        for t in 1..=n {
            if mask & (1 << (t - 1)) != 0 {
                w = w + lp[t - last] + reward[t - 1];
                last = t;
            }
        }
        if w == S::neg_infinity() {
            continue;
        }
        let total = w + ls[n - last];
        free.add(total);
        if last == n {
            constrained.add(w);
        }
        let count = mask.count_ones();
        if count > 0 {
            contacts.add(total + S::from_u64_lossy(count as u64).ln());
        }
    }
    let log_z_free = free.value();
    Ok(BruteForce {
        log_z_free,
        log_z_constrained: if n == 0 { S::zero() } else { constrained.value() },
        mean_contacts: (contacts.value() - log_z_free).exp(),
    })
}
