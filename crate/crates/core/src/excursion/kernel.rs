//! Subexponential weight sequences `c_k`, `k >= 1`, from which every
//! excursion law is built as `pmf(step * k) = scale * c_k * exp(theta * step * k)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{log_power_exp_sum, LogSum};
use crate::Real;

/// Direct terms summed before switching to the asymptotic remainder in
/// Catalan tails with almost no exponential decay.
const CATALAN_DIRECT_CAP: u64 = 1 << 21;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
#[serde(bound = "S: Real")]
pub enum Kernel<S> {
    /// `c_k = 2 C_{k-1} / 4^k`, the first-return law of simple random walk
    /// at time `2k`.
    Catalan,
    /// `c_k = k^{-c}`.
    Power { c: S },
    /// Explicit finite table of `(k, c_k)` with `c_k > 0`.
    Table { weights: Vec<(u64, S)> },
}

impl<S: Real> Kernel<S> {
    pub(crate) fn validate(&self) -> Result<()> {
        match self {
            Kernel::Catalan => Ok(()),
            Kernel::Power { c } => {
                if c.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidLaw(format!("power exponent {c} is not finite")))
                }
            }
            Kernel::Table { weights } => {
                if weights.is_empty() {
                    return Err(Error::InvalidLaw("empty weight table".into()));
                }
                let mut prev = 0;
                for &(k, w) in weights {
                    if k <= prev {
                        return Err(Error::InvalidLaw(
                            "table indices must be positive and strictly increasing".into(),
                        ));
                    }
                    if !(w > S::zero()) || !w.is_finite() {
                        return Err(Error::InvalidLaw(format!("table weight {w} at {k} is not positive")));
                    }
                    prev = k;
                }
                Ok(())
            }
        }
    }

    /// `log c_k` (`-inf` off the support).
    pub fn log_weight(&self, k: u64) -> S {
        if k == 0 {
            return S::neg_infinity();
        }
        match self {
            Kernel::Catalan => {
                let mut lc = S::lit(0.5).ln();
                for j in 1..k {
                    lc = lc + catalan_log_ratio::<S>(j);
                }
                lc
            }
            Kernel::Power { c } => -*c * S::from_u64_lossy(k).ln(),
            Kernel::Table { weights } => weights
                .binary_search_by_key(&k, |&(i, _)| i)
                .map(|i| weights[i].1.ln())
                .unwrap_or(S::neg_infinity()),
        }
    }

    /// `log c_k` for `k = 0..=k_max` (entry 0 is `-inf`).
    pub fn log_weights(&self, k_max: u64) -> Vec<S> {
        let mut out = vec![S::neg_infinity(); k_max as usize + 1];
        match self {
            Kernel::Catalan => {
                let mut lc = S::lit(0.5).ln();
                for k in 1..=k_max {
                    out[k as usize] = lc;
                    lc = lc + catalan_log_ratio::<S>(k);
                }
            }
            Kernel::Power { c } => {
                for k in 1..=k_max {
                    out[k as usize] = -*c * S::from_u64_lossy(k).ln();
                }
            }
            Kernel::Table { weights } => {
                for &(k, w) in weights.iter().filter(|(k, _)| *k <= k_max) {
                    out[k as usize] = w.ln();
                }
            }
        }
        out
    }

    pub fn min_index(&self) -> u64 {
        match self {
            Kernel::Table { weights } => weights[0].0,
            _ => 1,
        }
    }

    /// Largest index in the support, `None` when unbounded.
    pub fn max_index(&self) -> Option<u64> {
        match self {
            Kernel::Table { weights } => weights.last().map(|w| w.0),
            _ => None,
        }
    }

    /// Period of the support in index units.
    pub fn period(&self) -> u64 {
        match self {
            Kernel::Table { weights } => weights.iter().fold(0, |g, &(k, _)| gcd(g, k)),
            _ => 1,
        }
    }

    /// Whether `sum c_k e^{zeta k}` has a finite radius (`zeta <= 0`).
    pub fn has_radius(&self) -> bool {
        !matches!(self, Kernel::Table { .. })
    }

    /// `log sum_k k^j c_k e^{zeta k}` for `j <= 2`.
    pub fn log_moment(&self, j: u32, zeta: S) -> Result<S> {
        match self {
            Kernel::Catalan => catalan_log_moment(j, zeta),
            Kernel::Power { c } => log_power_exp_sum(*c - S::from_u64_lossy(j as u64), -zeta, 1),
            Kernel::Table { weights } => {
                let mut acc = LogSum::new();
                for &(k, w) in weights {
                    let kf = S::from_u64_lossy(k);
                    acc.add(w.ln() + S::from_u64_lossy(j as u64) * kf.ln() + zeta * kf);
                }
                Ok(acc.value())
            }
        }
    }

    /// `log sum_{k > k0} c_k e^{zeta k}`.
    pub fn log_tail(&self, k0: u64, zeta: S) -> Result<S> {
        match self {
            Kernel::Catalan => catalan_log_tail(k0, zeta),
            Kernel::Power { c } => log_power_exp_sum(*c, -zeta, k0 + 1),
            Kernel::Table { weights } => {
                let mut acc = LogSum::new();
                for &(k, w) in weights.iter().filter(|(k, _)| *k > k0) {
                    acc.add(w.ln() + zeta * S::from_u64_lossy(k));
                }
                Ok(acc.value())
            }
        }
    }
}

/// `log(c_{k+1} / c_k) = log((2k - 1) / (2k + 2))`.
#[inline]
fn catalan_log_ratio<S: Real>(k: u64) -> S {
    let kf = S::from_u64_lossy(k);
    let two = S::lit(2.0);
    ((two * kf - S::one()) / (two * kf + two)).ln()
}

fn catalan_log_moment<S: Real>(j: u32, zeta: S) -> Result<S> {
    if zeta > S::zero() {
        return Err(Error::DivergentSum(format!(
            "first-return generating function diverges at rate {zeta} > 0"
        )));
    }
    let om = -zeta.exp_m1();
    let sq = om.sqrt();
    let ln2 = S::LN_2();
    match j {
        0 => Ok(zeta - (S::one() + sq).ln()),
        1 | 2 if om == S::zero() => Err(Error::DivergentSum(
            "moments of the first-return law diverge at the boundary".into(),
        )),
        1 => Ok(zeta - ln2 - S::lit(0.5) * om.ln()),
        2 => {
            let w = zeta.exp();
            Ok(zeta - ln2 - S::lit(0.5) * om.ln() + (S::one() + w / (S::lit(2.0) * om)).ln())
        }
        _ => Err(Error::Unsupported(format!("moment order {j} of the first-return law"))),
    }
}

fn catalan_log_tail<S: Real>(k0: u64, zeta: S) -> Result<S> {
    if zeta > S::zero() {
        return Err(Error::DivergentSum(format!(
            "first-return tail diverges at rate {zeta} > 0"
        )));
    }
    // Starting log weight at k0 + 1.
    let kernel: Kernel<S> = Kernel::Catalan;
    let mut lc = kernel.log_weight(k0 + 1);
    if zeta == S::zero() {
        // P(T > 2 k0) = u_{2 k0} = (2 k0 + 2) c_{k0 + 1}
        return Ok(S::from_u64_lossy(2 * k0 + 2).ln() + lc);
    }
    let tol_ln = S::series_tol().ln();
    let mut acc = LogSum::new();
    let w = zeta.exp();
    let mut k = k0 + 1;
    loop {
        let lt = lc + zeta * S::from_u64_lossy(k);
        acc.add(lt);
        let bound = lt + zeta - (-zeta.exp_m1()).ln();
        if bound - acc.value() < tol_ln || w == S::zero() {
            return Ok(acc.value());
        }
        lc = lc + catalan_log_ratio::<S>(k);
        k += 1;
        if k - k0 > CATALAN_DIRECT_CAP {
            break;
        }
    }
    // c_k = k^{-3/2} / (2 sqrt(pi)) * (1 + 3/(8k) + 25/(128 k^2) + O(k^-3))
    let y = -zeta;
    let pref = -(S::lit(2.0) * S::PI().sqrt()).ln();
    let mut rem = LogSum::new();
    rem.add(pref + log_power_exp_sum(S::lit(1.5), y, k)?);
    rem.add(pref + S::lit(0.375).ln() + log_power_exp_sum(S::lit(2.5), y, k)?);
    rem.add(pref + S::lit(25.0 / 128.0).ln() + log_power_exp_sum(S::lit(3.5), y, k)?);
    acc.add(rem.value());
    Ok(acc.value())
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
