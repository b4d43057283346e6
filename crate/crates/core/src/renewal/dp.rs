use crate::error::{Error, Result};
use crate::excursion::ExcursionLaw;
use crate::Real;

/// Default largest `N` for [`contact_count_dp`].
pub const DP_CAP: usize = 8192;

/// `log P(τ_k = N)` for `k = 0..=N`.
pub fn contact_count_dp<S: Real>(law: &ExcursionLaw<S>, n: usize) -> Result<Vec<S>> {
    contact_count_dp_with_cap(law, n, DP_CAP)
}

/// [`contact_count_dp`] with an explicit size cap.
///
/// Row `k` of the convolution table, `P(τ_k = m)` for `m <= N`, is kept in
/// linear scale after an exponential tilt `e^{x_k m}` chosen so that the
/// tilted `τ_k` has mean close to `N`, plus a per-row log scale. Every entry
/// that matters for column `N` then stays within floating-point range, so the
/// convolution runs on plain multiply-adds. Only lattice points are stored.
pub fn contact_count_dp_with_cap<S: Real>(law: &ExcursionLaw<S>, n: usize, cap: usize) -> Result<Vec<S>> {
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    let mut out = vec![S::neg_infinity(); n + 1];
    out[0] = if n == 0 { S::zero() } else { S::neg_infinity() };
    let lat = law.lattice() as usize;
    if n == 0 || n % lat != 0 {
        return Ok(out);
    }
    let big_j = n / lat;
    let latf = S::from_usize_lossy(lat);
    // log pmf on lattice points j = 1..=big_j
    let lq: Vec<S> = (0..=big_j)
        .map(|j| {
            if j == 0 {
                S::neg_infinity()
            } else {
                law.log_pmf((j * lat) as u64)
            }
        })
        .collect();
    let a_j = law.analytics().a as usize / lat;
    let k_max = big_j / a_j;
    let a = S::from_u64_lossy(law.analytics().a);
    let big_a = law.analytics().big_a.map(S::from_u64_lossy).unwrap_or(S::infinity());
    let nf = S::from_usize_lossy(n);
    // Tilt for row k: the mean-N/k tilt, kept away from the support edges.
    let tilt = |k: usize| -> S {
        let lo = a * (S::one() + S::lit(1e-3));
        let hi = if big_a.is_finite() {
            big_a * (S::one() - S::lit(1e-3))
        } else {
            S::infinity()
        };
        let t = (nf / S::from_usize_lossy(k)).max(lo).min(hi);
        if lo >= hi {
            return S::zero();
        }
        law.mean_tilt(t)
    };

    // Row 0 is the point mass at 0, stored with tilt 0 and scale 0.
    let mut row = vec![S::zero(); big_j + 1];
    row[0] = S::one();
    let mut x_prev = S::zero();
    let mut scale = S::zero();
    let mut shifted = vec![S::zero(); big_j + 1];
    let mut kernel = vec![S::zero(); big_j + 1];
    let mut next = vec![S::zero(); big_j + 1];
    for k in 1..=k_max {
        let x = tilt(k);
        let d = (x - x_prev) * latf;
        let first_prev = (k - 1) * a_j;
        for j in first_prev..=big_j {
            shifted[j] = if row[j] == S::zero() {
                S::zero()
            } else {
                row[j] * (d * S::from_usize_lossy(j)).exp()
            };
        }
        for i in 1..=big_j {
            kernel[i] = (lq[i] + x * latf * S::from_usize_lossy(i)).exp();
        }
        let first = k * a_j;
        let mut max = S::zero();
        for j in first..=big_j {
            // sum_{i >= a_j} shifted[j - i] kernel[i] over j - i >= first_prev
            let top = j - first_prev;
            let mut acc = S::zero();
            for (s, q) in shifted[first_prev..=j - a_j].iter().rev().zip(&kernel[a_j..=top]) {
                acc = acc + *s * *q;
            }
            next[j] = acc;
            if acc > max {
                max = acc;
            }
        }
        if !(max > S::zero()) || !max.is_finite() {
            break;
        }
        for v in next.iter_mut().take(first) {
            *v = S::zero();
        }
        for v in next[first..].iter_mut() {
            *v = *v / max;
        }
        scale = scale + max.ln();
        std::mem::swap(&mut row, &mut next);
        x_prev = x;
        if row[big_j] > S::zero() {
            out[k] = row[big_j].ln() + scale - x * nf;
        }
    }
    Ok(out)
}
