//! Certified evaluation of `sum_{n >= n0} n^{-s} e^{-y n}`.
//!
//! Fast-decaying sums (`y >= 0.5`) are summed directly until the geometric
//! remainder bound drops below the working precision. Slowly decaying sums use
//! 64 explicit terms followed by an Euler–Maclaurin tail, whose integral part
//! is evaluated by composite Gauss–Legendre quadrature after the substitution
//! `t = N e^v`.

use crate::error::{Error, Result};
use crate::numerics::logsum::{log_add_exp, LogSum};
use crate::Real;

const DIRECT_TERMS: u64 = 64;

const GL_NODES: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329_0,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL_WEIGHTS: [f64; 4] = [
    0.362_683_783_378_362_0,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// `B_{2k} / (2k)!` for k = 1..=7.
const EM_COEFFS: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -5.284_190_138_687_493e-10,
    1.338_253_653_068_467_9e-11,
];

/// Logarithm of `sum_{n >= n0} n^{-s} e^{-y n}`.
///
/// Fails with [`Error::DivergentSum`] when `y < 0`, or `y = 0` and `s <= 1`.
pub fn log_power_exp_sum<S: Real>(s: S, y: S, n0: u64) -> Result<S> {
    let n0 = n0.max(1);
    if y.is_nan() || s.is_nan() {
        return Err(Error::DivergentSum("NaN argument".into()));
    }
    if y < S::zero() {
        return Err(Error::DivergentSum(format!("exponential rate {y} is negative")));
    }
    if y == S::zero() && s <= S::one() {
        return Err(Error::DivergentSum(format!("sum of n^-{s} diverges")));
    }
    if y >= S::lit(0.5) {
        Ok(direct(s, y, n0))
    } else {
        Ok(euler_maclaurin(s, y, n0))
    }
}

/// `sum_{n >= n0} n^{-s} e^{-y n}` in linear scale.
pub fn power_exp_sum<S: Real>(s: S, y: S, n0: u64) -> Result<S> {
    log_power_exp_sum(s, y, n0).map(|l| l.exp())
}

#[inline]
fn log_term<S: Real>(s: S, y: S, n: u64) -> S {
    let nf = S::from_u64_lossy(n);
    -s * nf.ln() - y * nf
}

fn direct<S: Real>(s: S, y: S, n0: u64) -> S {
    let tol = S::series_tol();
    let mut acc = LogSum::new();
    let mut n = n0;
    loop {
        let lt = log_term(s, y, n);
        acc.add(lt);
        let nf = S::from_u64_lossy(n);
        // ratio of consecutive terms from n onward is at most rho
        let rho = ((nf + S::one()) / nf).powf(-s).max(S::one()) * (-y).exp();
        if rho < S::one() {
            let bound = lt + rho.ln() - (S::one() - rho).ln();
            if bound - acc.value() < tol.ln() {
                break;
            }
        }
        n += 1;
        if n - n0 > 10_000_000 {
            break;
        }
    }
    acc.value()
}

fn euler_maclaurin<S: Real>(s: S, y: S, n0: u64) -> S {
    let mut acc = LogSum::new();
    for n in n0..n0 + DIRECT_TERMS {
        acc.add(log_term(s, y, n));
    }
    let big_n = n0 + DIRECT_TERMS;
    let nf = S::from_u64_lossy(big_n);
    let log_f = log_term(s, y, big_n);

    // Endpoint corrections: f(N) * (1/2 + sum_k B_2k/(2k)! * P_{2k-1}),
    // where f^{(m)}(N) = (-1)^m f(N) P_m and every term of P_m is positive
    // for s >= 0.
    let mut corr = S::lit(0.5);
    for (k, &c) in EM_COEFFS.iter().enumerate() {
        let m = 2 * k + 1;
        corr = corr + S::lit(c) * derivative_poly(s, y, nf, m);
    }
    let log_int = log_tail_integral(s, y, nf);
    let tail = log_add_exp(log_int, log_f + corr.ln());
    acc.add(tail);
    acc.value()
}

/// `sum_{j=0}^{m} C(m, j) (s)_j N^{-j} y^{m-j}`.
fn derivative_poly<S: Real>(s: S, y: S, nf: S, m: usize) -> S {
    let mut total = S::zero();
    let mut binom = S::one();
    let mut rising = S::one();
    let inv_n = nf.recip();
    for j in 0..=m {
        total = total + binom * rising * inv_n.powi(j as i32) * y.powi((m - j) as i32);
        let jf = S::from_usize_lossy(j);
        binom = binom * S::from_usize_lossy(m - j) / (jf + S::one());
        rising = rising * (s + jf);
    }
    total
}

/// `log int_N^inf t^{-s} e^{-y t} dt`.
fn log_tail_integral<S: Real>(s: S, y: S, nf: S) -> S {
    let a = S::one() - s;
    if y == S::zero() {
        // s > 1 guaranteed by the caller
        return a * nf.ln() - (s - S::one()).ln();
    }
    a * nf.ln() + log_exp_integral(a, y * nf)
}

/// `log int_0^inf exp(a v - z e^v) dv` for `z > 0`.
fn log_exp_integral<S: Real>(a: S, z: S) -> S {
    let phi = |v: S| a * v - z * v.exp();
    let (v_peak, phi_peak) = if a > z {
        let v = (a / z).ln();
        (v, phi(v))
    } else {
        (S::zero(), -z)
    };
    let half = S::lit(0.5);
    let two = S::lit(2.0);
    let cutoff = S::lit(-45.0);
    let mut v = S::zero();
    let mut total = S::zero();
    for _ in 0..100_000 {
        let g = z * v.exp();
        let h = half.min(two / (a.abs() + g));
        let mid = v + h * half;
        let mut panel = S::zero();
        for (&x, &w) in GL_NODES.iter().zip(GL_WEIGHTS.iter()) {
            let dx = S::lit(x) * h * half;
            panel = panel + S::lit(w) * ((phi(mid - dx) - phi_peak).exp() + (phi(mid + dx) - phi_peak).exp());
        }
        total = total + panel * h * half;
        v = v + h;
        if v > v_peak && z * v.exp() > a && phi(v) - phi_peak < cutoff {
            break;
        }
    }
    phi_peak + total.ln()
}
