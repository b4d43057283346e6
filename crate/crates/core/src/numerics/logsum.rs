use crate::Real;

/// `log(exp(a) + exp(b))` without overflow; `-inf` is the identity.
#[inline]
pub fn log_add_exp<S: Real>(a: S, b: S) -> S {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == S::neg_infinity() {
        return hi;
    }
    if hi == S::infinity() {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `log(sum(exp(x_i)))`, returning `-inf` for an empty or all `-inf` input.
pub fn log_sum_exp<S: Real>(values: impl IntoIterator<Item = S>) -> S {
    let mut acc = LogSum::new();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

/// Streaming log-sum-exp accumulator.
///
/// Keeps a running maximum and a scaled sum; the scaled sum never exceeds the
/// number of accumulated terms, so it cannot overflow.
#[derive(Debug, Clone, Copy)]
pub struct LogSum<S> {
    max: S,
    scaled: S,
}

impl<S: Real> Default for LogSum<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Real> LogSum<S> {
    pub fn new() -> Self {
        LogSum {
            max: S::neg_infinity(),
            scaled: S::zero(),
        }
    }

    #[inline]
    pub fn add(&mut self, v: S) {
        if v == S::neg_infinity() {
            return;
        }
        if v <= self.max {
            self.scaled = self.scaled + (v - self.max).exp();
        } else {
            self.scaled = self.scaled * (self.max - v).exp() + S::one();
            self.max = v;
        }
    }

    pub fn value(&self) -> S {
        if self.max == S::neg_infinity() {
            S::neg_infinity()
        } else {
            self.max + self.scaled.ln()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn handles_extremes() {
        let v = log_sum_exp([700.0_f64, 701.0, 699.0]);
        let expected = 701.0 + (1.0 + (-1.0f64).exp() + (-2.0f64).exp()).ln();
        assert!((v - expected).abs() < 1e-12);
        assert_eq!(log_sum_exp(Vec::<f64>::new()), f64::NEG_INFINITY);
        assert_eq!(log_sum_exp([f64::NEG_INFINITY, f64::NEG_INFINITY]), f64::NEG_INFINITY);
        assert!((log_add_exp(0.0_f64, f64::NEG_INFINITY)).abs() < 1e-300);
        assert!((log_add_exp(-1000.0_f64, -1000.0) - (-1000.0 + 2f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn streaming_matches_direct_order_independent() {
        let xs = [-3.0_f64, 5.0, 2.0, -40.0, 4.5];
        let mut fwd = LogSum::new();
        xs.iter().for_each(|&x| fwd.add(x));
        let mut rev = LogSum::new();
        xs.iter().rev().for_each(|&x| rev.add(x));
        let direct: f64 = xs.iter().map(|x| x.exp()).sum::<f64>().ln();
        assert!((fwd.value() - direct).abs() < 1e-13);
        assert!((rev.value() - direct).abs() < 1e-13);
    }
}
