use crate::Real;

/// Closed interval produced by a bracketing search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket<S> {
    pub lo: S,
    pub hi: S,
}

impl<S: Real> Bracket<S> {
    pub fn mid(&self) -> S {
        self.lo + (self.hi - self.lo) * S::lit(0.5)
    }

    pub fn width(&self) -> S {
        self.hi - self.lo
    }
}

/// Shrinks `[lo, hi]` around the switch point of a monotone predicate.
///
/// `pred(lo)` is taken to be false and `pred(hi)` true; the returned bracket
/// keeps that property and has width at most `tol` (or is exhausted at the
/// floating-point resolution).
pub fn bisect_predicate<S: Real>(mut lo: S, mut hi: S, tol: S, mut pred: impl FnMut(S) -> bool) -> Bracket<S> {
    for _ in 0..2000 {
        if hi - lo <= tol {
            break;
        }
        let mid = lo + (hi - lo) * S::lit(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Bracket { lo, hi }
}

/// Root of an increasing function on `[lo, hi]` by Newton steps kept inside a
/// shrinking bisection bracket.
///
/// `eval` returns `(f(x), f'(x))`; `f(lo) <= 0 <= f(hi)` is assumed. Non-finite
/// values at the right end are fine (e.g. `+inf` at a boundary of convergence).
pub fn safeguarded_root<S: Real>(mut lo: S, mut hi: S, mut eval: impl FnMut(S) -> (S, S)) -> S {
    let half = S::lit(0.5);
    let mut x = lo + (hi - lo) * half;
    for _ in 0..400 {
        let (f, df) = eval(x);
        if f == S::zero() {
            return x;
        }
        if f.is_nan() || f > S::zero() {
            hi = x;
        } else {
            lo = x;
        }
        if hi - lo <= S::epsilon() * (S::one() + x.abs()) {
            break;
        }
        let newton = x - f / df;
        x = if f.is_finite() && df.is_finite() && df > S::zero() && newton > lo && newton < hi {
            newton
        } else {
            lo + (hi - lo) * half
        };
        if (x == lo || x == hi) && hi - lo > S::zero() {
            x = lo + (hi - lo) * half;
            if x == lo || x == hi {
                break;
            }
        }
    }
    x
}

/// Maximum of a unimodal (e.g. concave) function on `[a, b]`.
///
/// Golden-section search down to bracket width `tol`; the interior result is
/// compared against both endpoints so boundary maxima and kinks are honoured.
/// Returns `(argmax, max)`.
pub fn golden_max<S: Real>(a: S, b: S, tol: S, mut f: impl FnMut(S) -> S) -> (S, S) {
    let fa = f(a);
    let fb = f(b);
    if b <= a {
        return (a, fa);
    }
    let inv_phi = S::lit(0.618_033_988_749_894_8);
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..400 {
        if hi - lo <= tol {
            break;
        }
        // NaN or -inf on one side moves the bracket toward the finite side.
        if f1 < f2 || (f1.is_nan() && !f2.is_nan()) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    let mut best = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    if best.1.is_nan() {
        best = (a, S::neg_infinity());
    }
    if fa >= best.1 {
        best = (a, fa);
    }
    if fb > best.1 {
        best = (b, fb);
    }
    best
}
