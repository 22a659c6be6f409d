//! Small numeric helpers used by several modules.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float as _;

/// log(sum(exp(v))) with the usual max shift. Ignores -inf entries; returns
/// -inf when every entry is -inf or the slice is empty.
pub(crate) fn logsumexp(values: &[f64]) -> f64 {
    let mut hi = f64::NEG_INFINITY;
    for &v in values {
        if v > hi {
            hi = v;
        }
    }
    if !hi.is_finite() {
        return f64::NEG_INFINITY;
    }
    let mut acc = 0.0;
    for &v in values {
        if v.is_finite() {
            acc += (v - hi).exp();
        }
    }
    hi + acc.ln()
}

/// Streaming variant of [`logsumexp`] for accumulating one term at a time.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LogSum {
    hi: f64,
    acc: f64,
}

impl LogSum {
    pub(crate) fn new() -> Self {
        LogSum {
            hi: f64::NEG_INFINITY,
            acc: 0.0,
        }
    }

    pub(crate) fn push(&mut self, v: f64) {
        if v == f64::NEG_INFINITY {
            return;
        }
        if v <= self.hi {
            self.acc += (v - self.hi).exp();
        } else {
            self.acc = self.acc * (self.hi - v).exp() + 1.0;
            self.hi = v;
        }
    }

    pub(crate) fn value(&self) -> f64 {
        if self.hi.is_finite() {
            self.hi + self.acc.ln()
        } else {
            f64::NEG_INFINITY
        }
    }
}

/// Bisects a monotone predicate on `[lo, hi]`, assuming `pred(lo) == false`
/// and `pred(hi) == true`, until the bracket is narrower than `tol`.
/// Returns the bracket midpoint and the iteration count.
pub(crate) fn bisect_predicate(
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    mut pred: impl FnMut(f64) -> bool,
) -> (f64, u32) {
    let mut iterations = 0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
    }
    (0.5 * (lo + hi), iterations)
}

/// Root of a strictly decreasing function on `[lo, hi]` with
/// `f(lo) >= 0 >= f(hi)`, to absolute tolerance `tol` on the argument.
pub(crate) fn bisect_decreasing(
    lo: f64,
    hi: f64,
    tol: f64,
    mut f: impl FnMut(f64) -> f64,
) -> (f64, (f64, f64), u32) {
    let (mut a, mut b) = (lo, hi);
    let mut iterations = 0;
    while b - a > tol {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if f(mid) > 0.0 {
            a = mid;
        } else {
            b = mid;
        }
        iterations += 1;
    }
    (0.5 * (a + b), (a, b), iterations)
}

pub(crate) fn vec_of<T: Clone>(value: T, len: usize) -> Vec<T> {
    let mut v = Vec::with_capacity(len);
    v.resize(len, value);
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn logsumexp_matches_direct_sum() {
        let vals = [0.0, core::f64::consts::LN_2, -1.0];
        let direct = (1.0f64 + 2.0 + (-1.0f64).exp()).ln();
        assert!((logsumexp(&vals) - direct).abs() < 1e-14);
    }

    #[test]
    fn logsumexp_survives_large_shifts() {
        let vals = [1000.0, 1000.0];
        assert!((logsumexp(&vals) - (1000.0 + core::f64::consts::LN_2)).abs() < 1e-12);
    }

    #[test]
    fn logsumexp_of_nothing_is_neg_inf() {
        assert_eq!(logsumexp(&[]), f64::NEG_INFINITY);
        assert_eq!(logsumexp(&[f64::NEG_INFINITY]), f64::NEG_INFINITY);
    }

    #[test]
    fn streaming_logsum_agrees_with_batch() {
        let vals = [0.3, -2.0, 5.5, 5.5, -40.0];
        let mut ls = LogSum::new();
        for &v in &vals {
            ls.push(v);
        }
        assert!((ls.value() - logsumexp(&vals)).abs() < 1e-13);
    }

    #[test]
    fn bisection_finds_threshold() {
        let (x, _) = bisect_predicate(0.0, 4.0, 1e-9, |t| t * t > 2.0);
        assert!((x - core::f64::consts::SQRT_2).abs() < 1e-8);
    }

    #[test]
    fn decreasing_root_is_bracketed() {
        let (x, (a, b), _) = bisect_decreasing(0.0, 10.0, 1e-10, |t| 3.0 - t);
        assert!(a <= 3.0 && 3.0 <= b);
        assert!((x - 3.0).abs() < 1e-9);
    }
}
