//! Exact binomial tails and the Clopper–Pearson lower limit.
//!
//! A claim "the failure probability is at most `bound`" fails only when the
//! lower two-sided 99% Clopper–Pearson limit of the observed failure rate
//! exceeds `bound`. The confidence radius reported next to the rate is
//! `rate - lower`, so `rate <= bound + radius` is the same test.

use statrs::function::beta::beta_reg;

pub const CONFIDENCE: f64 = 0.99;

/// `P(X >= x)` for `X ~ Bin(trials, p)`, via `I_p(x, trials - x + 1)`.
pub fn upper_tail(x: u64, trials: u64, p: f64) -> f64 {
    if x == 0 {
        return 1.0;
    }
    if x > trials || p <= 0.0 {
        return 0.0;
    }
    if p >= 1.0 {
        return 1.0;
    }
    beta_reg(x as f64, (trials - x + 1) as f64, p)
}

/// The `p` at which `P(X >= failures) = (1 - confidence) / 2`, found by
/// bisection; 0 when nothing failed.
pub fn clopper_pearson_lower(failures: u64, trials: u64, confidence: f64) -> f64 {
    assert!(failures <= trials, "more failures than trials");
    if failures == 0 {
        return 0.0;
    }
    let alpha = (1.0 - confidence) / 2.0;
    let (mut lo, mut hi) = (0.0f64, failures as f64 / trials as f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if upper_tail(failures, trials, mid) < alpha {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    lo
}

pub fn confidence_radius(failures: u64, trials: u64) -> f64 {
    if trials == 0 {
        return 0.0;
    }
    let rate = failures as f64 / trials as f64;
    rate - clopper_pearson_lower(failures, trials, CONFIDENCE)
}
