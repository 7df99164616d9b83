use crate::error::{usage, Result};

/// Bound on `|ML(n) − E[ℓ(n)]|` holding with probability `1 − p`, from `m`
/// samples, when fewer than a `1/split_k` fraction of the synchronizing
/// automata have shortest reset words longer than `max_length`:
///
/// `max_length·(split_k − 1)/split_k · √(ln(2/p) / (2m)) + tail/split_k`
///
/// where `tail` is `n³/6`, or `(n − 1)²` when the quadratic upper bound on
/// reset lengths is assumed.
///
/// `split_k` is a tail-splitting parameter unrelated to the alphabet size.
pub fn hoeffding_bound(
    max_length: f64,
    split_k: f64,
    p: f64,
    samples: u64,
    n: usize,
    cerny_assumed: bool,
) -> Result<f64> {
    if split_k.is_nan() || split_k < 1.0 {
        return Err(usage("split_k must be at least 1"));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(usage(
            "failure probability must lie strictly between 0 and 1",
        ));
    }
    if samples == 0 {
        return Err(usage("at least one sample is needed"));
    }
    if max_length.is_nan() || max_length < 0.0 {
        return Err(usage("length cap must be non-negative"));
    }
    let n = n as f64;
    let spread = max_length * (split_k - 1.0) / split_k;
    let deviation = ((2.0 / p).ln() / (2.0 * samples as f64)).sqrt();
    let tail = if cerny_assumed {
        (n - 1.0) * (n - 1.0)
    } else {
        n * n * n / 6.0
    };
    Ok(spread * deviation + tail / split_k)
}
