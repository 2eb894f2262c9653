//! Majorization between a candidate spectrum and a sequence of squared
//! frame-vector norms, plus a sampler over the feasible spectra.
//!
//! A non-increasing positive `lambda` of length `n` majorizes `alpha`
//! when every prefix sum of `lambda` dominates the matching prefix of
//! `alpha` and the total sums agree. By the Schur-Horn correspondence,
//! such spectra are exactly the frame-operator spectra realizable with
//! vector norms `alpha`, so sampling spectra stands in for sampling
//! frames.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{defaults, Error, Result};

/// Does `lambda` majorize `alpha`?
///
/// `lambda` must already be sorted non-increasing; an unsorted input is an
/// error, not a silent sort. Prefix inequalities are checked for the first
/// `n - 1` counts and the total sums must agree to `1e-10` relative.
pub fn majorizes(lambda: &[f64], alpha: &[f64]) -> Result<bool> {
    if lambda.is_empty() {
        return Err(Error::Value("lambda must be non-empty".into()));
    }
    if lambda.iter().any(|x| !x.is_finite() || *x <= 0.0) {
        return Err(Error::Value("lambda entries must be positive finite".into()));
    }
    if lambda.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::Value(
            "lambda must be sorted non-increasing; refusing to sort implicitly".into(),
        ));
    }
    if alpha.iter().any(|x| !x.is_finite() || *x <= 0.0) {
        return Err(Error::Value("alpha entries must be positive finite".into()));
    }
    let n = lambda.len();
    if alpha.len() < n {
        return Err(Error::Value(format!(
            "alpha must have at least n = {n} entries, got {}",
            alpha.len()
        )));
    }

    let total_alpha: f64 = alpha.iter().sum();
    let slack = 1e-12 * total_alpha.abs().max(1.0);
    let mut lam_prefix = 0.0;
    let mut alp_prefix = 0.0;
    for m in 0..n - 1 {
        lam_prefix += lambda[m];
        alp_prefix += alpha[m];
        if lam_prefix < alp_prefix - slack {
            return Ok(false);
        }
    }
    let total_lambda: f64 = lambda.iter().sum();
    let tol = 1e-10 * total_alpha.abs().max(total_lambda.abs()).max(1e-300);
    Ok((total_lambda - total_alpha).abs() <= tol)
}

/// Validate the feasibility conditions on a norm sequence: positive,
/// non-increasing, and first entry at most the mean `sum / n`. The boundary
/// case `alpha_1 == sum / n` is accepted.
pub fn check_alpha_conditions(alpha: &[f64], n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Value("spectrum dimension must be positive".into()));
    }
    if alpha.len() < n {
        return Err(Error::AlphaCondition("sequence shorter than the dimension"));
    }
    if alpha.iter().any(|x| !x.is_finite() || *x <= 0.0) {
        return Err(Error::AlphaCondition("entries must be positive and finite"));
    }
    if alpha.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::AlphaCondition("sequence must be non-increasing"));
    }
    let mean = alpha.iter().sum::<f64>() / n as f64;
    if alpha[0] > mean * (1.0 + 1e-12) {
        return Err(Error::AlphaCondition(
            "first entry exceeds sum / n; no feasible spectrum exists",
        ));
    }
    Ok(())
}

/// Draw a feasible spectrum `lambda` of length `n` with `lambda` majorizing
/// `alpha`, deterministically per `seed`.
///
/// The walk starts at the flat spectrum (mean in every entry, always
/// feasible) and applies random mass transfers from a lower-indexed to a
/// higher-indexed entry, each capped so every prefix constraint keeps
/// non-negative slack; sorting the result restores the non-increasing
/// order without breaking majorization, since descending prefix sums
/// dominate those of any other arrangement. The flat spectrum itself lies
/// in the closure of the sampler's support (all transfers can be
/// arbitrarily small).
pub fn sample_feasible_spectrum(alpha: &[f64], n: usize, seed: u64) -> Result<Vec<f64>> {
    check_alpha_conditions(alpha, n)?;

    let total: f64 = alpha.iter().sum();
    let mean = total / n as f64;
    let mut lambda = vec![mean; n];
    if n == 1 {
        return Ok(lambda);
    }

    let alpha_prefix: Vec<f64> = alpha[..n]
        .iter()
        .scan(0.0, |acc, x| {
            *acc += x;
            Some(*acc)
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..defaults::SAMPLER_TRANSFERS {
        let i = rng.random_range(0..n - 1);
        let j = rng.random_range(i + 1..n);
        // Moving mass from entry i to entry j > i lowers the prefix sums for
        // counts i+1 ..= j; those must stay at or above the alpha prefixes.
        let mut min_slack = f64::INFINITY;
        let mut prefix = 0.0;
        for (pos, l) in lambda.iter().enumerate().take(j) {
            prefix += l;
            if pos >= i {
                min_slack = min_slack.min(prefix - alpha_prefix[pos]);
            }
        }
        let cap = (0.95 * min_slack).min(0.9 * lambda[i]);
        if cap <= 0.0 {
            continue;
        }
        let delta = rng.random_range(0.0..1.0) * cap;
        lambda[i] -= delta;
        lambda[j] += delta;
    }

    lambda.sort_by(|a, b| b.total_cmp(a));
    Ok(lambda)
}
