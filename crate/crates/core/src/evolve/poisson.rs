//! Certified truncation of the Poisson-weighted kick series.

use super::EvolveError;

/// Truncation point of the series `exp(-gamma t) sum_k (gamma t)^k / k!`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesTruncation {
    /// The Poisson mean `gamma t`.
    pub mean: f64,
    /// Terms `k = 0..=k_max` are kept.
    pub k_max: usize,
    /// Exact neglected upper-tail mass, plus the scan remainder beyond the
    /// summation window (itself bounded below tol/1000).
    pub tail_bound: f64,
}

/// Chernoff bound on the Poisson upper tail `P(X >= k)` for mean `m`:
/// `exp(-m) (e m / k)^k`. Trivial (1) at or below the mean.
fn chernoff_upper_tail(mean: f64, k: usize) -> f64 {
    let kf = k as f64;
    if kf <= mean {
        return 1.0;
    }
    (kf - mean + kf * (mean / kf).ln()).exp()
}

/// Poisson weights `exp(-m) m^k / k!` for `k = 0..=k_max`, evaluated in log
/// space so that means beyond ~700 do not overflow intermediates.
pub fn poisson_weights(mean: f64, k_max: usize) -> Vec<f64> {
    let mut weights = Vec::with_capacity(k_max + 1);
    if mean == 0.0 {
        weights.push(1.0);
        weights.resize(k_max + 1, 0.0);
        return weights;
    }
    let ln_mean = mean.ln();
    // compensated summation: the accumulated log reaches O(mean), so a plain
    // running sum would cost ~mean * eps of absolute (hence relative) error
    let mut ln_w = -mean; // ln w_0
    let mut residue = 0.0f64;
    for k in 0..=k_max {
        weights.push(ln_w.exp());
        let term = ln_mean - ((k + 1) as f64).ln() - residue;
        let next = ln_w + term;
        residue = (next - ln_w) - term;
        ln_w = next;
    }
    weights
}

/// Smallest `k_max` whose exact Poisson upper-tail mass is at most `tol`,
/// located by a Chernoff scan and refined by backward summation of the exact
/// weights. The reported `tail_bound` is the exact computed tail. The result
/// always satisfies `k_max >= ceil(gamma_t)`.
pub fn poisson_kmax(gamma_t: f64, tol: f64) -> Result<SeriesTruncation, EvolveError> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(EvolveError::InvalidTolerance(tol));
    }
    if !gamma_t.is_finite() || gamma_t < 0.0 {
        return Err(EvolveError::InvalidTime(gamma_t));
    }
    if gamma_t == 0.0 {
        return Ok(SeriesTruncation { mean: 0.0, k_max: 0, tail_bound: 0.0 });
    }

    // Scan for a point where even the crude bound is far below tol; the
    // margin keeps the unsummed remainder negligible against the answer.
    let margin = tol * 1e-3;
    let cap = 100_000_000usize;
    let mut k_hi = gamma_t.ceil() as usize + 1;
    while chernoff_upper_tail(gamma_t, k_hi + 1) > margin {
        k_hi += 1 + k_hi / 8;
        if k_hi > cap {
            return Err(EvolveError::SeriesTooLong { needed: k_hi, cap });
        }
    }

    let weights = poisson_weights(gamma_t, k_hi);
    let remainder = chernoff_upper_tail(gamma_t, k_hi + 1);

    // tail(k) = sum_{j > k} w_j + remainder; grow it downward from k_hi
    // while it still fits under tol.
    let mut tail = remainder;
    let mut k = k_hi;
    while k > 0 && tail + weights[k] <= tol {
        tail += weights[k];
        k -= 1;
    }

    let floor = gamma_t.ceil() as usize;
    if k < floor {
        // invariant k_max >= ceil(gamma t): recompute the (smaller) tail
        k = floor;
        tail = remainder + weights[k + 1..].iter().rev().sum::<f64>();
    }
    Ok(SeriesTruncation { mean: gamma_t, k_max: k, tail_bound: tail })
}
