//! Nonlinear sequence acceleration for conditionally convergent sums.
//!
//! The momentum integrals behind every propagator here converge only in the
//! Abel sense: partial sums over oscillation half-periods alternate without
//! decaying. The epsilon algorithm applied to those partial sums extracts the
//! Abel limit; this module implements it as a streaming anti-diagonal update
//! so the quadrature engine can test convergence after every panel.

use crate::error::{Error, Result};
use crate::quad::ComplexSample;
use crate::Complex64;
use alloc::vec::Vec;

/// Streaming epsilon table over complex partial sums.
///
/// Appending Sₙ computes the anti-diagonal ε_k^{(n−k)} from the previous one:
///   ε_k = ε_{k−2}' + 1/(ε_{k−1} − ε_{k−1}'),   ε_{−1} = 0, ε_0 = Sₙ,
/// where primes denote the previous diagonal. The best estimate is the deepest
/// even column; the error estimate combines the last three best estimates.
pub(crate) struct EpsilonTable {
    prev: Vec<Complex64>,
    cur: Vec<Complex64>,
    /// Column cap: diagonals are truncated at 2·order + 1 entries.
    max_len: usize,
    /// Last three best estimates, newest last.
    recent: Vec<Complex64>,
    appended: usize,
    /// Set when two consecutive partial sums coincided exactly; the common
    /// value is then the limit of a terminated series.
    exact: Option<Complex64>,
}

impl EpsilonTable {
    pub(crate) fn new(order: usize) -> Self {
        EpsilonTable {
            prev: Vec::new(),
            cur: Vec::new(),
            max_len: 2 * order.max(1) + 1,
            recent: Vec::new(),
            appended: 0,
            exact: None,
        }
    }

    /// Append the next partial sum and return (best estimate, error estimate).
    pub(crate) fn append(&mut self, s: Complex64) -> (Complex64, f64) {
        self.appended += 1;
        if let Some(v) = self.exact {
            return (v, 0.0);
        }
        core::mem::swap(&mut self.prev, &mut self.cur);
        self.cur.clear();
        self.cur.push(s);
        let depth = self.prev.len().min(self.max_len - 1);
        for k in 1..=depth {
            let denom = self.cur[k - 1] - self.prev[k - 1];
            if denom.norm_sqr() == 0.0 {
                if k == 1 {
                    // Consecutive partial sums identical: series terminated.
                    self.exact = Some(s);
                    return (s, 0.0);
                }
                // A deeper column stalled; everything beyond it is noise.
                break;
            }
            let inv = denom.inv();
            if !inv.re.is_finite() || !inv.im.is_finite() {
                break;
            }
            let lower = if k >= 2 {
                self.prev[k - 2]
            } else {
                Complex64::new(0.0, 0.0)
            };
            // A denominator at rounding level means the column has stalled;
            // its reciprocal would be noise pointed in a random direction,
            // so stop the diagonal before it poisons deeper columns.
            if inv.norm() > 1e15 * (1.0 + lower.norm()) {
                break;
            }
            self.cur.push(lower + inv);
        }

        let best = self.best();
        self.recent.push(best);
        if self.recent.len() > 3 {
            self.recent.remove(0);
        }
        (best, self.error_estimate(best))
    }

    /// Deepest even-column entry of the newest diagonal.
    fn best(&self) -> Complex64 {
        let last_even = (self.cur.len() - 1) & !1usize;
        self.cur[last_even]
    }

    fn error_estimate(&self, best: Complex64) -> f64 {
        if self.recent.len() < 3 {
            return f64::INFINITY;
        }
        let mut err = 0.0;
        for v in &self.recent[..self.recent.len() - 1] {
            err += (best - v).norm();
        }
        // Never report below a few ulps of the estimate itself.
        err.max(best.norm() * 5e-16)
    }

    pub(crate) fn len(&self) -> usize {
        self.appended
    }
}

/// Limit estimate of a sequence of partial sums by the epsilon algorithm.
///
/// `order` bounds the table depth; the input must contain at least
/// `order + 2` entries. A sequence whose consecutive entries coincide exactly
/// is treated as terminated and returned with err_est = 0.
pub fn accelerate(partial_sums: &[Complex64], order: usize) -> Result<ComplexSample> {
    if order == 0 {
        return Err(Error::InvalidInput("accelerate: order must be positive"));
    }
    if partial_sums.len() < order + 2 {
        return Err(Error::InvalidInput(
            "accelerate: need at least order + 2 partial sums",
        ));
    }
    let mut table = EpsilonTable::new(order);
    let mut out = (Complex64::new(0.0, 0.0), f64::INFINITY);
    for &s in partial_sums {
        out = table.append(s);
    }
    Ok(ComplexSample {
        value: out.0,
        err_est: if out.1.is_finite() { out.1 } else { f64::MAX },
    })
}
