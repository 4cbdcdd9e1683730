//! Truncated probability mass functions over total photon number.

use crate::error::{invalid, Result};
use crate::exec;
use statrs::function::gamma::ln_gamma;

/// A probability mass function over photon number `0..=cutoff`.
///
/// Mass that falls beyond the cutoff is tracked explicitly in
/// `truncated_mass` and is never silently renormalized away: yields and
/// cumulative quantities computed from a `Pmf` reflect exactly the mass
/// the caller asked to keep.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    probs: Vec<f64>,
    truncated_mass: f64,
}

impl Pmf {
    /// Builds a `Pmf` from raw entries, validating non-negativity and that
    /// the total mass does not exceed one beyond rounding error.
    pub fn new(probs: Vec<f64>, truncated_mass: f64) -> Result<Self> {
        if probs.is_empty() {
            return invalid("pmf must have at least the zero-photon entry");
        }
        if probs.iter().any(|&p| !p.is_finite() || p < 0.0 || p > 1.0 + 1e-12) {
            return invalid("pmf entries must lie in [0, 1]");
        }
        if !(0.0..=1.0 + 1e-9).contains(&truncated_mass) {
            return invalid("truncated mass must lie in [0, 1]");
        }
        let total: f64 = probs.iter().sum::<f64>() + truncated_mass;
        if total > 1.0 + 1e-9 {
            return invalid(format!("pmf mass {total} exceeds 1"));
        }
        Ok(Pmf { probs, truncated_mass })
    }

    pub(crate) fn from_raw(probs: Vec<f64>, truncated_mass: f64) -> Self {
        Pmf { probs, truncated_mass: truncated_mass.max(0.0) }
    }

    /// Unit mass on photon number `n`.
    pub fn point_mass(n: usize) -> Self {
        let mut probs = vec![0.0; n + 1];
        probs[n] = 1.0;
        Pmf { probs, truncated_mass: 0.0 }
    }

    pub fn cutoff(&self) -> usize {
        self.probs.len() - 1
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// `P(n)`, zero beyond the cutoff.
    pub fn get(&self, n: usize) -> f64 {
        self.probs.get(n).copied().unwrap_or(0.0)
    }

    pub fn truncated_mass(&self) -> f64 {
        self.truncated_mass
    }

    /// Mass held by the in-range entries.
    pub fn total_in_range(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Mean over the in-range entries.
    pub fn mean(&self) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(n, p)| n as f64 * p)
            .sum()
    }

    /// Index of the largest entry; ties resolve to the smallest index.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (n, &p) in self.probs.iter().enumerate() {
            if p > self.probs[best] {
                best = n;
            }
        }
        best
    }

    /// `P(N <= n)` over the in-range entries.
    pub fn cumulative(&self, n: usize) -> f64 {
        self.probs.iter().take(n + 1).sum()
    }

    /// Convolution of two photon-number distributions, truncated at `cutoff`.
    ///
    /// Truncating intermediate results is exact for the in-range entries:
    /// photon totals only grow under convolution, so any mass dropped here
    /// would have ended above the cutoff anyway.
    pub fn convolve(&self, other: &Pmf, cutoff: usize) -> Pmf {
        let len = (self.probs.len() + other.probs.len() - 1).min(cutoff + 1);
        let probs = exec::map_range(len, |k| {
            let lo = k.saturating_sub(other.probs.len() - 1);
            let hi = k.min(self.probs.len() - 1);
            let mut acc = 0.0;
            for i in lo..=hi {
                acc += self.probs[i] * other.probs[k - i];
            }
            acc
        });
        let in_range: f64 = probs.iter().sum();
        Pmf::from_raw(probs, (1.0 - in_range).max(0.0))
    }

    /// `k`-fold self-convolution by squaring.
    pub fn convolve_power(&self, k: usize, cutoff: usize) -> Pmf {
        let mut acc = Pmf::point_mass(0);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.convolve(&base, cutoff);
            }
            k >>= 1;
            if k > 0 {
                base = base.convolve(&base, cutoff);
            }
        }
        acc
    }

    /// Binomial thinning: each photon independently survives with
    /// probability `eta`. Total mass is preserved.
    pub fn thinned(&self, eta: f64) -> Result<Pmf> {
        if !(0.0..=1.0).contains(&eta) {
            return invalid("transmission must lie in [0, 1]");
        }
        if eta == 1.0 {
            return Ok(self.clone());
        }
        if eta == 0.0 {
            let mut probs = vec![0.0; self.probs.len()];
            probs[0] = self.total_in_range();
            return Ok(Pmf::from_raw(probs, self.truncated_mass));
        }
        let c = self.cutoff();
        let lf = ln_factorial_table(c);
        let ln_eta = eta.ln();
        let ln_bar = (1.0 - eta).ln();
        let probs = exec::map_range(c + 1, |m| {
            let mut acc = 0.0;
            for n in m..=c {
                let p = self.probs[n];
                if p == 0.0 {
                    continue;
                }
                let ln_w = lf[n] - lf[m] - lf[n - m]
                    + m as f64 * ln_eta
                    + (n - m) as f64 * ln_bar;
                acc += p * ln_w.exp();
            }
            acc
        });
        Ok(Pmf::from_raw(probs, self.truncated_mass))
    }

    /// Inverse-CDF draw over the in-range entries (conditioned on the
    /// in-range mass). `u` must come from `[0, 1)`.
    pub fn sample_index(&self, u: f64) -> usize {
        let target = u * self.total_in_range();
        let mut acc = 0.0;
        for (n, &p) in self.probs.iter().enumerate() {
            acc += p;
            if target < acc {
                return n;
            }
        }
        self.cutoff()
    }
}

/// Binomial thinning of a photon-number distribution (free-function form).
pub fn binomial_thin(pmf: &Pmf, eta: f64) -> Result<Pmf> {
    pmf.thinned(eta)
}

/// `ln(n!)` for `n = 0..=max`.
pub(crate) fn ln_factorial_table(max: usize) -> Vec<f64> {
    (0..=max).map(|n| ln_gamma(n as f64 + 1.0)).collect()
}
