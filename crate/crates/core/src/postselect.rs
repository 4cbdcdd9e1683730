//! Probabilistic post-selection of samples by total photon number.
//!
//! Retaining a sample of total `N` with probability `(eta'/(c eta))^(N -
//! N0)` (and discarding everything above the cut-off `N0`) turns the
//! record of a lossy experiment with squeezing `{r_i}` and transmission
//! `eta` into samples distributed as a stronger-squeezing experiment
//! `{r_i'}` with the higher equivalent transmission `eta' = 1 - (1 -
//! eta) c`, where `c = tanh r_i / tanh r_i'` must be a single constant.

use crate::error::{invalid, numeric, Result};
use crate::fock::{total_photon_pmf, SqueezerBank};
use crate::patterns::OutputPattern;
use num_complex::Complex64;
use rand::Rng;

/// Retention rule parameters. Policies are immutable once built and cheap
/// to share.
#[derive(Debug, Clone, PartialEq)]
pub struct PostSelectionPolicy {
    c: f64,
    n0: usize,
    alpha: f64,
    discard_saturated: bool,
    variant: PolicyVariant,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PolicyVariant {
    Uniform { eta: f64, eta_prime: f64 },
    PerMode { etas: Vec<f64>, etas_prime: Vec<f64> },
    Cat { alpha_sq: f64, beta_sq: f64, eta: f64, eta_prime: f64 },
}

impl PostSelectionPolicy {
    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn n0(&self) -> usize {
        self.n0
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn variant(&self) -> &PolicyVariant {
        &self.variant
    }

    /// Overall transmission before post-selection (largest per-mode value
    /// for the per-mode variant).
    pub fn eta(&self) -> f64 {
        match &self.variant {
            PolicyVariant::Uniform { eta, .. } | PolicyVariant::Cat { eta, .. } => *eta,
            PolicyVariant::PerMode { etas, .. } => etas.iter().copied().fold(0.0, f64::max),
        }
    }

    /// Equivalent transmission after post-selection.
    pub fn eta_prime(&self) -> f64 {
        match &self.variant {
            PolicyVariant::Uniform { eta_prime, .. } | PolicyVariant::Cat { eta_prime, .. } => {
                *eta_prime
            }
            PolicyVariant::PerMode { etas_prime, .. } => {
                etas_prime.iter().copied().fold(0.0, f64::max)
            }
        }
    }

    /// Whether saturated records are discarded outright instead of being
    /// retained on their measured total.
    pub fn discards_saturated(&self) -> bool {
        self.discard_saturated
    }

    pub fn with_discard_saturated(mut self, discard: bool) -> Self {
        self.discard_saturated = discard;
        self
    }

    /// Retention probability for a full pattern, dispatching on the
    /// variant.
    pub fn retention_probability(&self, pattern: &OutputPattern) -> Result<f64> {
        match &self.variant {
            PolicyVariant::Uniform { .. } => Ok(post_selection_probability(self, pattern.total())),
            PolicyVariant::PerMode { .. } => post_selection_probability_nonuniform(self, pattern),
            PolicyVariant::Cat { alpha_sq, beta_sq, eta, eta_prime } => {
                cat_post_selection_probability_from_squares(
                    *alpha_sq,
                    *beta_sq,
                    *eta,
                    *eta_prime,
                    pattern.total(),
                    self.n0,
                )
            }
        }
    }
}

/// The constant `c = tanh r_i / tanh r_i'`, verified to be the same for
/// every squeezer and below one.
pub fn mapping_ratio(r: &[f64], r_prime: &[f64]) -> Result<f64> {
    if r.is_empty() || r.len() != r_prime.len() {
        return invalid("squeezing lists must be non-empty and of equal length");
    }
    if r.iter().chain(r_prime.iter()).any(|x| !(*x > 0.0) || !x.is_finite()) {
        return invalid("squeezing strengths must be positive");
    }
    let c = r[0].tanh() / r_prime[0].tanh();
    for i in 1..r.len() {
        let ci = r[i].tanh() / r_prime[i].tanh();
        if (ci - c).abs() > 1e-10 {
            return invalid(format!(
                "inputs not mappable: tanh ratios {c} and {ci} differ"
            ));
        }
    }
    if c >= 1.0 {
        return invalid("loss mitigation needs r' > r, i.e. a tanh ratio below 1");
    }
    Ok(c)
}

/// `eta' = 1 - (1 - eta) c`.
pub fn equivalent_transmission(eta: f64, c: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&eta) {
        return invalid("transmission must lie in [0, 1]");
    }
    if !(c > 0.0 && c < 1.0) {
        return invalid("mapping ratio must lie in (0, 1)");
    }
    Ok(1.0 - (1.0 - eta) * c)
}

/// Supremum of the equivalent transmission over all target strengths:
/// `eta'_max = 1 - (1 - eta) tanh r`.
pub fn max_equivalent_transmission(eta: f64, r: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&eta) {
        return invalid("transmission must lie in [0, 1]");
    }
    if !(r > 0.0) || !r.is_finite() {
        return invalid("squeezing strength must be positive");
    }
    Ok(1.0 - (1.0 - eta) * r.tanh())
}

fn exponent_alpha(n0: usize, ln_ratio_at_n0: f64, ln_c: f64) -> f64 {
    // solves retention(N0) = 1 for the exponent in c^(alpha - N) * w^N
    n0 as f64 * (1.0 - ln_ratio_at_n0 / ln_c)
}

/// Builds a uniform-loss policy from the actual and target squeezing
/// strengths, the overall transmission, and the cut-off photon number.
pub fn build_policy(
    r: &[f64],
    r_prime: &[f64],
    eta: f64,
    n0: usize,
) -> Result<PostSelectionPolicy> {
    let c = mapping_ratio(r, r_prime)?;
    if !(eta > 0.0 && eta <= 1.0) {
        return invalid("transmission must lie in (0, 1]");
    }
    let eta_prime = equivalent_transmission(eta, c)?;
    let alpha = exponent_alpha(n0, (eta_prime / eta).ln(), c.ln());
    let policy = PostSelectionPolicy {
        c,
        n0,
        alpha,
        discard_saturated: false,
        variant: PolicyVariant::Uniform { eta, eta_prime },
    };
    // the closed form (eta'/(c eta))^(N - N0) must agree with the
    // two-parameter form c^(alpha - N) (eta'/eta)^N it was solved from
    for n in [0usize, n0 / 2, n0] {
        let direct =
            ((alpha - n as f64) * c.ln() + n as f64 * (eta_prime / eta).ln()).exp();
        let closed = post_selection_probability(&policy, n);
        if (direct - closed).abs() > 1e-9 * closed.max(1e-12) {
            return numeric("retention closed form disagrees with its defining equation");
        }
    }
    Ok(policy)
}

/// Per-mode variant: mode `i` has its own transmission `etas[i]` and
/// equivalent transmission `1 - (1 - etas[i]) c`. The exponent is chosen
/// so the retention probability peaks at exactly one over the patterns
/// with total `n0`.
pub fn build_policy_per_mode(
    r: &[f64],
    r_prime: &[f64],
    etas: &[f64],
    n0: usize,
) -> Result<PostSelectionPolicy> {
    let c = mapping_ratio(r, r_prime)?;
    if etas.is_empty() || etas.iter().any(|e| !(*e > 0.0 && *e <= 1.0)) {
        return invalid("every per-mode transmission must lie in (0, 1]");
    }
    let etas_prime: Vec<f64> = etas.iter().map(|&e| 1.0 - (1.0 - e) * c).collect();
    // the per-photon weight eta_i'/eta_i is largest on the lossiest mode
    let max_ln_ratio = etas
        .iter()
        .zip(&etas_prime)
        .map(|(&e, &ep)| (ep / e).ln())
        .fold(f64::NEG_INFINITY, f64::max);
    let alpha = exponent_alpha(n0, max_ln_ratio, c.ln());
    Ok(PostSelectionPolicy {
        c,
        n0,
        alpha,
        discard_saturated: false,
        variant: PolicyVariant::PerMode { etas: etas.to_vec(), etas_prime },
    })
}

/// Cat-state variant: inputs `(|a> + |-a>)`-type states with amplitude
/// `alpha` mapped to target amplitude `beta`. The role of the tanh ratio
/// is played by `|alpha|^2 / |beta|^2`.
pub fn build_policy_cat(
    alpha: Complex64,
    beta: Complex64,
    eta: f64,
    n0: usize,
) -> Result<PostSelectionPolicy> {
    let alpha_sq = alpha.norm_sqr();
    let beta_sq = beta.norm_sqr();
    if alpha_sq == 0.0 || beta_sq == 0.0 {
        return invalid("cat amplitudes must be non-zero");
    }
    let c = alpha_sq / beta_sq;
    if c >= 1.0 {
        return invalid("cat mitigation needs |beta| > |alpha|");
    }
    if !(eta > 0.0 && eta <= 1.0) {
        return invalid("transmission must lie in (0, 1]");
    }
    let eta_prime = equivalent_transmission(eta, c)?;
    let alpha_exp = exponent_alpha(n0, (eta_prime / eta).ln(), c.ln());
    Ok(PostSelectionPolicy {
        c,
        n0,
        alpha: alpha_exp,
        discard_saturated: false,
        variant: PolicyVariant::Cat { alpha_sq, beta_sq, eta, eta_prime },
    })
}

/// Retention probability by total photon number:
/// `(eta'/(c eta))^(total - N0)` up to the cut-off, zero above it.
pub fn post_selection_probability(policy: &PostSelectionPolicy, total: usize) -> f64 {
    if total > policy.n0 {
        return 0.0;
    }
    let (eta, eta_prime) = match &policy.variant {
        PolicyVariant::Uniform { eta, eta_prime } => (*eta, *eta_prime),
        PolicyVariant::Cat { eta, eta_prime, .. } => (*eta, *eta_prime),
        PolicyVariant::PerMode { .. } => {
            // callers must go through the pattern-level form
            return f64::NAN;
        }
    };
    let ratio = eta_prime / (policy.c * eta);
    ratio.powi(total as i32 - policy.n0 as i32)
}

/// Per-mode retention probability
/// `c^(alpha - |pattern|) * prod_i (eta_i'/eta_i)^(n_i)`.
pub fn post_selection_probability_nonuniform(
    policy: &PostSelectionPolicy,
    pattern: &OutputPattern,
) -> Result<f64> {
    let (etas, etas_prime) = match &policy.variant {
        PolicyVariant::PerMode { etas, etas_prime } => (etas, etas_prime),
        _ => return invalid("policy is not the per-mode variant"),
    };
    if pattern.modes() != etas.len() {
        return invalid("pattern length must match the per-mode transmission list");
    }
    let total = pattern.total();
    if total > policy.n0 {
        return Ok(0.0);
    }
    let mut ln_p = (policy.alpha - total as f64) * policy.c.ln();
    for (i, &n) in pattern.counts().iter().enumerate() {
        if n == 0 {
            continue;
        }
        if etas[i] == 0.0 {
            return invalid(format!("mode {i} has zero transmission but {n} photons"));
        }
        ln_p += n as f64 * (etas_prime[i] / etas[i]).ln();
    }
    Ok(ln_p.exp())
}

/// Cat-input retention probability: the ratio of target to actual
/// total-photon distributions times `(eta'/eta)^total`, normalized to one
/// at the cut-off. Odd totals never occur for even cat states and are
/// discarded.
pub fn cat_post_selection_probability(
    alpha: Complex64,
    beta: Complex64,
    eta: f64,
    eta_prime: f64,
    total: usize,
    n0: usize,
) -> Result<f64> {
    cat_post_selection_probability_from_squares(
        alpha.norm_sqr(),
        beta.norm_sqr(),
        eta,
        eta_prime,
        total,
        n0,
    )
}

fn cat_post_selection_probability_from_squares(
    alpha_sq: f64,
    beta_sq: f64,
    eta: f64,
    eta_prime: f64,
    total: usize,
    n0: usize,
) -> Result<f64> {
    if alpha_sq <= 0.0 || beta_sq <= 0.0 {
        return invalid("cat amplitudes must be non-zero");
    }
    if !(eta > 0.0 && eta <= 1.0) || !(eta_prime > 0.0 && eta_prime <= 1.0) {
        return invalid("transmissions must lie in (0, 1]");
    }
    if total > n0 || total % 2 == 1 {
        return Ok(0.0);
    }
    // P_beta(N)/P_alpha(N) * (eta'/eta)^N, with constants cancelling in the
    // normalization at N0
    let step = (beta_sq / alpha_sq) * (eta_prime / eta);
    Ok(step.powi(total as i32 - n0 as i32))
}

/// One sample drawn from an experiment, before or after post-selection.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleRecord {
    pub id: u64,
    pub pattern: OutputPattern,
    pub saturated: bool,
    pub dark_suspect: bool,
    /// Set by [`apply_postselection`].
    pub retained: Option<bool>,
    /// Set by [`apply_postselection`].
    pub retention_probability: Option<f64>,
}

impl SampleRecord {
    pub fn new(id: u64, pattern: OutputPattern) -> Self {
        SampleRecord {
            id,
            pattern,
            saturated: false,
            dark_suspect: false,
            retained: None,
            retention_probability: None,
        }
    }

    pub fn total(&self) -> usize {
        self.pattern.total()
    }
}

/// Annotates every record with its retention probability and draw, in
/// input order. Exactly one uniform is consumed per record, so the
/// retained subsequence is reproducible per seed.
pub fn apply_postselection<I, R>(
    records: I,
    policy: &PostSelectionPolicy,
    rng: &mut R,
) -> Result<Vec<SampleRecord>>
where
    I: IntoIterator<Item = SampleRecord>,
    R: Rng + ?Sized,
{
    let mut out = Vec::new();
    for mut record in records {
        let p = if record.saturated && policy.discard_saturated {
            0.0
        } else {
            policy.retention_probability(&record.pattern)?
        };
        let u: f64 = rng.gen();
        record.retention_probability = Some(p);
        record.retained = Some(u < p);
        out.push(record);
    }
    Ok(out)
}

/// Expected retained fraction, with truncation metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct YieldEstimate {
    pub value: f64,
    pub truncated_mass: f64,
    /// Set when the photon-number cutoff left more than `1e-9` of mass
    /// unaccounted for.
    pub truncation_warning: bool,
}

/// Asymptotic yield of a uniform policy: the retention-weighted mass of
/// the lossy total-photon-number distribution up to the cut-off.
pub fn yield_fraction(
    policy: &PostSelectionPolicy,
    bank: &SqueezerBank,
    eta: f64,
) -> Result<YieldEstimate> {
    let policy_eta = match &policy.variant {
        PolicyVariant::Uniform { eta, .. } => *eta,
        _ => return invalid("yield is defined for the uniform policy variant"),
    };
    if (policy_eta - eta).abs() > 1e-12 {
        return invalid(format!(
            "policy was built for transmission {policy_eta}, not {eta}"
        ));
    }
    let cutoff = bank.suggested_cutoff().max(policy.n0());
    let lossy = total_photon_pmf(bank, cutoff).thinned(eta)?;
    let mut value = 0.0;
    for n in 0..=policy.n0().min(lossy.cutoff()) {
        let p = lossy.get(n);
        if p > 0.0 {
            value += p * post_selection_probability(policy, n);
        }
    }
    let truncated = lossy.truncated_mass();
    Ok(YieldEstimate {
        value,
        truncated_mass: truncated,
        truncation_warning: truncated > 1e-9,
    })
}

/// Largest measured total in a set of records; the default cut-off choice,
/// which retains the highest-photon samples with certainty.
pub fn default_cutoff_from_records(records: &[SampleRecord]) -> Option<usize> {
    records.iter().map(|r| r.total()).max()
}
