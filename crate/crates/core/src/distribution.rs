//! Output-pattern distributions of small squeezed-light experiments,
//! computed by three independent routes: the permanent-based double sum,
//! direct state-vector evolution (used for the loss-mode embedding), and
//! the hafnian form driven by the output covariance matrix.

use crate::error::{invalid, numeric, Result};
use crate::exec;
use crate::fock::{smss_amplitudes, smss_photon_pmf, SqueezerBank};
use crate::hafnian::hafnian;
use crate::linalg;
use crate::linops::{complexify, embed_per_mode_loss, embed_uniform_loss, Interferometer};
use crate::patterns::{patterns_up_to, OutputPattern};
use crate::pmf::Pmf;
use crate::statevec::evolve_squeezed_input;
use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;
use std::collections::BTreeMap;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Brute-force scale caps. The double sums grow combinatorially, so
/// anything larger must fail loudly instead of hanging.
pub const MAX_BRUTE_FORCE_MODES: usize = 6;
pub const MAX_BRUTE_FORCE_TOTAL: usize = 10;

fn check_caps(modes: usize, cutoff: usize) -> Result<()> {
    if modes > MAX_BRUTE_FORCE_MODES {
        return crate::error::scale_cap(format!(
            "brute-force distributions support at most {MAX_BRUTE_FORCE_MODES} modes, got {modes}"
        ));
    }
    if cutoff > MAX_BRUTE_FORCE_TOTAL {
        return crate::error::scale_cap(format!(
            "brute-force distributions support totals up to {MAX_BRUTE_FORCE_TOTAL}, got {cutoff}"
        ));
    }
    Ok(())
}

/// A probability map over output patterns with total photon number up to
/// `cutoff`. Iteration order is lexicographic; mass beyond the cutoff is
/// reported, never renormalized away.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternDistribution {
    entries: BTreeMap<OutputPattern, f64>,
    mode_count: usize,
    cutoff: usize,
    truncated_mass: f64,
}

impl PatternDistribution {
    pub(crate) fn from_pairs(
        mode_count: usize,
        cutoff: usize,
        pairs: Vec<(OutputPattern, f64)>,
    ) -> Self {
        let entries: BTreeMap<OutputPattern, f64> = pairs.into_iter().collect();
        let total: f64 = entries.values().sum();
        PatternDistribution {
            entries,
            mode_count,
            cutoff,
            truncated_mass: (1.0 - total).max(0.0),
        }
    }

    pub fn get(&self, pattern: &OutputPattern) -> f64 {
        self.entries.get(pattern).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&OutputPattern, f64)> {
        self.entries.iter().map(|(p, &v)| (p, v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn truncated_mass(&self) -> f64 {
        self.truncated_mass
    }

    pub fn total_in_range(&self) -> f64 {
        self.entries.values().sum()
    }

    /// Distribution of the total photon number.
    pub fn total_photon_marginal(&self) -> Pmf {
        let mut probs = vec![0.0; self.cutoff + 1];
        for (pattern, p) in self.iter() {
            probs[pattern.total()] += p;
        }
        Pmf::from_raw(probs, self.truncated_mass)
    }

    /// Total-variation distance over the union of supports.
    pub fn tv_distance(&self, other: &PatternDistribution) -> f64 {
        let mut acc = 0.0;
        for (pattern, p) in self.iter() {
            acc += (p - other.get(pattern)).abs();
        }
        for (pattern, q) in other.iter() {
            if !self.entries.contains_key(pattern) {
                acc += q.abs();
            }
        }
        acc / 2.0
    }

    /// The conditional distribution given `total <= max_total`.
    pub fn restricted_renormalized(&self, max_total: usize) -> PatternDistribution {
        let kept: Vec<(OutputPattern, f64)> = self
            .iter()
            .filter(|(p, _)| p.total() <= max_total)
            .map(|(p, v)| (p.clone(), v))
            .collect();
        let mass: f64 = kept.iter().map(|(_, v)| v).sum();
        let entries = kept
            .into_iter()
            .map(|(p, v)| (p, if mass > 0.0 { v / mass } else { 0.0 }))
            .collect();
        PatternDistribution {
            entries,
            mode_count: self.mode_count,
            cutoff: max_total,
            truncated_mass: 0.0,
        }
    }

    /// Reweights every pattern by `weight(pattern)` and renormalizes.
    pub fn reweighted_renormalized<F>(&self, weight: F) -> PatternDistribution
    where
        F: Fn(&OutputPattern) -> f64,
    {
        let kept: Vec<(OutputPattern, f64)> = self
            .iter()
            .map(|(p, v)| {
                let w = weight(p);
                (p.clone(), v * w)
            })
            .collect();
        let mass: f64 = kept.iter().map(|(_, v)| v).sum();
        let entries = kept
            .into_iter()
            .filter(|(_, v)| *v > 0.0 || mass == 0.0)
            .map(|(p, v)| (p, if mass > 0.0 { v / mass } else { 0.0 }))
            .collect();
        PatternDistribution {
            entries,
            mode_count: self.mode_count,
            cutoff: self.cutoff,
            truncated_mass: 0.0,
        }
    }
}

/// Inverse-CDF sampler over a pattern distribution, conditioned on the
/// in-range mass. The cumulative table follows the lexicographic pattern
/// order, so draws are reproducible across runs and thread counts.
#[derive(Debug, Clone)]
pub struct PatternSampler {
    patterns: Vec<OutputPattern>,
    cdf: Vec<f64>,
}

impl PatternSampler {
    pub fn new(dist: &PatternDistribution) -> Result<Self> {
        let mut patterns = Vec::with_capacity(dist.len());
        let mut cdf = Vec::with_capacity(dist.len());
        let mut acc = 0.0;
        for (pattern, p) in dist.iter() {
            acc += p;
            patterns.push(pattern.clone());
            cdf.push(acc);
        }
        if !(acc > 0.0) {
            return invalid("cannot sample from an empty distribution");
        }
        Ok(PatternSampler { patterns, cdf })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> OutputPattern {
        let total = *self.cdf.last().expect("non-empty by construction");
        let u: f64 = rng.gen::<f64>() * total;
        let idx = self.cdf.partition_point(|&c| c <= u);
        self.patterns[idx.min(self.patterns.len() - 1)].clone()
    }
}

/// Per-mode amplitude tables of the input state (squeezers first, vacuum
/// elsewhere), and every input pattern with a non-zero coefficient,
/// grouped by total photon number.
fn input_expansion(
    tables: &[Vec<Complex64>],
    cutoff: usize,
) -> Vec<Vec<(OutputPattern, Complex64)>> {
    let modes = tables.len();
    let mut by_total: Vec<Vec<(OutputPattern, Complex64)>> = vec![Vec::new(); cutoff + 1];
    let mut counts = vec![0usize; modes];
    expand(tables, cutoff, 0, 0, Complex64::new(1.0, 0.0), &mut counts, &mut by_total);
    by_total
}

fn expand(
    tables: &[Vec<Complex64>],
    cutoff: usize,
    mode: usize,
    used: usize,
    coeff: Complex64,
    counts: &mut Vec<usize>,
    by_total: &mut Vec<Vec<(OutputPattern, Complex64)>>,
) {
    if mode == tables.len() {
        by_total[used].push((OutputPattern::new(counts.clone()), coeff));
        return;
    }
    for n in 0..=(cutoff - used) {
        let a = tables[mode][n];
        if a == ZERO {
            continue;
        }
        counts[mode] = n;
        expand(tables, cutoff, mode + 1, used + n, coeff * a, counts, by_total);
    }
    counts[mode] = 0;
}

fn squeezed_amplitude_tables(bank: &SqueezerBank, cutoff: usize) -> Result<Vec<Vec<Complex64>>> {
    (0..bank.mode_count())
        .map(|i| {
            let r = bank.squeezing_of_mode(i);
            if r == 0.0 {
                let mut t = vec![ZERO; cutoff + 1];
                t[0] = Complex64::new(1.0, 0.0);
                Ok(t)
            } else {
                smss_amplitudes(r, bank.phase_of_mode(i), cutoff)
            }
        })
        .collect()
}

fn pure_state_probability(
    inputs: &[Vec<(OutputPattern, Complex64)>],
    interferometer: &Interferometer,
    output: &OutputPattern,
) -> f64 {
    let total = output.total();
    let mut amp = ZERO;
    for (input, coeff) in &inputs[total] {
        let v = crate::linops::transition_amplitude(interferometer, input, output)
            .expect("patterns validated against the mode count");
        amp += coeff * v;
    }
    amp.norm_sqr()
}

/// Lossless output distribution by the permanent-based double sum over
/// input amplitudes.
pub fn lossless_output_distribution(
    bank: &SqueezerBank,
    interferometer: &Interferometer,
    cutoff: usize,
) -> Result<PatternDistribution> {
    let m = bank.mode_count();
    check_caps(m, cutoff)?;
    if interferometer.mode_count() != m {
        return invalid("bank and interferometer mode counts differ");
    }
    let tables = squeezed_amplitude_tables(bank, cutoff)?;
    let inputs = input_expansion(&tables, cutoff);
    let outputs = patterns_up_to(m, cutoff);
    let probs = exec::map_slice(&outputs, |out| {
        pure_state_probability(&inputs, interferometer, out)
    });
    Ok(PatternDistribution::from_pairs(
        m,
        cutoff,
        outputs.into_iter().zip(probs).collect(),
    ))
}

/// Probability of a single output pattern on the lossless network.
pub fn lossless_pattern_probability(
    bank: &SqueezerBank,
    interferometer: &Interferometer,
    output: &OutputPattern,
) -> Result<f64> {
    let m = bank.mode_count();
    check_caps(m, output.total())?;
    if interferometer.mode_count() != m || output.modes() != m {
        return invalid("pattern, bank, and interferometer mode counts differ");
    }
    let tables = squeezed_amplitude_tables(bank, output.total())?;
    let inputs = input_expansion(&tables, output.total());
    Ok(pure_state_probability(&inputs, interferometer, output))
}

/// Lossy output distribution through the loss-mode embedding: each signal
/// mode is coupled to a vacuum loss mode by a beamsplitter of transmission
/// `eta`, the doubled register is evolved exactly, and the loss modes are
/// summed out. This is the authoritative lossy distribution.
pub fn lossy_output_distribution(
    bank: &SqueezerBank,
    interferometer: &Interferometer,
    eta: f64,
    cutoff: usize,
) -> Result<PatternDistribution> {
    let m = bank.mode_count();
    check_caps(m, cutoff)?;
    if interferometer.mode_count() != m {
        return invalid("bank and interferometer mode counts differ");
    }
    let loss = complexify(&embed_uniform_loss(eta, m)?);
    // loss layer feeds the network; for uniform loss the order is immaterial
    let net = linalg::block_extend(interferometer.matrix()).dot(&loss);
    marginal_over_loss_modes(bank, net, m, cutoff)
}

/// Lossy output distribution where mode `i` sees its own transmission
/// `etas[i]`, modelling unequal detector efficiencies: the loss layer sits
/// between the network and the detectors.
pub fn lossy_output_distribution_per_mode(
    bank: &SqueezerBank,
    interferometer: &Interferometer,
    etas: &[f64],
    cutoff: usize,
) -> Result<PatternDistribution> {
    let m = bank.mode_count();
    check_caps(m, cutoff)?;
    if interferometer.mode_count() != m || etas.len() != m {
        return invalid("bank, interferometer, and transmission lists must agree");
    }
    let loss = complexify(&embed_per_mode_loss(etas)?);
    let net = loss.dot(&linalg::block_extend(interferometer.matrix()));
    marginal_over_loss_modes(bank, net, m, cutoff)
}

fn marginal_over_loss_modes(
    bank: &SqueezerBank,
    net: Array2<Complex64>,
    m: usize,
    cutoff: usize,
) -> Result<PatternDistribution> {
    let wide_bank = bank.widened(2 * m)?;
    let embedded = Interferometer::new(net)?;
    let state = evolve_squeezed_input(&wide_bank, &embedded, cutoff)?;
    Ok(PatternDistribution::from_pairs(
        m,
        cutoff,
        state.marginal_probabilities(m),
    ))
}

/// Lossy output distribution in the thinned square-root form: the input
/// marginals are binomially thinned and their square roots re-enter the
/// pure-state double sum.
///
/// This form discards the off-diagonal structure of the lossy input state.
/// It reproduces the embedding exactly when at most one squeezer is
/// populated (the kernel is then diagonal); with several squeezers it is an
/// approximation and deviates at the per-pattern level. Use
/// [`lossy_output_distribution`] unless this form is specifically wanted.
pub fn lossy_output_distribution_thinned(
    bank: &SqueezerBank,
    interferometer: &Interferometer,
    eta: f64,
    cutoff: usize,
) -> Result<PatternDistribution> {
    let m = bank.mode_count();
    check_caps(m, cutoff)?;
    if interferometer.mode_count() != m {
        return invalid("bank and interferometer mode counts differ");
    }
    if !(0.0..=1.0).contains(&eta) {
        return invalid("transmission must lie in [0, 1]");
    }
    let tables: Result<Vec<Vec<Complex64>>> = (0..m)
        .map(|i| {
            let r = bank.squeezing_of_mode(i);
            let pmf = smss_photon_pmf(r, cutoff)?.thinned(eta)?;
            Ok(pmf.probs().iter().map(|&p| Complex64::new(p.sqrt(), 0.0)).collect())
        })
        .collect();
    let inputs = input_expansion(&tables?, cutoff);
    let outputs = patterns_up_to(m, cutoff);
    let probs = exec::map_slice(&outputs, |out| {
        pure_state_probability(&inputs, interferometer, out)
    });
    Ok(PatternDistribution::from_pairs(
        m,
        cutoff,
        outputs.into_iter().zip(probs).collect(),
    ))
}

/// Husimi-ordered covariance of the output Gaussian state, `sigma + I/2`
/// in the `(a, a^dag)` block ordering.
pub(crate) fn output_sigma_q(
    bank: &SqueezerBank,
    interferometer: &Interferometer,
) -> Array2<Complex64> {
    let m = bank.mode_count();
    let u = interferometer.matrix();
    let mut n_diag = Array2::from_elem((m, m), ZERO);
    let mut m_diag = Array2::from_elem((m, m), ZERO);
    for i in 0..m {
        let r = bank.squeezing_of_mode(i);
        let phase = bank.phase_of_mode(i);
        n_diag[(i, i)] = Complex64::new(r.sinh().powi(2), 0.0);
        m_diag[(i, i)] = -Complex64::from_polar(r.sinh() * r.cosh(), phase);
    }
    let w = u.dot(&n_diag).dot(&linalg::dagger(u));
    let v = u.dot(&m_diag).dot(&u.t());
    let mut sq = Array2::from_elem((2 * m, 2 * m), ZERO);
    for i in 0..m {
        for j in 0..m {
            sq[(i, j)] = w[(i, j)];
            sq[(i, j + m)] = v[(i, j)];
            sq[(i + m, j)] = v[(i, j)].conj();
            sq[(i + m, j + m)] = w[(i, j)].conj();
        }
        sq[(i, i)] += Complex64::new(1.0, 0.0);
        sq[(i + m, i + m)] += Complex64::new(1.0, 0.0);
    }
    sq
}

/// Output-pattern probability from the hafnian of the pattern-reduced
/// kernel `A = X (I - sigma_Q^{-1})`, divided by `pattern! sqrt(det
/// sigma_Q)`. Restricted to patterns with counts in `{0, 1, 2}` and totals
/// up to ten so the hafnian stays tractable.
pub fn hafnian_output_probability(
    bank: &SqueezerBank,
    interferometer: &Interferometer,
    pattern: &OutputPattern,
) -> Result<f64> {
    let m = bank.mode_count();
    if interferometer.mode_count() != m || pattern.modes() != m {
        return invalid("pattern, bank, and interferometer mode counts differ");
    }
    if pattern.total() > MAX_BRUTE_FORCE_TOTAL {
        return crate::error::scale_cap(format!(
            "hafnian probabilities support totals up to {MAX_BRUTE_FORCE_TOTAL}"
        ));
    }
    if pattern.counts().iter().any(|&n| n > 2) {
        return invalid("hafnian probabilities support per-mode counts up to 2");
    }
    let sq = output_sigma_q(bank, interferometer);
    let (det, inv) = linalg::det_inverse(&sq)
        .map_err(|_| crate::error::GbsError::NumericFailure("singular output covariance".into()))?;
    if det.im.abs() > 1e-9 * det.norm() || det.re <= 0.0 {
        return numeric(format!("output covariance determinant {det} is not positive"));
    }
    // A = X (I - sigma_Q^{-1}): the X block swap reads rows m.., then 0..m
    let two_m = 2 * m;
    let mut a = Array2::from_elem((two_m, two_m), ZERO);
    for i in 0..two_m {
        let src = (i + m) % two_m;
        for j in 0..two_m {
            let eye = if src == j { Complex64::new(1.0, 0.0) } else { ZERO };
            a[(i, j)] = eye - inv[(src, j)];
        }
    }
    let mut idx = Vec::with_capacity(pattern.total());
    for (i, &n) in pattern.counts().iter().enumerate() {
        idx.extend(std::iter::repeat(i).take(n));
    }
    let full: Vec<usize> = idx
        .iter()
        .copied()
        .chain(idx.iter().map(|&i| i + m))
        .collect();
    let k = full.len();
    let mut reduced = Array2::from_elem((k, k), ZERO);
    for (r, &i) in full.iter().enumerate() {
        for (c, &j) in full.iter().enumerate() {
            reduced[(r, c)] = a[(i, j)];
        }
    }
    let h = hafnian(&reduced)?;
    if h.im.abs() > 1e-9 * h.norm().max(1e-30) {
        return numeric("hafnian of the reduced kernel has a large imaginary part");
    }
    Ok(h.re / (pattern.factorial_product() * det.re.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::total_photon_pmf;
    use crate::linops::haar_random_unitary;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_4, PI};

    #[test]
    fn identity_network_gives_product_distribution() {
        let bank = SqueezerBank::new(vec![0.5, 0.3], vec![PI, PI], 2).unwrap();
        let dist = lossless_output_distribution(&bank, &Interferometer::identity(2), 6).unwrap();
        let p1 = smss_photon_pmf(0.5, 6).unwrap();
        let p2 = smss_photon_pmf(0.3, 6).unwrap();
        for (pattern, p) in dist.iter() {
            let c = pattern.counts();
            assert_abs_diff_eq!(p, p1.get(c[0]) * p2.get(c[1]), epsilon = 1e-13);
        }
    }

    #[test]
    fn zero_squeezing_is_vacuum_point_mass() {
        let bank = SqueezerBank::new(vec![0.0], vec![PI], 2).unwrap();
        let u = haar_random_unitary(2, 2);
        let dist = lossless_output_distribution(&bank, &u, 4).unwrap();
        assert_abs_diff_eq!(dist.get(&OutputPattern::zeros(2)), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(dist.total_in_range(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn permanent_route_matches_state_vector_route() {
        // one squeezer on a balanced beamsplitter, deep cutoff
        let bank = SqueezerBank::new(vec![0.5], vec![PI], 2).unwrap();
        let bs = Interferometer::beamsplitter(FRAC_PI_4);
        let dist = lossless_output_distribution(&bank, &bs, 10).unwrap();
        let state = evolve_squeezed_input(&bank, &bs, 12).unwrap();
        for (pattern, p) in dist.iter() {
            let q = state.amplitude(pattern).norm_sqr();
            assert!(
                (p - q).abs() < 1e-10,
                "pattern {pattern}: {p} vs {q}"
            );
        }
    }

    #[test]
    fn scale_caps_fail_loudly() {
        let bank = SqueezerBank::uniform(0.3, 1, 7).unwrap();
        let u = Interferometer::identity(7);
        assert!(matches!(
            lossless_output_distribution(&bank, &u, 2),
            Err(crate::error::GbsError::ScaleCap(_))
        ));
        let bank = SqueezerBank::uniform(0.3, 1, 2).unwrap();
        let u = Interferometer::identity(2);
        assert!(matches!(
            lossless_output_distribution(&bank, &u, 11),
            Err(crate::error::GbsError::ScaleCap(_))
        ));
    }

    #[test]
    fn lossy_limits() {
        let bank = SqueezerBank::new(vec![0.5], vec![PI], 2).unwrap();
        let u = haar_random_unitary(2, 4);
        let lossless = lossless_output_distribution(&bank, &u, 6).unwrap();
        let eta1 = lossy_output_distribution(&bank, &u, 1.0, 6).unwrap();
        for (pattern, p) in lossless.iter() {
            assert_abs_diff_eq!(eta1.get(pattern), p, epsilon = 1e-11);
        }
        let eta0 = lossy_output_distribution(&bank, &u, 0.0, 6).unwrap();
        assert!(eta0.get(&OutputPattern::zeros(2)) > 1.0 - 1e-9);
    }

    #[test]
    fn embedding_matches_manual_four_mode_simulation() {
        let bank = SqueezerBank::new(vec![0.5], vec![PI], 2).unwrap();
        let bs = Interferometer::beamsplitter(FRAC_PI_4);
        let eta = 0.6;
        let cutoff = 8;
        let lossy = lossy_output_distribution(&bank, &bs, eta, cutoff).unwrap();

        // the same contraction by hand: widen, compose, evolve, trace out
        let loss = complexify(&embed_uniform_loss(eta, 2).unwrap());
        let net = linalg::block_extend(bs.matrix()).dot(&loss);
        let state = evolve_squeezed_input(
            &bank.widened(4).unwrap(),
            &Interferometer::new(net).unwrap(),
            cutoff,
        )
        .unwrap();
        for (pattern, p) in lossy.iter() {
            let mut manual = 0.0;
            for (joint, amp) in state.iter() {
                if joint.prefix(2) == *pattern {
                    manual += amp.norm_sqr();
                }
            }
            assert!(
                (p - manual).abs() < 1e-10,
                "pattern {pattern}: {p} vs {manual}"
            );
        }
    }

    #[test]
    fn embedding_total_marginal_equals_binomial_thinning() {
        let bank = SqueezerBank::new(vec![0.5, 0.4], vec![PI, PI], 3).unwrap();
        let u = haar_random_unitary(3, 9);
        let eta = 0.55;
        let cutoff = 6;
        let lossy = lossy_output_distribution(&bank, &u, eta, cutoff).unwrap();
        let thinned = total_photon_pmf(&bank, cutoff).thinned(eta).unwrap();
        let marginal = lossy.total_photon_marginal();
        for n in 0..=cutoff {
            assert!(
                (marginal.get(n) - thinned.get(n)).abs() < 1e-10,
                "n = {n}: {} vs {}",
                marginal.get(n),
                thinned.get(n)
            );
        }
    }

    #[test]
    fn thinned_sqrt_form_is_exact_for_a_single_squeezer() {
        let bank = SqueezerBank::new(vec![0.5], vec![PI], 2).unwrap();
        let bs = Interferometer::beamsplitter(FRAC_PI_4);
        let eta = 0.6;
        let exact = lossy_output_distribution(&bank, &bs, eta, 8).unwrap();
        let sqrt_form = lossy_output_distribution_thinned(&bank, &bs, eta, 8).unwrap();
        for (pattern, p) in exact.iter() {
            assert!(
                (p - sqrt_form.get(pattern)).abs() < 1e-10,
                "pattern {pattern}"
            );
        }
    }

    #[test]
    fn thinned_sqrt_form_deviates_with_two_squeezers() {
        // with several populated squeezers the square-root kernel is only an
        // approximation; the deviation is real and must not be hidden
        let bank = SqueezerBank::new(vec![0.5, 0.4], vec![PI, PI], 2).unwrap();
        let u = haar_random_unitary(2, 13);
        let eta = 0.6;
        let exact = lossy_output_distribution(&bank, &u, eta, 6).unwrap();
        let sqrt_form = lossy_output_distribution_thinned(&bank, &u, eta, 6).unwrap();
        let max_gap = exact
            .iter()
            .map(|(p, v)| (v - sqrt_form.get(p)).abs())
            .fold(0.0, f64::max);
        assert!(max_gap > 1e-6, "expected a visible gap, got {max_gap}");
        // but the total-photon marginals agree exactly
        let em = exact.total_photon_marginal();
        let sm = sqrt_form.total_photon_marginal();
        for n in 0..=6 {
            assert!((em.get(n) - sm.get(n)).abs() < 1e-10, "n = {n}");
        }
    }

    #[test]
    fn hafnian_probability_of_vacuum_on_vacuum_is_one() {
        let bank = SqueezerBank::new(vec![], vec![], 2).unwrap();
        let u = haar_random_unitary(2, 21);
        let p = hafnian_output_probability(&bank, &u, &OutputPattern::zeros(2)).unwrap();
        assert_abs_diff_eq!(p, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn hafnian_probability_matches_single_mode_marginal() {
        let bank = SqueezerBank::new(vec![0.5], vec![PI], 1).unwrap();
        let u = Interferometer::identity(1);
        let p = hafnian_output_probability(&bank, &u, &OutputPattern::new(vec![2])).unwrap();
        let pmf = smss_photon_pmf(0.5, 4).unwrap();
        assert_abs_diff_eq!(p, pmf.get(2), epsilon = 1e-12);
    }

    #[test]
    fn hafnian_probability_matches_double_sum_on_beamsplitter() {
        let bank = SqueezerBank::new(vec![0.5], vec![PI], 2).unwrap();
        let bs = Interferometer::beamsplitter(FRAC_PI_4);
        let pattern = OutputPattern::new(vec![1, 1]);
        let h = hafnian_output_probability(&bank, &bs, &pattern).unwrap();
        let d = lossless_pattern_probability(&bank, &bs, &pattern).unwrap();
        assert_abs_diff_eq!(h, d, epsilon = 1e-12);
    }

    #[test]
    fn sampler_is_deterministic_and_respects_support() {
        let bank = SqueezerBank::new(vec![0.6], vec![PI], 2).unwrap();
        let u = haar_random_unitary(2, 6);
        let dist = lossy_output_distribution(&bank, &u, 0.7, 4).unwrap();
        let sampler = PatternSampler::new(&dist).unwrap();
        let mut rng1 = ChaCha8Rng::seed_from_u64(77);
        let mut rng2 = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..200 {
            let a = sampler.sample(&mut rng1);
            let b = sampler.sample(&mut rng2);
            assert_eq!(a, b);
            assert!(a.total() <= 4);
        }
    }
}
