//! Photon-number statistics of the input states: single-mode squeezed
//! vacua, their convolutions, and even cat states.

use crate::error::{invalid, Result};
use crate::pmf::Pmf;
use num_complex::Complex64;
use std::f64::consts::PI;

const TAU: f64 = 2.0 * PI;

/// The input specification: `K` squeezers `{r_i, phi_i}` feeding the first
/// `K` of `M` modes; the remaining modes carry vacuum.
#[derive(Debug, Clone, PartialEq)]
pub struct SqueezerBank {
    squeezing: Vec<f64>,
    phases: Vec<f64>,
    mode_count: usize,
}

impl SqueezerBank {
    /// Phases are reduced into `[0, 2*pi)`.
    pub fn new(squeezing: Vec<f64>, phases: Vec<f64>, mode_count: usize) -> Result<Self> {
        if squeezing.len() != phases.len() {
            return invalid("squeezing and phase lists must have equal length");
        }
        if squeezing.len() > mode_count {
            return invalid(format!(
                "{} squeezers do not fit in {} modes",
                squeezing.len(),
                mode_count
            ));
        }
        if squeezing.iter().any(|r| !r.is_finite() || *r < 0.0) {
            return invalid("squeezing strengths must be finite and non-negative");
        }
        if phases.iter().any(|p| !p.is_finite()) {
            return invalid("phases must be finite");
        }
        let phases = phases.iter().map(|p| p.rem_euclid(TAU)).collect();
        Ok(SqueezerBank { squeezing, phases, mode_count })
    }

    /// `K` identical squeezers of strength `r` at phase `pi`.
    pub fn uniform(r: f64, squeezer_count: usize, mode_count: usize) -> Result<Self> {
        SqueezerBank::new(vec![r; squeezer_count], vec![PI; squeezer_count], mode_count)
    }

    pub fn squeezer_count(&self) -> usize {
        self.squeezing.len()
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    pub fn squeezing(&self) -> &[f64] {
        &self.squeezing
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    /// Squeezing strength of mode `i`, zero for vacuum modes.
    pub fn squeezing_of_mode(&self, mode: usize) -> f64 {
        self.squeezing.get(mode).copied().unwrap_or(0.0)
    }

    pub fn phase_of_mode(&self, mode: usize) -> f64 {
        self.phases.get(mode).copied().unwrap_or(PI)
    }

    /// Same squeezers spread over a wider register of `mode_count` modes.
    pub fn widened(&self, mode_count: usize) -> Result<Self> {
        SqueezerBank::new(self.squeezing.clone(), self.phases.clone(), mode_count)
    }

    /// The bank `{r_i'}` with `tanh r_i / tanh r_i' = c` for every squeezer.
    pub fn mapped(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c < 1.0) {
            return invalid("mapping ratio must lie in (0, 1)");
        }
        let mut mapped = Vec::with_capacity(self.squeezing.len());
        for &r in &self.squeezing {
            let t = r.tanh() / c;
            if t >= 1.0 {
                return invalid(format!("tanh({r})/{c} leaves no real squeezing strength"));
            }
            mapped.push(t.atanh());
        }
        SqueezerBank::new(mapped, self.phases.clone(), self.mode_count)
    }

    /// `sum_i sinh^2 r_i`.
    pub fn mean_total_photons(&self) -> f64 {
        self.squeezing.iter().map(|r| r.sinh().powi(2)).sum()
    }

    /// `sum_i 2 sinh^2 r_i (1 + sinh^2 r_i)`.
    pub fn variance_total_photons(&self) -> f64 {
        self.squeezing
            .iter()
            .map(|r| {
                let s = r.sinh().powi(2);
                2.0 * s * (1.0 + s)
            })
            .sum()
    }

    /// Smallest cutoff holding total mass `1 - 1e-10`, capped at
    /// `mean + 12 * stddev` of the total photon number.
    pub fn suggested_cutoff(&self) -> usize {
        let mean = self.mean_total_photons();
        if mean == 0.0 {
            return 0;
        }
        let sd = self.variance_total_photons().sqrt();
        let mut cap = (mean + 12.0 * sd).ceil() as usize;
        if cap % 2 == 1 {
            cap += 1;
        }
        let pmf = total_photon_pmf(self, cap);
        let mut acc = 0.0;
        for (n, &p) in pmf.probs().iter().enumerate() {
            acc += p;
            if acc >= 1.0 - 1e-10 {
                return n;
            }
        }
        cap
    }
}

/// An even cat state `(|alpha> + |-alpha>) / sqrt(2 + 2 exp(-2|alpha|^2))`
/// per mode.
#[derive(Debug, Clone, PartialEq)]
pub struct CatInput {
    amplitudes: Vec<Complex64>,
}

impl CatInput {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return invalid("cat input needs at least one mode");
        }
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return invalid("cat amplitudes must be finite");
        }
        Ok(CatInput { amplitudes })
    }

    pub fn mode_count(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Convolution of the per-mode cat photon distributions.
    pub fn total_photon_pmf(&self, cutoff: usize) -> Pmf {
        let mut acc = Pmf::point_mass(0);
        for a in &self.amplitudes {
            acc = acc.convolve(&cat_photon_pmf(*a, cutoff), cutoff);
        }
        acc
    }
}

/// Fock amplitudes `<n|r, phi>` of a single-mode squeezed vacuum for
/// `n = 0..=cutoff`. Odd entries are exactly zero.
pub fn smss_amplitudes(r: f64, phase: f64, cutoff: usize) -> Result<Vec<Complex64>> {
    if !r.is_finite() || r < 0.0 {
        return invalid("squeezing strength must be finite and non-negative");
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); cutoff + 1];
    amps[0] = Complex64::new(1.0 / r.cosh().sqrt(), 0.0);
    // a_{2m} = a_{2m-2} * (-e^{i phi} tanh r / 2) * sqrt(2m (2m-1)) / m
    let step = Complex64::from_polar(0.5 * r.tanh(), phase + PI);
    let mut cur = amps[0];
    let mut n = 2;
    while n <= cutoff {
        let nf = n as f64;
        cur = cur * step * (nf * (nf - 1.0)).sqrt() / (nf / 2.0);
        amps[n] = cur;
        n += 2;
    }
    Ok(amps)
}

/// Photon-number distribution of a single-mode squeezed vacuum:
/// `P(n) = sech(r) * n! / (2^n ((n/2)!)^2) * tanh(r)^n` for even `n`.
pub fn smss_photon_pmf(r: f64, cutoff: usize) -> Result<Pmf> {
    if !r.is_finite() || r < 0.0 {
        return invalid("squeezing strength must be finite and non-negative");
    }
    let mut probs = vec![0.0; cutoff + 1];
    probs[0] = 1.0 / r.cosh();
    let t2 = r.tanh() * r.tanh();
    let mut cur = probs[0];
    let mut n = 2;
    while n <= cutoff {
        cur *= t2 * (n as f64 - 1.0) / n as f64;
        probs[n] = cur;
        n += 2;
    }
    let in_range: f64 = probs.iter().sum();
    Ok(Pmf::from_raw(probs, (1.0 - in_range).max(0.0)))
}

/// Distribution of the total photon number injected by a squeezer bank.
///
/// Identical squeezers are grouped and convolved by squaring, so a uniform
/// bank of `K` squeezers costs `O(log K)` convolutions.
pub fn total_photon_pmf(bank: &SqueezerBank, cutoff: usize) -> Pmf {
    let mut rs: Vec<f64> = bank.squeezing().iter().copied().filter(|r| *r > 0.0).collect();
    rs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut acc = Pmf::point_mass(0);
    let mut i = 0;
    while i < rs.len() {
        let mut j = i;
        while j < rs.len() && rs[j] == rs[i] {
            j += 1;
        }
        let single = smss_photon_pmf(rs[i], cutoff).expect("validated by the bank");
        acc = acc.convolve(&single.convolve_power(j - i, cutoff), cutoff);
        i = j;
    }
    acc
}

/// Most probable total photon number for `K` identical squeezers:
/// `2 * floor((K/2 - 1) * sinh^2 r)`.
pub fn pmf_mode(r: f64, squeezer_count: usize) -> Result<usize> {
    if squeezer_count < 2 {
        return invalid("the mode formula needs at least two squeezers");
    }
    if !(r > 0.0) || !r.is_finite() {
        return invalid("squeezing strength must be positive");
    }
    let half = squeezer_count as f64 / 2.0 - 1.0;
    Ok(2 * (half * r.sinh().powi(2)).floor() as usize)
}

/// Photon-number distribution of an even cat state:
/// `P(n) = 2 e^{-A} A^n / (n! (1 + e^{-2A}))` for even `n`, with
/// `A = |alpha|^2`; odd entries vanish.
pub fn cat_photon_pmf(alpha: Complex64, cutoff: usize) -> Pmf {
    let a = alpha.norm_sqr();
    if a == 0.0 {
        let mut probs = vec![0.0; cutoff + 1];
        probs[0] = 1.0;
        return Pmf::from_raw(probs, 0.0);
    }
    let mut probs = vec![0.0; cutoff + 1];
    let log_norm = 2f64.ln() - a - (-2.0 * a).exp().ln_1p();
    probs[0] = log_norm.exp();
    let mut cur = probs[0];
    let mut n = 2;
    while n <= cutoff {
        cur *= a * a / ((n - 1) as f64 * n as f64);
        probs[n] = cur;
        n += 2;
    }
    let in_range: f64 = probs.iter().sum();
    Pmf::from_raw(probs, (1.0 - in_range).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg;
    use approx::assert_abs_diff_eq;
    use ndarray::Array2;
    use statrs::function::gamma::ln_gamma;

    /// Closed-form total distribution for `K` equal squeezers:
    /// `P(N) = C(N/2 + K/2 - 1, N/2) sech(r)^K tanh(r)^N` at even `N`.
    fn equal_r_total_pmf(r: f64, k: usize, cutoff: usize) -> Vec<f64> {
        let mut probs = vec![0.0; cutoff + 1];
        let kf = k as f64;
        let mut n = 0;
        while n <= cutoff {
            let m = n as f64 / 2.0;
            let ln_choose =
                ln_gamma(m + kf / 2.0) - ln_gamma(m + 1.0) - ln_gamma(kf / 2.0);
            let ln_p = ln_choose - kf * r.cosh().ln() + n as f64 * r.tanh().ln();
            probs[n] = ln_p.exp();
            n += 2;
        }
        probs
    }

    /// Independent route to the squeezed-vacuum amplitudes: build the
    /// squeezing generator in a truncated Fock basis, diagonalize, and
    /// exponentiate. Fails loudly if the series recurrence drifts.
    fn squeezed_vacuum_by_diagonalization(r: f64, phase: f64, dim: usize) -> Vec<Complex64> {
        let xi = Complex64::from_polar(r, phase);
        // H = i/2 (conj(xi) a^2 - xi a^\dag{}^2) is Hermitian; S = exp(-iH).
        let mut h = Array2::from_elem((dim, dim), Complex64::new(0.0, 0.0));
        for n in 2..dim {
            let c = Complex64::new(0.0, 0.5) * xi.conj() * ((n * (n - 1)) as f64).sqrt();
            h[(n - 2, n)] = c;
            h[(n, n - 2)] = c.conj();
        }
        let (vals, vecs) = linalg::hermitian_eigen(&h);
        // column 0 of V exp(-i diag) V^dagger
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        for row in 0..dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..dim {
                let phase_k = Complex64::from_polar(1.0, -vals[k]);
                acc += vecs[(row, k)] * phase_k * vecs[(0, k)].conj();
            }
            out[row] = acc;
        }
        out
    }

    #[test]
    fn zero_squeezing_is_vacuum() {
        let amps = smss_amplitudes(0.0, 1.3, 4).unwrap();
        assert_eq!(amps[0], Complex64::new(1.0, 0.0));
        for n in 1..=4 {
            assert_eq!(amps[n], Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn amplitudes_normalize() {
        let amps = smss_amplitudes(1.0, PI, 40).unwrap();
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn two_photon_amplitude_squared() {
        let amps = smss_amplitudes(1.0, PI, 2).unwrap();
        let expected = (1.0 / 1f64.cosh()) * 1f64.tanh().powi(2) / 2.0;
        assert_abs_diff_eq!(amps[2].norm_sqr(), expected, epsilon = 1e-14);
        assert_abs_diff_eq!(amps[2].norm_sqr(), 0.18795, epsilon = 1e-5);
        // at phase pi the amplitudes are real and positive
        assert!(amps[2].im == 0.0 && amps[2].re > 0.0);
    }

    #[test]
    fn amplitudes_match_generator_diagonalization() {
        for &(r, phase) in &[(1.0, PI), (0.6, 0.9), (1.5, PI)] {
            let series = smss_amplitudes(r, phase, 20).unwrap();
            let diag = squeezed_vacuum_by_diagonalization(r, phase, 61);
            for n in 0..=20 {
                assert!(
                    (series[n] - diag[n]).norm() < 1e-8,
                    "entry {n} differs at r={r}, phase={phase}: {} vs {}",
                    series[n],
                    diag[n]
                );
            }
        }
    }

    #[test]
    fn pmf_matches_amplitudes_squared() {
        for &r in &[0.25, 0.5, 1.0, 1.5, 2.6] {
            let pmf = smss_photon_pmf(r, 30).unwrap();
            let amps = smss_amplitudes(r, PI, 30).unwrap();
            for n in 0..=30 {
                assert!(
                    (pmf.get(n) - amps[n].norm_sqr()).abs() < 1e-12,
                    "n={n}, r={r}"
                );
            }
        }
    }

    #[test]
    fn odd_photon_numbers_are_forbidden() {
        let pmf = smss_photon_pmf(1.0, 9).unwrap();
        for n in (1..=9).step_by(2) {
            assert_eq!(pmf.get(n), 0.0);
        }
    }

    #[test]
    fn zero_squeezing_pmf_is_point_mass() {
        let pmf = smss_photon_pmf(0.0, 5).unwrap();
        assert_eq!(pmf.get(0), 1.0);
        assert_eq!(pmf.total_in_range(), 1.0);
    }

    #[test]
    fn single_squeezer_total_equals_marginal() {
        let bank = SqueezerBank::uniform(0.8, 1, 1).unwrap();
        let total = total_photon_pmf(&bank, 20);
        let single = smss_photon_pmf(0.8, 20).unwrap();
        for n in 0..=20 {
            assert_abs_diff_eq!(total.get(n), single.get(n), epsilon = 1e-15);
        }
    }

    #[test]
    fn two_squeezer_convolution_value() {
        let bank = SqueezerBank::uniform(1.0, 2, 2).unwrap();
        let total = total_photon_pmf(&bank, 8);
        let single = smss_photon_pmf(1.0, 8).unwrap();
        let expected = 2.0 * single.get(0) * single.get(2);
        assert_abs_diff_eq!(total.get(2), expected, epsilon = 1e-14);
        // cross-check against the closed form
        let closed = equal_r_total_pmf(1.0, 2, 8);
        assert_abs_diff_eq!(total.get(2), closed[2], epsilon = 1e-13);
    }

    #[test]
    fn equal_squeezing_matches_closed_form() {
        for &k in &[2usize, 4, 10, 50] {
            let r = 1.4;
            let bank = SqueezerBank::uniform(r, k, k).unwrap();
            let cutoff = bank.suggested_cutoff();
            let total = total_photon_pmf(&bank, cutoff);
            let closed = equal_r_total_pmf(r, k, cutoff);
            for n in 0..=cutoff {
                assert!(
                    (total.get(n) - closed[n]).abs() < 1e-12,
                    "K={k}, N={n}: {} vs {}",
                    total.get(n),
                    closed[n]
                );
            }
        }
    }

    #[test]
    fn pmf_mode_examples() {
        assert_eq!(pmf_mode(1.1, 216).unwrap(), 380);
        assert_eq!(pmf_mode(0.01, 10).unwrap(), 0);
        assert!(pmf_mode(1.0, 1).is_err());
        assert!(pmf_mode(0.0, 10).is_err());
    }

    #[test]
    fn pmf_mode_matches_argmax() {
        let bank = SqueezerBank::uniform(1.4, 50, 50).unwrap();
        let total = total_photon_pmf(&bank, bank.suggested_cutoff());
        assert_eq!(total.argmax(), pmf_mode(1.4, 50).unwrap());
    }

    #[test]
    fn suggested_cutoff_captures_the_mass() {
        let bank = SqueezerBank::uniform(1.1, 216, 216).unwrap();
        let cutoff = bank.suggested_cutoff();
        let pmf = total_photon_pmf(&bank, cutoff);
        assert!(pmf.truncated_mass() <= 1.1e-10);
        assert!(cutoff < 1000, "cutoff {cutoff} is larger than expected");
    }

    #[test]
    fn cat_state_has_no_odd_photons() {
        let pmf = cat_photon_pmf(Complex64::new(1.3, 0.4), 11);
        for n in (1..=11).step_by(2) {
            assert_eq!(pmf.get(n), 0.0);
        }
        assert_abs_diff_eq!(pmf.total_in_range() + pmf.truncated_mass(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn cat_to_poisson_ratio_at_large_amplitude() {
        // |alpha|^2 = 9, n = 8
        let alpha = Complex64::new(3.0, 0.0);
        let pmf = cat_photon_pmf(alpha, 20);
        let a: f64 = 9.0;
        let poisson = (-a + 8.0 * a.ln() - ln_gamma(9.0)).exp();
        let expected = 2.0 / (1.0 + (-2.0 * a).exp());
        assert_abs_diff_eq!(pmf.get(8) / poisson, expected, epsilon = 1e-10);
    }

    #[test]
    fn mapped_bank_keeps_the_tanh_ratio() {
        let bank = SqueezerBank::new(vec![0.4, 0.6], vec![PI, PI], 3).unwrap();
        let mapped = bank.mapped(0.8).unwrap();
        for i in 0..2 {
            let c = bank.squeezing()[i].tanh() / mapped.squeezing()[i].tanh();
            assert_abs_diff_eq!(c, 0.8, epsilon = 1e-14);
        }
    }

    #[test]
    fn bank_rejects_bad_shapes() {
        assert!(SqueezerBank::new(vec![0.5], vec![], 2).is_err());
        assert!(SqueezerBank::new(vec![0.5, 0.5, 0.5], vec![PI; 3], 2).is_err());
        assert!(SqueezerBank::new(vec![-0.5], vec![PI], 2).is_err());
    }
}
