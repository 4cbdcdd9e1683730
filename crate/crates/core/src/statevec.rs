//! Direct state-vector evolution of squeezed inputs through a lossless
//! network, truncated by total photon number.
//!
//! The evolved state is built by polynomial multiplication: each squeezer
//! contributes a factor `sum_n a_n / sqrt(n!) * L_i^n` where `L_i` is the
//! linear form the network assigns to input mode `i`. Total photon number
//! is conserved sector by sector, so the only approximation is the input
//! truncation itself. This route shares no combinatorics with the
//! permanent- or hafnian-based probabilities and serves as an independent
//! cross-check for both.

use crate::error::{invalid, Result};
use crate::fock::{smss_amplitudes, SqueezerBank};
use crate::linops::Interferometer;
use crate::patterns::{factorial, patterns_up_to, OutputPattern};
use num_complex::Complex64;
use std::collections::HashMap;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Amplitudes over all patterns with total photon number `<= cutoff`.
#[derive(Debug, Clone)]
pub struct FockStateVector {
    modes: usize,
    cutoff: usize,
    patterns: Vec<OutputPattern>,
    index: HashMap<OutputPattern, usize>,
    amps: Vec<Complex64>,
}

impl FockStateVector {
    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn amplitude(&self, pattern: &OutputPattern) -> Complex64 {
        self.index.get(pattern).map_or(ZERO, |&i| self.amps[i])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&OutputPattern, Complex64)> {
        self.patterns.iter().zip(self.amps.iter().copied())
    }

    /// Probabilities of the patterns restricted to the first `keep` modes,
    /// summing the rest out.
    pub fn marginal_probabilities(&self, keep: usize) -> Vec<(OutputPattern, f64)> {
        assert!(keep <= self.modes);
        let mut acc: HashMap<OutputPattern, f64> = HashMap::new();
        for (pattern, amp) in self.iter() {
            let p = amp.norm_sqr();
            if p == 0.0 {
                continue;
            }
            *acc.entry(pattern.prefix(keep)).or_insert(0.0) += p;
        }
        let mut out: Vec<(OutputPattern, f64)> = acc.into_iter().collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }
}

/// Evolves a squeezer-bank input through the network, keeping totals up to
/// `cutoff`.
pub fn evolve_squeezed_input(
    bank: &SqueezerBank,
    interferometer: &Interferometer,
    cutoff: usize,
) -> Result<FockStateVector> {
    let m = bank.mode_count();
    if interferometer.mode_count() != m {
        return invalid("bank and interferometer mode counts differ");
    }
    let patterns = patterns_up_to(m, cutoff);
    let index: HashMap<OutputPattern, usize> = patterns
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i))
        .collect();
    // successor table: pattern index -> index after adding one photon to mode j
    let succ: Vec<Vec<Option<usize>>> = patterns
        .iter()
        .map(|p| {
            (0..m)
                .map(|j| {
                    if p.total() < cutoff {
                        index.get(&p.bumped(j)).copied()
                    } else {
                        None
                    }
                })
                .collect()
        })
        .collect();

    let vacuum = index[&OutputPattern::zeros(m)];
    let mut coeff = vec![ZERO; patterns.len()];
    coeff[vacuum] = Complex64::new(1.0, 0.0);

    for mode in 0..bank.squeezer_count() {
        let r = bank.squeezing_of_mode(mode);
        if r == 0.0 {
            continue;
        }
        let amps = smss_amplitudes(r, bank.phase_of_mode(mode), cutoff)?;
        let column: Vec<Complex64> = (0..m)
            .map(|i| interferometer.matrix()[(i, mode)])
            .collect();
        let mut result = scaled(&coeff, amps[0] / factorial(0).sqrt());
        let mut power = coeff.clone();
        let mut n = 2;
        while n <= cutoff {
            power = multiply_linear(&power, &column, &succ);
            power = multiply_linear(&power, &column, &succ);
            let c = amps[n] / factorial(n).sqrt();
            if c != ZERO {
                for (acc, p) in result.iter_mut().zip(power.iter()) {
                    *acc += c * p;
                }
            }
            n += 2;
        }
        coeff = result;
    }

    // monomial coefficients -> Fock amplitudes
    let amps: Vec<Complex64> = coeff
        .iter()
        .zip(patterns.iter())
        .map(|(c, p)| c * p.factorial_product().sqrt())
        .collect();
    Ok(FockStateVector { modes: m, cutoff, patterns, index, amps })
}

fn scaled(coeff: &[Complex64], factor: Complex64) -> Vec<Complex64> {
    coeff.iter().map(|c| c * factor).collect()
}

/// Multiplies the truncated polynomial by `sum_j column[j] x_j`.
fn multiply_linear(
    coeff: &[Complex64],
    column: &[Complex64],
    succ: &[Vec<Option<usize>>],
) -> Vec<Complex64> {
    let mut out = vec![ZERO; coeff.len()];
    for (i, c) in coeff.iter().enumerate() {
        if *c == ZERO {
            continue;
        }
        for (j, &u) in column.iter().enumerate() {
            if u == ZERO {
                continue;
            }
            if let Some(k) = succ[i][j] {
                out[k] += c * u;
            }
        }
    }
    out
}
