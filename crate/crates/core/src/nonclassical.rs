//! The classical-simulability bound for noisy squeezed-light sampling and
//! its behaviour under post-selection.
//!
//! A reference classical algorithm simulates a lossy experiment up to
//! error `eps` whenever
//! `sech(0.5 * max(0, ln((1 - 2 q_D) / (eta e^{-2r} + 1 - eta)))) >
//! exp(-eps^2 / 4K)`. The smallest such error `eps_0` exceeding one means
//! the experiment has left the classically simulable regime.

use crate::error::{invalid, Result};
use crate::loss::dark_count_equivalent_rate;
use crate::postselect::{equivalent_transmission, mapping_ratio};

/// Inputs to the simulability bound. `eta` is the full source-to-detector
/// transmission, detector efficiency included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestParameters {
    pub r: f64,
    pub eta: f64,
    pub squeezer_count: usize,
    pub dark_count_rate: f64,
}

impl TestParameters {
    pub fn new(r: f64, eta: f64, squeezer_count: usize, dark_count_rate: f64) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() {
            return invalid("squeezing strength must be positive");
        }
        if !(eta > 0.0 && eta <= 1.0) {
            return invalid("transmission must lie in (0, 1]");
        }
        if squeezer_count == 0 {
            return invalid("at least one squeezer is required");
        }
        if !(0.0..0.5).contains(&dark_count_rate) {
            return invalid("dark count rate must lie in [0, 0.5)");
        }
        Ok(TestParameters { r, eta, squeezer_count, dark_count_rate })
    }
}

fn sech(x: f64) -> f64 {
    1.0 / x.cosh()
}

/// Left side of the bound; always in `(0, 1]`, clamping the logarithm at
/// zero.
pub fn classical_simulability_lhs(p: &TestParameters) -> f64 {
    let denom = p.eta * (-2.0 * p.r).exp() + 1.0 - p.eta;
    let arg = ((1.0 - 2.0 * p.dark_count_rate) / denom).ln().max(0.0);
    sech(0.5 * arg)
}

/// The smallest simulation error consistent with the bound:
/// `eps_0 = sqrt(-4K ln(lhs))`. Values above one mean the classical
/// algorithm fails; the raw value is returned so callers can plot it.
pub fn epsilon0(p: &TestParameters) -> f64 {
    let lhs = classical_simulability_lhs(p);
    (-4.0 * p.squeezer_count as f64 * lhs.ln()).max(0.0).sqrt()
}

/// `eps_0` together with the pass/fail reading.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulabilityVerdict {
    pub epsilon0: f64,
    /// The classical algorithm cannot reach the experiment (error above 1).
    pub classically_unreachable: bool,
}

pub fn verdict(p: &TestParameters) -> SimulabilityVerdict {
    let e = epsilon0(p);
    SimulabilityVerdict { epsilon0: e, classically_unreachable: e > 1.0 }
}

/// `eps_0` of the experiment the retained samples emulate: squeezing
/// `r_prime`, equivalent transmission `1 - (1 - eta) c`, and the
/// correspondingly amplified dark count rate.
pub fn postselected_epsilon0(p: &TestParameters, r_prime: f64) -> Result<f64> {
    let c = mapping_ratio(&[p.r], &[r_prime])?;
    let eta_prime = equivalent_transmission(p.eta, c)?;
    let dark_prime = if p.dark_count_rate == 0.0 {
        0.0
    } else {
        dark_count_equivalent_rate(p.dark_count_rate, c, p.eta)?
    };
    let mapped = TestParameters::new(r_prime, eta_prime, p.squeezer_count, dark_prime)?;
    Ok(epsilon0(&mapped))
}

/// Equivalent transmission when the circuit is deepened: the overall
/// transmission scales as `eta^depth_factor`, and post-selection with
/// targets `r -> r_prime` recovers `1 - (1 - eta^depth_factor) c`.
pub fn depth_tradeoff(
    eta_overall: f64,
    depth_factor: f64,
    r: f64,
    r_prime: f64,
) -> Result<f64> {
    if !(eta_overall > 0.0 && eta_overall < 1.0) {
        return invalid("overall transmission must lie in (0, 1)");
    }
    if !(depth_factor > 0.0) {
        return invalid("depth factor must be positive");
    }
    let scaled = eta_overall.powf(depth_factor);
    let c = mapping_ratio(&[r], &[r_prime])?;
    equivalent_transmission(scaled, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn clamped_regime_gives_unit_lhs_and_zero_error() {
        // heavy dark counts push the log negative, where the ramp clamps
        let p = TestParameters::new(1.0, 0.05, 50, 0.4).unwrap();
        assert_eq!(classical_simulability_lhs(&p), 1.0);
        assert_eq!(epsilon0(&p), 0.0);
    }

    #[test]
    fn lhs_value() {
        let p = TestParameters::new(1.0, 0.1, 50, 1e-4).unwrap();
        assert_abs_diff_eq!(classical_simulability_lhs(&p), 0.998983, epsilon = 1e-6);
        let lhs = classical_simulability_lhs(&p);
        assert!(lhs > 0.0 && lhs <= 1.0);
    }

    #[test]
    fn epsilon0_reference_points() {
        let p = TestParameters::new(1.0, 0.1, 50, 1e-4).unwrap();
        assert_abs_diff_eq!(epsilon0(&p), 0.451, epsilon = 1e-3);
        let p = TestParameters::new(1.5, 0.15, 50, 1e-4).unwrap();
        assert_abs_diff_eq!(epsilon0(&p), 0.767, epsilon = 1e-3);
    }

    #[test]
    fn postselection_lifts_the_error_above_one() {
        let p = TestParameters::new(1.0, 0.1, 50, 1e-4).unwrap();
        let e = postselected_epsilon0(&p, 2.5).unwrap();
        assert!(e > 1.0, "eps0' = {e}");
        assert_abs_diff_eq!(e, 1.80, epsilon = 0.01);
        let p = TestParameters::new(1.5, 0.15, 50, 1e-4).unwrap();
        assert!(postselected_epsilon0(&p, 2.5).unwrap() > 1.0);
    }

    #[test]
    fn postselected_error_is_continuous_at_the_identity() {
        let p = TestParameters::new(1.0, 0.1, 50, 1e-4).unwrap();
        let near = postselected_epsilon0(&p, 1.0 + 1e-6).unwrap();
        assert_abs_diff_eq!(near, epsilon0(&p), epsilon = 1e-4);
    }

    #[test]
    fn depth_tradeoff_reference_point() {
        let eta = depth_tradeoff(0.5, 2.0, 1.0, 2.5).unwrap();
        assert_abs_diff_eq!(eta, 0.421, epsilon = 5e-4);
        // factor one reduces to the plain equivalent transmission
        let c = mapping_ratio(&[1.0], &[2.5]).unwrap();
        assert_abs_diff_eq!(
            depth_tradeoff(0.5, 1.0, 1.0, 2.5).unwrap(),
            equivalent_transmission(0.5, c).unwrap(),
            epsilon = 1e-15
        );
        // deep circuits approach the floor 1 - c
        assert_abs_diff_eq!(
            depth_tradeoff(0.5, 64.0, 1.0, 2.5).unwrap(),
            1.0 - c,
            epsilon = 1e-5
        );
    }

    #[test]
    fn error_grows_with_squeezer_count_and_shrinks_with_transmission() {
        let base = TestParameters::new(1.0, 0.2, 50, 1e-4).unwrap();
        let more_squeezers = TestParameters::new(1.0, 0.2, 100, 1e-4).unwrap();
        assert!(epsilon0(&more_squeezers) > epsilon0(&base));
        let better_eta = TestParameters::new(1.0, 0.4, 50, 1e-4).unwrap();
        assert!(epsilon0(&better_eta) < epsilon0(&base));
    }

    #[test]
    fn verdict_flips_exactly_at_one() {
        let p = TestParameters::new(1.0, 0.1, 50, 1e-4).unwrap();
        let v = verdict(&p);
        assert!(!v.classically_unreachable);
        let strong = TestParameters::new(2.5, 0.3, 50, 1e-4).unwrap();
        assert!(verdict(&strong).classically_unreachable);
    }
}
