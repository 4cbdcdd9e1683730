//! Loss and detector imperfection models: uniform and per-mode
//! transmission, general sub-unitary transfer matrices, PNR saturation,
//! and dark counts.

use crate::error::{invalid, Result};
use crate::linalg;
use crate::patterns::OutputPattern;
use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;

/// How photons are lost between the sources and the detectors.
#[derive(Debug, Clone, PartialEq)]
pub enum LossModel {
    /// Every mode keeps a photon with the same probability.
    Uniform(f64),
    /// Mode `i` keeps a photon with probability `etas[i]`.
    PerMode(Vec<f64>),
    /// A general transfer matrix with singular values in `[0, 1]`.
    General(Array2<Complex64>),
}

impl LossModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            LossModel::Uniform(eta) => {
                if !(0.0..=1.0).contains(eta) {
                    return invalid("transmission must lie in [0, 1]");
                }
            }
            LossModel::PerMode(etas) => {
                if etas.is_empty() {
                    return invalid("per-mode loss needs at least one mode");
                }
                if etas.iter().any(|e| !(0.0..=1.0).contains(e)) {
                    return invalid("every transmission must lie in [0, 1]");
                }
            }
            LossModel::General(a) => {
                if a.nrows() != a.ncols() || a.nrows() == 0 {
                    return invalid("transfer matrix must be square and non-empty");
                }
                let top = linalg::max_singular_value(a);
                if top > 1.0 + 1e-12 {
                    return invalid(format!(
                        "transfer matrix has singular value {top} > 1"
                    ));
                }
            }
        }
        Ok(())
    }
}

/// A uniform layer peeled off a non-uniform loss process:
/// `A = sqrt(eta_uniform) * residual`, with the residual's largest singular
/// value equal to one.
#[derive(Debug, Clone)]
pub struct LossSplit {
    pub eta_uniform: f64,
    pub residual: Array2<Complex64>,
}

/// Extracts the largest uniform transmission from a per-mode or general
/// loss model.
pub fn split_nonuniform_loss(model: &LossModel) -> Result<LossSplit> {
    model.validate()?;
    match model {
        LossModel::Uniform(_) => invalid("loss is already uniform; nothing to split"),
        LossModel::PerMode(etas) => {
            let eta_u = etas.iter().copied().fold(0.0, f64::max);
            if eta_u == 0.0 {
                return invalid("cannot split a fully opaque loss model");
            }
            let m = etas.len();
            let mut residual = Array2::from_elem((m, m), Complex64::new(0.0, 0.0));
            for (i, &eta) in etas.iter().enumerate() {
                residual[(i, i)] = Complex64::new((eta / eta_u).sqrt(), 0.0);
            }
            Ok(LossSplit { eta_uniform: eta_u, residual })
        }
        LossModel::General(a) => {
            let top = linalg::max_singular_value(a);
            if top <= 0.0 {
                return invalid("cannot split a fully opaque loss model");
            }
            let eta_u = (top * top).min(1.0);
            let residual = a.mapv(|z| z / top);
            Ok(LossSplit { eta_uniform: eta_u, residual })
        }
    }
}

/// Detector behaviour applied to a measured pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorModel {
    /// Largest photon count a detector resolves; `None` means unbounded.
    pub pnr_cap: Option<usize>,
    /// Probability that an idle detector still clicks once (threshold
    /// model: at most one dark count per mode).
    pub dark_count_rate: f64,
    /// Optional per-mode detection efficiencies. These are not applied
    /// here; compose them into the loss model with [`compose_efficiencies`].
    pub efficiencies: Option<Vec<f64>>,
}

impl DetectorModel {
    pub fn new(
        pnr_cap: Option<usize>,
        dark_count_rate: f64,
        efficiencies: Option<Vec<f64>>,
    ) -> Result<Self> {
        if let Some(cap) = pnr_cap {
            if cap < 1 {
                return invalid("a detector must resolve at least one photon");
            }
        }
        if !(0.0..=1.0).contains(&dark_count_rate) {
            return invalid("dark count rate must lie in [0, 1]");
        }
        if let Some(effs) = &efficiencies {
            if effs.iter().any(|e| !(0.0..=1.0).contains(e)) {
                return invalid("every detector efficiency must lie in [0, 1]");
            }
        }
        Ok(DetectorModel { pnr_cap, dark_count_rate, efficiencies })
    }

    pub fn ideal() -> Self {
        DetectorModel { pnr_cap: None, dark_count_rate: 0.0, efficiencies: None }
    }
}

/// `eta_i = eta * eta_i^d`: folds the detector efficiencies into the
/// overall transmission, one value per mode.
pub fn compose_efficiencies(eta: f64, det: &DetectorModel, modes: usize) -> Result<Vec<f64>> {
    match &det.efficiencies {
        None => Ok(vec![eta; modes]),
        Some(effs) => {
            if effs.len() != modes {
                return invalid("efficiency list length must match the mode count");
            }
            Ok(effs.iter().map(|e| eta * e).collect())
        }
    }
}

/// A measured pattern after detector effects.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionOutcome {
    pub pattern: OutputPattern,
    /// Some count hit the PNR cap and was clamped.
    pub saturated: bool,
    /// Number of modes that fired a dark count.
    pub dark_counts: usize,
}

/// Clamps counts at the PNR cap, then adds at most one dark count per mode
/// with probability `dark_count_rate`. Dark-count draws consume one uniform
/// per mode (skipped entirely when the rate is zero), so outcomes are
/// reproducible per RNG seed.
pub fn apply_detector_model<R: Rng + ?Sized>(
    pattern: &OutputPattern,
    det: &DetectorModel,
    rng: &mut R,
) -> DetectionOutcome {
    let mut counts = pattern.counts().to_vec();
    let mut saturated = false;
    if let Some(cap) = det.pnr_cap {
        for c in counts.iter_mut() {
            if *c > cap {
                *c = cap;
                saturated = true;
            }
        }
    }
    let mut dark_counts = 0;
    if det.dark_count_rate > 0.0 {
        for c in counts.iter_mut() {
            if rng.gen::<f64>() < det.dark_count_rate {
                *c += 1;
                dark_counts += 1;
            }
        }
    }
    DetectionOutcome { pattern: OutputPattern::new(counts), saturated, dark_counts }
}

/// Equivalent dark count rate after retention reweighting:
/// `p' = p f / (p f + 1 - p)` with `f = (1/c - (1 - eta)) / eta`.
pub fn dark_count_equivalent_rate(p_dark: f64, c: f64, eta: f64) -> Result<f64> {
    if !(0.0..0.5).contains(&p_dark) {
        return invalid("dark count rate must lie in [0, 0.5)");
    }
    if !(c > 0.0 && c < 1.0) {
        return invalid("retention needs a mapping ratio in (0, 1)");
    }
    if !(eta > 0.0 && eta <= 1.0) {
        return invalid("transmission must lie in (0, 1]");
    }
    let f = (1.0 / c - (1.0 - eta)) / eta;
    Ok(p_dark * f / (p_dark * f + 1.0 - p_dark))
}

/// Upper bound on the equivalent dark count rate, using
/// `f = 1 + (1/tanh r - 1) / eta`; strict whenever `c > tanh r`.
pub fn dark_count_rate_bound(p_dark: f64, r: f64, eta: f64) -> Result<f64> {
    if !(0.0..0.5).contains(&p_dark) {
        return invalid("dark count rate must lie in [0, 0.5)");
    }
    if !(r > 0.0) {
        return invalid("squeezing strength must be positive");
    }
    if !(eta > 0.0 && eta <= 1.0) {
        return invalid("transmission must lie in (0, 1]");
    }
    let f = 1.0 + (1.0 / r.tanh() - 1.0) / eta;
    Ok(p_dark * f / (p_dark * f + 1.0 - p_dark))
}
