//! Passive linear optical networks and Fock transition amplitudes.
//!
//! Matrix convention: `U[i][j]` is the single-photon amplitude from input
//! mode `j` to output mode `i`, i.e. the network maps `a_j^dag` to
//! `sum_i U[i][j] a_i^dag`.

use crate::error::{invalid, Result};
use crate::linalg;
use crate::patterns::OutputPattern;
use crate::permanent::permanent;
use ndarray::Array2;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

const UNITARITY_TOL: f64 = 1e-10;

/// An `M`-mode lossless interferometer.
#[derive(Debug, Clone, PartialEq)]
pub struct Interferometer {
    u: Array2<Complex64>,
}

impl Interferometer {
    /// Checks unitarity to `1e-10` at construction.
    pub fn new(u: Array2<Complex64>) -> Result<Self> {
        if u.nrows() != u.ncols() {
            return invalid("interferometer matrix must be square");
        }
        if u.nrows() == 0 {
            return invalid("interferometer needs at least one mode");
        }
        if !linalg::is_unitary(&u, UNITARITY_TOL) {
            return invalid("interferometer matrix is not unitary");
        }
        Ok(Interferometer { u })
    }

    pub fn identity(modes: usize) -> Self {
        Interferometer { u: linalg::identity(modes) }
    }

    /// Two-mode beamsplitter `[[cos t, sin t], [sin t, -cos t]]`; `t = pi/4`
    /// is the balanced 50:50 splitter.
    pub fn beamsplitter(theta: f64) -> Self {
        let c = Complex64::new(theta.cos(), 0.0);
        let s = Complex64::new(theta.sin(), 0.0);
        Interferometer { u: ndarray::array![[c, s], [s, -c]] }
    }

    pub fn mode_count(&self) -> usize {
        self.u.nrows()
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.u
    }
}

/// Haar-random unitary from a QR-type orthonormalization of a complex
/// Ginibre matrix. Deterministic per seed.
pub fn haar_random_unitary(modes: usize, seed: u64) -> Interferometer {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Array2::from_elem((modes, modes), Complex64::new(0.0, 0.0));
    for i in 0..modes {
        for j in 0..modes {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            g[(i, j)] = Complex64::new(re, im) / 2f64.sqrt();
        }
    }
    Interferometer { u: linalg::gram_schmidt_unitary(&g) }
}

/// `<output| U |input>`: zero whenever the totals differ, otherwise the
/// permanent of the row/column-repeated submatrix over
/// `sqrt(input! output!)`.
pub fn transition_amplitude(
    interferometer: &Interferometer,
    input: &OutputPattern,
    output: &OutputPattern,
) -> Result<Complex64> {
    let m = interferometer.mode_count();
    if input.modes() != m || output.modes() != m {
        return invalid("pattern length must match the mode count");
    }
    if input.total() != output.total() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let t = input.total();
    let mut rows = Vec::with_capacity(t);
    for (i, &n) in output.counts().iter().enumerate() {
        rows.extend(std::iter::repeat(i).take(n));
    }
    let mut cols = Vec::with_capacity(t);
    for (j, &n) in input.counts().iter().enumerate() {
        cols.extend(std::iter::repeat(j).take(n));
    }
    let mut sub = Array2::from_elem((t, t), Complex64::new(0.0, 0.0));
    for (a, &i) in rows.iter().enumerate() {
        for (b, &j) in cols.iter().enumerate() {
            sub[(a, b)] = interferometer.matrix()[(i, j)];
        }
    }
    let per = permanent(&sub)?;
    let norm = (input.factorial_product() * output.factorial_product()).sqrt();
    Ok(per / norm)
}

/// The `2M x 2M` beamsplitter array coupling each signal mode to its own
/// vacuum loss mode with transmission `eta`:
/// `[[sqrt(eta) I, sqrt(1-eta) I], [-sqrt(1-eta) I, sqrt(eta) I]]`.
pub fn embed_uniform_loss(eta: f64, modes: usize) -> Result<Array2<f64>> {
    if !(0.0..=1.0).contains(&eta) {
        return invalid("transmission must lie in [0, 1]");
    }
    embed_per_mode_loss(&vec![eta; modes])
}

/// Per-mode variant: mode `i` keeps a photon with probability `etas[i]`.
pub fn embed_per_mode_loss(etas: &[f64]) -> Result<Array2<f64>> {
    if etas.iter().any(|e| !(0.0..=1.0).contains(e)) {
        return invalid("every transmission must lie in [0, 1]");
    }
    let m = etas.len();
    let mut out = Array2::zeros((2 * m, 2 * m));
    for (i, &eta) in etas.iter().enumerate() {
        let t = eta.sqrt();
        let r = (1.0 - eta).sqrt();
        out[(i, i)] = t;
        out[(i, i + m)] = r;
        out[(i + m, i)] = -r;
        out[(i + m, i + m)] = t;
    }
    Ok(out)
}

pub(crate) fn complexify(a: &Array2<f64>) -> Array2<Complex64> {
    a.mapv(|x| Complex64::new(x, 0.0))
}
