//! Small dense complex linear algebra: just enough for registers of a
//! dozen modes. Everything here is deterministic and allocation-happy;
//! matrix dimensions never exceed a few tens.

use crate::error::{invalid, numeric, Result};
use ndarray::Array2;
use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn identity(n: usize) -> Array2<Complex64> {
    let mut m = Array2::from_elem((n, n), ZERO);
    for i in 0..n {
        m[(i, i)] = ONE;
    }
    m
}

pub fn dagger(a: &Array2<Complex64>) -> Array2<Complex64> {
    a.t().mapv(|z| z.conj())
}

pub fn max_abs(a: &Array2<Complex64>) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &Array2<Complex64>, b: &Array2<Complex64>) -> f64 {
    assert_eq!(a.dim(), b.dim());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn is_unitary(a: &Array2<Complex64>, tol: f64) -> bool {
    let n = a.nrows();
    a.ncols() == n && max_abs_diff(&dagger(a).dot(a), &identity(n)) <= tol
}

/// Determinant and inverse via LU with partial pivoting.
pub fn det_inverse(a: &Array2<Complex64>) -> Result<(Complex64, Array2<Complex64>)> {
    let n = a.nrows();
    if a.ncols() != n {
        return invalid("matrix must be square");
    }
    let mut lu = a.clone();
    let mut inv = identity(n);
    let mut det = ONE;
    for col in 0..n {
        let mut pivot = col;
        for row in col + 1..n {
            if lu[(row, col)].norm() > lu[(pivot, col)].norm() {
                pivot = row;
            }
        }
        if lu[(pivot, col)].norm() < 1e-300 {
            return numeric("singular matrix");
        }
        if pivot != col {
            for k in 0..n {
                lu.swap((col, k), (pivot, k));
                inv.swap((col, k), (pivot, k));
            }
            det = -det;
        }
        let diag = lu[(col, col)];
        det *= diag;
        for k in 0..n {
            lu[(col, k)] /= diag;
            inv[(col, k)] /= diag;
        }
        for row in 0..n {
            if row == col {
                continue;
            }
            let factor = lu[(row, col)];
            if factor == ZERO {
                continue;
            }
            for k in 0..n {
                let l = lu[(col, k)];
                let v = inv[(col, k)];
                lu[(row, k)] -= factor * l;
                inv[(row, k)] -= factor * v;
            }
        }
    }
    Ok((det, inv))
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Returns `(values, vectors)` with eigenvectors as columns,
/// satisfying `A = V diag(values) V^dagger` to near machine precision.
pub fn hermitian_eigen(a: &Array2<Complex64>) -> (Vec<f64>, Array2<Complex64>) {
    let n = a.nrows();
    assert_eq!(a.ncols(), n, "hermitian_eigen needs a square matrix");
    let mut h = a.clone();
    let mut v = identity(n);
    let scale = max_abs(&h).max(1e-300);
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                off = off.max(h[(p, q)].norm());
            }
        }
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let hpq = h[(p, q)];
                let habs = hpq.norm();
                if habs <= 1e-18 * scale {
                    continue;
                }
                let app = h[(p, p)].re;
                let aqq = h[(q, q)].re;
                let phase = hpq / habs;
                let tau = (aqq - app) / (2.0 * habs);
                let t = if tau == 0.0 {
                    1.0
                } else {
                    tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // columns p, q of H and V pick up U; rows of H pick up U^dagger
                for k in 0..n {
                    let hkp = h[(k, p)];
                    let hkq = h[(k, q)];
                    h[(k, p)] = c * hkp - s * phase.conj() * hkq;
                    h[(k, q)] = s * phase * hkp + c * hkq;
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * phase.conj() * vkq;
                    v[(k, q)] = s * phase * vkp + c * vkq;
                }
                for k in 0..n {
                    let hpk = h[(p, k)];
                    let hqk = h[(q, k)];
                    h[(p, k)] = c * hpk - s * phase * hqk;
                    h[(q, k)] = s * phase.conj() * hpk + c * hqk;
                }
            }
        }
    }
    let values = (0..n).map(|i| h[(i, i)].re).collect();
    (values, v)
}

/// Singular values in descending order, from the Hermitian eigenvalues of
/// `A^dagger A`.
pub fn singular_values_desc(a: &Array2<Complex64>) -> Vec<f64> {
    let gram = dagger(a).dot(a);
    let (vals, _) = hermitian_eigen(&gram);
    let mut svals: Vec<f64> = vals.into_iter().map(|v| v.max(0.0).sqrt()).collect();
    svals.sort_by(|x, y| y.partial_cmp(x).unwrap());
    svals
}

pub fn max_singular_value(a: &Array2<Complex64>) -> f64 {
    singular_values_desc(a).first().copied().unwrap_or(0.0)
}

/// Orthonormalizes the columns of `a` by modified Gram-Schmidt, run twice
/// for full precision. The input must have full column rank.
pub fn gram_schmidt_unitary(a: &Array2<Complex64>) -> Array2<Complex64> {
    let n = a.nrows();
    let mut q = a.clone();
    for j in 0..n {
        for _pass in 0..2 {
            for k in 0..j {
                let mut proj = ZERO;
                for i in 0..n {
                    proj += q[(i, k)].conj() * q[(i, j)];
                }
                for i in 0..n {
                    let qk = q[(i, k)];
                    q[(i, j)] -= proj * qk;
                }
            }
        }
        let norm: f64 = (0..n).map(|i| q[(i, j)].norm_sqr()).sum::<f64>().sqrt();
        for i in 0..n {
            q[(i, j)] /= norm;
        }
    }
    q
}

/// `[[A, 0], [0, I]]`, the m-mode map extended over 2m modes.
pub fn block_extend(a: &Array2<Complex64>) -> Array2<Complex64> {
    let m = a.nrows();
    let mut out = identity(2 * m);
    for i in 0..m {
        for j in 0..m {
            out[(i, j)] = a[(i, j)];
        }
    }
    out
}
