//! Matrix hafnian: the sum over perfect matchings.

use crate::error::{invalid, scale_cap, Result};
use ndarray::Array2;
use num_complex::Complex64;
use std::collections::HashMap;

const MAX_DIM: usize = 20;

/// `Haf(A) = sum over perfect matchings M of prod_{(i,j) in M} A[i, j]`
/// for a symmetric even-dimensional matrix. The empty matrix hafnians
/// to one. Memoizing on the set of unmatched indices keeps the work far
/// below the `(n-1)!!` matchings.
pub fn hafnian(a: &Array2<Complex64>) -> Result<Complex64> {
    let n = a.nrows();
    if a.ncols() != n {
        return invalid("hafnian needs a square matrix");
    }
    if n % 2 == 1 {
        return invalid("hafnian needs an even-dimensional matrix");
    }
    if n > MAX_DIM {
        return scale_cap(format!("hafnian limited to {MAX_DIM}x{MAX_DIM}, got {n}"));
    }
    let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    for i in 0..n {
        for j in i + 1..n {
            if (a[(i, j)] - a[(j, i)]).norm() > 1e-10 * scale.max(1.0) {
                return invalid("hafnian needs a symmetric matrix");
            }
        }
    }
    let full: u32 = (1u32 << n) - 1;
    let mut memo = HashMap::new();
    Ok(haf_rec(a, full, &mut memo))
}

fn haf_rec(a: &Array2<Complex64>, mask: u32, memo: &mut HashMap<u32, Complex64>) -> Complex64 {
    if mask == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if let Some(&v) = memo.get(&mask) {
        return v;
    }
    let first = mask.trailing_zeros() as usize;
    let rest = mask & !(1 << first);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut bits = rest;
    while bits != 0 {
        let j = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        let entry = a[(first, j)];
        if entry != Complex64::new(0.0, 0.0) {
            acc += entry * haf_rec(a, rest & !(1 << j), memo);
        }
    }
    memo.insert(mask, acc);
    acc
}
