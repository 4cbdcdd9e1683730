//! Matrix permanent by Ryser's inclusion-exclusion with Gray-code updates.

use crate::error::{invalid, scale_cap, Result};
use ndarray::Array2;
use num_complex::Complex64;

const MAX_DIM: usize = 30;

/// `Per(A) = sum over permutations of prod_i A[i, sigma(i)]`, computed in
/// `O(2^n n)`. The permanent of the empty matrix is one.
pub fn permanent(a: &Array2<Complex64>) -> Result<Complex64> {
    let n = a.nrows();
    if a.ncols() != n {
        return invalid("permanent needs a square matrix");
    }
    if n > MAX_DIM {
        return scale_cap(format!("permanent limited to {MAX_DIM}x{MAX_DIM}, got {n}"));
    }
    if n == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let mut row_sums = vec![Complex64::new(0.0, 0.0); n];
    let mut total = Complex64::new(0.0, 0.0);
    let mut prev_gray = 0u64;
    for k in 1u64..(1u64 << n) {
        let gray = k ^ (k >> 1);
        let changed = gray ^ prev_gray;
        let j = changed.trailing_zeros() as usize;
        if gray & changed != 0 {
            for i in 0..n {
                row_sums[i] += a[(i, j)];
            }
        } else {
            for i in 0..n {
                row_sums[i] -= a[(i, j)];
            }
        }
        prev_gray = gray;
        let prod: Complex64 = row_sums.iter().product();
        if gray.count_ones() % 2 == 0 {
            total += prod;
        } else {
            total -= prod;
        }
    }
    if n % 2 == 1 {
        total = -total;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::identity;
    use proptest::prelude::*;

    fn naive_permanent(a: &Array2<Complex64>) -> Complex64 {
        let n = a.nrows();
        let mut cols: Vec<usize> = (0..n).collect();
        let mut total = Complex64::new(0.0, 0.0);
        permute(&mut cols, 0, a, &mut total);
        total
    }

    fn permute(cols: &mut Vec<usize>, k: usize, a: &Array2<Complex64>, total: &mut Complex64) {
        let n = cols.len();
        if k == n {
            let mut prod = Complex64::new(1.0, 0.0);
            for (i, &j) in cols.iter().enumerate() {
                prod *= a[(i, j)];
            }
            *total += prod;
            return;
        }
        for i in k..n {
            cols.swap(k, i);
            permute(cols, k + 1, a, total);
            cols.swap(k, i);
        }
    }

    #[test]
    fn identity_has_unit_permanent() {
        let a = identity(3);
        assert_eq!(permanent(&a).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn two_by_two() {
        let a = ndarray::array![
            [Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)],
            [Complex64::new(3.0, 0.0), Complex64::new(4.0, 0.0)]
        ];
        // ad + bc
        assert_eq!(permanent(&a).unwrap(), Complex64::new(10.0, 0.0));
    }

    #[test]
    fn all_ones_counts_permutations() {
        let a = Array2::from_elem((3, 3), Complex64::new(1.0, 0.0));
        assert!((permanent(&a).unwrap() - Complex64::new(6.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn empty_matrix_is_one() {
        let a = Array2::from_elem((0, 0), Complex64::new(0.0, 0.0));
        assert_eq!(permanent(&a).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn rejects_non_square() {
        let a = Array2::from_elem((2, 3), Complex64::new(1.0, 0.0));
        assert!(permanent(&a).is_err());
    }

    #[test]
    fn rejects_oversized() {
        let a = identity(MAX_DIM + 1);
        assert!(matches!(
            permanent(&a),
            Err(crate::error::GbsError::ScaleCap(_))
        ));
    }

    proptest! {
        #[test]
        fn matches_naive_enumeration(
            n in 1usize..=5,
            seed in proptest::collection::vec(-1.0f64..1.0, 50),
        ) {
            let mut a = Array2::from_elem((n, n), Complex64::new(0.0, 0.0));
            let mut it = seed.iter();
            for i in 0..n {
                for j in 0..n {
                    let re = *it.next().unwrap();
                    let im = *it.next().unwrap();
                    a[(i, j)] = Complex64::new(re, im);
                }
            }
            let fast = permanent(&a).unwrap();
            let slow = naive_permanent(&a);
            prop_assert!((fast - slow).norm() < 1e-10);
        }
    }
}
