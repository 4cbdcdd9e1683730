//! Photon-count patterns over a register of modes.

use std::fmt;

/// A detection pattern `n_1 .. n_M`. Ordering is lexicographic over the
/// counts, which fixes the iteration order of pattern maps and the layout
/// of emitted CSV files.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OutputPattern(Vec<usize>);

impl OutputPattern {
    pub fn new(counts: Vec<usize>) -> Self {
        OutputPattern(counts)
    }

    pub fn zeros(modes: usize) -> Self {
        OutputPattern(vec![0; modes])
    }

    pub fn counts(&self) -> &[usize] {
        &self.0
    }

    pub fn modes(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// Product of the count factorials, `n_1! n_2! ... n_M!`.
    pub fn factorial_product(&self) -> f64 {
        self.0.iter().map(|&n| factorial(n)).product()
    }

    /// The pattern restricted to its first `keep` modes.
    pub fn prefix(&self, keep: usize) -> OutputPattern {
        OutputPattern(self.0[..keep].to_vec())
    }

    pub(crate) fn bumped(&self, mode: usize) -> OutputPattern {
        let mut counts = self.0.clone();
        counts[mode] += 1;
        OutputPattern(counts)
    }
}

impl fmt::Display for OutputPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, ")")
    }
}

/// Exact for every count a pattern can realistically hold.
pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// All patterns over `modes` modes with the given total, in lexicographic
/// order.
pub fn patterns_with_total(modes: usize, total: usize) -> Vec<OutputPattern> {
    let mut out = Vec::new();
    let mut scratch = vec![0usize; modes];
    fill_exact(&mut out, &mut scratch, 0, total);
    out
}

/// All patterns over `modes` modes with total at most `max_total`, in
/// lexicographic order.
pub fn patterns_up_to(modes: usize, max_total: usize) -> Vec<OutputPattern> {
    let mut out = Vec::new();
    let mut scratch = vec![0usize; modes];
    fill_up_to(&mut out, &mut scratch, 0, max_total);
    out
}

fn fill_exact(out: &mut Vec<OutputPattern>, scratch: &mut Vec<usize>, mode: usize, left: usize) {
    if mode + 1 == scratch.len() {
        scratch[mode] = left;
        out.push(OutputPattern(scratch.clone()));
        return;
    }
    for n in 0..=left {
        scratch[mode] = n;
        fill_exact(out, scratch, mode + 1, left - n);
    }
}

fn fill_up_to(out: &mut Vec<OutputPattern>, scratch: &mut Vec<usize>, mode: usize, left: usize) {
    if mode == scratch.len() {
        out.push(OutputPattern(scratch.clone()));
        return;
    }
    for n in 0..=left {
        scratch[mode] = n;
        fill_up_to(out, scratch, mode + 1, left - n);
    }
}
