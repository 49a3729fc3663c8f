//! Small counting and enumeration helpers.

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Exact binomial coefficient `C(n, r)`.
pub fn binomial(n: u64, r: u64) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigUint::one();
    for i in 0..r {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Strictly increasing `r`-tuples of `0..n` in lexicographic order.
pub fn subsets(n: usize, r: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..n).combinations(r)
}

/// `r`-tuples used for Carathéodory tests over `n` generators.
///
/// When `n < r` there is exactly one tuple: every index once, then the last
/// index repeated up to length `r`.
pub fn caratheodory_tuples(n: usize, r: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return Vec::new();
    }
    if n >= r {
        subsets(n, r).collect()
    } else {
        let mut t: Vec<usize> = (0..n).collect();
        t.resize(r, n - 1);
        vec![t]
    }
}

/// Labels of a `len`-point labeling encoded as a bitmask (bit `i` = point `i`).
pub fn mask_to_labels(mask: u64, len: usize) -> Vec<bool> {
    (0..len).map(|i| mask >> i & 1 == 1).collect()
}

pub fn labels_to_mask(labels: &[bool]) -> u64 {
    labels
        .iter()
        .enumerate()
        .fold(0, |m, (i, &b)| if b { m | 1 << i } else { m })
}
