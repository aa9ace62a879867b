//! Pattern corpora: every valid pattern up to a size, plus seeded samples.

use rand::Rng;

use crate::algebra::{DigraphAlgebra, Pattern};
use crate::exact::Mat;
use crate::random;

/// Every valid (reflexive, transitive) pattern of size `n`, in order of the
/// bitmask over off-diagonal cells. There are 1, 4, 29, 355, 6942 of them for
/// `n = 1..=5`.
pub fn all_patterns(n: usize) -> Vec<Pattern> {
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|(i, j)| i != j).collect();
    assert!(cells.len() < 32, "exhaustive enumeration is limited to n <= 5");
    let mut out = Vec::new();
    for mask in 0u32..(1 << cells.len()) {
        let mut p = Pattern::diagonal(n);
        for (b, &(i, j)) in cells.iter().enumerate() {
            if mask >> b & 1 == 1 {
                p.set(i, j, true);
            }
        }
        if p.validate().is_ok() {
            out.push(p);
        }
    }
    out
}

/// All valid patterns with `1 ≤ n ≤ max_n`.
pub fn exhaustive(max_n: usize) -> Vec<DigraphAlgebra> {
    (1..=max_n).flat_map(all_patterns).map(|p| p.validate().expect("enumerated patterns are valid")).collect()
}

/// `count` random patterns of size `n` with densities drawn from `[0.1, 0.6]`.
pub fn random_patterns<R: Rng>(rng: &mut R, n: usize, count: usize) -> Vec<DigraphAlgebra> {
    (0..count)
        .map(|_| {
            let density = rng.random_range(0.1..0.6);
            random::pattern(rng, n, density).validate().expect("closures are valid")
        })
        .collect()
}

/// All patterns with `n ≤ 4` followed by `per_size` random patterns at each
/// of `n = 5` and `n = 6`.
pub fn standard_corpus(seed: u64, per_size: usize) -> Vec<DigraphAlgebra> {
    let mut rng = random::rng(seed);
    let mut out = exhaustive(4);
    out.extend(random_patterns(&mut rng, 5, per_size));
    out.extend(random_patterns(&mut rng, 6, per_size));
    out
}

/// A generator set of one to three elements: sparse unit combinations or
/// dense random elements.
pub fn generator_set<R: Rng>(rng: &mut R, alg: &DigraphAlgebra) -> Vec<Mat> {
    let count = rng.random_range(1..=3);
    (0..count)
        .map(|_| {
            if rng.random_bool(0.6) {
                random::sparse_element(rng, alg)
            } else {
                let density = rng.random_range(0.2..0.9);
                random::element(rng, alg, density)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preorder_counts() {
        let counts: Vec<usize> = (1..=4).map(|n| all_patterns(n).len()).collect();
        assert_eq!(counts, vec![1, 4, 29, 355]);
    }
}
