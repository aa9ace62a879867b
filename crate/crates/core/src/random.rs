//! Seeded generators for patterns, elements, invertibles, and subspaces.
//!
//! All randomness in the crate flows through [`rng`] so every report can be
//! reproduced from its seed.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{DigraphAlgebra, Pattern};
use crate::exact::{Mat, Rational, Subspace};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_int<R: Rng>(rng: &mut R, lo: i64, hi: i64) -> Rational {
    Rational::from_int(rng.random_range(lo..=hi))
}

/// Random valid pattern: independent off-diagonal cells with probability
/// `density`, then closed under reflexivity and transitivity.
pub fn pattern<R: Rng>(rng: &mut R, n: usize, density: f64) -> Pattern {
    let mut p = Pattern::diagonal(n);
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.random_bool(density) {
                p.set(i, j, true);
            }
        }
    }
    p.closure()
}

/// Random element with entries in `[-2, 2]` on a random subset of units
/// (each kept with probability `density`).
pub fn element<R: Rng>(rng: &mut R, alg: &DigraphAlgebra, density: f64) -> Mat {
    let n = alg.n();
    let mut m = Mat::zeros(n, n);
    for (i, j) in alg.units() {
        if rng.random_bool(density) {
            m.set(i, j, small_int(rng, -2, 2));
        }
    }
    m
}

/// A sparse generator: a combination of one to three random matrix units.
pub fn sparse_element<R: Rng>(rng: &mut R, alg: &DigraphAlgebra) -> Mat {
    let n = alg.n();
    let units = alg.units();
    let mut m = Mat::zeros(n, n);
    let count = rng.random_range(1..=3usize.min(units.len()));
    for &(i, j) in units.choose_multiple(rng, count) {
        let mut c = small_int(rng, -2, 2);
        if c.is_zero() {
            c = Rational::one();
        }
        m.set(i, j, c);
    }
    m
}

/// Random strictly block-upper element (nilpotent), entries in `[-2, 2]`.
pub fn nilpotent<R: Rng>(rng: &mut R, alg: &DigraphAlgebra) -> Mat {
    let n = alg.n();
    let mut m = Mat::zeros(n, n);
    for (i, j) in alg.units() {
        if !alg.is_diagonal_unit(i, j) {
            m.set(i, j, small_int(rng, -2, 2));
        }
    }
    m
}

/// Unimodular-up-to-scale `s × s` integer matrix `L · diag(δ,1,…,1) · U`
/// with unit-triangular `L`, `U` and `|δ| ∈ 1..=4`, so `det = δ ≠ 0`.
pub fn invertible_block<R: Rng>(rng: &mut R, s: usize) -> Mat {
    let mut lower = Mat::identity(s);
    let mut upper = Mat::identity(s);
    for i in 0..s {
        for j in 0..i {
            lower.set(i, j, small_int(rng, -2, 2));
            upper.set(j, i, small_int(rng, -2, 2));
        }
    }
    let mut delta = rng.random_range(1..=4i64);
    if rng.random_bool(0.5) {
        delta = -delta;
    }
    let mut mid = Mat::identity(s);
    if s > 0 {
        mid.set(0, 0, Rational::from_int(delta));
    }
    &(&lower * &mid) * &upper
}

/// Random invertible element `d(1 + n)` of the algebra: `d` block diagonal
/// with invertible integer blocks, `n` strictly block upper with entries in
/// `[-2, 2]`. Returns `(t, d, n)`.
pub fn invertible<R: Rng>(rng: &mut R, alg: &DigraphAlgebra) -> (Mat, Mat, Mat) {
    let n = alg.n();
    let mut d = Mat::zeros(n, n);
    for u in 0..alg.blocks().count() {
        let block = invertible_block(rng, alg.blocks().size(u));
        d = &d + &alg.embed_block(u, &block);
    }
    let nil = nilpotent(rng, alg);
    let t = &d * &(&Mat::identity(n) + &nil);
    (t, d, nil)
}

/// Random subspace of the algebra spanned by `k` random elements.
pub fn subspace<R: Rng>(rng: &mut R, alg: &DigraphAlgebra, k: usize) -> Subspace {
    let n = alg.n();
    let mut s = Subspace::zero(n * n);
    for _ in 0..k {
        let density = rng.random_range(0.2..0.8);
        s.insert(element(rng, alg, density).coords()).expect("ambient matches");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_patterns_are_valid() {
        let mut r = rng(1);
        for n in 1..=6 {
            for _ in 0..20 {
                assert!(pattern(&mut r, n, 0.3).validate().is_ok());
            }
        }
    }

    #[test]
    fn invertibles_are_invertible_and_supported() {
        let mut r = rng(2);
        let alg = Pattern::from_entries(4, [(0, 0), (1, 1), (2, 2), (3, 3), (0, 1), (1, 0), (0, 2), (1, 2)])
            .unwrap()
            .validate()
            .unwrap();
        for _ in 0..20 {
            let (t, _, _) = invertible(&mut r, &alg);
            assert!(alg.supports(&t));
            assert!(t.inverse().is_some());
        }
    }

    #[test]
    fn seeds_reproduce() {
        let alg = Pattern::upper_triangular(3).validate().unwrap();
        let a = invertible(&mut rng(9), &alg).0;
        let b = invertible(&mut rng(9), &alg).0;
        assert_eq!(a, b);
    }
}
