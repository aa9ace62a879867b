//! Brute-force references used to cross-check the engines.
//!
//! Everything here works with whole matrices and plain loops, sharing no
//! shortcuts (coordinate tricks, block bookkeeping, closure orders) with the
//! code it checks.

use crate::algebra::DigraphAlgebra;
use crate::exact::{Mat, Rational, Subspace};

/// Two-sided ideal test by multiplying every matrix unit against every
/// basis element.
pub fn is_ideal(alg: &DigraphAlgebra, s: &Subspace) -> bool {
    let n = alg.n();
    let basis = s.basis_mats(n);
    alg.matrix_units().iter().all(|e| {
        basis.iter().all(|b| s.contains_mat(&(e * b)).unwrap_or(false) && s.contains_mat(&(b * e)).unwrap_or(false))
    })
}

/// Lie-ideal test with full commutators against every matrix unit.
pub fn is_lie_ideal(alg: &DigraphAlgebra, s: &Subspace) -> bool {
    let n = alg.n();
    let basis = s.basis_mats(n);
    alg.matrix_units()
        .iter()
        .all(|e| basis.iter().all(|b| s.contains_mat(&(&(b * e) - &(e * b))).unwrap_or(false)))
}

/// Lie closure by repeated sweeps: bracket every basis element against every
/// unit until a full sweep adds nothing.
pub fn lie_closure(alg: &DigraphAlgebra, gens: &[Mat]) -> Subspace {
    let n = alg.n();
    let mut s = Subspace::span_mats(gens, n).expect("square generators");
    loop {
        let before = s.dim();
        for b in s.basis_mats(n) {
            for e in alg.matrix_units() {
                s.insert((&(&e * &b) - &(&b * &e)).coords()).expect("same ambient");
            }
        }
        if s.dim() == before {
            return s;
        }
    }
}

/// Number of off-diagonal ideals: subsets of the off-block-diagonal units
/// whose span is a two-sided ideal. Limited to 20 such units.
pub fn count_offdiag_ideals(alg: &DigraphAlgebra) -> usize {
    let n = alg.n();
    let units: Vec<(usize, usize)> =
        alg.units().into_iter().filter(|&(i, j)| !alg.pattern().has(j, i)).collect();
    assert!(units.len() <= 20, "brute force limited to 20 units");
    (0u32..(1 << units.len()))
        .filter(|mask| {
            let chosen: Vec<Mat> = (0..units.len())
                .filter(|b| mask >> b & 1 == 1)
                .map(|b| Mat::unit(n, units[b].0, units[b].1))
                .collect();
            is_ideal(alg, &Subspace::span_mats(&chosen, n).expect("square"))
        })
        .count()
}

/// The four Lie ideals of `M_n`: zero, scalars, trace zero, everything.
pub fn full_matrix_lie_ideals(n: usize) -> Vec<Subspace> {
    let mut trace_zero = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                trace_zero.push(Mat::unit(n, i, j));
            }
        }
    }
    for i in 1..n {
        let mut d = Mat::zeros(n, n);
        d.set(0, 0, Rational::one());
        d.set(i, i, -Rational::one());
        trace_zero.push(d);
    }
    vec![
        Subspace::zero(n * n),
        Subspace::span_mats(&[Mat::identity(n)], n).expect("square"),
        Subspace::span_mats(&trace_zero, n).expect("square"),
        Subspace::full(n * n),
    ]
}

/// `t^{-1} x t` with `t^{-1}` from plain Gauss-Jordan elimination.
pub fn conjugate(t: &Mat, x: &Mat) -> Option<Mat> {
    Some(&(&t.inverse()? * x) * t)
}

/// Number of unit pairs with `φ(e_ij) φ(e_kl) ≠ δ_jk φ(e_il)`, using full
/// matrix products.
pub fn unit_map_residual<F>(alg: &DigraphAlgebra, phi: F) -> usize
where
    F: Fn(&Mat) -> Mat,
{
    let units = alg.units();
    let n = alg.n();
    let mut bad = 0;
    for &(i, j) in &units {
        for &(k, l) in &units {
            let lhs = &phi(&Mat::unit(n, i, j)) * &phi(&Mat::unit(n, k, l));
            let rhs = if j == k { phi(&Mat::unit(n, i, l)) } else { Mat::zeros(lhs.rows(), lhs.cols()) };
            if lhs != rhs {
                bad += 1;
            }
        }
    }
    bad
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Pattern;

    #[test]
    fn catalan_counts_for_triangular() {
        let counts: Vec<usize> =
            (1..=4).map(|n| count_offdiag_ideals(&Pattern::upper_triangular(n).validate().unwrap())).collect();
        assert_eq!(counts, vec![1, 2, 5, 14]);
    }

    #[test]
    fn four_ideals_are_lie_ideals() {
        let m3 = Pattern::full(3).validate().unwrap();
        for s in full_matrix_lie_ideals(3) {
            assert!(is_lie_ideal(&m3, &s));
        }
        assert_eq!(full_matrix_lie_ideals(3)[2].dim(), 8);
    }
}
