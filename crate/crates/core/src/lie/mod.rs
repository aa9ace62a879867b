//! Lie ideals of digraph algebras.
//!
//! Every Lie ideal splits as `L = G + K` with `K = L ∩ S` an off-diagonal
//! associative ideal and `G = π(L)` a subspace of the diagonal part (a "Lie
//! addend" for `K`). [`addend`] describes which diagonal subspaces are
//! addends for a given `K`.

pub mod addend;
mod constraint;

use serde::Serialize;

use crate::algebra::{AlgebraError, DigraphAlgebra};
use crate::exact::{ExactError, Mat, Rational, Subspace};
use crate::ideals::{self, BlockIdeal, IdealError};

pub use addend::{
    classify_addend, enumerate_descriptors, maximal_addend, triangular_constraint_space, AddendKind,
    LieIdealDescriptor, Rejection,
};
pub use constraint::{ConstraintGraph, UnionFind};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LieError {
    #[error("not a Lie ideal: [e{}{}, b] leaves the subspace", .0.unit.0 + 1, .0.unit.1 + 1)]
    NotLieIdeal(Box<LieWitness>),
    #[error("off-diagonal part is not a union of full blocks")]
    NotFullBlocks,
    #[error("subspace is not inside the diagonal part")]
    NotDiagonal,
    #[error("block set {0} is not an off-diagonal associative ideal")]
    InvalidIdeal(BlockIdeal),
    #[error("addend rejected: {0}")]
    Rejected(Rejection),
    #[error("{units} scalar-carrying units exceed the descriptor enumeration cap {cap}")]
    TooLarge { units: usize, cap: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// A matrix unit `e` and basis element `b` with `[e, b]` outside the subspace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieWitness {
    pub unit: (usize, usize),
    pub basis: Mat,
    pub bracket: Mat,
}

/// `[e_ij, B]` on row-major coordinates.
pub(crate) fn unit_bracket(n: usize, (i, j): (usize, usize), b: &[Rational]) -> Vec<Rational> {
    let mut out = ideals::unit_left(n, (i, j), b);
    for r in 0..n {
        let x = &b[r * n + i];
        if !x.is_zero() {
            out[r * n + j] -= x;
        }
    }
    out
}

/// Exact Lie-ideal test: `[e, b] ∈ s` for every matrix unit `e` and basis
/// element `b`. Brackets are bilinear and the units span the algebra, so this
/// is sufficient. `Ok(None)` means `s` is a Lie ideal.
pub fn is_lie_ideal(alg: &DigraphAlgebra, s: &Subspace) -> Result<Option<LieWitness>, LieError> {
    alg.check_subspace(s)?;
    let n = alg.n();
    for e in alg.units() {
        for b in s.basis() {
            let br = unit_bracket(n, e, b);
            if !s.contains(&br)? {
                return Ok(Some(LieWitness {
                    unit: e,
                    basis: Mat::from_coords(n, b)?,
                    bracket: Mat::from_coords(n, &br)?,
                }));
            }
        }
    }
    Ok(None)
}

pub fn require_lie_ideal(alg: &DigraphAlgebra, s: &Subspace) -> Result<(), LieError> {
    match is_lie_ideal(alg, s)? {
        None => Ok(()),
        Some(w) => Err(LieError::NotLieIdeal(Box::new(w))),
    }
}

/// Smallest Lie ideal containing the generators.
///
/// Each round brackets every matrix unit against everything added in the
/// previous round and inserts all results at once; the subspace stops
/// growing after at most `dim A` rounds.
pub fn lie_generate(alg: &DigraphAlgebra, gens: &[Mat]) -> Result<Subspace, LieError> {
    let n = alg.n();
    let mut s = Subspace::zero(n * n);
    let mut frontier = Vec::new();
    for g in gens {
        alg.check_element(g)?;
        if s.insert(g.coords())? {
            frontier.push(g.to_coords());
        }
    }
    lie_close(alg, s, frontier)
}

/// Lie closure of a subspace already inside the algebra.
pub fn lie_generate_subspace(alg: &DigraphAlgebra, s: &Subspace) -> Result<Subspace, LieError> {
    alg.check_subspace(s)?;
    lie_close(alg, s.clone(), s.basis().to_vec())
}

fn lie_close(alg: &DigraphAlgebra, mut s: Subspace, mut frontier: Vec<Vec<Rational>>) -> Result<Subspace, LieError> {
    let n = alg.n();
    let units = alg.units();
    while !frontier.is_empty() {
        let images: Vec<Vec<Rational>> = frontier
            .iter()
            .flat_map(|b| units.iter().map(move |&e| unit_bracket(n, e, b)))
            .collect();
        frontier.clear();
        for v in images {
            if s.insert(&v)? {
                frontier.push(v);
            }
        }
    }
    Ok(s)
}

/// `L = G + K` with `G = π(L)` and `K = {x − π(x) : x ∈ L}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub g: Subspace,
    pub k: Subspace,
    #[serde(serialize_with = "serialize_ideal")]
    pub ideal: BlockIdeal,
}

pub(crate) fn serialize_ideal<S: serde::Serializer>(k: &BlockIdeal, s: S) -> Result<S::Ok, S::Error> {
    k.one_based().serialize(s)
}

pub fn decompose(alg: &DigraphAlgebra, l: &Subspace) -> Result<Decomposition, LieError> {
    require_lie_ideal(alg, l)?;
    let n = alg.n();
    let mut g = Subspace::zero(n * n);
    let mut k = Subspace::zero(n * n);
    for b in l.basis() {
        let d = alg.pi_coords(b);
        let off: Vec<Rational> = b.iter().zip(&d).map(|(x, y)| x - y).collect();
        g.insert(&d)?;
        k.insert(&off)?;
    }
    let ideal = ideals::from_subspace(alg, &k).ok_or(LieError::NotFullBlocks)?;
    Ok(Decomposition { g, k, ideal })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Pattern;

    fn alg(p: Pattern) -> DigraphAlgebra {
        p.validate().unwrap()
    }

    fn span(n: usize, mats: &[Mat]) -> Subspace {
        Subspace::span_mats(mats, n).unwrap()
    }

    fn trace_zero_m2() -> Subspace {
        span(2, &[Mat::unit(2, 0, 1), Mat::unit(2, 1, 0), Mat::from_ints(&[[1, 0], [0, -1]])])
    }

    #[test]
    fn unit_bracket_matches_commutator() {
        let b = Mat::from_ints(&[[1, 2, 3], [4, 5, 6], [7, 8, 9]]);
        for i in 0..3 {
            for j in 0..3 {
                let e = Mat::unit(3, i, j);
                assert_eq!(unit_bracket(3, (i, j), b.coords()), e.bracket(&b).unwrap().into_coords());
            }
        }
    }

    #[test]
    fn lie_ideal_examples() {
        let m2 = alg(Pattern::full(2));
        assert_eq!(is_lie_ideal(&m2, &trace_zero_m2()).unwrap(), None);
        let t2 = alg(Pattern::upper_triangular(2));
        let w = is_lie_ideal(&t2, &span(2, &[Mat::unit(2, 0, 0)])).unwrap().unwrap();
        assert_eq!(w.unit, (0, 1));
        assert_eq!(w.basis, Mat::unit(2, 0, 0));
        assert_eq!(w.bracket, Mat::from_ints(&[[0, -1], [0, 0]]));
        assert_eq!(is_lie_ideal(&t2, &Subspace::zero(4)).unwrap(), None);
        assert_eq!(is_lie_ideal(&t2, &t2.subspace()).unwrap(), None);
        assert!(is_lie_ideal(&t2, &span(2, &[Mat::unit(2, 1, 0)])).is_err());
    }

    #[test]
    fn generation_examples() {
        let t2 = alg(Pattern::upper_triangular(2));
        assert_eq!(lie_generate(&t2, &[Mat::unit(2, 0, 1)]).unwrap(), span(2, &[Mat::unit(2, 0, 1)]));
        let m2 = alg(Pattern::full(2));
        let l = lie_generate(&m2, &[Mat::from_ints(&[[1, 0], [0, -1]])]).unwrap();
        assert_eq!(l, trace_zero_m2());
        assert!(lie_generate(&m2, &[]).unwrap().is_zero());
        assert!(lie_generate(&t2, &[Mat::unit(2, 1, 0)]).is_err());
    }

    #[test]
    fn decomposition_examples() {
        let t2 = alg(Pattern::upper_triangular(2));
        let l = span(2, &[Mat::identity(2), Mat::unit(2, 0, 1)]);
        let d = decompose(&t2, &l).unwrap();
        assert_eq!(d.g, span(2, &[Mat::identity(2)]));
        assert_eq!(d.k, span(2, &[Mat::unit(2, 0, 1)]));
        assert_eq!(d.ideal, BlockIdeal::from_pairs([(0, 1)]));

        let m2 = alg(Pattern::full(2));
        let d = decompose(&m2, &trace_zero_m2()).unwrap();
        assert_eq!(d.g, trace_zero_m2());
        assert!(d.k.is_zero());

        let t3 = alg(Pattern::upper_triangular(3));
        let d = decompose(&t3, &t3.subspace()).unwrap();
        let (e, s) = t3.diag_offdiag_split();
        assert_eq!((d.g, d.k), (e, s));

        assert!(matches!(decompose(&t2, &span(2, &[Mat::unit(2, 0, 0)])), Err(LieError::NotLieIdeal(_))));
    }
}
