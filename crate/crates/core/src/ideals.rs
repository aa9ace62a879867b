//! Associative ideals of a digraph algebra, described by the block pairs
//! they fill.
//!
//! An ideal that contains a block `f_u A f_v` also contains every block
//! "above and to the right" of it: all `(t, s)` with `t ≤ u` and `v ≤ s` in
//! the block order (non-strict on both sides).

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::algebra::{AlgebraError, DigraphAlgebra};
use crate::exact::{Mat, Rational, Subspace};

/// Refuse to enumerate off-diagonal ideals beyond this many strict pairs.
pub const DEFAULT_MAX_STRICT_PAIRS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IdealError {
    #[error("block pair ({u},{v}) is not in the block pattern", u = .0 + 1, v = .1 + 1)]
    NotInPattern(usize, usize),
    #[error("{pairs} strict block pairs exceed the enumeration cap {cap}")]
    TooLarge { pairs: usize, cap: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A set of block pairs `(u, v)`; as a subspace, the span of all matrix
/// units in those blocks.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockIdeal {
    pairs: BTreeSet<(usize, usize)>,
}

impl BlockIdeal {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        BlockIdeal { pairs: pairs.into_iter().collect() }
    }

    pub fn pairs(&self) -> &BTreeSet<(usize, usize)> {
        &self.pairs
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        self.pairs.contains(&(u, v))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Off-diagonal ideals meet the diagonal part in zero.
    pub fn is_off_diagonal(&self) -> bool {
        self.pairs.iter().all(|&(u, v)| u != v)
    }

    /// Whether the set is closed upward in `alg`'s block order.
    pub fn is_up_closed(&self, alg: &DigraphAlgebra) -> bool {
        closure_pairs(alg, &self.pairs) == self.pairs
    }

    /// Ordering key: (cardinality, sorted pair list).
    fn sort_key(&self) -> (usize, Vec<(usize, usize)>) {
        (self.pairs.len(), self.pairs.iter().copied().collect())
    }

    /// 1-based pairs for reports.
    pub fn one_based(&self) -> Vec<(usize, usize)> {
        self.pairs.iter().map(|&(u, v)| (u + 1, v + 1)).collect()
    }
}

impl fmt::Display for BlockIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_based().iter().map(|(u, v)| format!("({u},{v})")).collect();
        f.write_str(&parts.join(";"))
    }
}

/// Parses `"(1,2);(2,3)"` (1-based) into 0-based pairs. The empty string is
/// the empty set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairList(pub Vec<(usize, usize)>);

impl FromStr for PairList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut out = Vec::new();
        for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let inner = part
                .strip_prefix('(')
                .and_then(|p| p.strip_suffix(')'))
                .ok_or_else(|| format!("expected \"(u,v)\", found {part:?}"))?;
            let (a, b) = inner.split_once(',').ok_or_else(|| format!("expected \"(u,v)\", found {part:?}"))?;
            let a: usize = a.trim().parse().map_err(|_| format!("bad index in {part:?}"))?;
            let b: usize = b.trim().parse().map_err(|_| format!("bad index in {part:?}"))?;
            if a == 0 || b == 0 {
                return Err(format!("indices are 1-based, found {part:?}"));
            }
            out.push((a - 1, b - 1));
        }
        Ok(PairList(out))
    }
}

fn closure_pairs(alg: &DigraphAlgebra, seed: &BTreeSet<(usize, usize)>) -> BTreeSet<(usize, usize)> {
    let bs = alg.blocks();
    let p = bs.count();
    let mut out = BTreeSet::new();
    for &(u, v) in seed {
        for t in (0..p).filter(|&t| bs.leq(t, u)) {
            for s in (0..p).filter(|&s| bs.leq(v, s)) {
                out.insert((t, s));
            }
        }
    }
    out
}

/// Smallest up-closed block set containing `seed`.
pub fn ideal_closure(alg: &DigraphAlgebra, seed: &[(usize, usize)]) -> Result<BlockIdeal, IdealError> {
    let bs = alg.blocks();
    for &(u, v) in seed {
        if u >= bs.count() || v >= bs.count() || !bs.leq(u, v) {
            return Err(IdealError::NotInPattern(u, v));
        }
    }
    let seed: BTreeSet<_> = seed.iter().copied().collect();
    Ok(BlockIdeal { pairs: closure_pairs(alg, &seed) })
}

/// Every off-diagonal associative ideal, sorted by (size, pairs).
///
/// Up-sets of the strict-pair order are generated by branching on one
/// undecided pair at a time: excluding it excludes everything below it,
/// including it includes everything above it. Each up-set is reached once.
pub fn enumerate_offdiag_ideals(alg: &DigraphAlgebra, cap: usize) -> Result<Vec<BlockIdeal>, IdealError> {
    let pairs = alg.blocks().strict_pairs();
    if pairs.len() > cap {
        return Err(IdealError::TooLarge { pairs: pairs.len(), cap });
    }
    let m = pairs.len();
    let bs = alg.blocks();
    let le = |a: usize, b: usize| {
        // pair a ≼ pair b: b lies above and to the right of a.
        let (u, v) = pairs[a];
        let (t, s) = pairs[b];
        bs.leq(t, u) && bs.leq(v, s)
    };
    let mut out = Vec::new();
    let mut state = vec![None::<bool>; m];
    branch(&mut state, &le, &mut out);
    let mut ideals: Vec<BlockIdeal> = out
        .into_iter()
        .map(|st| BlockIdeal::from_pairs((0..m).filter(|&a| st[a]).map(|a| pairs[a])))
        .collect();
    ideals.sort_by_key(BlockIdeal::sort_key);
    debug_assert!(ideals.iter().all(|k| k.is_up_closed(alg)));
    Ok(ideals)
}

fn branch(state: &mut Vec<Option<bool>>, le: &dyn Fn(usize, usize) -> bool, out: &mut Vec<Vec<bool>>) {
    let Some(a) = state.iter().position(Option::is_none) else {
        out.push(state.iter().map(|s| s.expect("all decided")).collect());
        return;
    };
    for include in [false, true] {
        let saved = state.clone();
        for (b, slot) in state.iter_mut().enumerate() {
            if slot.is_none() && ((include && le(a, b)) || (!include && le(b, a))) {
                *slot = Some(include);
            }
        }
        branch(state, le, out);
        *state = saved;
    }
}

/// Span of every matrix unit in the ideal's blocks.
pub fn to_subspace(alg: &DigraphAlgebra, k: &BlockIdeal) -> Subspace {
    let n = alg.n();
    let bs = alg.blocks();
    Subspace::coordinate(
        n * n,
        alg.units()
            .into_iter()
            .filter(|&(i, j)| k.contains(bs.block_of(i), bs.block_of(j)))
            .map(|(i, j)| i * n + j),
    )
}

/// Reads the block set back off a subspace that is a union of full blocks;
/// `None` if it is not.
pub fn from_subspace(alg: &DigraphAlgebra, s: &Subspace) -> Option<BlockIdeal> {
    let n = alg.n();
    let bs = alg.blocks();
    let mut pairs = BTreeSet::new();
    for b in s.basis() {
        for (idx, x) in b.iter().enumerate() {
            if !x.is_zero() {
                pairs.insert((bs.block_of(idx / n), bs.block_of(idx % n)));
            }
        }
    }
    let k = BlockIdeal { pairs };
    (to_subspace(alg, &k) == *s).then_some(k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// Why a subspace fails to be an ideal: `unit · basis` (left) or
/// `basis · unit` (right) escapes it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealWitness {
    pub unit: (usize, usize),
    pub basis: Mat,
    pub side: Side,
}

/// `e_ij · B` on row-major coordinates: row `j` of `B` moved to row `i`.
pub(crate) fn unit_left(n: usize, (i, j): (usize, usize), b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); n * n];
    out[i * n..(i + 1) * n].clone_from_slice(&b[j * n..(j + 1) * n]);
    out
}

/// `B · e_ij`: column `i` of `B` moved to column `j`.
pub(crate) fn unit_right(n: usize, (i, j): (usize, usize), b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); n * n];
    for r in 0..n {
        out[r * n + j] = b[r * n + i].clone();
    }
    out
}

/// Exact two-sided ideal test against every matrix unit; `Ok(None)` means
/// the subspace is an ideal.
pub fn is_associative_ideal(alg: &DigraphAlgebra, s: &Subspace) -> Result<Option<IdealWitness>, IdealError> {
    alg.check_subspace(s)?;
    let n = alg.n();
    for e in alg.units() {
        for b in s.basis() {
            for side in [Side::Left, Side::Right] {
                let prod = match side {
                    Side::Left => unit_left(n, e, b),
                    Side::Right => unit_right(n, e, b),
                };
                if !s.contains(&prod).expect("ambient checked") {
                    let basis = Mat::from_coords(n, b).expect("ambient checked");
                    return Ok(Some(IdealWitness { unit: e, basis, side }));
                }
            }
        }
    }
    Ok(None)
}
