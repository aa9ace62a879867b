//! Lie addends: diagonal subspaces `G` with `G + K` a Lie ideal.
//!
//! For a fixed off-diagonal ideal `K`, each block compression `f_u G f_u` is
//! one of four Lie ideals of a full matrix algebra (zero, scalars, trace
//! zero, everything); trace-zero parts of compressions lie in `G`; and blocks
//! joined by a strict pair outside `K` carry equal scalars.

use std::fmt;

use serde::Serialize;

use super::constraint::ConstraintGraph;
use super::{serialize_ideal, LieError};
use crate::algebra::DigraphAlgebra;
use crate::exact::{nullspace, Mat, Rational, Subspace};
use crate::ideals::{self, BlockIdeal};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AddendKind {
    Zero,
    Scalar,
    TraceZero,
    Full,
}

impl AddendKind {
    /// Kinds whose compression has a non-zero trace functional.
    pub fn carries_scalar(self) -> bool {
        matches!(self, AddendKind::Scalar | AddendKind::Full)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum Rejection {
    /// The block compression is not zero, scalars, trace-zero, or full.
    NotOneOfFour { block: usize },
    /// The compression has trace-zero elements that are not in `G`.
    TraceZeroMissing { block: usize },
    /// An edge of the constraint graph touches a non-scalar compression.
    EdgeNotScalar { edge: (usize, usize), block: usize },
    /// Some element of `G` has different scalars at the two ends of an edge.
    EdgeScalarsUnequal { edge: (usize, usize), left: Rational, right: Rational },
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::NotOneOfFour { block } => {
                write!(f, "compression at block {} is not one of the four Lie ideals", block + 1)
            }
            Rejection::TraceZeroMissing { block } => {
                write!(f, "trace-zero part of block {} is not contained in the addend", block + 1)
            }
            Rejection::EdgeNotScalar { edge, block } => write!(
                f,
                "edge ({},{}) requires scalars but block {} is not scalar",
                edge.0 + 1,
                edge.1 + 1,
                block + 1
            ),
            Rejection::EdgeScalarsUnequal { edge, left, right } => write!(
                f,
                "edge ({},{}) requires equal scalars, found {left} and {right}",
                edge.0 + 1,
                edge.1 + 1
            ),
        }
    }
}

/// Symbolic description of a Lie ideal `G + K`.
///
/// `scalar_tuples` is the subspace of `Q^p` realized by the normalized block
/// traces `(tr(f_u g f_u) / |B_u|)_u` of elements `g ∈ G`; together with the
/// kinds it determines `G` (see [`LieIdealDescriptor::to_subspace`]).
/// `linkage` groups the scalar-carrying blocks whose scalars agree on all
/// of `G`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LieIdealDescriptor {
    #[serde(serialize_with = "serialize_ideal")]
    pub k: BlockIdeal,
    pub kinds: Vec<AddendKind>,
    pub linkage: Vec<Vec<usize>>,
    pub scalar_tuples: Subspace,
}

impl LieIdealDescriptor {
    /// Reconstructs `G + K`.
    pub fn to_subspace(&self, alg: &DigraphAlgebra) -> Subspace {
        let mut s = ideals::to_subspace(alg, &self.k);
        for (u, kind) in self.kinds.iter().enumerate() {
            if matches!(kind, AddendKind::TraceZero | AddendKind::Full) {
                for m in trace_zero_basis(alg.blocks().size(u)) {
                    s.insert(alg.embed_block(u, &m).coords()).expect("ambient matches");
                }
            }
        }
        let n = alg.n();
        for t in self.scalar_tuples.basis() {
            let mut m = Mat::zeros(n, n);
            for (u, x) in t.iter().enumerate() {
                for &i in alg.blocks().block(u) {
                    m.set(i, i, x.clone());
                }
            }
            s.insert(m.coords()).expect("ambient matches");
        }
        s
    }

    /// Copy with 1-based linkage labels, for reports.
    pub fn one_based_linkage(&self) -> Vec<Vec<usize>> {
        self.linkage.iter().map(|c| c.iter().map(|u| u + 1).collect()).collect()
    }
}

/// Spanning set of the trace-zero `s × s` matrices.
pub(crate) fn trace_zero_basis(s: usize) -> Vec<Mat> {
    let mut out = Vec::new();
    for i in 0..s {
        for j in 0..s {
            if i != j {
                out.push(Mat::unit(s, i, j));
            }
        }
    }
    for i in 0..s.saturating_sub(1) {
        let mut m = Mat::unit(s, i, i);
        m.set(i + 1, i + 1, -Rational::one());
        out.push(m);
    }
    out
}

fn check_offdiag_ideal(alg: &DigraphAlgebra, k: &BlockIdeal) -> Result<(), LieError> {
    let strict = alg.blocks().poset();
    if !k.pairs().iter().all(|p| strict.contains(p)) || !k.is_up_closed(alg) {
        return Err(LieError::InvalidIdeal(k.clone()));
    }
    Ok(())
}

/// The largest Lie addend `F` for `K`: full blocks on free nodes and the
/// identity of each constraint-graph component.
pub fn maximal_addend(alg: &DigraphAlgebra, k: &BlockIdeal) -> Result<(Subspace, ConstraintGraph), LieError> {
    check_offdiag_ideal(alg, k)?;
    let graph = ConstraintGraph::new(alg, k);
    let n = alg.n();
    let mut f = Subspace::zero(n * n);
    for &u in &graph.free_nodes {
        for (i, j) in alg.block_units(u, u) {
            f.insert(Mat::unit(n, i, j).coords())?;
        }
    }
    for comp in &graph.components {
        let mut m = Mat::zeros(n, n);
        for &u in comp {
            for &i in alg.blocks().block(u) {
                m.set(i, i, Rational::one());
            }
        }
        f.insert(m.coords())?;
    }
    Ok((f, graph))
}

fn compression_kind(s: usize, comp: &Subspace) -> Option<AddendKind> {
    if comp.is_zero() {
        return Some(AddendKind::Zero);
    }
    if s == 1 {
        return Some(AddendKind::Scalar);
    }
    if comp.dim() == s * s {
        return Some(AddendKind::Full);
    }
    if comp.dim() == 1 && comp.contains(Mat::identity(s).coords()).expect("same ambient") {
        return Some(AddendKind::Scalar);
    }
    let all_trace_zero =
        comp.basis().iter().all(|b| Mat::from_coords(s, b).expect("square").trace().is_zero());
    if comp.dim() == s * s - 1 && all_trace_zero {
        return Some(AddendKind::TraceZero);
    }
    None
}

/// Normalized trace of block `u` of `g`.
fn block_scalar(alg: &DigraphAlgebra, g: &Mat, u: usize) -> Rational {
    let size = alg.blocks().size(u) as i64;
    &alg.compress(g, u).trace() / &Rational::from_int(size)
}

/// Decides whether `G` is a Lie addend for `K` and, if so, describes it.
pub fn classify_addend(alg: &DigraphAlgebra, k: &BlockIdeal, g: &Subspace) -> Result<LieIdealDescriptor, LieError> {
    check_offdiag_ideal(alg, k)?;
    alg.check_subspace(g)?;
    let (e, _) = alg.diag_offdiag_split();
    if !g.is_subspace_of(&e)? {
        return Err(LieError::NotDiagonal);
    }
    let n = alg.n();
    let bs = alg.blocks();
    let p = bs.count();
    let elems = g.basis_mats(n);

    let mut kinds = Vec::with_capacity(p);
    for u in 0..p {
        let s = bs.size(u);
        let mut comp = Subspace::zero(s * s);
        for m in &elems {
            comp.insert(alg.compress(m, u).coords())?;
        }
        let kind = compression_kind(s, &comp).ok_or(LieError::Rejected(Rejection::NotOneOfFour { block: u }))?;
        kinds.push(kind);
    }

    for (u, kind) in kinds.iter().enumerate() {
        if matches!(kind, AddendKind::TraceZero | AddendKind::Full) {
            for m in trace_zero_basis(bs.size(u)) {
                if !g.contains(alg.embed_block(u, &m).coords())? {
                    return Err(LieError::Rejected(Rejection::TraceZeroMissing { block: u }));
                }
            }
        }
    }

    let graph = ConstraintGraph::new(alg, k);
    for &(u, v) in &graph.edges {
        for w in [u, v] {
            if !matches!(kinds[w], AddendKind::Zero | AddendKind::Scalar) {
                return Err(LieError::Rejected(Rejection::EdgeNotScalar { edge: (u, v), block: w }));
            }
        }
        for m in &elems {
            let (left, right) = (block_scalar(alg, m, u), block_scalar(alg, m, v));
            if left != right {
                return Err(LieError::Rejected(Rejection::EdgeScalarsUnequal { edge: (u, v), left, right }));
            }
        }
    }

    let tuples: Vec<Vec<Rational>> =
        elems.iter().map(|m| (0..p).map(|u| block_scalar(alg, m, u)).collect()).collect();
    let scalar_tuples = Subspace::span(&tuples, p)?;
    let mut linkage: Vec<Vec<usize>> = Vec::new();
    for u in (0..p).filter(|&u| kinds[u].carries_scalar()) {
        let same = |v: usize| tuples.iter().all(|t| t[u] == t[v]);
        match linkage.iter_mut().find(|c| same(c[0])) {
            Some(c) => c.push(u),
            None => linkage.push(vec![u]),
        }
    }
    Ok(LieIdealDescriptor { k: k.clone(), kinds, linkage, scalar_tuples })
}

/// Units that may carry a scalar independently: each constraint-graph
/// component (forced scalar) and each free block.
#[derive(Debug, Clone)]
enum Unit {
    Component(Vec<usize>),
    Free(usize),
}

/// Descriptors with no scalar relations beyond their linkage: every choice
/// of kinds allowed by the constraint graph, times every partition of the
/// scalar-carrying units into linkage classes. Each yields a distinct Lie
/// ideal with off-diagonal part `K`.
pub fn enumerate_descriptors(
    alg: &DigraphAlgebra,
    k: &BlockIdeal,
    max_units: usize,
) -> Result<Vec<LieIdealDescriptor>, LieError> {
    check_offdiag_ideal(alg, k)?;
    let graph = ConstraintGraph::new(alg, k);
    let bs = alg.blocks();
    let p = bs.count();
    let mut units: Vec<Unit> = graph.components.iter().cloned().map(Unit::Component).collect();
    units.extend(graph.free_nodes.iter().map(|&u| Unit::Free(u)));
    units.sort_by_key(|u| match u {
        Unit::Component(c) => c[0],
        Unit::Free(b) => *b,
    });
    if units.len() > max_units {
        return Err(LieError::TooLarge { units: units.len(), cap: max_units });
    }

    let options: Vec<Vec<AddendKind>> = units
        .iter()
        .map(|u| match u {
            Unit::Component(_) => vec![AddendKind::Zero, AddendKind::Scalar],
            Unit::Free(b) if bs.size(*b) == 1 => vec![AddendKind::Zero, AddendKind::Scalar],
            Unit::Free(_) => vec![AddendKind::Zero, AddendKind::Scalar, AddendKind::TraceZero, AddendKind::Full],
        })
        .collect();

    let mut out = Vec::new();
    let mut choice = vec![0usize; units.len()];
    loop {
        let chosen: Vec<AddendKind> = choice.iter().enumerate().map(|(i, &c)| options[i][c]).collect();
        let mut kinds = vec![AddendKind::Zero; p];
        for (unit, &kind) in units.iter().zip(&chosen) {
            match unit {
                Unit::Component(members) => members.iter().for_each(|&b| kinds[b] = kind),
                Unit::Free(b) => kinds[*b] = kind,
            }
        }
        let carriers: Vec<usize> = (0..units.len()).filter(|&i| chosen[i].carries_scalar()).collect();
        for partition in set_partitions(carriers.len()) {
            let mut linkage: Vec<Vec<usize>> = Vec::new();
            let mut tuples = Vec::new();
            for class in &partition {
                let mut members: Vec<usize> = class
                    .iter()
                    .flat_map(|&c| match &units[carriers[c]] {
                        Unit::Component(m) => m.clone(),
                        Unit::Free(b) => vec![*b],
                    })
                    .collect();
                members.sort_unstable();
                let mut t = vec![Rational::zero(); p];
                for &b in &members {
                    t[b] = Rational::one();
                }
                tuples.push(t);
                linkage.push(members);
            }
            linkage.sort();
            out.push(LieIdealDescriptor {
                k: k.clone(),
                kinds: kinds.clone(),
                linkage,
                scalar_tuples: Subspace::span(&tuples, p)?,
            });
        }
        // Odometer over kind choices.
        let mut i = 0;
        loop {
            if i == units.len() {
                return Ok(out);
            }
            choice[i] += 1;
            if choice[i] < options[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// All set partitions of `0..m` as lists of blocks (restricted growth strings).
fn set_partitions(m: usize) -> Vec<Vec<Vec<usize>>> {
    fn rec(i: usize, m: usize, labels: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == m {
            let classes = labels.iter().copied().max().map_or(0, |x| x + 1);
            let mut blocks = vec![Vec::new(); classes];
            for (e, &l) in labels.iter().enumerate() {
                blocks[l].push(e);
            }
            out.push(blocks);
            return;
        }
        for l in 0..=max {
            labels.push(l);
            rec(i + 1, m, labels, if l == max { max + 1 } else { max }, out);
            labels.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, &mut Vec::new(), 0, &mut out);
    out
}

/// For triangular algebras, `{d diagonal : d_ii = d_jj whenever (i,j) ∈ A \ K, i ≠ j}`,
/// computed by solving the linear constraint system directly. `None` for
/// algebras with non-trivial blocks.
pub fn triangular_constraint_space(alg: &DigraphAlgebra, k: &BlockIdeal) -> Option<Subspace> {
    let bs = alg.blocks();
    if !bs.is_triangular() {
        return None;
    }
    let n = alg.n();
    let rows: Vec<Vec<Rational>> = alg
        .units()
        .into_iter()
        .filter(|&(i, j)| i != j && !k.contains(bs.block_of(i), bs.block_of(j)))
        .map(|(i, j)| {
            let mut r = vec![Rational::zero(); n];
            r[i] = Rational::one();
            r[j] = -Rational::one();
            r
        })
        .collect();
    let solutions = if rows.is_empty() {
        (0..n)
            .map(|i| {
                let mut v = vec![Rational::zero(); n];
                v[i] = Rational::one();
                v
            })
            .collect()
    } else {
        nullspace(&Mat::from_rows(rows).expect("rectangular"))
    };
    let diag: Vec<Vec<Rational>> = solutions
        .into_iter()
        .map(|d| {
            let mut v = vec![Rational::zero(); n * n];
            for (i, x) in d.into_iter().enumerate() {
                v[i * n + i] = x;
            }
            v
        })
        .collect();
    Some(Subspace::span(&diag, n * n).expect("lengths match"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Pattern;
    use crate::lie::is_lie_ideal;

    fn alg(p: Pattern) -> DigraphAlgebra {
        p.validate().unwrap()
    }

    fn span(n: usize, mats: &[Mat]) -> Subspace {
        Subspace::span_mats(mats, n).unwrap()
    }

    #[test]
    fn maximal_addend_examples() {
        let t2 = alg(Pattern::upper_triangular(2));
        let (f, g) = maximal_addend(&t2, &BlockIdeal::empty()).unwrap();
        assert_eq!(g.edges, vec![(0, 1)]);
        assert_eq!(f, span(2, &[Mat::identity(2)]));

        let k = BlockIdeal::from_pairs([(0, 1)]);
        let (f, g) = maximal_addend(&t2, &k).unwrap();
        assert!(g.edges.is_empty());
        assert_eq!(f, span(2, &[Mat::unit(2, 0, 0), Mat::unit(2, 1, 1)]));
        assert_eq!(f.sum(&ideals::to_subspace(&t2, &k)).unwrap(), t2.subspace());

        let t3 = alg(Pattern::upper_triangular(3));
        let (f, g) = maximal_addend(&t3, &BlockIdeal::from_pairs([(0, 2)])).unwrap();
        assert_eq!(g.components, vec![vec![0, 1, 2]]);
        assert_eq!(f, span(3, &[Mat::identity(3)]));

        assert!(matches!(
            maximal_addend(&t3, &BlockIdeal::from_pairs([(0, 1)])),
            Err(LieError::InvalidIdeal(_))
        ));
    }

    #[test]
    fn classify_examples() {
        let m2 = alg(Pattern::full(2));
        let tz = span(2, &[Mat::unit(2, 0, 1), Mat::unit(2, 1, 0), Mat::from_ints(&[[1, 0], [0, -1]])]);
        let d = classify_addend(&m2, &BlockIdeal::empty(), &tz).unwrap();
        assert_eq!(d.kinds, vec![AddendKind::TraceZero]);
        assert!(d.linkage.is_empty());

        let t2 = alg(Pattern::upper_triangular(2));
        let e11 = span(2, &[Mat::unit(2, 0, 0)]);
        let err = classify_addend(&t2, &BlockIdeal::empty(), &e11).unwrap_err();
        assert_eq!(
            err,
            LieError::Rejected(Rejection::EdgeScalarsUnequal {
                edge: (0, 1),
                left: Rational::one(),
                right: Rational::zero()
            })
        );
        let d = classify_addend(&t2, &BlockIdeal::from_pairs([(0, 1)]), &e11).unwrap();
        assert_eq!(d.kinds, vec![AddendKind::Scalar, AddendKind::Zero]);
        assert_eq!(d.linkage, vec![vec![0]]);
    }

    #[test]
    fn classify_rejects_each_condition() {
        let m2 = alg(Pattern::full(2));
        let upper = span(2, &[Mat::unit(2, 0, 1)]);
        assert_eq!(
            classify_addend(&m2, &BlockIdeal::empty(), &upper).unwrap_err(),
            LieError::Rejected(Rejection::NotOneOfFour { block: 0 })
        );
        // 4x4 with block {1,2} linked to {3}: a full block on a constrained node.
        let p = Pattern::from_entries(4, [(0, 0), (1, 1), (2, 2), (3, 3), (0, 1), (1, 0), (0, 2), (1, 2)]).unwrap();
        let a = alg(p);
        let e11 = span(4, &[Mat::unit(4, 0, 0)]);
        assert_eq!(
            classify_addend(&a, &BlockIdeal::empty(), &e11).unwrap_err(),
            LieError::Rejected(Rejection::NotOneOfFour { block: 0 })
        );
        let mut gens: Vec<Mat> = trace_zero_basis(2).iter().map(|m| a.embed_block(0, m)).collect();
        gens.push(Mat::unit(4, 0, 0));
        let full_block = span(4, &gens);
        assert_eq!(
            classify_addend(&a, &BlockIdeal::empty(), &full_block).unwrap_err(),
            LieError::Rejected(Rejection::EdgeNotScalar { edge: (0, 1), block: 0 })
        );
        // A proper subspace of the trace-zero matrices.
        let m3 = alg(Pattern::full(3));
        let mut partial = trace_zero_basis(3);
        partial.pop();
        let g = span(3, &partial);
        assert!(matches!(
            classify_addend(&m3, &BlockIdeal::empty(), &g).unwrap_err(),
            LieError::Rejected(Rejection::NotOneOfFour { .. })
        ));
        let diag_free = alg(Pattern::from_entries(3, [(0, 0), (1, 1), (2, 2), (0, 1), (1, 0)]).unwrap());
        let twisted = span(3, &[Mat::from_ints(&[[1, 0, 0], [0, -1, 0], [0, 0, 1]])]);
        assert_eq!(
            classify_addend(&diag_free, &BlockIdeal::empty(), &twisted).unwrap_err(),
            LieError::Rejected(Rejection::NotOneOfFour { block: 0 })
        );
        let mut tz_plus: Vec<Mat> = trace_zero_basis(2).iter().map(|m| diag_free.embed_block(0, m)).collect();
        tz_plus.pop();
        tz_plus.push(Mat::from_ints(&[[1, 0, 0], [0, -1, 0], [0, 0, 1]]));
        let g = span(3, &tz_plus);
        assert_eq!(
            classify_addend(&diag_free, &BlockIdeal::empty(), &g).unwrap_err(),
            LieError::Rejected(Rejection::TraceZeroMissing { block: 0 })
        );
    }

    #[test]
    fn descriptors_of_full_matrix_algebras() {
        for n in 1..=3 {
            let a = alg(Pattern::full(n));
            let ds = enumerate_descriptors(&a, &BlockIdeal::empty(), 8).unwrap();
            let expected = if n == 1 { 2 } else { 4 };
            assert_eq!(ds.len(), expected);
            for d in &ds {
                let s = d.to_subspace(&a);
                assert_eq!(is_lie_ideal(&a, &s).unwrap(), None);
                let (g, k) = (s.clone(), BlockIdeal::empty());
                assert_eq!(&classify_addend(&a, &k, &g).unwrap(), d);
            }
        }
    }

    #[test]
    fn set_partition_counts_are_bell_numbers() {
        let counts: Vec<usize> = (0..6).map(|m| set_partitions(m).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 15, 52]);
    }

    #[test]
    fn triangular_space_matches_maximal_addend() {
        let t3 = alg(Pattern::upper_triangular(3));
        for k in ideals::enumerate_offdiag_ideals(&t3, 24).unwrap() {
            let (f, _) = maximal_addend(&t3, &k).unwrap();
            assert_eq!(triangular_constraint_space(&t3, &k).unwrap(), f);
        }
        assert!(triangular_constraint_space(&alg(Pattern::full(2)), &BlockIdeal::empty()).is_none());
    }
}
