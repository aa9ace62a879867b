//! Finite towers `A_1 ⊆ A_2 ⊆ … ⊆ A_top` of digraph algebras joined by
//! matrix-unit embeddings.
//!
//! An embedding sends each source matrix unit to a sum of target matrix
//! units. Everything is transported to the top level, where level-`q`
//! compressions, inductivity of off-diagonal ideals, and the `F + K` form of
//! Lie ideals are checked exactly.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraError, DigraphAlgebra, Pattern, PatternError, DEFAULT_MAX_N};
use crate::exact::{ExactError, Mat, Subspace};
use crate::ideals::{self, BlockIdeal, IdealError};
use crate::lie::{self, LieError};

type Unit = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TowerError {
    #[error("multiplicity must be at least 1")]
    ZeroMultiplicity,
    #[error("embedded size {n} exceeds the cap {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("source unit e{}{} has no image", .0.0 + 1, .0.1 + 1)]
    MissingUnit(Unit),
    #[error("image of e{}{} leaves the target pattern at ({},{})", .unit.0 + 1, .unit.1 + 1, .cell.0 + 1, .cell.1 + 1)]
    OutsideTarget { unit: Unit, cell: Unit },
    #[error("image of diagonal unit e{}{} is not diagonal", .0.0 + 1, .0.1 + 1)]
    DiagonalNotDiagonal(Unit),
    #[error("images of e{}{} and e{}{} do not multiply like the units", .left.0 + 1, .left.1 + 1, .right.0 + 1, .right.1 + 1)]
    NotHomomorphism { left: Unit, right: Unit },
    #[error("images of the diagonal units do not sum to the identity")]
    NotUnital,
    #[error("embedding {index} expects a {expected}x{expected} source, level has size {found}")]
    LevelMismatch { index: usize, expected: usize, found: usize },
    #[error("tower needs one more level than embeddings (levels {levels}, embeddings {embeddings})")]
    Shape { levels: usize, embeddings: usize },
    #[error("level {0} out of range")]
    LevelOutOfRange(usize),
    /// A level file could not be read or parsed.
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// A unital matrix-unit homomorphism between digraph algebras.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    source: DigraphAlgebra,
    target: DigraphAlgebra,
    images: BTreeMap<Unit, Vec<Unit>>,
}

/// Target pattern for a standard refinement. Copy `r` of old index `i`
/// sits at `i·m + r`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetShape {
    /// Smallest digraph algebra containing the image.
    #[default]
    Image,
    /// Copies inside an old block are ordered `r ≤ s`; between comparable
    /// blocks every cell is allowed. Triangular sources give the full upper
    /// triangle.
    Ordered,
}

fn standard_target(source: &DigraphAlgebra, m: usize, shape: TargetShape) -> Pattern {
    let n = source.n();
    let bs = source.blocks();
    let mut p = Pattern::empty(n * m);
    for (i, j) in source.units() {
        let same = bs.block_of(i) == bs.block_of(j);
        for r in 0..m {
            for s in 0..m {
                let keep = match shape {
                    TargetShape::Image => r == s,
                    TargetShape::Ordered => !same || r <= s,
                };
                if keep {
                    p.set(i * m + r, j * m + s, true);
                }
            }
        }
    }
    p
}

impl Embedding {
    /// `e_ij ↦ Σ_r e_{im+r, jm+r}` into the smallest target containing it.
    pub fn standard(source: &DigraphAlgebra, m: usize) -> Result<Self, TowerError> {
        Self::standard_shaped(source, m, TargetShape::Image, DEFAULT_MAX_N)
    }

    /// Same unit map into the [`TargetShape::Ordered`] target; triangular
    /// sources land in the full upper triangle of size `m·n`.
    pub fn standard_ordered(source: &DigraphAlgebra, m: usize) -> Result<Self, TowerError> {
        Self::standard_shaped(source, m, TargetShape::Ordered, DEFAULT_MAX_N)
    }

    pub fn standard_shaped(source: &DigraphAlgebra, m: usize, shape: TargetShape, cap: usize) -> Result<Self, TowerError> {
        if m == 0 {
            return Err(TowerError::ZeroMultiplicity);
        }
        let size = source.n() * m;
        if size > cap {
            return Err(TowerError::TooLarge { n: size, cap });
        }
        let target = standard_target(source, m, shape).validate()?;
        Self::standard_into(source, m, target)
    }

    /// Standard refinement into a caller-supplied target pattern, which must
    /// contain the image.
    pub fn standard_into(source: &DigraphAlgebra, m: usize, target: DigraphAlgebra) -> Result<Self, TowerError> {
        if m == 0 {
            return Err(TowerError::ZeroMultiplicity);
        }
        let images = source
            .units()
            .into_iter()
            .map(|(i, j)| ((i, j), (0..m).map(|r| (i * m + r, j * m + r)).collect()))
            .collect();
        Self::from_unit_map(source.clone(), target, images)
    }

    /// Validates an explicit unit map: every image is a non-empty set of
    /// target units, diagonal units go to diagonal units, the diagonal images
    /// partition the identity, and products of images match images of
    /// products.
    pub fn from_unit_map(
        source: DigraphAlgebra,
        target: DigraphAlgebra,
        images: BTreeMap<Unit, Vec<Unit>>,
    ) -> Result<Self, TowerError> {
        let mut normalized = BTreeMap::new();
        for e in source.units() {
            let img = images.get(&e).ok_or(TowerError::MissingUnit(e))?;
            let set: BTreeSet<Unit> = img.iter().copied().collect();
            if set.is_empty() || set.len() != img.len() {
                return Err(TowerError::NotHomomorphism { left: e, right: e });
            }
            for &cell in &set {
                if cell.0 >= target.n() || cell.1 >= target.n() || !target.pattern().has(cell.0, cell.1) {
                    return Err(TowerError::OutsideTarget { unit: e, cell });
                }
                if e.0 == e.1 && cell.0 != cell.1 {
                    return Err(TowerError::DiagonalNotDiagonal(e));
                }
            }
            normalized.insert(e, set.into_iter().collect::<Vec<_>>());
        }
        if let Some(&extra) = images.keys().find(|e| !source.pattern().has(e.0, e.1)) {
            return Err(TowerError::OutsideTarget { unit: extra, cell: extra });
        }

        let mut diag = BTreeSet::new();
        for i in 0..source.n() {
            for &(a, _) in &normalized[&(i, i)] {
                if !diag.insert(a) {
                    return Err(TowerError::NotUnital);
                }
            }
        }
        if diag.len() != target.n() {
            return Err(TowerError::NotUnital);
        }

        for (&left, li) in &normalized {
            for (&right, ri) in &normalized {
                let product = sparse_product(li, ri);
                let expected: BTreeMap<Unit, i64> = if left.1 == right.0 {
                    normalized[&(left.0, right.1)].iter().map(|&u| (u, 1)).collect()
                } else {
                    BTreeMap::new()
                };
                if product != expected {
                    return Err(TowerError::NotHomomorphism { left, right });
                }
            }
        }
        Ok(Embedding { source, target, images: normalized })
    }

    pub fn source(&self) -> &DigraphAlgebra {
        &self.source
    }

    pub fn target(&self) -> &DigraphAlgebra {
        &self.target
    }

    pub fn image_units(&self, e: Unit) -> &[Unit] {
        &self.images[&e]
    }

    pub fn unit_map(&self) -> &BTreeMap<Unit, Vec<Unit>> {
        &self.images
    }

    /// Image of an arbitrary source element.
    pub fn apply(&self, x: &Mat) -> Result<Mat, TowerError> {
        self.source.check_element(x)?;
        let n = self.target.n();
        let mut out = Mat::zeros(n, n);
        for (e, img) in &self.images {
            let c = x.get(e.0, e.1);
            if c.is_zero() {
                continue;
            }
            for &(a, b) in img {
                out.set(a, b, out.get(a, b) + c);
            }
        }
        Ok(out)
    }

    /// 1-based unit map, for reports.
    pub fn one_based(&self) -> Vec<UnitImage> {
        self.images
            .iter()
            .map(|(&(i, j), img)| UnitImage {
                unit: (i + 1, j + 1),
                image: img.iter().map(|&(a, b)| (a + 1, b + 1)).collect(),
            })
            .collect()
    }
}

fn sparse_product(left: &[Unit], right: &[Unit]) -> BTreeMap<Unit, i64> {
    let mut out = BTreeMap::new();
    for &(a, b) in left {
        for &(c, d) in right {
            if b == c {
                *out.entry((a, d)).or_insert(0) += 1;
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitImage {
    pub unit: (usize, usize),
    pub image: Vec<(usize, usize)>,
}

/// Levels and the embeddings between consecutive levels. `images[q]` maps
/// each level-`q` unit to its (composed) image at the top.
#[derive(Debug, Clone)]
pub struct Tower {
    levels: Vec<DigraphAlgebra>,
    embeddings: Vec<Embedding>,
    images: Vec<BTreeMap<Unit, Vec<Unit>>>,
}

impl Tower {
    pub fn new(embeddings: Vec<Embedding>) -> Result<Self, TowerError> {
        Self::with_base(None, embeddings)
    }

    /// A one-level tower when `embeddings` is empty.
    pub fn with_base(base: Option<DigraphAlgebra>, embeddings: Vec<Embedding>) -> Result<Self, TowerError> {
        let mut levels = Vec::with_capacity(embeddings.len() + 1);
        match (&base, embeddings.first()) {
            (Some(b), _) => levels.push(b.clone()),
            (None, Some(e)) => levels.push(e.source.clone()),
            (None, None) => return Err(TowerError::Shape { levels: 0, embeddings: 0 }),
        }
        for (index, e) in embeddings.iter().enumerate() {
            let prev = levels.last().expect("nonempty");
            if prev != &e.source {
                return Err(TowerError::LevelMismatch { index: index + 1, expected: e.source.n(), found: prev.n() });
            }
            levels.push(e.target.clone());
        }
        let top = levels.len() - 1;
        let mut images = vec![BTreeMap::new(); levels.len()];
        images[top] = levels[top].units().into_iter().map(|e| (e, vec![e])).collect();
        for q in (0..top).rev() {
            let next = &images[q + 1];
            images[q] = embeddings[q]
                .images
                .iter()
                .map(|(&e, img)| {
                    let mut composed: Vec<Unit> = img.iter().flat_map(|u| next[u].iter().copied()).collect();
                    composed.sort();
                    (e, composed)
                })
                .collect();
        }
        Ok(Tower { levels, embeddings, images })
    }

    /// Tower of standard embeddings with the given multiplicities.
    pub fn standard(base: &DigraphAlgebra, multiplicities: &[usize], shape: TargetShape) -> Result<Self, TowerError> {
        let mut embeddings = Vec::new();
        let mut current = base.clone();
        for &m in multiplicities {
            let e = Embedding::standard_shaped(&current, m, shape, DEFAULT_MAX_N)?;
            current = e.target.clone();
            embeddings.push(e);
        }
        Self::with_base(Some(base.clone()), embeddings)
    }

    pub fn levels(&self) -> &[DigraphAlgebra] {
        &self.levels
    }

    pub fn embeddings(&self) -> &[Embedding] {
        &self.embeddings
    }

    pub fn top(&self) -> &DigraphAlgebra {
        self.levels.last().expect("nonempty")
    }

    pub fn top_index(&self) -> usize {
        self.levels.len() - 1
    }

    fn check_level(&self, q: usize) -> Result<(), TowerError> {
        if q >= self.levels.len() {
            return Err(TowerError::LevelOutOfRange(q + 1));
        }
        Ok(())
    }

    /// Image at the top of a level-`q` unit.
    pub fn unit_image(&self, q: usize, e: Unit) -> Result<Mat, TowerError> {
        self.check_level(q)?;
        let n = self.top().n();
        let mut m = Mat::zeros(n, n);
        for &(a, b) in self.images[q].get(&e).ok_or(TowerError::MissingUnit(e))? {
            m.set(a, b, m.get(a, b) + &crate::exact::Rational::one());
        }
        Ok(m)
    }

    /// Image at the top of a level-`q` element.
    pub fn lift(&self, q: usize, x: &Mat) -> Result<Mat, TowerError> {
        self.check_level(q)?;
        self.levels[q].check_element(x)?;
        let n = self.top().n();
        let mut out = Mat::zeros(n, n);
        for (e, img) in &self.images[q] {
            let c = x.get(e.0, e.1);
            if c.is_zero() {
                continue;
            }
            for &(a, b) in img {
                out.set(a, b, out.get(a, b) + c);
            }
        }
        Ok(out)
    }

    /// Image at the top of the whole level-`q` algebra.
    pub fn level_subspace(&self, q: usize) -> Result<Subspace, TowerError> {
        self.check_level(q)?;
        let n = self.top().n();
        let mats: Vec<Mat> =
            self.levels[q].units().into_iter().map(|e| self.unit_image(q, e)).collect::<Result<_, _>>()?;
        Ok(Subspace::span_mats(&mats, n)?)
    }

    /// Top-level images of the level-`q` diagonal units `e_ii`.
    pub fn diagonal_projections(&self, q: usize) -> Result<Vec<Mat>, TowerError> {
        self.check_level(q)?;
        (0..self.levels[q].n()).map(|i| self.unit_image(q, (i, i))).collect()
    }

    /// Top-level images of the level-`q` block projections.
    pub fn block_projections(&self, q: usize) -> Result<Vec<Mat>, TowerError> {
        self.check_level(q)?;
        let bs = self.levels[q].blocks();
        let n = self.top().n();
        (0..bs.count())
            .map(|u| {
                let mut p = Mat::zeros(n, n);
                for &i in bs.block(u) {
                    p = &p + &self.unit_image(q, (i, i))?;
                }
                Ok(p)
            })
            .collect()
    }

    /// `π_q(x) = Σ_u P_u x P_u` over the images `P_u` of the level-`q` block
    /// projections. At the top level this is the algebra's own `π`.
    pub fn pi_n(&self, q: usize, x: &Mat) -> Result<Mat, TowerError> {
        self.top().check_element(x)?;
        let n = self.top().n();
        let mut out = Mat::zeros(n, n);
        for p in self.block_projections(q)? {
            out = &out + &(&(&p * x) * &p);
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LemmaRowReport {
    pub checks: usize,
    pub membership_failures: usize,
    pub identity_failures: usize,
}

impl LemmaRowReport {
    pub fn passed(&self) -> bool {
        self.membership_failures == 0 && self.identity_failures == 0
    }
}

/// For a Lie ideal `L` and a partition of unity `d_1, …, d_q` by diagonal
/// idempotents of the algebra, checks `d_i f − d_i f d_i ∈ L` for each basis
/// element `f`, and the exact identity
/// `d_i f − d_i f d_i = ½([d_i, f] + Σ_{j≠i} [d_i, [f, d_j]])`.
pub fn lemma_row_check(alg: &DigraphAlgebra, l: &Subspace, projections: &[Mat]) -> Result<LemmaRowReport, TowerError> {
    lie::require_lie_ideal(alg, l)?;
    let n = alg.n();
    let half = crate::exact::q(1, 2);
    let mut report = LemmaRowReport::default();
    for f in l.basis_mats(n) {
        for (i, d) in projections.iter().enumerate() {
            alg.check_element(d)?;
            let dfd = &(d * &f) * d;
            let lhs = &(d * &f) - &dfd;
            report.checks += 1;
            if !l.contains_mat(&lhs)? {
                report.membership_failures += 1;
            }
            let mut rhs = d.bracket(&f)?;
            for (j, dj) in projections.iter().enumerate() {
                if j != i {
                    rhs = &rhs + &d.bracket(&f.bracket(dj)?)?;
                }
            }
            if rhs.scale(&half) != lhs {
                report.identity_failures += 1;
            }
        }
    }
    Ok(report)
}

/// Minimal diagonal idempotents `e_ii` of an algebra.
pub fn unit_projections(alg: &DigraphAlgebra) -> Vec<Mat> {
    (0..alg.n()).map(|i| Mat::unit(alg.n(), i, i)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelInductivity {
    /// 1-based level index.
    pub level: usize,
    /// Level units whose images lie in `K`.
    pub units: usize,
    /// `dim (K ∩ A_q)` at the top.
    pub dim: usize,
    pub spanned_by_units: bool,
    /// `K ∩ A_q ⊆ K ∩ A_{q+1}`; vacuous at the top.
    pub nested: bool,
    /// The pulled-back units as a block ideal of the level, if they form one.
    #[serde(serialize_with = "serialize_opt_ideal")]
    pub ideal: Option<BlockIdeal>,
}

fn serialize_opt_ideal<S: serde::Serializer>(k: &Option<BlockIdeal>, s: S) -> Result<S::Ok, S::Error> {
    k.as_ref().map(BlockIdeal::one_based).serialize(s)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InductivityReport {
    pub levels: Vec<LevelInductivity>,
    pub spans_top: bool,
}

impl InductivityReport {
    pub fn passed(&self) -> bool {
        self.spans_top && self.levels.iter().all(|l| l.spanned_by_units && l.nested && l.ideal.is_some())
    }
}

/// Intersects `K` with each level and checks that the intersection is
/// spanned by the level units it contains and grows with the level.
pub fn inductivity_check(tower: &Tower, k: &BlockIdeal) -> Result<InductivityReport, TowerError> {
    let top = tower.top();
    if !k.is_up_closed(top) || !k.is_off_diagonal() {
        return Err(LieError::InvalidIdeal(k.clone()).into());
    }
    let ks = ideals::to_subspace(top, k);
    let n = top.n();
    let mut parts = Vec::with_capacity(tower.levels.len());
    for (q, level) in tower.levels.iter().enumerate() {
        let kq = ks.intersect(&tower.level_subspace(q)?)?;
        let mut inside = Vec::new();
        let mut span = Subspace::zero(n * n);
        for e in level.units() {
            let img = tower.unit_image(q, e)?;
            if ks.contains_mat(&img)? {
                span.insert(img.coords())?;
                inside.push(e);
            }
        }
        let level_sub = Subspace::span_mats(&inside.iter().map(|&(i, j)| Mat::unit(level.n(), i, j)).collect::<Vec<_>>(), level.n())?;
        let ideal = ideals::from_subspace(level, &level_sub)
            .filter(|i| i.is_off_diagonal() && i.is_up_closed(level));
        parts.push((kq.clone(), LevelInductivity {
            level: q + 1,
            units: inside.len(),
            dim: kq.dim(),
            spanned_by_units: span == kq,
            nested: true,
            ideal,
        }));
    }
    for q in 0..parts.len().saturating_sub(1) {
        let nested = parts[q].0.is_subspace_of(&parts[q + 1].0)?;
        parts[q].1.nested = nested;
    }
    let spans_top = parts.last().is_some_and(|(kq, _)| *kq == ks);
    Ok(InductivityReport { levels: parts.into_iter().map(|(_, l)| l).collect(), spans_top })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LieFormReport {
    pub lie_dim: usize,
    #[serde(serialize_with = "crate::lie::serialize_ideal")]
    pub k: BlockIdeal,
    pub k_associative: bool,
    pub f_dim: usize,
    pub ek_dim: usize,
    pub f_in_ek: bool,
    pub ek_plus_k_is_lie: bool,
    /// For triangular tops, `E_K` recomputed from its defining equations.
    pub triangular_formula: Option<bool>,
    pub inductivity: InductivityReport,
    pub lemma_rows: LemmaRowReport,
}

impl LieFormReport {
    pub fn passed(&self) -> bool {
        self.k_associative
            && self.f_in_ek
            && self.ek_plus_k_is_lie
            && self.triangular_formula != Some(false)
            && self.inductivity.passed()
            && self.lemma_rows.passed()
    }
}

/// Generates a Lie ideal at the top, splits it as `F + K`, and checks `K`
/// (associative, inductive), `F ⊆ E_K`, that `E_K + K` is a Lie ideal, and
/// the row identity against the diagonal units of every level.
pub fn theorem_lieform_check(tower: &Tower, gens: &[Mat]) -> Result<LieFormReport, TowerError> {
    let top = tower.top();
    let l = lie::lie_generate(top, gens)?;
    let dec = lie::decompose(top, &l)?;
    let k_associative = ideals::is_associative_ideal(top, &dec.k)?.is_none();
    let (ek, _) = lie::maximal_addend(top, &dec.ideal)?;
    let f_in_ek = dec.g.is_subspace_of(&ek)?;
    let ek_plus_k = ek.sum(&dec.k)?;
    let ek_plus_k_is_lie = lie::is_lie_ideal(top, &ek_plus_k)?.is_none();
    let triangular_formula = lie::triangular_constraint_space(top, &dec.ideal).map(|t| t == ek);
    let inductivity = inductivity_check(tower, &dec.ideal)?;
    let mut lemma_rows = LemmaRowReport::default();
    for q in 0..tower.levels.len() {
        let r = lemma_row_check(top, &l, &tower.diagonal_projections(q)?)?;
        lemma_rows.checks += r.checks;
        lemma_rows.membership_failures += r.membership_failures;
        lemma_rows.identity_failures += r.identity_failures;
    }
    Ok(LieFormReport {
        lie_dim: l.dim(),
        k: dec.ideal,
        k_associative,
        f_dim: dec.g.dim(),
        ek_dim: ek.dim(),
        f_in_ek,
        ek_plus_k_is_lie,
        triangular_formula,
        inductivity,
        lemma_rows,
    })
}

/// One level of a tower file: a path to a `.pat` file or inline `.pat` text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LevelSpec {
    Path(String),
    Inline { pattern: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EmbeddingSpec {
    Standard {
        multiplicity: usize,
        #[serde(default)]
        target: TargetShape,
    },
    Explicit { unit_map: Vec<UnitImage> },
}

/// Tower file contents. With a single level, every embedding must be
/// standard and the later levels are generated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerSpec {
    pub levels: Vec<LevelSpec>,
    pub embeddings: Vec<EmbeddingSpec>,
}

impl TowerSpec {
    /// Builds the tower; `load` turns a path into a pattern or an error message.
    pub fn build<F>(&self, load: F) -> Result<Tower, TowerError>
    where
        F: FnMut(&str) -> Result<Pattern, String>,
    {
        self.build_with_cap(load, DEFAULT_MAX_N)
    }

    /// As [`TowerSpec::build`], with `cap` bounding every level's size.
    pub fn build_with_cap<F>(&self, mut load: F, cap: usize) -> Result<Tower, TowerError>
    where
        F: FnMut(&str) -> Result<Pattern, String>,
    {
        let mut patterns = Vec::with_capacity(self.levels.len());
        for level in &self.levels {
            patterns.push(match level {
                LevelSpec::Path(p) => load(p).map_err(TowerError::Input)?,
                LevelSpec::Inline { pattern } => Pattern::parse_with_cap(pattern, cap)?,
            });
        }
        let generated = patterns.len() == 1;
        if !generated && patterns.len() != self.embeddings.len() + 1 {
            return Err(TowerError::Shape { levels: patterns.len(), embeddings: self.embeddings.len() });
        }
        let base = patterns[0].validate()?;
        let mut current = base.clone();
        let mut embeddings = Vec::with_capacity(self.embeddings.len());
        for (idx, spec) in self.embeddings.iter().enumerate() {
            let e = match (spec, generated) {
                (EmbeddingSpec::Standard { multiplicity, target }, true) => {
                    Embedding::standard_shaped(&current, *multiplicity, *target, cap)?
                }
                (EmbeddingSpec::Standard { multiplicity, .. }, false) => {
                    let target = patterns[idx + 1].validate()?;
                    Embedding::standard_into(&current, *multiplicity, target)?
                }
                (EmbeddingSpec::Explicit { .. }, true) => {
                    return Err(TowerError::Shape { levels: 1, embeddings: self.embeddings.len() })
                }
                (EmbeddingSpec::Explicit { unit_map }, false) => {
                    let target = patterns[idx + 1].validate()?;
                    let images = unit_map
                        .iter()
                        .map(|u| {
                            let shift = |(a, b): (usize, usize)| (a.wrapping_sub(1), b.wrapping_sub(1));
                            (shift(u.unit), u.image.iter().copied().map(shift).collect())
                        })
                        .collect();
                    Embedding::from_unit_map(current.clone(), target, images)?
                }
            };
            current = e.target.clone();
            embeddings.push(e);
        }
        Tower::with_base(Some(base), embeddings)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    fn t(n: usize) -> DigraphAlgebra {
        Pattern::upper_triangular(n).validate().unwrap()
    }

    #[test]
    fn standard_embedding_examples() {
        let e = Embedding::standard(&t(2), 1).unwrap();
        assert_eq!(e.target(), &t(2));
        assert!(e.unit_map().iter().all(|(k, v)| v == &vec![*k]));

        let e = Embedding::standard(&t(2), 2).unwrap();
        let image = Pattern::from_entries(4, [(0, 0), (1, 1), (2, 2), (3, 3), (0, 2), (1, 3)]).unwrap();
        assert_eq!(e.target().pattern(), &image);
        assert_eq!(Embedding::standard_ordered(&t(2), 2).unwrap().target(), &t(4));
        assert_eq!(e.image_units((0, 1)), &[(0, 2), (1, 3)]);
        let img = e.apply(&Mat::unit(2, 0, 1)).unwrap();
        assert_eq!(img, &Mat::unit(4, 0, 2) + &Mat::unit(4, 1, 3));

        let d2 = Pattern::diagonal(2).validate().unwrap();
        let e = Embedding::standard(&d2, 3).unwrap();
        assert_eq!(e.target(), &Pattern::diagonal(6).validate().unwrap());

        assert!(matches!(Embedding::standard(&t(4), 4), Err(TowerError::TooLarge { n: 16, cap: 12 })));
    }

    #[test]
    fn explicit_maps_are_validated() {
        let src = t(2);
        let tgt = t(4);
        let good: BTreeMap<Unit, Vec<Unit>> =
            [((0, 0), vec![(0, 0), (1, 1)]), ((1, 1), vec![(2, 2), (3, 3)]), ((0, 1), vec![(0, 2), (1, 3)])].into();
        assert!(Embedding::from_unit_map(src.clone(), tgt.clone(), good.clone()).is_ok());

        let mut bad = good.clone();
        bad.insert((0, 1), vec![(0, 3), (1, 2)]);
        assert!(Embedding::from_unit_map(src.clone(), tgt.clone(), bad).is_ok(), "a different valid homomorphism");

        let m2 = Pattern::full(2).validate().unwrap();
        let m4 = Pattern::full(4).validate().unwrap();
        let broken: BTreeMap<Unit, Vec<Unit>> = [
            ((0, 0), vec![(0, 0), (1, 1)]),
            ((1, 1), vec![(2, 2), (3, 3)]),
            ((0, 1), vec![(0, 2)]),
            ((1, 0), vec![(2, 0), (3, 1)]),
        ]
        .into();
        assert_eq!(
            Embedding::from_unit_map(m2, m4, broken).unwrap_err(),
            TowerError::NotHomomorphism { left: (0, 1), right: (1, 0) }
        );

        let mut bad = good.clone();
        bad.insert((1, 1), vec![(2, 2)]);
        assert_eq!(Embedding::from_unit_map(src.clone(), tgt.clone(), bad).unwrap_err(), TowerError::NotUnital);

        let mut bad = good;
        bad.insert((0, 1), vec![(2, 0), (3, 1)]);
        assert!(matches!(Embedding::from_unit_map(src, tgt, bad), Err(TowerError::OutsideTarget { .. })));
    }

    #[test]
    fn pi_n_examples() {
        let tower = Tower::standard(&t(2), &[2], TargetShape::Ordered).unwrap();
        let x = tower.lift(0, &Mat::unit(2, 0, 1)).unwrap();
        assert!(tower.pi_n(0, &x).unwrap().is_zero());
        let y = Mat::from_ints(&[[1, 2, 3, 4], [0, 5, 6, 7], [0, 0, 8, 9], [0, 0, 0, 1]]);
        assert_eq!(tower.pi_n(1, &y).unwrap(), tower.top().pi(&y));
        let diag = Mat::from_ints(&[[1, 0, 0, 0], [0, 2, 0, 0], [0, 0, 3, 0], [0, 0, 0, 4]]);
        assert_eq!(tower.pi_n(0, &diag).unwrap(), diag);
        assert_eq!(tower.pi_n(1, &diag).unwrap(), diag);
        assert!(matches!(tower.pi_n(2, &diag), Err(TowerError::LevelOutOfRange(3))));
    }

    #[test]
    fn lemma_row_examples() {
        let t3 = t(3);
        let r = lemma_row_check(&t3, &t3.subspace(), &unit_projections(&t3)).unwrap();
        assert!(r.passed());
        let l = Subspace::span_mats(&[Mat::identity(3), Mat::unit(3, 0, 2)], 3).unwrap();
        let r = lemma_row_check(&t3, &l, &unit_projections(&t3)).unwrap();
        assert!(r.passed());
        assert_eq!(r.checks, 6);

        let f = &Mat::identity(3) + &Mat::unit(3, 0, 2);
        let d1 = Mat::unit(3, 0, 0);
        assert_eq!(&(&d1 * &f) - &(&(&d1 * &f) * &d1), Mat::unit(3, 0, 2));

        let f = Mat::unit(3, 0, 2);
        let rhs = &d1.bracket(&f).unwrap() + &d1.bracket(&f.bracket(&Mat::unit(3, 2, 2)).unwrap()).unwrap();
        assert_eq!(rhs.scale(&q(1, 2)), Mat::unit(3, 0, 2));
    }

    #[test]
    fn inductivity_examples() {
        let tower = Tower::standard(&t(2), &[2], TargetShape::Ordered).unwrap();
        let r = inductivity_check(&tower, &BlockIdeal::empty()).unwrap();
        assert!(r.passed());
        assert!(r.levels.iter().all(|l| l.dim == 0));

        let img = tower.lift(0, &Mat::unit(2, 0, 1)).unwrap();
        let seed: Vec<Unit> = (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).filter(|&(i, j)| !img.get(i, j).is_zero()).collect();
        let k = ideals::ideal_closure(tower.top(), &seed).unwrap();
        let r = inductivity_check(&tower, &k).unwrap();
        assert!(r.passed());
        assert_eq!(r.levels[0].units, 1);
        assert_eq!(r.levels[0].ideal, Some(BlockIdeal::from_pairs([(0, 1)])));

        let full = BlockIdeal::from_pairs(tower.top().blocks().strict_pairs());
        let r = inductivity_check(&tower, &full).unwrap();
        assert!(r.passed());
        assert_eq!(r.levels[0].dim, 1);
        assert_eq!(r.levels[1].dim, 6);
    }

    #[test]
    fn lieform_examples() {
        let tower = Tower::standard(&t(2), &[2], TargetShape::Ordered).unwrap();
        let img = tower.lift(0, &Mat::unit(2, 0, 1)).unwrap();
        let r = theorem_lieform_check(&tower, &[img]).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.f_dim, 0);

        let r = theorem_lieform_check(&tower, &[Mat::identity(4)]).unwrap();
        assert!(r.passed());
        assert_eq!((r.lie_dim, r.f_dim), (1, 1));
        assert!(r.k.is_empty());

        let all = tower.top().matrix_units();
        let r = theorem_lieform_check(&tower, &all).unwrap();
        assert!(r.passed());
        assert_eq!(r.lie_dim, tower.top().dim());
    }

    #[test]
    fn spec_round_trip() {
        let json = r#"{"levels": [{"pattern": "n 2\n**\n.*\n"}], "embeddings": [{"multiplicity": 2, "target": "ordered"}, {"multiplicity": 3, "target": "ordered"}]}"#;
        let spec: TowerSpec = serde_json::from_str(json).unwrap();
        let tower = spec.build(|_| unreachable!()).unwrap();
        assert_eq!(tower.top().n(), 12);
        assert_eq!(tower.top(), &t(12));

        let json = r#"{"levels": [{"pattern": "n 2\n**\n.*\n"}, {"pattern": "n 4\n****\n.***\n..**\n...*\n"}],
            "embeddings": [{"unit_map": [{"unit": [1,1], "image": [[1,1],[2,2]]}, {"unit": [2,2], "image": [[3,3],[4,4]]}, {"unit": [1,2], "image": [[1,3],[2,4]]}]}]}"#;
        let spec: TowerSpec = serde_json::from_str(json).unwrap();
        let tower = spec.build(|_| unreachable!()).unwrap();
        assert_eq!(tower.levels().len(), 2);
    }
}
