//! Digraph algebras: the span of the matrix units `e_ij` allowed by a
//! reflexive, transitive 0/* pattern.
//!
//! Indices are 0-based throughout the API. Text and JSON surfaces (pattern
//! files, reports, CLI arguments) use 1-based indices.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::exact::{Mat, Rational, Subspace};

/// Largest matrix size accepted from files and embeddings.
pub const DEFAULT_MAX_N: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PatternError {
    #[error("pattern is not reflexive: ({i},{i}) missing", i = .0 + 1)]
    NotReflexive(usize),
    #[error("pattern is not transitive: ({a},{b}) and ({b},{c}) present but ({a},{c}) missing", a = .0 + 1, b = .1 + 1, c = .2 + 1)]
    NotTransitive(usize, usize, usize),
    #[error("entry ({0},{1}) outside a {2}x{2} pattern")]
    OutOfRange(usize, usize, usize),
    #[error("pattern size {n} exceeds the cap {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("malformed pattern file: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("element is not supported on the pattern: non-zero entry at ({row},{col})", row = .0 + 1, col = .1 + 1)]
    SupportViolation(usize, usize),
    #[error("expected a {expected}x{expected} matrix, found {rows}x{cols}")]
    WrongSize { expected: usize, rows: usize, cols: usize },
    #[error("subspace has ambient dimension {found}, expected {expected}")]
    WrongAmbient { expected: usize, found: usize },
    #[error("subspace is not contained in the algebra")]
    NotInAlgebra,
}

/// The 0/* incidence structure of an `n × n` digraph algebra.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Pattern {
    n: usize,
    cells: Vec<bool>,
}

impl Pattern {
    pub fn empty(n: usize) -> Self {
        Pattern { n, cells: vec![false; n * n] }
    }

    pub fn from_entries(n: usize, entries: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, PatternError> {
        let mut p = Self::empty(n);
        for (i, j) in entries {
            if i >= n || j >= n {
                return Err(PatternError::OutOfRange(i + 1, j + 1, n));
            }
            p.cells[i * n + j] = true;
        }
        Ok(p)
    }

    pub fn diagonal(n: usize) -> Self {
        Self::from_entries(n, (0..n).map(|i| (i, i))).expect("in range")
    }

    /// Upper triangular `T_n`.
    pub fn upper_triangular(n: usize) -> Self {
        Self::from_entries(n, (0..n).flat_map(|i| (i..n).map(move |j| (i, j)))).expect("in range")
    }

    /// Full matrix algebra `M_n`.
    pub fn full(n: usize) -> Self {
        Pattern { n, cells: vec![true; n * n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has(&self, i: usize, j: usize) -> bool {
        self.cells[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, on: bool) {
        self.cells[i * self.n + j] = on;
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|i| (0..self.n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.has(i, j))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Smallest reflexive, transitive pattern containing this one.
    pub fn closure(&self) -> Pattern {
        let n = self.n;
        let mut p = self.clone();
        for i in 0..n {
            p.set(i, i, true);
        }
        for k in 0..n {
            for i in 0..n {
                if !p.has(i, k) {
                    continue;
                }
                for j in 0..n {
                    if p.has(k, j) {
                        p.set(i, j, true);
                    }
                }
            }
        }
        p
    }

    /// Checks the algebra axioms and derives the block structure.
    pub fn validate(&self) -> Result<DigraphAlgebra, PatternError> {
        DigraphAlgebra::new(self.clone())
    }

    pub fn parse_with_cap(text: &str, cap: usize) -> Result<Pattern, PatternError> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| PatternError::Parse("empty file".into()))?;
        let mut words = header.split_whitespace();
        let n = match (words.next(), words.next(), words.next()) {
            (Some("n"), Some(size), None) => {
                size.parse::<usize>().map_err(|_| PatternError::Parse(format!("bad size {size:?}")))?
            }
            _ => return Err(PatternError::Parse(format!("expected \"n <size>\", found {header:?}"))),
        };
        if n > cap {
            return Err(PatternError::TooLarge { n, cap });
        }
        let mut p = Pattern::empty(n);
        let mut row = 0;
        for line in lines {
            let cells: Vec<char> = line.chars().filter(|c| !c.is_whitespace()).collect();
            if row >= n {
                return Err(PatternError::Parse(format!("more than {n} rows")));
            }
            if cells.len() != n {
                return Err(PatternError::Parse(format!("row {} has {} cells, expected {n}", row + 1, cells.len())));
            }
            for (j, c) in cells.into_iter().enumerate() {
                match c {
                    '*' => p.set(row, j, true),
                    '.' => {}
                    other => return Err(PatternError::Parse(format!("unexpected character {other:?}"))),
                }
            }
            row += 1;
        }
        if row != n {
            return Err(PatternError::Parse(format!("expected {n} rows, found {row}")));
        }
        Ok(p)
    }
}

impl FromStr for Pattern {
    type Err = PatternError;

    /// Parses the `.pat` format: `n <size>` then one row of `*`/`.` per line.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse_with_cap(s, usize::MAX)
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n {}", self.n)?;
        for i in 0..self.n {
            for j in 0..self.n {
                f.write_str(if self.has(i, j) { "*" } else { "." })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.n)
            .map(|i| (0..self.n).map(|j| if self.has(i, j) { '*' } else { '.' }).collect())
            .collect();
        write!(f, "Pattern({})", rows.join("/"))
    }
}

/// Minimal central projections of the diagonal part, in canonical order.
///
/// Block `u` is the `u`-th class in canonical order; `poset` holds the
/// strict pairs `(u, v)` with `f_u A f_v ≠ 0`, and every such pair has `u < v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockStructure {
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
    poset: BTreeSet<(usize, usize)>,
}

impl BlockStructure {
    pub fn count(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block(&self, u: usize) -> &[usize] {
        &self.blocks[u]
    }

    pub fn block_of(&self, i: usize) -> usize {
        self.block_of[i]
    }

    pub fn size(&self, u: usize) -> usize {
        self.blocks[u].len()
    }

    /// Strict block pairs, sorted.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        self.poset.iter().copied().collect()
    }

    pub fn poset(&self) -> &BTreeSet<(usize, usize)> {
        &self.poset
    }

    /// Non-strict block order: `u == v` or `(u, v)` is a strict pair.
    pub fn leq(&self, u: usize, v: usize) -> bool {
        u == v || self.poset.contains(&(u, v))
    }

    /// Index permutation listing the blocks consecutively in canonical order.
    pub fn order(&self) -> Vec<usize> {
        self.blocks.iter().flatten().copied().collect()
    }

    pub fn is_triangular(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1)
    }
}

/// A validated digraph algebra together with its block structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigraphAlgebra {
    pattern: Pattern,
    blocks: BlockStructure,
}

impl DigraphAlgebra {
    pub fn new(pattern: Pattern) -> Result<Self, PatternError> {
        let n = pattern.n;
        for i in 0..n {
            if !pattern.has(i, i) {
                return Err(PatternError::NotReflexive(i));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if !pattern.has(i, j) {
                    continue;
                }
                for k in 0..n {
                    if pattern.has(j, k) && !pattern.has(i, k) {
                        return Err(PatternError::NotTransitive(i, j, k));
                    }
                }
            }
        }
        let blocks = block_structure(&pattern);
        Ok(DigraphAlgebra { pattern, blocks })
    }

    pub fn n(&self) -> usize {
        self.pattern.n
    }

    pub fn ambient_dim(&self) -> usize {
        self.pattern.n * self.pattern.n
    }

    pub fn pattern(&self) -> &Pattern {
        &self.pattern
    }

    pub fn blocks(&self) -> &BlockStructure {
        &self.blocks
    }

    pub fn dim(&self) -> usize {
        self.pattern.len()
    }

    /// Matrix units of the algebra as index pairs, row-major.
    pub fn units(&self) -> Vec<(usize, usize)> {
        self.pattern.entries()
    }

    pub fn matrix_units(&self) -> Vec<Mat> {
        self.units().into_iter().map(|(i, j)| Mat::unit(self.n(), i, j)).collect()
    }

    pub fn is_diagonal_unit(&self, i: usize, j: usize) -> bool {
        self.blocks.block_of(i) == self.blocks.block_of(j)
    }

    pub fn subspace(&self) -> Subspace {
        let n = self.n();
        Subspace::coordinate(n * n, self.units().into_iter().map(|(i, j)| i * n + j))
    }

    /// The diagonal part `E` (units inside diagonal blocks) and the
    /// off-diagonal part `S` (units crossing blocks).
    pub fn diag_offdiag_split(&self) -> (Subspace, Subspace) {
        let n = self.n();
        let (diag, off): (Vec<_>, Vec<_>) =
            self.units().into_iter().partition(|&(i, j)| self.is_diagonal_unit(i, j));
        (
            Subspace::coordinate(n * n, diag.into_iter().map(|(i, j)| i * n + j)),
            Subspace::coordinate(n * n, off.into_iter().map(|(i, j)| i * n + j)),
        )
    }

    pub fn supports(&self, m: &Mat) -> bool {
        self.check_element(m).is_ok()
    }

    pub fn check_element(&self, m: &Mat) -> Result<(), AlgebraError> {
        let n = self.n();
        if m.rows() != n || m.cols() != n {
            return Err(AlgebraError::WrongSize { expected: n, rows: m.rows(), cols: m.cols() });
        }
        for i in 0..n {
            for j in 0..n {
                if !self.pattern.has(i, j) && !m.get(i, j).is_zero() {
                    return Err(AlgebraError::SupportViolation(i, j));
                }
            }
        }
        Ok(())
    }

    pub fn check_coords(&self, v: &[Rational]) -> Result<(), AlgebraError> {
        let n = self.n();
        if v.len() != n * n {
            return Err(AlgebraError::WrongAmbient { expected: n * n, found: v.len() });
        }
        for (idx, x) in v.iter().enumerate() {
            if !x.is_zero() && !self.pattern.has(idx / n, idx % n) {
                return Err(AlgebraError::SupportViolation(idx / n, idx % n));
            }
        }
        Ok(())
    }

    /// Checks that a subspace of the matrix space lies inside the algebra.
    pub fn check_subspace(&self, s: &Subspace) -> Result<(), AlgebraError> {
        if s.ambient_dim() != self.ambient_dim() {
            return Err(AlgebraError::WrongAmbient { expected: self.ambient_dim(), found: s.ambient_dim() });
        }
        // Every basis vector must vanish off the pattern.
        for b in s.basis() {
            if self.check_coords(b).is_err() {
                return Err(AlgebraError::NotInAlgebra);
            }
        }
        Ok(())
    }

    /// The conditional expectation `π(x) = Σ_u f_u x f_u`, defined on all of `M_n`.
    pub fn pi(&self, x: &Mat) -> Mat {
        let n = self.n();
        assert!(x.rows() == n && x.cols() == n, "pi expects an {n}x{n} matrix");
        let mut out = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                if self.is_diagonal_unit(i, j) {
                    out.set(i, j, x.get(i, j).clone());
                }
            }
        }
        out
    }

    /// `π` on row-major coordinates.
    pub fn pi_coords(&self, v: &[Rational]) -> Vec<Rational> {
        let n = self.n();
        v.iter()
            .enumerate()
            .map(|(idx, x)| if self.is_diagonal_unit(idx / n, idx % n) { x.clone() } else { Rational::zero() })
            .collect()
    }

    /// `π` on elements, rejecting matrices not supported on the pattern.
    pub fn pi_checked(&self, x: &Mat) -> Result<Mat, AlgebraError> {
        self.check_element(x)?;
        Ok(self.pi(x))
    }

    /// The central projection `f_u`.
    pub fn block_projection(&self, u: usize) -> Mat {
        let n = self.n();
        let mut m = Mat::zeros(n, n);
        for &i in self.blocks.block(u) {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// `f_u x f_u` as a `|B_u| × |B_u|` matrix.
    pub fn compress(&self, x: &Mat, u: usize) -> Mat {
        let b = self.blocks.block(u);
        x.submatrix(b, b)
    }

    /// Embeds a `|B_u| × |B_u|` matrix into block `u`.
    pub fn embed_block(&self, u: usize, m: &Mat) -> Mat {
        let n = self.n();
        let b = self.blocks.block(u);
        let mut out = Mat::zeros(n, n);
        for (a, &i) in b.iter().enumerate() {
            for (c, &j) in b.iter().enumerate() {
                out.set(i, j, m.get(a, c).clone());
            }
        }
        out
    }

    /// The pattern rewritten in canonical index order.
    pub fn canonical_pattern(&self) -> Pattern {
        let order = self.blocks.order();
        let n = self.n();
        let mut p = Pattern::empty(n);
        for (a, &i) in order.iter().enumerate() {
            for (b, &j) in order.iter().enumerate() {
                p.set(a, b, self.pattern.has(i, j));
            }
        }
        p
    }

    /// Matrix units lying in block pair `(u, v)`.
    pub fn block_units(&self, u: usize, v: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for &i in self.blocks.block(u) {
            for &j in self.blocks.block(v) {
                if self.pattern.has(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

fn block_structure(p: &Pattern) -> BlockStructure {
    let n = p.n;
    // Classes of the mutual-reachability relation, labelled by smallest index.
    let mut label = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        if label[i] != usize::MAX {
            continue;
        }
        let members: Vec<usize> = (i..n).filter(|&j| p.has(i, j) && p.has(j, i)).collect();
        for &j in &members {
            label[j] = classes.len();
        }
        classes.push(members);
    }
    let k = classes.len();
    let rel = |a: usize, b: usize| a != b && p.has(classes[a][0], classes[b][0]);

    // Topological order; among available classes take the one holding the
    // smallest original index (classes are already sorted that way).
    let mut placed = vec![false; k];
    let mut order = Vec::with_capacity(k);
    while order.len() < k {
        let next = (0..k)
            .find(|&c| !placed[c] && (0..k).all(|d| placed[d] || !rel(d, c)))
            .expect("block relation is acyclic for a valid pattern");
        placed[next] = true;
        order.push(next);
    }
    let mut position = vec![0; k];
    for (pos, &c) in order.iter().enumerate() {
        position[c] = pos;
    }
    let blocks: Vec<Vec<usize>> = order.iter().map(|&c| classes[c].clone()).collect();
    let block_of = label.iter().map(|&c| position[c]).collect();
    let mut poset = BTreeSet::new();
    for a in 0..k {
        for b in 0..k {
            if rel(a, b) {
                poset.insert((position[a], position[b]));
            }
        }
    }
    BlockStructure { blocks, block_of, poset }
}

/// JSON summary of a validated pattern, with 1-based indices.
#[derive(Debug, Clone, Serialize)]
pub struct BlockSummary {
    pub blocks: Vec<Vec<usize>>,
    pub order: Vec<usize>,
    pub poset: Vec<(usize, usize)>,
    #[serde(rename = "dimA")]
    pub dim_a: usize,
    #[serde(rename = "dimE")]
    pub dim_e: usize,
    #[serde(rename = "dimS")]
    pub dim_s: usize,
}

impl From<&DigraphAlgebra> for BlockSummary {
    fn from(a: &DigraphAlgebra) -> Self {
        let (e, s) = a.diag_offdiag_split();
        let bs = a.blocks();
        BlockSummary {
            blocks: bs.blocks().iter().map(|b| b.iter().map(|i| i + 1).collect()).collect(),
            order: bs.order().iter().map(|i| i + 1).collect(),
            poset: bs.strict_pairs().iter().map(|&(u, v)| (u + 1, v + 1)).collect(),
            dim_a: a.dim(),
            dim_e: e.dim(),
            dim_s: s.dim(),
        }
    }
}
