//! Invertibles of a digraph algebra and conjugation of Lie ideals.
//!
//! Every invertible `t` factors as `t = d(1 + n)` with `d = π(t)` invertible
//! block diagonal and `n` strictly block upper (hence nilpotent). The
//! checks here conjugate Lie ideals by random invertibles and verify each
//! step of that factorization separately.

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{AlgebraError, DigraphAlgebra};
use crate::exact::{ExactError, Mat, Rational, Subspace};
use crate::lie::{self, LieError};
use crate::random;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SimError {
    #[error("diagonal block {} is singular", .block + 1)]
    Singular { block: usize },
    #[error("element is not nilpotent")]
    NotNilpotent,
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factorization {
    pub d: Mat,
    pub n: Mat,
    pub nilpotence_order: u32,
}

/// Smallest `k` with `m^(k+1) = 0`, or `None` if `m` is not nilpotent.
pub fn nilpotence_order(m: &Mat) -> Option<u32> {
    let size = m.rows();
    let mut k = 0;
    let mut power = m.clone();
    while !power.is_zero() {
        if k as usize >= size {
            return None;
        }
        power = &power * m;
        k += 1;
    }
    Some(k)
}

/// `Σ_{j=0}^{k} (-m)^j` for `m^(k+1) = 0`, i.e. `(1 + m)^{-1}`.
fn neumann_inverse(m: &Mat, k: u32) -> Mat {
    let size = m.rows();
    let neg = -m;
    let mut acc = Mat::identity(size);
    let mut term = Mat::identity(size);
    for _ in 0..k {
        term = &term * &neg;
        acc = &acc + &term;
    }
    acc
}

fn block_inverse(alg: &DigraphAlgebra, d: &Mat) -> Result<Mat, SimError> {
    let mut inv = Mat::zeros(alg.n(), alg.n());
    for u in 0..alg.blocks().count() {
        let b = alg.compress(d, u).inverse().ok_or(SimError::Singular { block: u })?;
        inv = &inv + &alg.embed_block(u, &b);
    }
    Ok(inv)
}

pub fn factor_dn(alg: &DigraphAlgebra, t: &Mat) -> Result<Factorization, SimError> {
    alg.check_element(t)?;
    let d = alg.pi(t);
    let d_inv = block_inverse(alg, &d)?;
    let n = &(&d_inv * t) - &Mat::identity(alg.n());
    let nilpotence_order = nilpotence_order(&n).expect("strictly block upper elements are nilpotent");
    Ok(Factorization { d, n, nilpotence_order })
}

/// `t^{-1} = (1 + n)^{-1} d^{-1}`, computed without leaving the algebra.
pub fn invert_in_algebra(alg: &DigraphAlgebra, t: &Mat) -> Result<Mat, SimError> {
    let f = factor_dn(alg, t)?;
    let d_inv = block_inverse(alg, &f.d)?;
    Ok(&neumann_inverse(&f.n, f.nilpotence_order) * &d_inv)
}

/// `t^{-1} x t`.
pub fn conjugate(alg: &DigraphAlgebra, t: &Mat, x: &Mat) -> Result<Mat, SimError> {
    alg.check_element(x)?;
    let t_inv = invert_in_algebra(alg, t)?;
    Ok(&(&t_inv * x) * t)
}

/// The terms `n^j [n, x]` for `j = 0..=k`.
fn telescoping_terms(n: &Mat, k: u32, x: &Mat) -> Vec<Mat> {
    let bracket = &(n * x) - &(x * n);
    let mut terms = Vec::with_capacity(k as usize + 1);
    let mut term = bracket;
    for _ in 0..=k {
        let next = n * &term;
        terms.push(term);
        term = next;
    }
    terms
}

/// `x − Σ_{j=0}^{k} (−1)^j n^j [n, x]`, which equals `(1+n)^{-1} x (1+n)`.
pub fn telescoping_conjugation(alg: &DigraphAlgebra, n: &Mat, x: &Mat) -> Result<Mat, SimError> {
    alg.check_element(n)?;
    alg.check_element(x)?;
    let k = nilpotence_order(n).ok_or(SimError::NotNilpotent)?;
    let mut out = x.clone();
    for (j, term) in telescoping_terms(n, k, x).iter().enumerate() {
        out = if j % 2 == 0 { &out - term } else { &out + term };
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub trial: usize,
    pub t: Mat,
    pub x: Mat,
    pub image: Mat,
}

/// Per-factor checks for a Lie ideal `L = G + K`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SplitReport {
    /// `d^{-1} x d ∈ L`.
    pub diagonal_checks: usize,
    pub diagonal_failures: usize,
    /// `n^j [n, x] ∈ K` for every telescoping term.
    pub nilpotent_checks: usize,
    pub nilpotent_failures: usize,
    /// Telescoping sum equals the direct conjugate.
    pub telescoping_mismatches: usize,
}

impl SplitReport {
    fn merge(mut self, other: SplitReport) -> SplitReport {
        self.diagonal_checks += other.diagonal_checks;
        self.diagonal_failures += other.diagonal_failures;
        self.nilpotent_checks += other.nilpotent_checks;
        self.nilpotent_failures += other.nilpotent_failures;
        self.telescoping_mismatches += other.telescoping_mismatches;
        self
    }

    pub fn is_clean(&self) -> bool {
        self.diagonal_failures == 0 && self.nilpotent_failures == 0 && self.telescoping_mismatches == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimilarityReport {
    pub seed: u64,
    pub trials: usize,
    pub conjugations: usize,
    pub failure_count: usize,
    /// First few failures, sorted by trial.
    pub failures: Vec<Counterexample>,
    pub split: Option<SplitReport>,
}

impl SimilarityReport {
    pub fn invariant(&self) -> bool {
        self.failure_count == 0 && self.split.as_ref().is_none_or(SplitReport::is_clean)
    }
}

const KEPT_FAILURES: usize = 5;

struct Trial {
    index: usize,
    t: Mat,
    d: Mat,
    n: Mat,
}

fn draw_trials(alg: &DigraphAlgebra, trials: usize, seed: u64) -> Vec<Trial> {
    let mut rng = random::rng(seed);
    (0..trials)
        .map(|index| {
            let (t, d, n) = random::invertible(&mut rng, alg);
            Trial { index, t, d, n }
        })
        .collect()
}

fn run_trial(
    alg: &DigraphAlgebra,
    s: &Subspace,
    split: Option<&Subspace>,
    trial: &Trial,
) -> Result<(Vec<Counterexample>, SplitReport), SimError> {
    let dim = alg.n();
    let t_inv = invert_in_algebra(alg, &trial.t)?;
    let d_inv = block_inverse(alg, &trial.d)?;
    let one_plus_n = &Mat::identity(dim) + &trial.n;
    let k = nilpotence_order(&trial.n).ok_or(SimError::NotNilpotent)?;
    let unipotent_inv = neumann_inverse(&trial.n, k);
    let mut failures = Vec::new();
    let mut report = SplitReport::default();
    for x in s.basis_mats(dim) {
        let image = &(&t_inv * &x) * &trial.t;
        if !s.contains_mat(&image)? {
            failures.push(Counterexample { trial: trial.index, t: trial.t.clone(), x: x.clone(), image });
        }
        let Some(kk) = split else { continue };
        let xd = &(&d_inv * &x) * &trial.d;
        report.diagonal_checks += 1;
        if !s.contains_mat(&xd)? {
            report.diagonal_failures += 1;
        }
        for term in telescoping_terms(&trial.n, k, &xd) {
            report.nilpotent_checks += 1;
            if !kk.contains_mat(&term)? {
                report.nilpotent_failures += 1;
            }
        }
        let direct = &(&unipotent_inv * &xd) * &one_plus_n;
        if telescoping_conjugation(alg, &trial.n, &xd)? != direct {
            report.telescoping_mismatches += 1;
        }
    }
    Ok((failures, report))
}

fn run(
    alg: &DigraphAlgebra,
    s: &Subspace,
    k: Option<&Subspace>,
    trials: usize,
    seed: u64,
) -> Result<SimilarityReport, SimError> {
    alg.check_subspace(s)?;
    let drawn = draw_trials(alg, trials, seed);
    let results: Vec<_> = drawn.par_iter().map(|t| run_trial(alg, s, k, t)).collect::<Result<_, _>>()?;
    let mut failures = Vec::new();
    let mut split = SplitReport::default();
    for (f, r) in results {
        failures.extend(f);
        split = split.merge(r);
    }
    let failure_count = failures.len();
    failures.truncate(KEPT_FAILURES);
    Ok(SimilarityReport {
        seed,
        trials,
        conjugations: trials * s.dim(),
        failure_count,
        failures,
        split: k.map(|_| split),
    })
}

/// Conjugates a Lie ideal by `trials` seeded random invertibles and checks
/// membership, together with the diagonal and nilpotent factors separately.
pub fn check_similarity_invariance(
    alg: &DigraphAlgebra,
    l: &Subspace,
    trials: usize,
    seed: u64,
) -> Result<SimilarityReport, SimError> {
    let dec = lie::decompose(alg, l)?;
    run(alg, l, Some(&dec.k), trials, seed)
}

/// Same conjugation test with no Lie-ideal precondition and no split.
pub fn probe_similarity(
    alg: &DigraphAlgebra,
    s: &Subspace,
    trials: usize,
    seed: u64,
) -> Result<SimilarityReport, SimError> {
    run(alg, s, None, trials, seed)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpReport {
    /// `y_0 = x`, `y_{j+1} = y_j a − a y_j`, up to the truncation order or
    /// the first zero.
    pub brackets: Vec<Mat>,
    pub brackets_in_lie_ideal: bool,
    pub nilpotence_order: Option<u32>,
    /// `e^{−a} x e^{a}`, present when `a` is nilpotent.
    pub conjugate: Option<Mat>,
    pub series_matches: Option<bool>,
    pub conjugate_in_lie_ideal: Option<bool>,
}

impl ExpReport {
    pub fn passed(&self) -> bool {
        self.brackets_in_lie_ideal && self.series_matches != Some(false) && self.conjugate_in_lie_ideal != Some(false)
    }
}

fn factorial(j: usize) -> Rational {
    (1..=j as i64).map(Rational::from_int).fold(Rational::one(), |a, b| a * b)
}

/// `Σ_{i ≤ k} (sign·a)^i / i!` for `a^(k+1) = 0`.
fn nilpotent_exp(a: &Mat, k: u32, negate: bool) -> Mat {
    let size = a.rows();
    let step = if negate { -a } else { a.clone() };
    let mut acc = Mat::identity(size);
    let mut power = Mat::identity(size);
    for i in 1..=k as usize {
        power = &power * &step;
        acc = &acc + &power.scale(&factorial(i).recip().expect("nonzero"));
    }
    acc
}

/// Iterated brackets of `x` against `a`, each checked against the Lie ideal
/// generated by `x`. For nilpotent `a` the exact conjugate `e^{−a} x e^{a}` is
/// compared with `Σ y_j / j!` and checked for membership as well.
pub fn exp_conjugation_check(
    alg: &DigraphAlgebra,
    a: &Mat,
    x: &Mat,
    truncation: usize,
    require_exact: bool,
) -> Result<ExpReport, SimError> {
    alg.check_element(a)?;
    alg.check_element(x)?;
    let l = lie::lie_generate(alg, std::slice::from_ref(x))?;
    let order = nilpotence_order(a);
    if order.is_none() && require_exact {
        return Err(SimError::NotNilpotent);
    }
    let next = |y: &Mat| &(y * a) - &(a * y);

    let mut brackets = vec![x.clone()];
    while brackets.len() <= truncation {
        let y = next(brackets.last().expect("nonempty"));
        if y.is_zero() {
            break;
        }
        brackets.push(y);
    }
    let mut brackets_in_lie_ideal = true;
    for y in &brackets {
        brackets_in_lie_ideal &= l.contains_mat(y)?;
    }

    let (conjugate, series_matches, conjugate_in_lie_ideal) = match order {
        Some(k) => {
            let conj = &(&nilpotent_exp(a, k, true) * x) * &nilpotent_exp(a, k, false);
            // ad_a vanishes after 2k + 1 steps, so the series is finite.
            let mut series = Mat::zeros(alg.n(), alg.n());
            let mut y = x.clone();
            let mut j = 0;
            while !y.is_zero() {
                series = &series + &y.scale(&factorial(j).recip().expect("nonzero"));
                y = next(&y);
                j += 1;
            }
            let inside = l.contains_mat(&conj)?;
            (Some(conj.clone()), Some(series == conj), Some(inside))
        }
        None => (None, None, None),
    };
    Ok(ExpReport {
        brackets,
        brackets_in_lie_ideal,
        nilpotence_order: order,
        conjugate,
        series_matches,
        conjugate_in_lie_ideal,
    })
}
