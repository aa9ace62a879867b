//! Block upper triangular matrices over a finite nest, in floating point.
//!
//! The atoms `E_1, …, E_p` partition `C^n` into consecutive coordinate
//! blocks. For `A` block upper triangular, `A(z)` scales block `(i, j)` by
//! `z^{j−i}`; on the unit circle it is the conjugate `U(θ)* A U(θ)` by the
//! diagonal unitary that multiplies atom `k` by `e^{ikθ}`.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::algebra::{DigraphAlgebra, Pattern};
use crate::exact::Mat;
use crate::lie;
use crate::random;

pub type CMatrix = DMatrix<Complex64>;

/// `|z|` may exceed 1 by this much before `path` refuses it.
pub const DISK_SLACK: f64 = 1e-12;
pub const BOUNDARY_TOL: f64 = 1e-10;
pub const NORM_TOL: f64 = 1e-9;
pub const INVERSE_TOL: f64 = 1e-8;
pub const CSL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NestError {
    #[error("|z| = {0} lies outside the closed unit disk")]
    OutsideDisk(f64),
    #[error("atoms must be positive sizes")]
    EmptyAtom,
    #[error("matrix size {found} does not match the atoms (total {expected})")]
    SizeMismatch { expected: usize, found: usize },
    #[error("entry ({},{}) lies below the block diagonal", .0 + 1, .1 + 1)]
    NotBlockUpper(usize, usize),
    #[error("supplied inverse is off by {0:e}")]
    NotInverse(f64),
    #[error("matrix is singular")]
    Singular,
    #[error("mask {0}")]
    Mask(String),
}

/// Atom partition of `C^n` into consecutive blocks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Atoms {
    sizes: Vec<usize>,
    atom_of: Vec<usize>,
}

impl Atoms {
    pub fn new(sizes: &[usize]) -> Result<Self, NestError> {
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(NestError::EmptyAtom);
        }
        let atom_of = sizes.iter().enumerate().flat_map(|(k, &s)| std::iter::repeat_n(k, s)).collect();
        Ok(Atoms { sizes: sizes.to_vec(), atom_of })
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn n(&self) -> usize {
        self.atom_of.len()
    }

    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    pub fn atom_of(&self, i: usize) -> usize {
        self.atom_of[i]
    }

    /// Block upper triangular pattern: the nest algebra itself.
    pub fn nest_pattern(&self) -> Pattern {
        let n = self.n();
        let mut p = Pattern::empty(n);
        for i in 0..n {
            for j in 0..n {
                if self.atom_of(i) <= self.atom_of(j) {
                    p.set(i, j, true);
                }
            }
        }
        p
    }

    fn check(&self, a: &CMatrix) -> Result<(), NestError> {
        if a.nrows() != self.n() || a.ncols() != self.n() {
            return Err(NestError::SizeMismatch { expected: self.n(), found: a.nrows() });
        }
        for i in 0..self.n() {
            for j in 0..self.n() {
                if self.atom_of(i) > self.atom_of(j) && a[(i, j)] != Complex64::new(0.0, 0.0) {
                    return Err(NestError::NotBlockUpper(i, j));
                }
            }
        }
        Ok(())
    }
}

fn czero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// `A(z)`: block `(i, j)` scaled by `z^{j−i}`.
pub fn path(atoms: &Atoms, a: &CMatrix, z: Complex64) -> Result<CMatrix, NestError> {
    if z.norm() > 1.0 + DISK_SLACK {
        return Err(NestError::OutsideDisk(z.norm()));
    }
    atoms.check(a)?;
    let powers: Vec<Complex64> = (0..atoms.count()).map(|k| z.powu(k as u32)).collect();
    Ok(CMatrix::from_fn(a.nrows(), a.ncols(), |i, j| {
        let (u, v) = (atoms.atom_of(i), atoms.atom_of(j));
        if u > v {
            czero()
        } else {
            a[(i, j)] * powers[v - u]
        }
    }))
}

/// Diagonal unitary multiplying atom `k` (1-based) by `e^{ikθ}`.
pub fn u_theta(atoms: &Atoms, theta: f64) -> CMatrix {
    let n = atoms.n();
    CMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::from_polar(1.0, (atoms.atom_of(i) + 1) as f64 * theta)
        } else {
            czero()
        }
    })
}

pub fn spectral_norm(a: &CMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.clone().svd(false, false).singular_values.max()
}

/// `‖U(θ)* A U(θ) − A(e^{iθ})‖_F`.
pub fn boundary_conjugation_residual(atoms: &Atoms, a: &CMatrix, theta: f64) -> Result<f64, NestError> {
    let u = u_theta(atoms, theta);
    let lhs = u.adjoint() * a * &u;
    Ok((lhs - path(atoms, a, Complex64::from_polar(1.0, theta))?).norm())
}

/// Sample points of the closed disk: `z = 0`, `z = 1`, then alternately an
/// equally spaced boundary point and a seeded interior point.
pub fn disk_samples(samples: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = random::rng(seed);
    let mut out = vec![czero(), Complex64::new(1.0, 0.0)];
    for k in 0..samples {
        if k % 2 == 0 {
            out.push(Complex64::from_polar(1.0, TAU * k as f64 / samples as f64));
        } else {
            let r: f64 = rng.random::<f64>().sqrt();
            out.push(Complex64::from_polar(r, rng.random_range(0.0..TAU)));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormReport {
    pub samples: usize,
    pub norm: f64,
    /// Largest `‖A(z)‖ − ‖A‖` seen.
    pub max_excess: f64,
    /// Largest `|‖A(z)‖ − ‖A‖|` over boundary samples.
    pub max_boundary_gap: f64,
    pub violations: usize,
}

impl NormReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// `‖A(z)‖ ≤ ‖A‖` on the disk, with equality on the circle.
pub fn norm_bound_check(atoms: &Atoms, a: &CMatrix, zs: &[Complex64]) -> Result<NormReport, NestError> {
    let norm = spectral_norm(a);
    let mut report = NormReport { samples: zs.len(), norm, max_excess: f64::NEG_INFINITY, max_boundary_gap: 0.0, violations: 0 };
    for &z in zs {
        let nz = spectral_norm(&path(atoms, a, z)?);
        let excess = nz - norm;
        report.max_excess = report.max_excess.max(excess);
        let mut bad = excess > NORM_TOL;
        if (z.norm() - 1.0).abs() <= DISK_SLACK {
            let gap = excess.abs();
            report.max_boundary_gap = report.max_boundary_gap.max(gap);
            bad |= gap > NORM_TOL;
        }
        if bad {
            report.violations += 1;
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InverseReport {
    pub samples: usize,
    pub tolerance: f64,
    pub max_residual: f64,
    pub violations: usize,
}

impl InverseReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// `A(z) B(z) = I` for `B = A^{-1}`. The tolerance is `1e-8` scaled by
/// `max(1, ‖A‖_F ‖B‖_F)`.
pub fn inverse_path_check(atoms: &Atoms, a: &CMatrix, b: &CMatrix, zs: &[Complex64]) -> Result<InverseReport, NestError> {
    atoms.check(a)?;
    atoms.check(b)?;
    let n = atoms.n();
    let id = CMatrix::identity(n, n);
    let tolerance = INVERSE_TOL * (a.norm() * b.norm()).max(1.0);
    let base = (a * b - &id).norm();
    if base > tolerance {
        return Err(NestError::NotInverse(base));
    }
    let mut report = InverseReport { samples: zs.len(), tolerance, max_residual: 0.0, violations: 0 };
    for &z in zs {
        let r = (path(atoms, a, z)? * path(atoms, b, z)? - &id).norm();
        report.max_residual = report.max_residual.max(r);
        if r > tolerance {
            report.violations += 1;
        }
    }
    Ok(report)
}

/// Random block upper triangular matrix with entries in the unit square.
pub fn random_block_upper<R: Rng>(rng: &mut R, atoms: &Atoms) -> CMatrix {
    let n = atoms.n();
    CMatrix::from_fn(n, n, |i, j| {
        if atoms.atom_of(i) <= atoms.atom_of(j) {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        } else {
            czero()
        }
    })
}

/// Random invertible supported on `mask`, diagonally dominated by `3·I`.
pub fn random_invertible<R: Rng>(rng: &mut R, mask: &Pattern) -> CMatrix {
    let n = mask.n();
    CMatrix::from_fn(n, n, |i, j| {
        if !mask.has(i, j) {
            return czero();
        }
        let noise = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        if i == j {
            noise + Complex64::new(3.0, 0.0)
        } else {
            noise * 0.5
        }
    })
}

/// Inverse of a block upper triangular matrix, with the entries below the
/// block diagonal set to exact zeros.
pub fn invert_block_upper(atoms: &Atoms, a: &CMatrix) -> Result<CMatrix, NestError> {
    atoms.check(a)?;
    let mut b = a.clone().try_inverse().ok_or(NestError::Singular)?;
    for i in 0..atoms.n() {
        for j in 0..atoms.n() {
            if atoms.atom_of(i) > atoms.atom_of(j) {
                b[(i, j)] = czero();
            }
        }
    }
    Ok(b)
}

pub fn to_complex(m: &Mat) -> CMatrix {
    CMatrix::from_fn(m.rows(), m.cols(), |i, j| Complex64::new(m.get(i, j).to_f64(), 0.0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CslReport {
    pub lie_dim: usize,
    pub conjugations: usize,
    pub max_residual: f64,
    pub violations: usize,
}

impl CslReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Checks that `mask` is a digraph algebra whose blocks are exactly the atoms
/// and which sits inside the nest algebra.
pub fn check_mask(atoms: &Atoms, mask: &Pattern) -> Result<DigraphAlgebra, NestError> {
    if mask.n() != atoms.n() {
        return Err(NestError::SizeMismatch { expected: atoms.n(), found: mask.n() });
    }
    let alg = mask.validate().map_err(|e| NestError::Mask(e.to_string()))?;
    for (i, j) in mask.entries() {
        if atoms.atom_of(i) > atoms.atom_of(j) {
            return Err(NestError::NotBlockUpper(i, j));
        }
    }
    for i in 0..atoms.n() {
        for j in 0..atoms.n() {
            if atoms.atom_of(i) == atoms.atom_of(j) && !mask.has(i, j) {
                return Err(NestError::Mask(format!("atom block misses ({},{})", i + 1, j + 1)));
            }
        }
    }
    Ok(alg)
}

/// Least-squares distance from `v` to the real span with orthonormal columns `q`.
fn residual_to_span(q: &DMatrix<f64>, v: &CMatrix) -> f64 {
    let n2 = v.len();
    let flat = DMatrix::<Complex64>::from_iterator(n2, 1, v.transpose().iter().copied());
    if q.ncols() == 0 {
        return flat.norm();
    }
    let qc = q.map(|x| Complex64::new(x, 0.0));
    let proj = &qc * (qc.adjoint() * &flat);
    (flat - proj).norm()
}

/// Generates a Lie ideal of the mask algebra exactly, then conjugates its
/// basis by `A(z)` for random invertible `A` in the mask algebra and sample
/// points `z`, measuring the relative distance back to the ideal.
pub fn csl_invariance_check(
    atoms: &Atoms,
    mask: &Pattern,
    generators: usize,
    invertibles: usize,
    zs: &[Complex64],
    seed: u64,
) -> Result<CslReport, NestError> {
    let alg = check_mask(atoms, mask)?;
    let mut rng = random::rng(seed);
    let gens: Vec<Mat> = (0..generators).map(|_| random::sparse_element(&mut rng, &alg)).collect();
    let l = lie::lie_generate(&alg, &gens).map_err(|e| NestError::Mask(e.to_string()))?;
    let n = alg.n();
    let basis: Vec<f64> = l.basis().iter().flat_map(|b| b.iter().map(|x| x.to_f64())).collect();
    let q = if l.dim() == 0 {
        DMatrix::<f64>::zeros(n * n, 0)
    } else {
        DMatrix::from_column_slice(n * n, l.dim(), &basis).qr().q()
    };
    let xs: Vec<CMatrix> = l.basis_mats(n).iter().map(to_complex).collect();
    let mut report = CslReport { lie_dim: l.dim(), conjugations: 0, max_residual: 0.0, violations: 0 };
    for _ in 0..invertibles {
        let a = random_invertible(&mut rng, mask);
        let b = invert_block_upper(atoms, &a)?;
        for &z in zs {
            let az = path(atoms, &a, z)?;
            let bz = path(atoms, &b, z)?;
            for x in &xs {
                let image = &bz * x * &az;
                let r = residual_to_span(&q, &image) / x.norm().max(1.0);
                report.conjugations += 1;
                report.max_residual = report.max_residual.max(r);
                if r > CSL_TOL {
                    report.violations += 1;
                }
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NestReport {
    pub atoms: Vec<usize>,
    pub seed: u64,
    pub samples: usize,
    pub boundary_max_relative: f64,
    pub boundary_passed: bool,
    pub norm: NormReport,
    pub inverse: InverseReport,
    /// Largest relative `‖(AB)(z) − A(z)B(z)‖_F`.
    pub grading_max_relative: f64,
    pub grading_passed: bool,
    /// `A(1) = A` exactly and every entry is a polynomial of degree below
    /// the atom count.
    pub endpoint_exact: bool,
    pub csl: Option<CslReport>,
}

impl NestReport {
    pub fn passed(&self) -> bool {
        self.boundary_passed
            && self.norm.passed()
            && self.inverse.passed()
            && self.grading_passed
            && self.endpoint_exact
            && self.csl.as_ref().is_none_or(CslReport::passed)
    }
}

/// Runs every check on seeded random block upper triangular matrices.
pub fn run_checks(atoms: &Atoms, samples: usize, seed: u64, mask: Option<&Pattern>) -> Result<NestReport, NestError> {
    let mut rng = random::rng(seed);
    let zs = disk_samples(samples, seed ^ 0x5eed);
    let a = random_block_upper(&mut rng, atoms);
    let b = random_block_upper(&mut rng, atoms);

    let mut boundary_max_relative: f64 = 0.0;
    for &z in &zs {
        if (z.norm() - 1.0).abs() <= DISK_SLACK {
            let r = boundary_conjugation_residual(atoms, &a, z.arg())? / a.norm().max(f64::MIN_POSITIVE);
            boundary_max_relative = boundary_max_relative.max(r);
        }
    }

    let norm = norm_bound_check(atoms, &a, &zs)?;

    let nest = atoms.nest_pattern();
    let inv = random_invertible(&mut rng, &nest);
    let inv_b = invert_block_upper(atoms, &inv)?;
    let inverse = inverse_path_check(atoms, &inv, &inv_b, &zs)?;

    let ab = &a * &b;
    let mut grading_max_relative: f64 = 0.0;
    for &z in &zs {
        let lhs = path(atoms, &ab, z)?;
        let rhs = path(atoms, &a, z)? * path(atoms, &b, z)?;
        grading_max_relative = grading_max_relative.max((lhs - rhs).norm() / ab.norm().max(1.0));
    }

    let endpoint_exact = path(atoms, &a, Complex64::new(1.0, 0.0))? == a && degree_check(atoms, &a)?;

    let csl = mask.map(|m| csl_invariance_check(atoms, m, 2, 4, &zs[..zs.len().min(12)], seed)).transpose()?;

    Ok(NestReport {
        atoms: atoms.sizes().to_vec(),
        seed,
        samples: zs.len(),
        boundary_max_relative,
        boundary_passed: boundary_max_relative <= BOUNDARY_TOL,
        norm,
        inverse,
        grading_max_relative,
        grading_passed: grading_max_relative <= BOUNDARY_TOL,
        endpoint_exact,
        csl,
    })
}

/// Each entry of `A(z)` is `a_ij z^d` with `d = atom(j) − atom(i) < p`:
/// checked by comparing `A(2^{-1})` against the predicted power of two,
/// which is exact in binary floating point.
fn degree_check(atoms: &Atoms, a: &CMatrix) -> Result<bool, NestError> {
    let half = path(atoms, a, Complex64::new(0.5, 0.0))?;
    let p = atoms.count();
    for i in 0..atoms.n() {
        for j in 0..atoms.n() {
            let (u, v) = (atoms.atom_of(i), atoms.atom_of(j));
            if u > v {
                continue;
            }
            let d = v - u;
            if d >= p || half[(i, j)] != a[(i, j)] * 0.5f64.powi(d as i32) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real(rows: &[&[f64]]) -> CMatrix {
        CMatrix::from_fn(rows.len(), rows[0].len(), |i, j| c(rows[i][j], 0.0))
    }

    #[test]
    fn path_examples() {
        let atoms = Atoms::new(&[1, 1]).unwrap();
        let a = real(&[&[1.0, 2.0], &[0.0, 3.0]]);
        assert_eq!(path(&atoms, &a, c(0.0, 0.0)).unwrap(), real(&[&[1.0, 0.0], &[0.0, 3.0]]));
        assert_eq!(path(&atoms, &a, c(1.0, 0.0)).unwrap(), a);
        let expected = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 2.0), c(0.0, 0.0), c(3.0, 0.0)]);
        assert_eq!(path(&atoms, &a, c(0.0, 1.0)).unwrap(), expected);
        assert!(matches!(path(&atoms, &a, c(1.1, 0.0)), Err(NestError::OutsideDisk(_))));
        let low = real(&[&[1.0, 0.0], &[1.0, 1.0]]);
        assert_eq!(path(&atoms, &low, c(0.5, 0.0)), Err(NestError::NotBlockUpper(1, 0)));
    }

    #[test]
    fn u_theta_examples() {
        let atoms = Atoms::new(&[1, 1]).unwrap();
        assert_eq!(u_theta(&atoms, 0.0), CMatrix::identity(2, 2));
        let u = u_theta(&atoms, std::f64::consts::PI);
        assert!((u[(0, 0)] - c(-1.0, 0.0)).norm() < 1e-15);
        assert!((u[(1, 1)] - c(1.0, 0.0)).norm() < 1e-15);
        let atoms = Atoms::new(&[2, 1, 3]).unwrap();
        let u = u_theta(&atoms, 0.77);
        assert!((u.adjoint() * &u - CMatrix::identity(6, 6)).norm() < 1e-12);
    }

    #[test]
    fn boundary_examples() {
        let atoms = Atoms::new(&[3, 2, 4, 1, 5, 5]).unwrap();
        let mut rng = random::rng(4);
        let a = random_block_upper(&mut rng, &atoms);
        assert_eq!(boundary_conjugation_residual(&atoms, &a, 0.0).unwrap(), 0.0);
        assert!(boundary_conjugation_residual(&atoms, &a, 1.3).unwrap() <= BOUNDARY_TOL * a.norm());
        let d = CMatrix::from_diagonal(&nalgebra::DVector::from_fn(20, |i, _| c(i as f64, 1.0)));
        assert!(boundary_conjugation_residual(&atoms, &d, 2.1).unwrap() < 1e-14);
    }

    #[test]
    fn norm_examples() {
        let atoms = Atoms::new(&[1, 1]).unwrap();
        let e12 = real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        for z in [c(0.3, 0.4), c(0.0, 0.0), c(0.0, -1.0)] {
            assert!((spectral_norm(&path(&atoms, &e12, z).unwrap()) - z.norm()).abs() < 1e-12);
        }
        let d = real(&[&[2.0, 0.0], &[0.0, -5.0]]);
        let r = norm_bound_check(&atoms, &d, &disk_samples(20, 1)).unwrap();
        assert!(r.passed());
        assert!(r.max_excess.abs() < 1e-12);

        let atoms = Atoms::new(&[1; 10]).unwrap();
        let a = random_block_upper(&mut random::rng(8), &atoms);
        assert!(norm_bound_check(&atoms, &a, &disk_samples(200, 8)).unwrap().passed());
    }

    #[test]
    fn inverse_examples() {
        let atoms = Atoms::new(&[1, 1]).unwrap();
        let zs = disk_samples(30, 2);
        let id = CMatrix::identity(2, 2);
        assert_eq!(inverse_path_check(&atoms, &id, &id, &zs).unwrap().max_residual, 0.0);
        let a = real(&[&[1.0, 1.0], &[0.0, 1.0]]);
        let b = real(&[&[1.0, -1.0], &[0.0, 1.0]]);
        assert_eq!(inverse_path_check(&atoms, &a, &b, &zs).unwrap().max_residual, 0.0);
        assert!(matches!(inverse_path_check(&atoms, &a, &a, &zs), Err(NestError::NotInverse(_))));

        let atoms = Atoms::new(&[1; 8]).unwrap();
        let a = random_invertible(&mut random::rng(3), &atoms.nest_pattern());
        let b = invert_block_upper(&atoms, &a).unwrap();
        let r = inverse_path_check(&atoms, &a, &b, &disk_samples(100, 3)).unwrap();
        assert!(r.max_residual <= INVERSE_TOL);
    }

    #[test]
    fn csl_and_full_run() {
        let atoms = Atoms::new(&[1, 2, 1]).unwrap();
        let mask: Pattern = "n 4\n*..*\n.***\n.***\n...*\n".parse().unwrap();
        let r = run_checks(&atoms, 40, 3, Some(&mask)).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.csl.unwrap().conjugations > 0);
        let bad: Pattern = "n 4\n****\n.*.*\n..**\n...*\n".parse().unwrap();
        assert!(check_mask(&atoms, &bad).is_err());
    }
}
