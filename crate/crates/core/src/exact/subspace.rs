//! Linear subspaces of `Q^d`, stored by their canonical (RREF) basis.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::matrix::{nullspace, rref_rows};
use super::{ExactError, Mat, Rational};

/// A subspace in canonical form: the basis is the non-zero part of the
/// reduced row-echelon form of any spanning set, so two values are equal
/// exactly when they describe the same subspace.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self::coordinate(ambient_dim, 0..ambient_dim)
    }

    /// Span of the given standard basis vectors.
    pub fn coordinate(ambient_dim: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut idx: Vec<usize> = indices.into_iter().collect();
        idx.sort_unstable();
        idx.dedup();
        assert!(idx.last().is_none_or(|&i| i < ambient_dim), "coordinate index out of range");
        let basis = idx
            .iter()
            .map(|&i| {
                let mut v = vec![Rational::zero(); ambient_dim];
                v[i] = Rational::one();
                v
            })
            .collect();
        Subspace { ambient_dim, basis, pivots: idx }
    }

    pub fn span(vectors: &[Vec<Rational>], ambient_dim: usize) -> Result<Self, ExactError> {
        for v in vectors {
            check_len(v, ambient_dim)?;
        }
        let mut rows = vectors.to_vec();
        let pivots = rref_rows(&mut rows);
        rows.truncate(pivots.len());
        Ok(Subspace { ambient_dim, basis: rows, pivots })
    }

    /// Span of square matrices under row-major vectorization.
    pub fn span_mats<'a>(mats: impl IntoIterator<Item = &'a Mat>, n: usize) -> Result<Self, ExactError> {
        let mut s = Self::zero(n * n);
        for m in mats {
            if m.rows() != n || m.cols() != n {
                return Err(ExactError::ShapeMismatch { left: (n, n), right: (m.rows(), m.cols()) });
            }
            s.insert(m.coords())?;
        }
        Ok(s)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Basis vectors reshaped as `n × n` matrices.
    pub fn basis_mats(&self, n: usize) -> Vec<Mat> {
        assert_eq!(n * n, self.ambient_dim, "ambient dimension is not n²");
        self.basis.iter().map(|v| Mat::from_coords(n, v).expect("length checked")).collect()
    }

    /// The component of `v` left over after eliminating against the basis;
    /// zero exactly when `v` lies in the subspace.
    pub fn residual(&self, v: &[Rational]) -> Result<Vec<Rational>, ExactError> {
        check_len(v, self.ambient_dim)?;
        let mut r = v.to_vec();
        self.reduce_in_place(&mut r);
        Ok(r)
    }

    fn reduce_in_place(&self, r: &mut [Rational]) {
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if r[p].is_zero() {
                continue;
            }
            let f = r[p].clone();
            for (c, b) in row.iter().enumerate().skip(p) {
                if !b.is_zero() {
                    r[c] = r[c].sub_mul(&f, b);
                }
            }
        }
    }

    pub fn contains(&self, v: &[Rational]) -> Result<bool, ExactError> {
        check_len(v, self.ambient_dim)?;
        if v.iter().all(Rational::is_zero) {
            return Ok(true);
        }
        let mut r = v.to_vec();
        self.reduce_in_place(&mut r);
        Ok(r.iter().all(Rational::is_zero))
    }

    pub fn contains_mat(&self, m: &Mat) -> Result<bool, ExactError> {
        self.contains(m.coords())
    }

    /// Adds `v` to the subspace in place, keeping the basis canonical.
    /// Returns whether the dimension grew.
    pub fn insert(&mut self, v: &[Rational]) -> Result<bool, ExactError> {
        check_len(v, self.ambient_dim)?;
        let mut r = v.to_vec();
        self.reduce_in_place(&mut r);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return Ok(false);
        };
        let inv = r[p].recip().expect("leading entry is non-zero");
        if !inv.is_one() {
            for x in r.iter_mut().skip(p) {
                *x *= &inv;
            }
        }
        for row in &mut self.basis {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for c in p..self.ambient_dim {
                if !r[c].is_zero() {
                    row[c] = row[c].sub_mul(&f, &r[c]);
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.basis.insert(at, r);
        Ok(true)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool, ExactError> {
        check_ambient(self, other)?;
        for b in &self.basis {
            if !other.contains(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, ExactError> {
        check_ambient(self, other)?;
        let (mut big, small) = if self.dim() >= other.dim() { (self.clone(), other) } else { (other.clone(), self) };
        for b in &small.basis {
            big.insert(b)?;
        }
        Ok(big)
    }

    /// Intersection via the kernel of the stacked bases: solve
    /// `Σ αᵢ aᵢ − Σ βⱼ bⱼ = 0` and map each solution back through `α`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, ExactError> {
        check_ambient(self, other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(self.ambient_dim));
        }
        let (r, s) = (self.dim(), other.dim());
        let mut system = Mat::zeros(self.ambient_dim, r + s);
        for (k, a) in self.basis.iter().enumerate() {
            for (c, v) in a.iter().enumerate() {
                system.set(c, k, v.clone());
            }
        }
        for (k, b) in other.basis.iter().enumerate() {
            for (c, v) in b.iter().enumerate() {
                system.set(c, r + k, -v);
            }
        }
        let vectors: Vec<Vec<Rational>> = nullspace(&system)
            .into_iter()
            .map(|sol| {
                let mut w = vec![Rational::zero(); self.ambient_dim];
                for (alpha, a) in sol[..r].iter().zip(&self.basis) {
                    if alpha.is_zero() {
                        continue;
                    }
                    for (wc, ac) in w.iter_mut().zip(a) {
                        if !ac.is_zero() {
                            *wc += &(alpha * ac);
                        }
                    }
                }
                w
            })
            .collect();
        Subspace::span(&vectors, self.ambient_dim)
    }

    /// Image of the subspace under a linear map given on vectors.
    pub fn map<F>(&self, target_dim: usize, f: F) -> Result<Subspace, ExactError>
    where
        F: Fn(&[Rational]) -> Vec<Rational>,
    {
        let mut out = Subspace::zero(target_dim);
        for b in &self.basis {
            out.insert(&f(b))?;
        }
        Ok(out)
    }
}

fn check_len(v: &[Rational], ambient_dim: usize) -> Result<(), ExactError> {
    if v.len() != ambient_dim {
        return Err(ExactError::DimensionMismatch { expected: ambient_dim, found: v.len() });
    }
    Ok(())
}

fn check_ambient(a: &Subspace, b: &Subspace) -> Result<(), ExactError> {
    if a.ambient_dim != b.ambient_dim {
        return Err(ExactError::DimensionMismatch { expected: a.ambient_dim, found: b.ambient_dim });
    }
    Ok(())
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}: {:?})", self.dim(), self.ambient_dim, self.basis)
    }
}

#[derive(Serialize, Deserialize)]
struct SubspaceJson {
    ambient_dim: usize,
    basis: Vec<Vec<Rational>>,
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        SubspaceJson { ambient_dim: self.ambient_dim, basis: self.basis.clone() }.serialize(serializer)
    }
}

/// Accepts any spanning set and canonicalizes it.
impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = SubspaceJson::deserialize(deserializer)?;
        Subspace::span(&raw.basis, raw.ambient_dim).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    fn units(n: usize, ids: &[(usize, usize)]) -> Vec<Vec<Rational>> {
        ids.iter().map(|&(i, j)| Mat::unit(n, i, j).into_coords()).collect()
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from_int(x)).collect()
    }

    #[test]
    fn span_examples() {
        assert_eq!(Subspace::span(&[], 4).unwrap().dim(), 0);
        let v = ints(&[1, 2, 3]);
        let v2: Vec<Rational> = v.iter().map(|x| x * &q(2, 1)).collect();
        assert_eq!(Subspace::span(&[v, v2], 3).unwrap().dim(), 1);
        let mut gens = units(2, &[(0, 0), (0, 1)]);
        gens.push(ints(&[1, 1, 0, 0]));
        assert_eq!(Subspace::span(&gens, 4).unwrap().dim(), 2);
        assert!(Subspace::span(&[ints(&[1, 2])], 3).is_err());
    }

    #[test]
    fn membership() {
        let s = Subspace::span(&units(2, &[(0, 0), (0, 1)]), 4).unwrap();
        assert!(s.contains(&ints(&[0, 0, 0, 0])).unwrap());
        assert!(s.contains(&s.basis()[1]).unwrap());
        assert!(!s.contains(&Mat::unit(2, 1, 0).into_coords()).unwrap());
        assert!(s.contains(&ints(&[3, -5, 0, 0])).unwrap());
        assert!(s.contains(&ints(&[1])).is_err());
    }

    #[test]
    fn sum_and_intersection() {
        let a = Subspace::span(&units(2, &[(0, 0)]), 4).unwrap();
        let b = Subspace::span(&[ints(&[1, 0, 0, 1]), ints(&[0, 0, 0, 1])], 4).unwrap();
        let s = a.sum(&b).unwrap();
        let i = a.intersect(&b).unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(i, a);
        let z = Subspace::zero(4);
        assert_eq!(a.sum(&z).unwrap(), a);
        assert_eq!(b.intersect(&b).unwrap(), b);
        assert!(a.sum(&Subspace::zero(3)).is_err());
    }

    #[test]
    fn insert_keeps_canonical_form() {
        let vs = vec![ints(&[0, 1, 1]), ints(&[1, 1, 0]), ints(&[2, 3, 1])];
        let direct = Subspace::span(&vs, 3).unwrap();
        let mut inc = Subspace::zero(3);
        for v in &vs {
            inc.insert(v).unwrap();
        }
        assert_eq!(inc, direct);
        assert_eq!(inc.dim(), 2);
    }

    #[test]
    fn json_canonicalizes() {
        let s: Subspace = serde_json::from_str(r#"{"ambient_dim":2,"basis":[["2","4"],["1","2"]]}"#).unwrap();
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"{"ambient_dim":2,"basis":[["1","2"]]}"#);
    }
}
