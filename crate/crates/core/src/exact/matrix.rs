//! Dense exact matrices.
//!
//! Square `n × n` matrices are identified with coordinate vectors of length
//! `n²` by row-major vectorization: entry `(i, j)` sits at coordinate
//! `i * n + j`. Every subspace of the matrix space in this crate uses this
//! convention.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{ExactError, Rational};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    /// The matrix unit `e_ij` of size `n` (0-based indices).
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m.data[i * n + j] = Rational::one();
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self, ExactError> {
        if data.len() != rows * cols {
            return Err(ExactError::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        Ok(Mat { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, ExactError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(ExactError::DimensionMismatch { expected: c, found: row.len() });
            }
            data.extend(row);
        }
        Ok(Mat { rows: r, cols: c, data })
    }

    /// Integer literal helper, mostly for tests. Panics on ragged input.
    pub fn from_ints<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&v| Rational::from_int(v)).collect())
            .collect();
        Self::from_rows(rows).expect("ragged integer matrix")
    }

    /// Inverse of row-major vectorization for an `n × n` matrix.
    pub fn from_coords(n: usize, coords: &[Rational]) -> Result<Self, ExactError> {
        Self::from_vec(n, n, coords.to_vec())
    }

    pub fn to_coords(&self) -> Vec<Rational> {
        self.data.clone()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.data
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.data
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rational::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v * s).collect() }
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    fn check_same_shape(&self, other: &Self) -> Result<(), ExactError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(ExactError::ShapeMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ExactError> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Mat { rows: self.rows, cols: self.cols, data })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ExactError> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Mat { rows: self.rows, cols: self.cols, data })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, ExactError> {
        if self.cols != other.rows {
            return Err(ExactError::ShapeMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let idx = r * other.cols + c;
                        out.data[idx] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    /// The commutator `xy - yx`.
    pub fn bracket(&self, other: &Self) -> Result<Self, ExactError> {
        if !self.is_square() || self.rows != other.rows || !other.is_square() {
            return Err(ExactError::ShapeMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        self.try_mul(other)?.try_sub(&other.try_mul(self)?)
    }

    pub fn pow(&self, k: u32) -> Self {
        assert!(self.is_square(), "power of a non-square matrix");
        let mut acc = Self::identity(self.rows);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Gauss–Jordan inverse; `None` when singular or non-square.
    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, Rational::one());
        }
        let red = rref(&aug);
        for i in 0..n {
            for c in 0..n {
                let expect = if c == i { Rational::one() } else { Rational::zero() };
                if *red.get(i, c) != expect {
                    return None;
                }
            }
        }
        let mut inv = Self::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, red.get(r, n + c).clone());
            }
        }
        Some(inv)
    }

    /// The submatrix on the given row and column index lists.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (a, &r) in rows.iter().enumerate() {
            for (b, &c) in cols.iter().enumerate() {
                out.set(a, b, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|r| self.row(r).iter().map(Rational::to_f64).collect()).collect()
    }
}

/// Reduced row-echelon form. Zero rows are kept at the bottom so the shape
/// is unchanged.
pub fn rref(m: &Mat) -> Mat {
    let mut rows = m.row_vecs();
    rref_rows(&mut rows);
    let mut out = Mat::zeros(m.rows, m.cols);
    for (r, row) in rows.into_iter().enumerate() {
        for (c, v) in row.into_iter().enumerate() {
            out.data[r * m.cols + c] = v;
        }
    }
    out
}

/// Row-reduces `rows` in place and returns the pivot column of each leading
/// non-zero row.
pub(crate) fn rref_rows(rows: &mut [Vec<Rational>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut lead = 0;
    for col in 0..ncols {
        if lead == rows.len() {
            break;
        }
        let Some(p) = (lead..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(lead, p);
        let inv = rows[lead][col].recip().expect("pivot is non-zero");
        if !inv.is_one() {
            for v in rows[lead].iter_mut().skip(col) {
                *v *= &inv;
            }
        }
        let (before, rest) = rows.split_at_mut(lead);
        let (pivot_row, after) = rest.split_first_mut().expect("lead row exists");
        for row in before.iter_mut().chain(after.iter_mut()) {
            let f = row[col].clone();
            if f.is_zero() {
                continue;
            }
            for c in col..ncols {
                if !pivot_row[c].is_zero() {
                    row[c] = row[c].sub_mul(&f, &pivot_row[c]);
                }
            }
        }
        pivots.push(col);
        lead += 1;
    }
    pivots
}

pub fn rank(m: &Mat) -> usize {
    let mut rows = m.row_vecs();
    rref_rows(&mut rows).len()
}

/// A basis of the right null space `{v : m v = 0}`.
pub fn nullspace(m: &Mat) -> Vec<Vec<Rational>> {
    let mut rows = m.row_vecs();
    let pivots = rref_rows(&mut rows);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); m.cols];
            v[f] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -&rows[r][f];
            }
            v
        })
        .collect()
}

impl Add for &Mat {
    type Output = Mat;
    fn add(self, rhs: &Mat) -> Mat {
        self.try_add(rhs).expect("matrix shape mismatch")
    }
}

impl Sub for &Mat {
    type Output = Mat;
    fn sub(self, rhs: &Mat) -> Mat {
        self.try_sub(rhs).expect("matrix shape mismatch")
    }
}

impl Mul for &Mat {
    type Output = Mat;
    fn mul(self, rhs: &Mat) -> Mat {
        self.try_mul(rhs).expect("matrix shape mismatch")
    }
}

impl Neg for &Mat {
    type Output = Mat;
    fn neg(self) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| -v).collect() }
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for r in 0..self.rows {
            if r > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for c in 0..self.cols {
                if c > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

/// JSON form: a list of rows of rational strings.
impl Serialize for Mat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.row_vecs().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Mat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<Rational>>::deserialize(deserializer)?;
        Mat::from_rows(rows).map_err(serde::de::Error::custom)
    }
}
