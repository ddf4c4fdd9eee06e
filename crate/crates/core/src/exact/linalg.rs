use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{ExactError, Rational};

/// Dense rational vector.
#[derive(Clone, PartialEq, Eq)]
pub struct RVector(pub Vec<Rational>);

/// Dense row-major rational matrix. Zero-column matrices are allowed; they
/// show up as generator matrices of point zonotopes.
#[derive(Clone, PartialEq, Eq)]
pub struct RMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RVector {
    pub fn zeros(n: usize) -> Self {
        RVector(vec![Rational::zero(); n])
    }

    pub fn from_ints(v: &[i64]) -> Self {
        RVector(v.iter().map(|&x| Rational::from_int(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn inf_norm(&self) -> Rational {
        self.0
            .iter()
            .map(|x| x.abs())
            .fold(Rational::zero(), Rational::max)
    }

    pub fn scale(&self, s: &Rational) -> RVector {
        RVector(self.0.iter().map(|x| x * s).collect())
    }
}

impl Index<usize> for RVector {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl IndexMut<usize> for RVector {
    fn index_mut(&mut self, i: usize) -> &mut Rational {
        &mut self.0[i]
    }
}

impl Add for &RVector {
    type Output = RVector;
    fn add(self, rhs: &RVector) -> RVector {
        assert_eq!(self.len(), rhs.len(), "vector dimension mismatch");
        RVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &RVector {
    type Output = RVector;
    fn sub(self, rhs: &RVector) -> RVector {
        assert_eq!(self.len(), rhs.len(), "vector dimension mismatch");
        RVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Debug for RVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.0).finish()
    }
}

impl Serialize for RVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(RVector(Vec::<Rational>::deserialize(d)?))
    }
}

impl RMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        RMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        RMatrix::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&x| Rational::from_int(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> RVector {
        RVector((0..self.rows).map(|i| self[(i, j)].clone()).collect())
    }

    pub fn row_vectors(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn mat_vec(&self, v: &RVector) -> RVector {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        let mut out = RVector::zeros(self.rows);
        for i in 0..self.rows {
            let mut acc = Rational::zero();
            for j in 0..self.cols {
                if !self[(i, j)].is_zero() && !v[j].is_zero() {
                    acc += &(&self[(i, j)] * &v[j]);
                }
            }
            out[i] = acc;
        }
        out
    }

    pub fn mat_mul(&self, rhs: &RMatrix) -> RMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix-matrix dimension mismatch");
        let mut out = RMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    if rhs[(k, j)].is_zero() {
                        continue;
                    }
                    let prod = &self[(i, k)] * &rhs[(k, j)];
                    out[(i, j)] += &prod;
                }
            }
        }
        out
    }

    /// Horizontal concatenation [self | rhs].
    pub fn hcat(&self, rhs: &RMatrix) -> RMatrix {
        assert_eq!(self.rows, rhs.rows, "hcat row mismatch");
        let mut rows = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut row = self.row(i).to_vec();
            row.extend_from_slice(rhs.row(i));
            rows.push(row);
        }
        RMatrix::from_rows(rows)
    }

    /// Append a single column.
    pub fn hcat_col(&self, col: &RVector) -> RMatrix {
        assert_eq!(self.rows, col.len(), "hcat_col row mismatch");
        let mut rows = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut row = self.row(i).to_vec();
            row.push(col[i].clone());
            rows.push(row);
        }
        RMatrix::from_rows(rows)
    }

    pub fn select_rows(&self, idx: &[usize]) -> RMatrix {
        RMatrix::from_rows(idx.iter().map(|&i| self.row(i).to_vec()).collect())
    }

    pub fn drop_zero_cols(&self) -> RMatrix {
        let keep: Vec<usize> = (0..self.cols)
            .filter(|&j| (0..self.rows).any(|i| !self[(i, j)].is_zero()))
            .collect();
        let mut data = Vec::with_capacity(self.rows * keep.len());
        for i in 0..self.rows {
            for &j in &keep {
                data.push(self[(i, j)].clone());
            }
        }
        RMatrix {
            rows: self.rows,
            cols: keep.len(),
            data,
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl Index<(usize, usize)> for RMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl Sub for &RMatrix {
    type Output = RMatrix;
    fn sub(self, rhs: &RMatrix) -> RMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        RMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul<&Rational> for &RMatrix {
    type Output = RMatrix;
    fn mul(self, s: &Rational) -> RMatrix {
        RMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }
}

impl fmt::Debug for RMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.row_vectors()).finish()
    }
}

impl Serialize for RMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.row_vectors().serialize(s)
    }
}

impl<'de> Deserialize<'de> for RMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<Rational>>::deserialize(d)?;
        let c = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != c) {
            return Err(serde::de::Error::custom("ragged matrix rows"));
        }
        Ok(RMatrix::from_rows(rows))
    }
}

/// Infinity norm: max over rows of the sum of absolute entries. A column
/// vector seen as an n-by-1 matrix therefore yields its max absolute entry.
pub fn mat_inf_norm(m: &RMatrix) -> Rational {
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .fold(Rational::zero(), |acc, x| acc + x.abs())
        })
        .fold(Rational::zero(), Rational::max)
}

/// Reduced row echelon form of `[m | rhs]` with partial (max-absolute-value)
/// pivoting, scanning pivot columns of `m` left to right. Returns the pivot
/// column of each elimination row, in order.
fn rref(m: &mut RMatrix, rhs: &mut RMatrix) -> Vec<usize> {
    let (r, k) = (m.rows(), m.cols());
    let mut pivots = Vec::new();
    let mut next_row = 0;
    for col in 0..k {
        if next_row == r {
            break;
        }
        // Partial pivoting: the row with the largest absolute entry wins;
        // ties go to the earliest row so the result is deterministic.
        let mut best: Option<usize> = None;
        for i in next_row..r {
            if m[(i, col)].is_zero() {
                continue;
            }
            match best {
                None => best = Some(i),
                Some(b) => {
                    if m[(i, col)].abs() > m[(b, col)].abs() {
                        best = Some(i);
                    }
                }
            }
        }
        let Some(pivot_row) = best else { continue };
        m.swap_rows(next_row, pivot_row);
        rhs.swap_rows(next_row, pivot_row);
        let inv = m[(next_row, col)].recip();
        for j in 0..k {
            let v = &m[(next_row, j)] * &inv;
            m[(next_row, j)] = v;
        }
        for j in 0..rhs.cols() {
            let v = &rhs[(next_row, j)] * &inv;
            rhs[(next_row, j)] = v;
        }
        for i in 0..r {
            if i == next_row || m[(i, col)].is_zero() {
                continue;
            }
            let factor = m[(i, col)].clone();
            for j in 0..k {
                let delta = &factor * &m[(next_row, j)];
                m[(i, j)] -= &delta;
            }
            for j in 0..rhs.cols() {
                let delta = &factor * &rhs[(next_row, j)];
                rhs[(i, j)] -= &delta;
            }
        }
        pivots.push(col);
        next_row += 1;
    }
    pivots
}

/// Exact right inverse: `h * right_inverse(h) = I` for full-row-rank `h`.
///
/// Among all right inverses this returns the one with zeros in the non-pivot
/// coordinate rows, pivots chosen by max-absolute-value partial pivoting, so
/// the output is reproducible bit for bit.
pub fn right_inverse(h: &RMatrix) -> Result<RMatrix, ExactError> {
    let (r, k) = (h.rows(), h.cols());
    let mut m = h.clone();
    let mut rhs = RMatrix::identity(r);
    let pivots = rref(&mut m, &mut rhs);
    if pivots.len() < r {
        return Err(ExactError::RankDeficient);
    }
    let mut out = RMatrix::zeros(k, r);
    for (elim_row, &col) in pivots.iter().enumerate() {
        for j in 0..r {
            out[(col, j)] = rhs[(elim_row, j)].clone();
        }
    }
    Ok(out)
}

/// Exact solution of `h x = y` with zeros at the non-pivot coordinates
/// (same pivot convention as [`right_inverse`]).
pub fn solve(h: &RMatrix, y: &RVector) -> Result<RVector, ExactError> {
    assert_eq!(h.rows(), y.len(), "solve dimension mismatch");
    let (r, k) = (h.rows(), h.cols());
    let mut m = h.clone();
    let mut rhs = RMatrix {
        rows: r,
        cols: 1,
        data: y.0.clone(),
    };
    let pivots = rref(&mut m, &mut rhs);
    // Rows beyond the pivot count are all zero on the left; a nonzero
    // right-hand side there means the system is contradictory.
    for i in pivots.len()..r {
        if !rhs[(i, 0)].is_zero() {
            return Err(ExactError::Inconsistent);
        }
    }
    let mut x = RVector::zeros(k);
    for (elim_row, &col) in pivots.iter().enumerate() {
        x[col] = rhs[(elim_row, 0)].clone();
    }
    Ok(x)
}
