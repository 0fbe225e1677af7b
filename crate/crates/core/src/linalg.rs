//! Dense exact matrices over [`Rational`], plus the one floating-point
//! routine the crate needs (the spectral norm).

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn diagonal(entries: &[Rational]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, d) in entries.iter().enumerate() {
            m[(i, i)] = d.clone();
        }
        m
    }

    /// Builds a matrix from rows; every row must have the same length.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Matrix {
            rows: n,
            cols,
            data,
        })
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

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn scale(&self, s: &Rational) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = Rational::zero();
                for (a, x) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc += a * x;
                    }
                }
                acc
            })
            .collect())
    }

    /// Gauss-Jordan inverse; [`Error::Singular`] when the determinant is zero.
    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a[(r, col)].is_zero())
                .ok_or(Error::Singular)?;
            a.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            let p = a[(col, col)].recip();
            a.scale_row(col, &p);
            inv.scale_row(col, &p);
            for r in 0..n {
                if r != col && !a[(r, col)].is_zero() {
                    let f = a[(r, col)].clone();
                    a.sub_row_multiple(r, col, &f);
                    inv.sub_row_multiple(r, col, &f);
                }
            }
        }
        Ok(inv)
    }

    pub fn determinant(&self) -> Rational {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Rational::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a[(r, col)].is_zero()) else {
                return Rational::zero();
            };
            if pivot != col {
                a.swap_rows(col, pivot);
                det = -det;
            }
            det *= &a[(col, col)];
            let p = a[(col, col)].recip();
            for r in col + 1..n {
                if !a[(r, col)].is_zero() {
                    let f = &a[(r, col)] * &p;
                    a.sub_row_multiple(r, col, &f);
                }
            }
        }
        det
    }

    /// Solves `self · x = b` for square invertible `self`.
    pub fn solve(&self, b: &[Rational]) -> Result<Vec<Rational>> {
        self.inverse()?.mul_vec(b)
    }

    /// Largest row sum of absolute values (the induced ∞-norm), exactly.
    pub fn max_abs_row_sum(&self) -> Rational {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.abs()).sum::<Rational>())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| rational::vec_to_f64(self.row(i)))
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn scale_row(&mut self, r: usize, s: &Rational) {
        for j in 0..self.cols {
            self[(r, j)] *= s;
        }
    }

    // row[target] -= f * row[source]
    fn sub_row_multiple(&mut self, target: usize, source: usize, f: &Rational) {
        for j in 0..self.cols {
            if !self[(source, j)].is_zero() {
                let d = f * &self[(source, j)];
                self[(target, j)] -= d;
            }
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Rational;

    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &mut self.data[i * self.cols + j]
    }
}

/// Result of an incremental rank computation over a list of vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankProfile {
    /// Indices of the vectors that were independent of all earlier ones.
    pub basis: Vec<usize>,
    /// `rank_prefix[i]` is the rank of vectors `0..=i`.
    pub rank_prefix: Vec<usize>,
}

impl RankProfile {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }
}

/// Exact rank of `vectors` with the greedy (earliest-index) basis.
pub fn rank_profile(vectors: &[Vec<Rational>]) -> RankProfile {
    // echelon rows kept with their pivot column
    let mut echelon: Vec<(usize, Vec<Rational>)> = Vec::new();
    let mut basis = Vec::new();
    let mut rank_prefix = Vec::with_capacity(vectors.len());
    for (idx, v) in vectors.iter().enumerate() {
        let mut r = v.clone();
        reduce(&mut r, &echelon);
        if let Some(p) = r.iter().position(|x| !x.is_zero()) {
            let inv = r[p].recip();
            for x in r.iter_mut() {
                *x *= &inv;
            }
            echelon.push((p, r));
            basis.push(idx);
        }
        rank_prefix.push(basis.len());
    }
    RankProfile { basis, rank_prefix }
}

fn reduce(r: &mut [Rational], echelon: &[(usize, Vec<Rational>)]) {
    for (p, row) in echelon {
        if !r[*p].is_zero() {
            let f = r[*p].clone();
            for (x, y) in r.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
    }
}

/// Finds `c` with `Σ c_i · columns[i] = target`, or `None` when the target
/// is outside their span. Columns need not be independent; free variables
/// are set to zero.
pub fn solve_in_span(columns: &[Vec<Rational>], target: &[Rational]) -> Option<Vec<Rational>> {
    let m = target.len();
    let k = columns.len();
    if columns.iter().any(|c| c.len() != m) {
        return None;
    }
    // augmented m × (k+1) system, row-reduced
    let mut a: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            let mut row: Vec<Rational> = columns.iter().map(|c| c[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..k {
        let Some(p) = (r..m).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][col].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m {
            if i != r && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                let (src, dst) = if i < r {
                    let (lo, hi) = a.split_at_mut(r);
                    (&hi[0], &mut lo[i])
                } else {
                    let (lo, hi) = a.split_at_mut(i);
                    (&lo[r], &mut hi[0])
                };
                for (x, y) in dst.iter_mut().zip(src.iter()) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == m {
            break;
        }
    }
    if a[r..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); k];
    for (row, &col) in pivots.iter().enumerate() {
        x[col] = a[row][k].clone();
    }
    Some(x)
}

const NORM_TOL: f64 = 1e-15;
const NORM_SWEEPS: usize = 100;

/// Spectral norm (largest singular value) of a square float matrix.
///
/// Computes the eigenvalues of `MᵀM` with cyclic Jacobi rotations and takes
/// the square root of the largest. Jacobi converges quadratically and does
/// not stall on repeated or clustered eigenvalues.
#[allow(clippy::needless_range_loop)]
pub fn spectral_norm(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    if n == 0 {
        return 0.0;
    }
    let mut a = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in 0..n {
            a[i][j] = (0..n).map(|k| m[k][i] * m[k][j]).sum();
        }
    }
    let scale = (0..n).map(|i| a[i][i]).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    for _ in 0..NORM_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if libm::sqrt(off) <= NORM_TOL * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (libm::fabs(theta) + libm::sqrt(theta * theta + 1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let top = (0..n).map(|i| a[i][i]).fold(0.0, f64::max);
    libm::sqrt(top)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn inverse_and_determinant() {
        let a = m(&[&[1, 0], &[2, 1]]);
        assert_eq!(a.inverse().unwrap(), m(&[&[1, 0], &[-2, 1]]));
        assert_eq!(a.determinant(), int(1));
        let s = m(&[&[1, 2], &[2, 4]]);
        assert_eq!(s.inverse(), Err(Error::Singular));
        assert_eq!(s.determinant(), int(0));
        let p = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(p.determinant(), int(-1));
        assert_eq!(p.inverse().unwrap(), p);
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(Matrix::from_rows(vec![vec![int(1)], vec![int(1), int(2)]]).is_err());
    }

    #[test]
    fn rank_of_circle_pullbacks() {
        let v = |a, b, c| vec![int(a), int(b), int(c)];
        let prof = rank_profile(&[v(1, 1, -1), v(4, 4, -1), v(16, 16, -1)]);
        assert_eq!(prof.basis, vec![0, 1]);
        assert_eq!(prof.rank_prefix, vec![1, 2, 2]);
    }

    #[test]
    fn span_solve() {
        let cols = [vec![int(1), int(1)], vec![int(4), int(1)]];
        let x = solve_in_span(&cols, &[int(16), int(1)]).unwrap();
        assert_eq!(x, vec![int(-4), int(5)]);
        let cols = [vec![int(1), int(0), int(0)]];
        assert!(solve_in_span(&cols, &[int(0), int(1), int(0)]).is_none());
    }

    #[test]
    fn spectral_norm_examples() {
        let d = Matrix::diagonal(&[frac(1, 2), frac(1, 4)]).to_f64_rows();
        assert!((spectral_norm(&d) - 0.5).abs() < 1e-12);
        assert_eq!(spectral_norm(&[vec![0.0, 0.0], vec![0.0, 0.0]]), 0.0);
        let j = spectral_norm(&[vec![0.0, 1.0], vec![0.0, 0.0]]);
        assert!((j - 1.0).abs() < 1e-12);
        // [[1,1],[0,1]] has norm golden ratio
        let g = spectral_norm(&[vec![1.0, 1.0], vec![0.0, 1.0]]);
        assert!((g - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
    }
}
