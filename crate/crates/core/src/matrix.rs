//! Dense row-major matrices over any numeric scalar.
//!
//! The same container backs exact integer and rational matrices (structural
//! decisions) and floating-point matrices (eigensolving).

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{Float, Num, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
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

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<T: Clone> Matrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| {
            self[(rows[i], cols[j])].clone()
        })
    }
}

impl<T: Clone + Zero> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn diagonal(values: &[T]) -> Self {
        let n = values.len();
        Matrix::from_fn(
            n,
            n,
            |i, j| if i == j { values[i].clone() } else { T::zero() },
        )
    }
}

impl<T: Clone + Num> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn scale(&self, k: &T) -> Self {
        self.map(|x| x.clone() * k.clone())
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn row_sums(&self) -> Vec<T> {
        (0..self.rows)
            .map(|i| self.row(i).iter().cloned().fold(T::zero(), |a, b| a + b))
            .collect()
    }

    pub fn col_sums(&self) -> Vec<T> {
        (0..self.cols)
            .map(|j| (0..self.rows).fold(T::zero(), |a, i| a + self[(i, j)].clone()))
            .collect()
    }

    /// Sum of all entries.
    pub fn total(&self) -> T {
        self.data.iter().cloned().fold(T::zero(), |a, b| a + b)
    }

    /// `self·selfᵀ == selfᵀ·self`, evaluated in the scalar's own arithmetic.
    pub fn is_normal(&self) -> bool {
        let t = self.transpose();
        self.is_square() && (self * &t) == (&t * self)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    /// Two-by-two block matrix `[[a, b], [c, d]]`.
    pub fn block(a: &Self, b: &Self, c: &Self, d: &Self) -> Result<Self> {
        if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
            return Err(Error::Dimension("incompatible blocks".into()));
        }
        let (r, k) = (a.rows, a.cols);
        Ok(Matrix::from_fn(
            a.rows + c.rows,
            a.cols + b.cols,
            |i, j| match (i < r, j < k) {
                (true, true) => a[(i, j)].clone(),
                (true, false) => b[(i, j - k)].clone(),
                (false, true) => c[(i - r, j)].clone(),
                (false, false) => d[(i - r, j - k)].clone(),
            },
        ))
    }
}

impl<T: Float> Matrix<T> {
    pub fn frobenius_norm(&self) -> T {
        self.data.iter().fold(T::zero(), |a, &x| a + x * x).sqrt()
    }

    /// Largest absolute entry of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs()))
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |a, (&x, &y)| a + x * y)
            })
            .collect()
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn determinant(&self) -> T {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = T::one();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&a, &b| m[(a, k)].abs().partial_cmp(&m[(b, k)].abs()).unwrap())
                .unwrap();
            if m[(p, k)] == T::zero() {
                return T::zero();
            }
            if p != k {
                for j in 0..n {
                    m.data.swap(p * n + j, k * n + j);
                }
                det = -det;
            }
            let pivot = m[(k, k)];
            det = det * pivot;
            for i in k + 1..n {
                let factor = m[(i, k)] / pivot;
                for j in k..n {
                    let v = m[(k, j)];
                    m[(i, j)] = m[(i, j)] - factor * v;
                }
            }
        }
        det
    }
}

impl Matrix<BigRational> {
    /// Exact determinant by fraction-field Gaussian elimination.
    pub fn exact_determinant(&self) -> BigRational {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = BigRational::from_integer(1.into());
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !m[(i, k)].is_zero()) else {
                return BigRational::zero();
            };
            if p != k {
                for j in 0..n {
                    m.data.swap(p * n + j, k * n + j);
                }
                det = -det;
            }
            let pivot = m[(k, k)].clone();
            det *= &pivot;
            for i in k + 1..n {
                if m[(i, k)].is_zero() {
                    continue;
                }
                let factor = &m[(i, k)] / &pivot;
                for j in k..n {
                    let v = &factor * &m[(k, j)];
                    m[(i, j)] -= v;
                }
            }
        }
        det
    }
}

impl<T: Clone + Signed + PartialOrd> Matrix<T> {
    pub fn abs_max(&self) -> T {
        self.data
            .iter()
            .map(|x| x.abs())
            .fold(T::zero(), |m, x| if x > m { x } else { m })
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Clone + Num> Mul for &Matrix<T> {
    type Output = Matrix<T>;

    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = a.clone() * rhs.data[k * rhs.cols + j].clone();
                    let slot: &mut T = &mut out.data[i * rhs.cols + j];
                    *slot = slot.clone() + v;
                }
            }
        }
        out
    }
}

impl<T: Clone + Num> Add for &Matrix<T> {
    type Output = Matrix<T>;

    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<T: Clone + Num> Sub for &Matrix<T> {
    type Output = Matrix<T>;

    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}

impl<T: Clone + Neg<Output = T>> Neg for &Matrix<T> {
    type Output = Matrix<T>;

    fn neg(self) -> Matrix<T> {
        self.map(|x| -x.clone())
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, " ")?;
            for j in 0..self.cols {
                write!(f, " {:?}", self.data[i * self.cols + j])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn int(rows: Vec<Vec<i64>>) -> Matrix<BigInt> {
        Matrix::from_rows(rows).unwrap().map(|&x| BigInt::from(x))
    }

    #[test]
    fn product_and_transpose() {
        let a = int(vec![vec![1, 2], vec![3, 4]]);
        let b = int(vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(&a * &b, int(vec![vec![2, 1], vec![4, 3]]));
        assert_eq!(a.transpose(), int(vec![vec![1, 3], vec![2, 4]]));
        assert_eq!(a.trace(), BigInt::from(5));
    }

    #[test]
    fn normality_of_small_matrices() {
        // A rotation-like circulant is normal, a Jordan block is not.
        assert!(int(vec![vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]]).is_normal());
        assert!(!int(vec![vec![1, 1], vec![0, 1]]).is_normal());
    }

    #[test]
    fn float_and_exact_determinants_agree() {
        let rows = vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]];
        let f = Matrix::from_rows(rows.clone()).unwrap().map(|&x| x as f64);
        let q = Matrix::from_rows(rows)
            .unwrap()
            .map(|&x| BigRational::from_integer(BigInt::from(x)));
        assert!((f.determinant() - 4.0).abs() < 1e-12);
        assert_eq!(q.exact_determinant(), BigRational::from_integer(4.into()));
    }

    #[test]
    fn block_assembly() {
        let z = Matrix::<f64>::zeros(1, 1);
        let one = Matrix::<f64>::identity(1);
        let c = Matrix::block(&z, &one, &one, &z).unwrap();
        assert_eq!(c.as_slice(), &[0.0, 1.0, 1.0, 0.0]);
        assert!(Matrix::block(&z, &Matrix::zeros(2, 1), &one, &z).is_err());
    }
}
