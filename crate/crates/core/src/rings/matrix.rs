//! Dense matrices over a concrete ring. Row/column conventions: a matrix
//! represents a map R^cols -> R^rows on column vectors; columns of a module
//! presentation are the relations.

use super::{RingElement, Ring, Result, RingError};
use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    data: Vec<RingElement>, // row-major
}

impl Matrix {
    pub fn new(ring: Ring, rows: usize, cols: usize, data: Vec<RingElement>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(RingError::DimensionMismatch(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                data.len()
            )));
        }
        for e in &data {
            if e.ring() != &ring {
                return Err(RingError::MixedRings);
            }
        }
        Ok(Matrix { ring, rows, cols, data })
    }

    pub fn zero(ring: &Ring, rows: usize, cols: usize) -> Matrix {
        let data = vec![ring.zero(); rows * cols];
        Matrix { ring: ring.clone(), rows, cols, data }
    }

    pub fn identity(ring: &Ring, n: usize) -> Matrix {
        let mut m = Matrix::zero(ring, n, n);
        for i in 0..n {
            *m.at_mut(i, i) = ring.one();
        }
        m
    }

    pub fn from_fn(ring: &Ring, rows: usize, cols: usize, f: impl Fn(usize, usize) -> RingElement) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { ring: ring.clone(), rows, cols, data }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &RingElement {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut RingElement {
        &mut self.data[i * self.cols + j]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = self.at(i, j);
                if i == j {
                    if !e.is_one() {
                        return false;
                    }
                } else if !e.is_zero() {
                    return false;
                }
            }
        }
        true
    }

    pub fn column(&self, j: usize) -> Vec<RingElement> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(&self.ring, self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        assert!(self.ring == other.ring);
        Matrix::from_fn(&self.ring, self.rows, other.cols, |i, j| {
            let mut acc = self.ring.zero();
            for k in 0..self.cols {
                acc = acc.add(&self.at(i, k).mul(other.at(k, j)));
            }
            acc
        })
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(&self.ring, self.rows, self.cols, |i, j| {
            self.at(i, j).add(other.at(i, j))
        })
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(&self.ring, self.rows, self.cols, |i, j| {
            self.at(i, j).sub(other.at(i, j))
        })
    }

    pub fn neg(&self) -> Matrix {
        self.map(|e| e.neg())
    }

    pub fn scale(&self, c: &RingElement) -> Matrix {
        self.map(|e| e.mul(c))
    }

    pub fn map(&self, f: impl Fn(&RingElement) -> RingElement) -> Matrix {
        Matrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Horizontal concatenation [self | other].
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        Matrix::from_fn(&self.ring, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.at(i, j).clone()
            } else {
                other.at(i, j - self.cols).clone()
            }
        })
    }

    /// Vertical concatenation [self; other].
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        Matrix::from_fn(&self.ring, self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self.at(i, j).clone()
            } else {
                other.at(i - self.rows, j).clone()
            }
        })
    }

    pub fn block_diag(ring: &Ring, blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zero(ring, rows, cols);
        let (mut r0, mut c0) = (0usize, 0usize);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    *m.at_mut(r0 + i, c0 + j) = b.at(i, j).clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    /// Kronecker product: (A (x) B)[(i1,i2),(j1,j2)] = A[i1,j1] * B[i2,j2],
    /// with the second index varying fastest.
    pub fn kronecker(&self, other: &Matrix) -> Matrix {
        assert!(self.ring == other.ring);
        Matrix::from_fn(
            &self.ring,
            self.rows * other.rows,
            self.cols * other.cols,
            |i, j| {
                let (i1, i2) = (i / other.rows, i % other.rows);
                let (j1, j2) = (j / other.cols, j % other.cols);
                self.at(i1, j1).mul(other.at(i2, j2))
            },
        )
    }

    pub fn submatrix_cols(&self, cols: &[usize]) -> Matrix {
        Matrix::from_fn(&self.ring, self.rows, cols.len(), |i, j| {
            self.at(i, cols[j]).clone()
        })
    }

    pub fn take_rows(&self, from: usize, count: usize) -> Matrix {
        Matrix::from_fn(&self.ring, count, self.cols, |i, j| {
            self.at(from + i, j).clone()
        })
    }

    pub fn from_columns(ring: &Ring, rows: usize, cols: Vec<Vec<RingElement>>) -> Matrix {
        let n = cols.len();
        Matrix::from_fn(ring, rows, n, |i, j| cols[j][i].clone())
    }

    pub fn apply(&self, v: &[RingElement]) -> Vec<RingElement> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = self.ring.zero();
                for j in 0..self.cols {
                    acc = acc.add(&self.at(i, j).mul(&v[j]));
                }
                acc
            })
            .collect()
    }

    /// Drop columns that are entirely zero (dedup is left to callers).
    pub fn drop_zero_columns(&self) -> Matrix {
        let keep: Vec<usize> = (0..self.cols)
            .filter(|&j| (0..self.rows).any(|i| !self.at(i, j).is_zero()))
            .collect();
        self.submatrix_cols(&keep)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.ring)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.at(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..self.cols).map(|j| self.at(i, j).to_string()).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::Ring;

    #[test]
    fn product_and_stacking() {
        let z = Ring::integers();
        let a = Matrix::from_fn(&z, 2, 2, |i, j| z.from_int((i * 2 + j) as i64));
        let id = Matrix::identity(&z, 2);
        assert_eq!(a.mul(&id), a);
        let h = a.hstack(&id);
        assert_eq!(h.cols(), 4);
        assert_eq!(h.at(0, 2), &z.one());
        let v = a.vstack(&id);
        assert_eq!(v.rows(), 4);
    }

    #[test]
    fn kronecker_shape() {
        let z = Ring::integers();
        let a = Matrix::from_fn(&z, 1, 2, |_, j| z.from_int(j as i64 + 1));
        let b = Matrix::identity(&z, 2);
        let k = a.kronecker(&b);
        assert_eq!((k.rows(), k.cols()), (2, 4));
        assert_eq!(k.at(0, 0), &z.one());
        assert_eq!(k.at(0, 2), &z.from_int(2));
    }

    #[test]
    fn empty_matrices() {
        let z = Ring::integers();
        let e = Matrix::zero(&z, 0, 3);
        let f = Matrix::zero(&z, 3, 0);
        let p = f.mul(&e); // 3x0 * 0x3 = 3x3 zero
        assert_eq!((p.rows(), p.cols()), (3, 3));
        assert!(p.is_zero());
        let q = e.mul(&f); // 0x3 * 3x0 = 0x0
        assert_eq!((q.rows(), q.cols()), (0, 0));
    }
}
