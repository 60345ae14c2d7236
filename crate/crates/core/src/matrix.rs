//! Dense matrices over an exact scalar type, with the elimination routines
//! the rest of the crate relies on: rank, kernel, solving, span arithmetic.

use crate::arith::Scalar;
use crate::{Error, Result};

/// Row-major dense matrix over an exact field.
#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Scalar> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.data[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[F] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |r, c| self.at(c, r).clone())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_fn(self.rows, self.cols, |r, c| self.at(r, c).add(rhs.at(r, c)))
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_fn(self.rows, self.cols, |r, c| self.at(r, c).sub(rhs.at(r, c)))
    }

    pub fn neg(&self) -> Self {
        Matrix::from_fn(self.rows, self.cols, |r, c| self.at(r, c).neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in mul");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let t = a.mul(rhs.at(k, c));
                    let cur = out.at(r, c).add(&t);
                    out.set(r, c, cur);
                }
            }
        }
        out
    }

    pub fn hstack(a: &Self, b: &Self) -> Self {
        assert_eq!(a.rows, b.rows);
        Matrix::from_fn(a.rows, a.cols + b.cols, |r, c| {
            if c < a.cols { a.at(r, c).clone() } else { b.at(r, c - a.cols).clone() }
        })
    }

    pub fn vstack(a: &Self, b: &Self) -> Self {
        assert_eq!(a.cols, b.cols);
        Matrix::from_fn(a.rows + b.rows, a.cols, |r, c| {
            if r < a.rows { a.at(r, c).clone() } else { b.at(r - a.rows, c).clone() }
        })
    }

    pub fn column(&self, c: usize) -> Vec<F> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Matrix::from_fn(self.rows, cols.len(), |r, c| self.at(r, cols[c]).clone())
    }

    /// In-place reduction to row echelon form. Returns the pivot columns.
    fn echelonize(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            let Some(pr) = (row..self.rows).find(|&r| !self.at(r, col).is_zero()) else {
                continue;
            };
            self.swap_rows(row, pr);
            let inv = self.at(row, col).inv().expect("nonzero pivot");
            for c in col..self.cols {
                let v = self.at(row, c).mul(&inv);
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r != row && !self.at(r, col).is_zero() {
                    let f = self.at(r, col).clone();
                    for c in col..self.cols {
                        let v = self.at(r, c).sub(&f.mul(self.at(row, c)));
                        self.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
            if row == self.rows {
                break;
            }
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.echelonize().len()
    }

    /// Basis of the right kernel, returned as the columns of a matrix with
    /// `self.cols` rows (zero columns mean the kernel is trivial).
    pub fn kernel_basis(&self) -> Self {
        let mut m = self.clone();
        let pivots = m.echelonize();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Self::zeros(self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out.set(fc, k, F::one());
            for (pr, &pc) in pivots.iter().enumerate() {
                out.set(pc, k, m.at(pr, fc).neg());
            }
        }
        out
    }

    /// Basis of the column span: the subset of original columns sitting on
    /// pivot positions.
    pub fn column_space_basis(&self) -> Self {
        let mut m = self.clone();
        let pivots = m.echelonize();
        self.select_columns(&pivots)
    }

    /// Canonical reduced column echelon form of the column span. Equal spans
    /// produce identical matrices, so this doubles as a dedup key.
    pub fn span_canonical(&self) -> Self {
        let mut m = self.transpose();
        let pivots = m.echelonize();
        let rank = pivots.len();
        Matrix::from_fn(self.rows, rank, |r, c| m.at(c, r).clone())
    }

    /// Solve `self * x = rhs` for one solution of each rhs column.
    /// Returns `None` when inconsistent.
    pub fn solve(&self, rhs: &Self) -> Option<Self> {
        assert_eq!(self.rows, rhs.rows);
        let mut aug = Self::hstack(self, rhs);
        let pivots = aug.echelonize();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None; // a pivot in the rhs block marks inconsistency
        }
        let mut x = Self::zeros(self.cols, rhs.cols);
        for (pr, &pc) in pivots.iter().enumerate() {
            for c in 0..rhs.cols {
                x.set(pc, c, aug.at(pr, self.cols + c).clone());
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let sol = self.solve(&Self::identity(self.rows))?;
        if self.mul(&sol) == Self::identity(self.rows) { Some(sol) } else { None }
    }

    pub fn det(&self) -> F {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        let mut det = F::one();
        let mut row = 0;
        for col in 0..m.cols {
            let Some(pr) = (row..m.rows).find(|&r| !m.at(r, col).is_zero()) else {
                return F::zero();
            };
            if pr != row {
                m.swap_rows(row, pr);
                det = det.neg();
            }
            det = det.mul(m.at(row, col));
            let inv = m.at(row, col).inv().expect("nonzero pivot");
            for r in row + 1..m.rows {
                if !m.at(r, col).is_zero() {
                    let f = m.at(r, col).mul(&inv);
                    for c in col..m.cols {
                        let v = m.at(r, c).sub(&f.mul(m.at(row, c)));
                        m.set(r, c, v);
                    }
                }
            }
            row += 1;
        }
        det
    }

    /// Basis of span(a) ∩ span(b) (columns span the intersection).
    pub fn intersect_spans(a: &Self, b: &Self) -> Self {
        assert_eq!(a.rows, b.rows);
        if a.cols == 0 || b.cols == 0 {
            return Self::zeros(a.rows, 0);
        }
        // ker [a | -b] gives pairs (x, y) with a x = b y.
        let k = Self::hstack(a, &b.neg()).kernel_basis();
        let xs = Matrix::from_fn(a.cols, k.cols(), |r, c| k.at(r, c).clone());
        a.mul(&xs).column_space_basis()
    }

    /// Basis of span(a) + span(b).
    pub fn sum_spans(a: &Self, b: &Self) -> Self {
        Self::hstack(a, b).column_space_basis()
    }

    /// True when span(sub) is contained in span(ambient).
    pub fn span_contained(sub: &Self, ambient: &Self) -> bool {
        ambient.solve(sub).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{Fp, PrimeField, FieldOps};
    use num::BigRational;

    fn qm(rows: Vec<Vec<i64>>) -> Matrix<BigRational> {
        let f = crate::arith::Rationals;
        Matrix::from_rows(
            rows.into_iter().map(|r| r.into_iter().map(|v| f.from_i64(v)).collect()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn rank_kernel_solve() {
        let m = qm(vec![vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k).is_zero());

        let rhs = qm(vec![vec![6], vec![12], vec![2]]);
        let x = m.solve(&rhs).unwrap();
        assert_eq!(m.mul(&x), rhs);
    }

    #[test]
    fn span_ops() {
        let a = qm(vec![vec![1, 0], vec![0, 1], vec![0, 0]]);
        let b = qm(vec![vec![0], vec![1], vec![1]]);
        let i = Matrix::intersect_spans(&a, &b);
        assert_eq!(i.cols(), 0);
        let s = Matrix::sum_spans(&a, &b);
        assert_eq!(s.cols(), 3);

        let c = qm(vec![vec![1], vec![1], vec![0]]);
        let i2 = Matrix::intersect_spans(&a, &c);
        assert_eq!(i2.cols(), 1);
        assert!(Matrix::span_contained(&i2, &a));
        assert!(Matrix::span_contained(&i2, &c));
    }

    #[test]
    fn span_canonical_is_a_key() {
        let a = qm(vec![vec![1, 1], vec![0, 1], vec![2, 0]]);
        let b = qm(vec![vec![2, 3], vec![1, 1], vec![-2, 4]]); // same span, different basis
        assert_eq!(b.span_canonical().cols(), 2);
        let x = Matrix::sum_spans(&a, &b);
        if x.cols() == 2 {
            assert_eq!(a.span_canonical(), b.span_canonical());
        }
    }

    #[test]
    fn det_and_inverse_fp() {
        let f = PrimeField { p: 1009 };
        let m = Matrix::from_fn(3, 3, |r, c| f.from_i64((r * 3 + c) as i64 + if r == c { 5 } else { 0 }));
        let d = m.det();
        assert!(!d.is_zero());
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::<Fp>::identity(3));
    }
}
