//! Dense matrices over exact rings: unit-pivot solving, elimination over
//! fields and Smith normal form over Euclidean domains.

use crate::coeff::{Euclid, Field, Ring};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<R> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<R>,
}

impl<R: Ring> Matrix<R> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![R::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, R::one());
        }
        m
    }

    pub fn from_columns(rows: usize, cols: &[Vec<R>]) -> Self {
        let mut m = Self::zero(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<R> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows);
        let mut m = Self::zero(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let v = m.get(i, j).add(&a.mul(b));
                        m.set(i, j, v);
                    }
                }
            }
        }
        m
    }

    pub fn apply(&self, v: &[R]) -> Vec<R> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = R::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc.add(&a.mul(x));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self
            .data
            .iter()
            .zip(&o.data)
            .map(|(a, b)| a.add(b))
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, s: &R) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.mul(s)).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Rows and columns selected by index lists.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::zero(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Matrix<S> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `row[dst] += f · row[src]`
    fn add_row(&mut self, dst: usize, src: usize, f: &R) {
        for j in 0..self.cols {
            let s = self.get(src, j);
            if !s.is_zero() {
                let v = self.get(dst, j).add(&f.mul(s));
                self.set(dst, j, v);
            }
        }
    }

    /// `col[dst] += f · col[src]`
    fn add_col(&mut self, dst: usize, src: usize, f: &R) {
        for i in 0..self.rows {
            let s = self.get(i, src);
            if !s.is_zero() {
                let v = self.get(i, dst).add(&f.mul(s));
                self.set(i, dst, v);
            }
        }
    }

    fn scale_row(&mut self, i: usize, f: &R) {
        for j in 0..self.cols {
            let v = self.get(i, j).mul(f);
            self.set(i, j, v);
        }
    }

    /// Solve `self · X = b` for square `self` by elimination with unit
    /// pivots; `None` if no unit pivot is available.
    pub fn solve(&self, b: &Self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        assert_eq!(self.rows, b.rows);
        let n = self.rows;
        let mut a = self.clone();
        let mut x = b.clone();
        for c in 0..n {
            let p = (c..n).find(|&r| a.get(r, c).is_unit())?;
            a.swap_rows(p, c);
            x.swap_rows(p, c);
            let inv = a.get(c, c).inv()?;
            a.scale_row(c, &inv);
            x.scale_row(c, &inv);
            for r in 0..n {
                if r == c || a.get(r, c).is_zero() {
                    continue;
                }
                let f = a.get(r, c).neg();
                a.add_row(r, c, &f);
                x.add_row(r, c, &f);
            }
        }
        Some(x)
    }
}

impl<F: Field> Matrix<F> {
    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = vec![];
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(p) = (r..a.rows).find(|&i| !a.get(i, c).is_zero()) else {
                continue;
            };
            a.swap_rows(p, r);
            let inv = a.get(r, c).inv().expect("field");
            a.scale_row(r, &inv);
            for i in 0..a.rows {
                if i != r && !a.get(i, c).is_zero() {
                    let f = a.get(i, c).neg();
                    a.add_row(i, r, &f);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        if self.rows <= self.cols {
            self.rref().1.len()
        } else {
            self.transpose().rref().1.len()
        }
    }

    /// Basis of the null space, as columns.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let (a, piv) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![F::zero(); self.cols];
                v[f] = F::one();
                for (r, &p) in piv.iter().enumerate() {
                    v[p] = a.get(r, f).neg();
                }
                v
            })
            .collect()
    }

    /// Whether `v` lies in the column span.
    pub fn spans(&self, v: &[F]) -> bool {
        let mut cols: Vec<Vec<F>> = (0..self.cols).map(|j| self.column(j)).collect();
        let r = self.rank();
        cols.push(v.to_vec());
        Matrix::from_columns(self.rows, &cols).rank() == r
    }
}

/// `L · M · R = D` with `D` diagonal; `r_inv = R⁻¹`.
#[derive(Clone, Debug)]
pub struct Smith<R> {
    pub diag: Vec<R>,
    pub left: Matrix<R>,
    pub right: Matrix<R>,
    pub right_inv: Matrix<R>,
}

impl<R> Smith<R> {
    pub fn rank(&self) -> usize {
        self.diag.len()
    }
}

impl<E: Euclid> Matrix<E> {
    /// Diagonalize by Euclidean row and column operations. The nonzero
    /// diagonal entries are returned in order; divisibility between them is
    /// not enforced.
    pub fn smith(&self) -> Smith<E> {
        let (m, n) = (self.rows, self.cols);
        let mut a = self.clone();
        let mut left = Matrix::identity(m);
        let mut right = Matrix::identity(n);
        let mut right_inv = Matrix::identity(n);
        let mut diag = vec![];
        for t in 0..m.min(n) {
            loop {
                // smallest nonzero entry of the trailing block
                let mut best: Option<(u64, usize, usize)> = None;
                for i in t..m {
                    for j in t..n {
                        if let Some(s) = a.get(i, j).size() {
                            if best.is_none_or(|b| s < b.0) {
                                best = Some((s, i, j));
                            }
                        }
                    }
                }
                let Some((_, pi, pj)) = best else {
                    return Smith {
                        diag,
                        left,
                        right,
                        right_inv,
                    };
                };
                a.swap_rows(pi, t);
                left.swap_rows(pi, t);
                a.swap_cols(pj, t);
                right.swap_cols(pj, t);
                right_inv.swap_rows(pj, t);
                let mut clean = true;
                for i in t + 1..m {
                    if a.get(i, t).is_zero() {
                        continue;
                    }
                    let (q, r) = a.get(i, t).div_rem(a.get(t, t));
                    let f = q.neg();
                    a.add_row(i, t, &f);
                    left.add_row(i, t, &f);
                    clean &= r.is_zero();
                }
                for j in t + 1..n {
                    if a.get(t, j).is_zero() {
                        continue;
                    }
                    let (q, r) = a.get(t, j).div_rem(a.get(t, t));
                    let f = q.neg();
                    a.add_col(j, t, &f);
                    right.add_col(j, t, &f);
                    // inverse op on R⁻¹: row[t] -= f · row[j]
                    right_inv.add_row(t, j, &q);
                    clean &= r.is_zero();
                }
                if clean {
                    break;
                }
            }
            diag.push(a.get(t, t).clone());
        }
        Smith {
            diag,
            left,
            right,
            right_inv,
        }
    }
}
