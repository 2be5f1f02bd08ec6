//! Dense matrices over Q with exact reduced row echelon form.

use std::fmt;

use num_traits::{One, Zero};

use super::rational::Rational;
use crate::error::{usage, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixQ {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

/// Solution set `particular + span(kernel)` of `Mx = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: Vec<Rational>,
    pub kernel: Vec<Vec<Rational>>,
}

impl MatrixQ {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatrixQ { rows, cols, entries: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = Rational::one();
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<Rational>>) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        let n = rows.len();
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(usage!("row {i} has {} entries, expected {cols}", row.len()));
            }
            entries.extend(row);
        }
        Ok(MatrixQ { rows: n, cols, entries })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows.iter().map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect()).collect();
        Self::from_rows(cols, data).expect("rectangular input")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn push_row(&mut self, row: Vec<Rational>) -> Result<()> {
        if row.len() != self.cols {
            return Err(usage!("row has {} entries, expected {}", row.len(), self.cols));
        }
        self.entries.extend(row);
        self.rows += 1;
        Ok(())
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| self.row(i).iter().zip(v).filter(|(a, _)| !a.is_zero()).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (MatrixQ, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = m.get(r, c).recip();
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            let pivot_row: Vec<Rational> = m.row(r).to_vec();
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    if pivot_row[j].is_zero() {
                        continue;
                    }
                    let v = m.get(i, j) - &f * &pivot_row[j];
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{v : Mv = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        kernel_from_rref(&r, &pivots)
    }

    /// Solves `Mx = b`; `None` when the system is inconsistent.
    pub fn solve_affine(&self, b: &[Rational]) -> Result<Option<AffineSolution>> {
        if b.len() != self.rows {
            return Err(usage!("right-hand side has {} entries, expected {}", b.len(), self.rows));
        }
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut particular = vec![Rational::zero(); self.cols];
        for (i, &c) in pivots.iter().enumerate() {
            particular[c] = r.get(i, self.cols).clone();
        }
        let mut coeffs = Self::zeros(r.rows, self.cols);
        for i in 0..r.rows {
            for j in 0..self.cols {
                coeffs.set(i, j, r.get(i, j).clone());
            }
        }
        Ok(Some(AffineSolution { particular, kernel: kernel_from_rref(&coeffs, &pivots) }))
    }
}

fn kernel_from_rref(r: &MatrixQ, pivots: &[usize]) -> Vec<Vec<Rational>> {
    let free: Vec<usize> = (0..r.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); r.cols];
            v[f] = Rational::one();
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = -r.get(i, f).clone();
            }
            v
        })
        .collect()
}

impl fmt::Display for MatrixQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::int;
    use proptest::prelude::*;

    #[test]
    fn kernel_examples() {
        assert!(MatrixQ::identity(3).kernel().is_empty());
        assert_eq!(MatrixQ::zeros(2, 3).kernel().len(), 3);
        let k = MatrixQ::from_i64(&[&[1, 1]]).kernel();
        assert_eq!(k, vec![vec![int(-1), int(1)]]);
    }

    #[test]
    fn rref_leaves_input_alone() {
        let m = MatrixQ::from_i64(&[&[2, 4], &[1, 3]]);
        let before = m.clone();
        let (r, p) = m.rref();
        assert_eq!(m, before);
        assert_eq!(r, MatrixQ::identity(2));
        assert_eq!(p, vec![0, 1]);
    }

    #[test]
    fn affine_solve() {
        let m = MatrixQ::from_i64(&[&[1, 1, 0], &[0, 0, 1]]);
        let sol = m.solve_affine(&[int(3), int(2)]).unwrap().unwrap();
        assert_eq!(m.mul_vec(&sol.particular), vec![int(3), int(2)]);
        assert_eq!(sol.kernel.len(), 1);
        let bad = MatrixQ::from_i64(&[&[1, 1], &[2, 2]]);
        assert!(bad.solve_affine(&[int(1), int(3)]).unwrap().is_none());
    }

    proptest! {
        #[test]
        fn rank_nullity(rows in 1usize..6, cols in 1usize..6, seed in proptest::collection::vec(-3i64..4, 36)) {
            let data: Vec<Vec<Rational>> = (0..rows).map(|i| (0..cols).map(|j| int(seed[i * 6 + j])).collect()).collect();
            let m = MatrixQ::from_rows(cols, data).unwrap();
            let k = m.kernel();
            prop_assert_eq!(m.rank() + k.len(), cols);
            for v in &k {
                prop_assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
            }
        }
    }
}
