//! Exact rational linear algebra for the brute-force oracles.

use num_rational::Ratio;
use num_traits::{One, Zero};

pub type Rational = Ratio<i128>;

#[derive(Clone, Debug, PartialEq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> QMatrix {
        QMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn from_rows(rows: &[Vec<i64>], cols: usize) -> QMatrix {
        let mut m = QMatrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged row");
            for (j, &x) in r.iter().enumerate() {
                m.data[i * cols + j] = Rational::from_integer(x as i128);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..cols {
                    self.data.swap(p * cols + j, r * cols + j);
                }
            }
            let inv = Rational::one() / *self.get(r, c);
            for j in c..cols {
                let v = self.data[r * cols + j] * inv;
                self.data[r * cols + j] = v;
            }
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let f = *self.get(i, c);
                if f.is_zero() {
                    continue;
                }
                for j in c..cols {
                    let v = self.data[i * cols + j] - f * self.data[r * cols + j];
                    self.data[i * cols + j] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of `{v : M v = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -*m.get(r, f);
                }
                v
            })
            .collect()
    }
}

pub fn rank_of(vectors: &[Vec<i64>], dim: usize) -> usize {
    QMatrix::from_rows(vectors, dim).rank()
}

/// Whether two families of integer vectors span the same subspace.
pub fn same_span(a: &[Vec<i64>], b: &[Vec<i64>], dim: usize) -> bool {
    let ra = rank_of(a, dim);
    let rb = rank_of(b, dim);
    let mut both = a.to_vec();
    both.extend_from_slice(b);
    ra == rb && rank_of(&both, dim) == ra
}
