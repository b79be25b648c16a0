//! Dense exact linear algebra over the coefficient field: row reduction,
//! rank, and span comparison. Used for piecewise-dimension checks.

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct Mat<C: Scalar> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<C>>,
}

impl<C: Scalar> Mat<C> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![vec![C::zero(); cols]; rows],
        }
    }

    pub fn from_rows(rows: Vec<Vec<C>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|v| v.len()).unwrap_or(0);
        Mat {
            rows: r,
            cols: c,
            data: rows,
        }
    }

    /// Reduced row echelon form in place; returns pivot column indices.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r >= self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.data[i][c].is_zero()) else {
                continue;
            };
            self.data.swap(r, p);
            let inv = self.data[r][c].inv();
            for j in c..self.cols {
                self.data[r][j] = self.data[r][j].clone() * inv.clone();
            }
            for i in 0..self.rows {
                if i != r && !self.data[i][c].is_zero() {
                    let f = self.data[i][c].clone();
                    for j in c..self.cols {
                        self.data[i][j] =
                            self.data[i][j].clone() - f.clone() * self.data[r][j].clone();
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }
}

/// Dimension of the span of the given row vectors.
pub fn span_dim<C: Scalar>(rows: &[Vec<C>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    Mat::from_rows(rows.to_vec()).rank()
}

/// True iff every row of `inner` lies in the row span of `outer`.
pub fn span_contains<C: Scalar>(outer: &[Vec<C>], inner: &[Vec<C>]) -> bool {
    if inner.is_empty() {
        return true;
    }
    let base = span_dim(outer);
    let mut all: Vec<Vec<C>> = outer.to_vec();
    all.extend(inner.iter().cloned());
    span_dim(&all) == base
}

/// True iff the two row spans are equal.
pub fn span_eq<C: Scalar>(a: &[Vec<C>], b: &[Vec<C>]) -> bool {
    span_contains(a, b) && span_contains(b, a)
}
