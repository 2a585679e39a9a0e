//! Exact integer column reduction (Hermite-style) used for closed-2-chain
//! bases and for solving boundary equations over the integers.

use num::BigInt;
use num::Signed;
use num::Zero;

/// Dense integer matrix, row-major.
#[derive(Debug, Clone)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::from(1);
        }
        m
    }

    pub fn from_i64(rows: usize, cols: usize, f: impl Fn(usize, usize) -> i64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.data[r * cols + c] = BigInt::from(f(r, c));
            }
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// col_k -= q * col_c
    fn submul_col(&mut self, k: usize, c: usize, q: &BigInt) {
        for r in 0..self.rows {
            let v = self.get(r, c).clone() * q;
            self.data[r * self.cols + k] -= v;
        }
    }

    fn negate_col(&mut self, c: usize) {
        for r in 0..self.rows {
            let idx = r * self.cols + c;
            let v = -self.data[idx].clone();
            self.data[idx] = v;
        }
    }

    fn col_is_zero(&self, c: usize) -> bool {
        (0..self.rows).all(|r| self.get(r, c).is_zero())
    }

    pub fn column_i64(&self, c: usize) -> Option<Vec<i64>> {
        use num::ToPrimitive;
        (0..self.rows).map(|r| self.get(r, c).to_i64()).collect()
    }
}

/// Result of the column reduction `A * transform = echelon`.
pub struct ColumnEchelon {
    pub echelon: IntMatrix,
    pub transform: IntMatrix,
    /// (row, col) positions of the pivots, in increasing row order.
    pub pivots: Vec<(usize, usize)>,
}

/// Reduces `a` to column echelon form by unimodular column operations.
///
/// The transform is square unimodular with `a * transform = echelon`; the
/// trailing columns of the transform (those mapping to zero echelon columns)
/// are an integer basis of the kernel of `a`.
pub fn column_echelon(a: &IntMatrix) -> ColumnEchelon {
    let mut h = a.clone();
    let mut u = IntMatrix::identity(a.cols);
    let mut pivots = Vec::new();
    let mut c = 0usize;
    for row in 0..h.rows {
        if c >= h.cols {
            break;
        }
        loop {
            // Column with the smallest nonzero entry in this row, at or after c.
            let mut best: Option<usize> = None;
            for j in c..h.cols {
                if !h.get(row, j).is_zero()
                    && best.is_none_or(|b| h.get(row, j).abs() < h.get(row, b).abs())
                {
                    best = Some(j);
                }
            }
            let Some(j) = best else { break };
            h.swap_cols(c, j);
            u.swap_cols(c, j);
            let mut done = true;
            for k in c + 1..h.cols {
                if !h.get(row, k).is_zero() {
                    // Round-toward-zero quotient is enough for Euclid steps.
                    let q = h.get(row, k) / h.get(row, c);
                    if !q.is_zero() {
                        h.submul_col(k, c, &q);
                        u.submul_col(k, c, &q);
                    }
                    if !h.get(row, k).is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                if h.get(row, c).is_negative() {
                    h.negate_col(c);
                    u.negate_col(c);
                }
                pivots.push((row, c));
                c += 1;
                break;
            }
        }
    }
    ColumnEchelon { echelon: h, transform: u, pivots }
}

impl ColumnEchelon {
    /// Indices of zero columns of the echelon (kernel coordinates in the
    /// transform).
    pub fn kernel_columns(&self) -> Vec<usize> {
        (0..self.echelon.cols)
            .filter(|&c| self.echelon.col_is_zero(c))
            .collect()
    }

    /// Solves `a x = b` over the integers via the echelon factorization.
    /// Returns `None` when no integer solution exists.
    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(b.len(), self.echelon.rows);
        let mut y = vec![BigInt::zero(); self.echelon.cols];
        let mut residual: Vec<BigInt> = b.to_vec();
        for &(row, col) in &self.pivots {
            let pivot = self.echelon.get(row, col);
            let q = &residual[row] / pivot;
            let rem = &residual[row] - &q * pivot;
            if !rem.is_zero() {
                return None;
            }
            for r in 0..self.echelon.rows {
                let v = self.echelon.get(r, col).clone() * &q;
                residual[r] -= v;
            }
            y[col] = q;
        }
        if residual.iter().any(|v| !v.is_zero()) {
            return None;
        }
        // x = transform * y
        let n = self.transform.rows;
        let mut x = vec![BigInt::zero(); n];
        for (r, xe) in x.iter_mut().enumerate() {
            for (c, yc) in y.iter().enumerate() {
                if !yc.is_zero() {
                    *xe += self.transform.get(r, c).clone() * yc;
                }
            }
        }
        Some(x)
    }
}
