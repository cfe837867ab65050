//! Dense exact linear algebra over the rationals.
//!
//! Small matrices only (frame changes, linear parts of jets, and the
//! constraint systems behind the normal-tensor dimension counts). Everything
//! is plain Gaussian elimination with exact arithmetic; no pivot heuristics
//! are needed because there is no rounding.

use num_traits::{One, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMat {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMat {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        RatMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
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

    pub fn transpose(&self) -> RatMat {
        let mut t = RatMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMat) -> RatMat {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = RatMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Rank by exact row reduction (consumes the matrix).
    pub fn rank(mut self) -> usize {
        let mut rank = 0;
        for col in 0..self.cols {
            let pivot = (rank..self.rows).find(|&r| !self.get(r, col).is_zero());
            let Some(p) = pivot else { continue };
            self.data.swap_chunks(p, rank, self.cols);
            let inv = self.get(rank, col).recip();
            for j in col..self.cols {
                let v = self.get(rank, j) * &inv;
                self.set(rank, j, v);
            }
            for r in 0..self.rows {
                if r != rank && !self.get(r, col).is_zero() {
                    let factor = self.get(r, col).clone();
                    for j in col..self.cols {
                        let v = self.get(r, j) - &factor * self.get(rank, j);
                        self.set(r, j, v);
                    }
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }

    pub fn det(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rational::one();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m.get(r, col).is_zero());
            let Some(p) = pivot else {
                return Rational::zero();
            };
            if p != col {
                m.data.swap_chunks(p, col, n);
                det = -det;
            }
            let pv = m.get(col, col).clone();
            det *= &pv;
            for r in col + 1..n {
                if m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col) / &pv;
                for j in col..n {
                    let v = m.get(r, j) - &factor * m.get(col, j);
                    m.set(r, j, v);
                }
            }
        }
        det
    }

    /// Exact inverse by Gauss-Jordan; `None` when singular.
    pub fn inverse(&self) -> Option<RatMat> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = RatMat::identity(n);
        for col in 0..n {
            let p = (col..n).find(|&r| !m.get(r, col).is_zero())?;
            m.data.swap_chunks(p, col, n);
            inv.data.swap_chunks(p, col, n);
            let scale = m.get(col, col).recip();
            for j in 0..n {
                let a = m.get(col, j) * &scale;
                m.set(col, j, a);
                let b = inv.get(col, j) * &scale;
                inv.set(col, j, b);
            }
            for r in 0..n {
                if r == col || m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for j in 0..n {
                    let a = m.get(r, j) - &factor * m.get(col, j);
                    m.set(r, j, a);
                    let b = inv.get(r, j) - &factor * inv.get(col, j);
                    inv.set(r, j, b);
                }
            }
        }
        Some(inv)
    }

    /// LDL^T factorization without pivoting: `self = L D L^T` with L unit
    /// lower triangular. `None` when a leading pivot vanishes (in particular
    /// the factorization exists for every symmetric positive definite input).
    pub fn ldl(&self) -> Option<(RatMat, Vec<Rational>)> {
        assert!(self.is_symmetric(), "LDL^T needs a symmetric matrix");
        let n = self.rows;
        let mut l = RatMat::identity(n);
        let mut d: Vec<Rational> = Vec::with_capacity(n);
        for j in 0..n {
            let mut dj = self.get(j, j).clone();
            for k in 0..j {
                dj -= l.get(j, k) * l.get(j, k) * &d[k];
            }
            if dj.is_zero() {
                return None;
            }
            for i in j + 1..n {
                let mut v = self.get(i, j).clone();
                for k in 0..j {
                    v -= l.get(i, k) * l.get(j, k) * &d[k];
                }
                l.set(i, j, v / &dj);
            }
            d.push(dj);
        }
        Some((l, d))
    }

    /// Sylvester test via LDL^T pivots.
    pub fn is_positive_definite(&self) -> bool {
        if !self.is_symmetric() {
            return false;
        }
        match self.ldl() {
            Some((_, d)) => d.iter().all(|p| p > &Rational::zero()),
            None => false,
        }
    }
}

trait SwapChunks {
    fn swap_chunks(&mut self, a: usize, b: usize, width: usize);
}

impl SwapChunks for Vec<Rational> {
    fn swap_chunks(&mut self, a: usize, b: usize, width: usize) {
        if a == b {
            return;
        }
        for j in 0..width {
            self.swap(a * width + j, b * width + j);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn m2(a: i64, b: i64, c: i64, d: i64) -> RatMat {
        RatMat::from_rows(vec![vec![int(a), int(b)], vec![int(c), int(d)]])
    }

    #[test]
    fn inverse_round_trip() {
        let m = m2(1, 2, 3, 5);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), RatMat::identity(2));
        assert_eq!(inv.mul(&m), RatMat::identity(2));
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        assert!(m2(1, 2, 2, 4).inverse().is_none());
        assert_eq!(m2(1, 2, 2, 4).det(), int(0));
    }

    #[test]
    fn rank_counts_independent_rows() {
        let m = RatMat::from_rows(vec![
            vec![int(1), int(2), int(3)],
            vec![int(2), int(4), int(6)],
            vec![int(0), int(1), int(1)],
        ]);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn ldl_recovers_spd_matrix() {
        let g = RatMat::from_rows(vec![vec![int(4), int(2)], vec![int(2), int(10)]]);
        let (l, d) = g.ldl().unwrap();
        assert_eq!(d, vec![int(4), int(9)]);
        let mut dm = RatMat::zeros(2, 2);
        dm.set(0, 0, d[0].clone());
        dm.set(1, 1, d[1].clone());
        assert_eq!(l.mul(&dm).mul(&l.transpose()), g);
        assert!(g.is_positive_definite());
    }

    #[test]
    fn indefinite_matrix_is_rejected() {
        assert!(!m2(1, 2, 2, 1).is_positive_definite());
        assert!(!m2(0, 1, 1, 0).is_positive_definite());
        let half = RatMat::from_rows(vec![vec![rat(1, 2)]]);
        assert!(half.is_positive_definite());
    }
}
