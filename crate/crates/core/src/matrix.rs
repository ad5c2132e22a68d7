//! Dense matrices over exact rationals.
//!
//! Small and direct: Gaussian elimination with exact pivots is all the
//! factorization and cone code needs, and at desk scale (tens of rows) it is
//! instant. No attempt is made at fraction-free or modular tricks.

use crate::rational::{qi, Q};
use num::{One, Zero};

/// Row-major dense matrix of exact rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Q>,
}

impl std::fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| crate::rational::q_to_string(self.get(i, j)))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        QMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect())
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<Q> {
        (0..self.cols).map(|j| self.get(i, j).clone()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = QMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j).clone();
                    out.set(i, j, cur + a * b);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len(), "shape mismatch");
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .filter(|&j| !self.get(i, j).is_zero() && !v[j].is_zero())
                    .map(|j| self.get(i, j) * &v[j])
                    .fold(Q::zero(), |a, b| a + b)
            })
            .collect()
    }

    /// Reduced row echelon form; returns (rref, pivot column per pivot row).
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    let a = m.get(r, j).clone();
                    let b = m.get(p, j).clone();
                    m.set(r, j, b);
                    m.set(p, j, a);
                }
            }
            let inv = Q::one() / m.get(r, c).clone();
            for j in 0..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i != r && !m.get(i, c).is_zero() {
                    let f = m.get(i, c).clone();
                    for j in 0..m.cols {
                        let v = m.get(i, j) - &f * m.get(r, j);
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of {x : Ax = 0}, one vector per free column.
    pub fn null_space(&self) -> Vec<Vec<Q>> {
        let (rr, pivots) = self.rref();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![Q::zero(); self.cols];
            v[free] = Q::one();
            for (prow, &pcol) in pivots.iter().enumerate() {
                v[pcol] = -rr.get(prow, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Basis of {c : cᵀA = 0} (conservation laws when A = Γ).
    pub fn left_null_space(&self) -> Vec<Vec<Q>> {
        self.transpose().null_space()
    }

    /// Column indices forming a basis of the column space.
    pub fn column_space_basis(&self) -> Vec<usize> {
        self.rref().1
    }

    /// Any exact solution of Ax = b, or None when inconsistent.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(b.len(), self.rows, "shape mismatch");
        let mut aug = QMatrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (rr, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // pivot in the augmented column: inconsistent
        }
        let mut x = vec![Q::zero(); self.cols];
        for (prow, &pcol) in pivots.iter().enumerate() {
            x[pcol] = rr.get(prow, self.cols).clone();
        }
        Some(x)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }
}

/// Rank of the matrix whose rows are the given vectors.
pub fn rank_of_rows(rows: &[Vec<Q>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    QMatrix::from_rows(rows.to_vec()).rank()
}

/// Exact dot product.
pub fn dot(a: &[Q], b: &[Q]) -> Q {
    assert_eq!(a.len(), b.len(), "shape mismatch");
    a.iter().zip(b).map(|(x, y)| x * y).fold(Q::zero(), |s, t| s + t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qr;

    #[test]
    fn rank_and_null_space() {
        // rows of [[1,2],[2,4]] are dependent
        let m = QMatrix::from_i64_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(m.rank(), 1);
        let ns = m.null_space();
        assert_eq!(ns.len(), 1);
        assert!(m.mul_vec(&ns[0]).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = QMatrix::from_i64_rows(&[&[1, 1], &[1, -1]]);
        let x = m.solve(&[qi(3), qi(1)]).unwrap();
        assert_eq!(x, vec![qi(2), qi(1)]);
        let singular = QMatrix::from_i64_rows(&[&[1, 1], &[2, 2]]);
        assert!(singular.solve(&[qi(1), qi(3)]).is_none());
    }

    #[test]
    fn product_shapes_and_values() {
        let a = QMatrix::from_i64_rows(&[&[1, 2], &[0, 1]]);
        let b = QMatrix::from_i64_rows(&[&[1], &[3]]);
        let p = a.mul(&b);
        assert_eq!((p.rows, p.cols), (2, 1));
        assert_eq!(p.get(0, 0), &qi(7));
    }

    #[test]
    fn rref_uses_exact_fractions() {
        let m = QMatrix::from_i64_rows(&[&[3, 1]]);
        let (rr, _) = m.rref();
        assert_eq!(rr.get(0, 1), &qr(1, 3));
    }

    #[test]
    fn left_null_space_gives_conservation_laws() {
        let gamma = QMatrix::from_i64_rows(&[&[-1], &[1]]);
        let lk = gamma.left_null_space();
        assert_eq!(lk.len(), 1);
        // c = (1,1) up to scaling
        assert_eq!(&lk[0][0], &lk[0][1]);
    }
}
