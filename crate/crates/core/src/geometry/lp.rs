//! Exact-rational linear feasibility via phase-1 simplex.
//!
//! Solves `Ax = b, x ≥ 0` with Bland's rule, so termination is guaranteed
//! and answers are exact. Problem sizes here are tiny (tens of rows, a few
//! thousand columns at worst), which exact arithmetic handles comfortably.

use crate::matrix::QMatrix;
use crate::rational::Q;
use num::{One, Signed, Zero};

/// Returns some x ≥ 0 with Ax = b, or None when the system is infeasible.
pub fn feasible_point(a: &QMatrix, b: &[Q]) -> Option<Vec<Q>> {
    assert_eq!(a.rows, b.len(), "shape mismatch");
    let m = a.rows;
    let n = a.cols;
    // Tableau columns: n structural + m artificial + rhs.
    let width = n + m + 1;
    let mut t: Vec<Vec<Q>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = vec![Q::zero(); width];
        let flip = b[i].is_negative();
        for j in 0..n {
            let v = a.get(i, j).clone();
            row[j] = if flip { -v } else { v };
        }
        row[n + i] = Q::one();
        row[width - 1] = if flip { -b[i].clone() } else { b[i].clone() };
        t.push(row);
    }
    // Phase-1 objective: minimize the sum of artificials. The reduced-cost
    // row starts as c − Σ basic rows, i.e. minus the column sums over
    // structural columns and zero over artificials.
    let mut z = vec![Q::zero(); width];
    for row in &t {
        for j in 0..width {
            if j < n || j == width - 1 {
                z[j] = &z[j] - &row[j];
            }
        }
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    loop {
        // Bland: entering variable = lowest index with negative reduced cost.
        let Some(enter) = (0..n + m).find(|&j| z[j].is_negative()) else {
            break;
        };
        // Ratio test, ties broken by lowest basic variable index (Bland).
        let mut leave: Option<usize> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let better = match leave {
                    None => true,
                    Some(l) => {
                        let cur = &t[l][width - 1] / &t[l][enter];
                        let cand = &t[i][width - 1] / &t[i][enter];
                        cand < cur || (cand == cur && basis[i] < basis[l])
                    }
                };
                if better {
                    leave = Some(i);
                }
            }
        }
        let leave = leave.expect("phase-1 objective is bounded below");
        pivot(&mut t, &mut z, leave, enter);
        basis[leave] = enter;
    }

    // Feasible iff the artificials can all be driven to zero.
    if !z[width - 1].is_zero() {
        return None;
    }
    let mut x = vec![Q::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = t[i][width - 1].clone();
        }
    }
    Some(x)
}

fn pivot(t: &mut [Vec<Q>], z: &mut [Q], r: usize, c: usize) {
    let width = z.len();
    let inv = Q::one() / t[r][c].clone();
    for j in 0..width {
        t[r][j] = &t[r][j] * &inv;
    }
    for i in 0..t.len() {
        if i != r && !t[i][c].is_zero() {
            let f = t[i][c].clone();
            for j in 0..width {
                t[i][j] = &t[i][j] - &f * &t[r][j];
            }
        }
    }
    if !z[c].is_zero() {
        let f = z[c].clone();
        for j in 0..width {
            z[j] = &z[j] - &f * &t[r][j];
        }
    }
}

/// True iff `p` is a convex combination of `others`.
pub fn in_convex_hull(p: &[Q], others: &[&Vec<Q>]) -> bool {
    if others.is_empty() {
        return false;
    }
    let d = p.len();
    // Rows: one per coordinate plus the Σλ = 1 row.
    let mut rows: Vec<Vec<Q>> = Vec::with_capacity(d + 1);
    for i in 0..d {
        rows.push(others.iter().map(|q| q[i].clone()).collect());
    }
    rows.push(vec![Q::one(); others.len()]);
    let a = QMatrix::from_rows(rows);
    let mut b: Vec<Q> = p.to_vec();
    b.push(Q::one());
    feasible_point(&a, &b).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{qi, qr};

    #[test]
    fn feasible_system_solved_exactly() {
        // x + y = 1, x - y = 1/3 → x = 2/3, y = 1/3
        let a = QMatrix::from_i64_rows(&[&[1, 1], &[1, -1]]);
        let x = feasible_point(&a, &[qi(1), qr(1, 3)]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![qi(1), qr(1, 3)]);
        assert!(x.iter().all(|v| !num::Signed::is_negative(v)));
    }

    #[test]
    fn infeasible_when_rhs_unreachable() {
        // x + y = -1 with x, y ≥ 0
        let a = QMatrix::from_i64_rows(&[&[1, 1]]);
        assert!(feasible_point(&a, &[qi(-1)]).is_none());
    }

    #[test]
    fn convex_hull_membership() {
        let sq: Vec<Vec<Q>> = vec![
            vec![qi(0), qi(0)],
            vec![qi(1), qi(0)],
            vec![qi(0), qi(1)],
            vec![qi(1), qi(1)],
        ];
        let refs: Vec<&Vec<Q>> = sq.iter().collect();
        assert!(in_convex_hull(&[qr(1, 2), qr(1, 2)], &refs));
        assert!(!in_convex_hull(&[qi(2), qi(0)], &refs));
    }
}
