//! Small dense floating-point simplex for the gauge evaluation.
//!
//! Minimizes cᵀx subject to Ax = b, x ≥ 0 with a two-phase tableau method.
//! Bland's rule plus a tiny pivot tolerance keeps it robust on the
//! well-scaled problems the norm code produces (≤ ~12 rows).

const EPS: f64 = 1e-11;
const MAX_ITERS: usize = 50_000;

pub enum LpOutcome {
    Optimal { value: f64, x: Vec<f64> },
    Infeasible,
    Unbounded,
}

/// min cᵀx s.t. Ax = b, x ≥ 0. `a` is row-major, `m` rows × `n` cols.
pub fn minimize(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    debug_assert!(a.iter().all(|r| r.len() == n));
    debug_assert_eq!(b.len(), m);

    // Tableau: n structural + m artificial + rhs.
    let width = n + m + 1;
    let mut t = vec![vec![0.0; width]; m];
    for i in 0..m {
        let flip = b[i] < 0.0;
        for j in 0..n {
            t[i][j] = if flip { -a[i][j] } else { a[i][j] };
        }
        t[i][n + i] = 1.0;
        t[i][width - 1] = if flip { -b[i] } else { b[i] };
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Phase 1: minimize artificial sum.
    let mut z = vec![0.0; width];
    for row in t.iter() {
        for j in 0..n {
            z[j] -= row[j];
        }
        z[width - 1] -= row[width - 1];
    }
    if !run(&mut t, &mut z, &mut basis, n + m) {
        return LpOutcome::Unbounded; // cannot happen: phase 1 is bounded
    }
    if z[width - 1] < -1e-7 {
        return LpOutcome::Infeasible;
    }

    // Drive any artificial still basic (at zero level) out of the basis.
    for i in 0..m {
        if basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| t[i][j].abs() > 1e-9) {
                pivot(&mut t, &mut z, i, j);
                basis[i] = j;
            }
        }
    }

    // Phase 2 objective over structural columns only.
    let mut z2 = vec![0.0; width];
    z2[..n].copy_from_slice(c);
    for i in 0..m {
        if basis[i] < n && z2[basis[i]].abs() > 0.0 {
            let f = z2[basis[i]];
            for j in 0..width {
                z2[j] -= f * t[i][j];
            }
        }
    }
    // Forbid re-entering artificials.
    for j in n..n + m {
        z2[j] = f64::INFINITY;
    }
    if !run(&mut t, &mut z2, &mut basis, n) {
        return LpOutcome::Unbounded;
    }

    let mut x = vec![0.0; n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = t[i][width - 1];
        }
    }
    let value = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
    LpOutcome::Optimal { value, x }
}

/// Simplex iterations; returns false on unboundedness.
fn run(t: &mut [Vec<f64>], z: &mut [f64], basis: &mut [usize], ncols: usize) -> bool {
    let m = t.len();
    let width = z.len();
    for _ in 0..MAX_ITERS {
        // Bland: lowest-index column with meaningfully negative reduced cost.
        let Some(enter) = (0..ncols).find(|&j| z[j] < -EPS) else {
            return true;
        };
        let mut leave: Option<usize> = None;
        let mut best = f64::INFINITY;
        for i in 0..m {
            if t[i][enter] > EPS {
                let ratio = t[i][width - 1] / t[i][enter];
                if ratio < best - EPS || (ratio < best + EPS && leave.map_or(true, |l| basis[i] < basis[l])) {
                    best = ratio;
                    leave = Some(i);
                }
            }
        }
        let Some(leave) = leave else {
            return false;
        };
        pivot_z(t, z, leave, enter);
        basis[leave] = enter;
    }
    true // iteration cap: current (feasible) point is returned as-is
}

fn pivot(t: &mut [Vec<f64>], z: &mut [f64], r: usize, c: usize) {
    pivot_z(t, z, r, c);
}

fn pivot_z(t: &mut [Vec<f64>], z: &mut [f64], r: usize, c: usize) {
    let width = z.len();
    let inv = 1.0 / t[r][c];
    for j in 0..width {
        t[r][j] *= inv;
    }
    t[r][c] = 1.0;
    for i in 0..t.len() {
        if i != r && t[i][c] != 0.0 {
            let f = t[i][c];
            for j in 0..width {
                t[i][j] -= f * t[r][j];
            }
            t[i][c] = 0.0;
        }
    }
    if z[c] != 0.0 && z[c].is_finite() {
        let f = z[c];
        for j in 0..width {
            if z[j].is_finite() {
                z[j] -= f * t[r][j];
            }
        }
        z[c] = 0.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_a_small_lp() {
        // min x + y s.t. x + 2y = 4, x, y ≥ 0 → y = 2, value 2
        let out = minimize(&[vec![1.0, 2.0]], &[4.0], &[1.0, 1.0]);
        match out {
            LpOutcome::Optimal { value, .. } => assert!((value - 2.0).abs() < 1e-12),
            _ => panic!("expected optimum"),
        }
    }

    #[test]
    fn detects_infeasibility() {
        let out = minimize(&[vec![1.0, 1.0]], &[-1.0], &[1.0, 1.0]);
        assert!(matches!(out, LpOutcome::Infeasible));
    }

    #[test]
    fn two_constraints_exactly() {
        // min 2x + 3y s.t. x + y = 1, x - y = 0 → x = y = 1/2, value 2.5
        let out = minimize(
            &[vec![1.0, 1.0], vec![1.0, -1.0]],
            &[1.0, 0.0],
            &[2.0, 3.0],
        );
        match out {
            LpOutcome::Optimal { value, .. } => assert!((value - 2.5).abs() < 1e-12),
            _ => panic!("expected optimum"),
        }
    }
}
