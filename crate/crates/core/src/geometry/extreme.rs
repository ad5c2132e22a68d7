//! Extreme points of finite point sets.
//!
//! The verdict for every point is exact: a point survives iff it is not a
//! convex combination of the remaining points. Deciding that with one big
//! exact-rational LP per point is correct but slow, so each point first goes
//! through cheap floating-point certificate searches whose results are then
//! verified in exact arithmetic:
//!
//! - a small-support convex combination (non-extremeness certificate),
//!   confirmed by an exact feasibility LP over just the support points;
//! - a strictly separating hyperplane (extremeness certificate), found by an
//!   active-set f64 LP and confirmed by exact strict dot-product comparisons.
//!
//! Only points where neither certificate verifies fall back to the full
//! exact-rational hull LP, so removal-order independence and exactness are
//! preserved while the common cases cost a handful of float operations.

use super::lp::in_convex_hull;
use super::lp_f64::{minimize, LpOutcome};
use crate::rational::{q_from_f64, q_to_f64, Q};
use num::Zero;

/// Deduplicates the input, preserving first-occurrence order.
pub fn dedup_points(points: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let mut out: Vec<Vec<Q>> = Vec::new();
    for p in points {
        if !out.contains(p) {
            out.push(p.clone());
        }
    }
    out
}

/// Extreme points of the convex hull, exactly.
pub fn extreme_points(points: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let pts = dedup_points(points);
    if pts.len() <= 1 {
        return pts;
    }
    let fl = scaled_f64(&pts);
    pts.iter()
        .enumerate()
        .filter(|&(i, p)| !certified_hull_member(i, p, &pts, &fl))
        .map(|(_, p)| p.clone())
        .collect()
}

/// Extreme-point reduction with a floating-point prefilter for large sets.
///
/// Below `exact_cap` points this is exactly `extreme_points`. Above it, a
/// conservative f64 LP first discards points that are interior by a wide
/// margin; if the survivors fit under the cap they are then confirmed
/// exactly, otherwise the (possibly slightly redundant) survivor set is
/// returned — callers that only need the convex hull, like the gauge LP, are
/// unaffected by redundancy.
pub fn reduce_to_extreme(points: &[Vec<Q>], exact_cap: usize) -> Vec<Vec<Q>> {
    let pts = dedup_points(points);
    if pts.len() <= exact_cap {
        return extreme_points(&pts);
    }
    let survivors = f64_prefilter(&pts);
    if survivors.len() <= exact_cap {
        extreme_points(&survivors)
    } else {
        survivors
    }
}

/// Exact verdict for "p = pts[i] lies in the hull of the other points",
/// taking the cheapest certified path available.
fn certified_hull_member(i: usize, p: &[Q], pts: &[Vec<Q>], fl: &[Vec<f64>]) -> bool {
    match hull_lp_f64(i, fl) {
        LpOutcome::Optimal { x, .. } => {
            // Candidate convex combination: confirm it exactly on its support
            // (a tiny LP) before trusting the float verdict.
            let others: Vec<usize> = (0..pts.len()).filter(|&j| j != i).collect();
            let support: Vec<&Vec<Q>> = x
                .iter()
                .enumerate()
                .filter(|&(_, lam)| *lam > 1e-9)
                .map(|(col, _)| &pts[others[col]])
                .collect();
            if !support.is_empty() && in_convex_hull(p, &support) {
                return true;
            }
        }
        _ => {
            // Candidate separating hyperplane: strict exact domination of
            // ⟨a, ·⟩ at p proves extremeness.
            if let Some(a) = separating_direction(i, fl) {
                let aq: Vec<Q> = a.iter().map(|&v| q_from_f64(v)).collect();
                if strictly_separates(&aq, i, pts) {
                    return false;
                }
            }
        }
    }
    // Neither certificate verified: decide with the full exact LP.
    let others: Vec<&Vec<Q>> =
        pts.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, q)| q).collect();
    in_convex_hull(p, &others)
}

/// True iff ⟨a, pts[i]⟩ > ⟨a, q⟩ for every other point q, exactly.
fn strictly_separates(a: &[Q], i: usize, pts: &[Vec<Q>]) -> bool {
    let dotq = |p: &[Q]| -> Q {
        a.iter().zip(p).map(|(x, y)| x * y).fold(Q::zero(), |s, t| s + t)
    };
    let vp = dotq(&pts[i]);
    pts.iter().enumerate().all(|(j, q)| j == i || dotq(q) < vp)
}

/// Coordinates scaled into [-1, 1] for the float LPs.
fn scaled_f64(pts: &[Vec<Q>]) -> Vec<Vec<f64>> {
    let scale = pts
        .iter()
        .flat_map(|p| p.iter())
        .map(|x| q_to_f64(x).abs())
        .fold(1.0_f64, f64::max);
    pts.iter().map(|p| p.iter().map(|x| q_to_f64(x) / scale).collect()).collect()
}

/// The f64 feasibility LP for "fl[i] is a convex combination of the rest".
fn hull_lp_f64(i: usize, fl: &[Vec<f64>]) -> LpOutcome {
    let d = fl[0].len();
    let others: Vec<usize> = (0..fl.len()).filter(|&j| j != i).collect();
    // rows: d coordinates plus the Σλ = 1 convexity row
    let mut a = vec![vec![0.0; others.len()]; d + 1];
    for (col, &j) in others.iter().enumerate() {
        for r in 0..d {
            a[r][col] = fl[j][r];
        }
        a[d][col] = 1.0;
    }
    let mut b: Vec<f64> = fl[i].clone();
    b.push(1.0);
    let c = vec![0.0; others.len()];
    minimize(&a, &b, &c)
}

/// Searches for a direction a with ⟨a, p − q⟩ > 0 for all q ≠ p by cutting
/// planes: maximize the worst margin over a working set of points (with
/// ‖a‖₁-style box bounds for boundedness), repeatedly adding the most
/// violated points. Purely a candidate generator — the caller verifies.
fn separating_direction(i: usize, fl: &[Vec<f64>]) -> Option<Vec<f64>> {
    let d = fl[0].len();
    let p = &fl[i];
    let others: Vec<usize> = (0..fl.len()).filter(|&j| j != i).collect();
    // Seed the working set with the nearest points: they carry the binding
    // constraints for a vertex.
    let mut by_dist = others.clone();
    by_dist.sort_by(|&x, &y| {
        let dx: f64 = (0..d).map(|k| (fl[x][k] - p[k]).powi(2)).sum();
        let dy: f64 = (0..d).map(|k| (fl[y][k] - p[k]).powi(2)).sum();
        dx.partial_cmp(&dy).unwrap()
    });
    let mut w: Vec<usize> = by_dist.iter().copied().take(d + 1).collect();
    for _ in 0..60 {
        let (a, t) = max_margin_lp(p, &w, fl, d)?;
        if t <= 1e-12 {
            return None; // not separable even on the relaxed problem
        }
        // Check every point; collect the worst violators of ⟨a, p − q⟩ > 0.
        let mut violated: Vec<(f64, usize)> = others
            .iter()
            .filter(|j| !w.contains(j))
            .map(|&j| ((0..d).map(|k| a[k] * (p[k] - fl[j][k])).sum::<f64>(), j))
            .filter(|&(m, _)| m <= 1e-12)
            .collect();
        if violated.is_empty() {
            return Some(a);
        }
        violated.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
        for &(_, j) in violated.iter().take(8) {
            w.push(j);
        }
        if w.len() > 240 {
            return None;
        }
    }
    None
}

/// max t s.t. ⟨a, p − q⟩ ≥ t for q in the working set, |a|₁-box bounded,
/// solved in equality form. Returns (a, t).
fn max_margin_lp(p: &[f64], w: &[usize], fl: &[Vec<f64>], d: usize) -> Option<(Vec<f64>, f64)> {
    // Variables: a⁺ (d), a⁻ (d), t⁺, t⁻, slack per working point, box slack
    // per coordinate.
    let nw = w.len();
    let ncols = 2 * d + 2 + nw + d;
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(nw + d);
    let mut b = Vec::with_capacity(nw + d);
    for (r, &j) in w.iter().enumerate() {
        let mut row = vec![0.0; ncols];
        for k in 0..d {
            let diff = p[k] - fl[j][k];
            row[k] = diff;
            row[d + k] = -diff;
        }
        row[2 * d] = -1.0;
        row[2 * d + 1] = 1.0;
        row[2 * d + 2 + r] = -1.0;
        rows.push(row);
        b.push(0.0);
    }
    for k in 0..d {
        let mut row = vec![0.0; ncols];
        row[k] = 1.0;
        row[d + k] = 1.0;
        row[2 * d + 2 + nw + k] = 1.0;
        rows.push(row);
        b.push(1.0);
    }
    let mut c = vec![0.0; ncols];
    c[2 * d] = -1.0;
    c[2 * d + 1] = 1.0;
    match minimize(&rows, &b, &c) {
        LpOutcome::Optimal { x, .. } => {
            let a: Vec<f64> = (0..d).map(|k| x[k] - x[d + k]).collect();
            Some((a, x[2 * d] - x[2 * d + 1]))
        }
        _ => None,
    }
}

/// Drops points that an f64 LP certifies as convex combinations of the rest.
fn f64_prefilter(pts: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let fl = scaled_f64(pts);
    let mut keep = Vec::new();
    for (i, p) in pts.iter().enumerate() {
        match hull_lp_f64(i, &fl) {
            LpOutcome::Optimal { .. } => {} // convincingly interior: drop
            _ => keep.push(p.clone()),
        }
    }
    keep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{qi, qr};

    #[test]
    fn square_with_center_keeps_corners() {
        let mut pts = vec![
            vec![qi(0), qi(0)],
            vec![qi(2), qi(0)],
            vec![qi(0), qi(2)],
            vec![qi(2), qi(2)],
            vec![qi(1), qi(1)],
        ];
        let ext = extreme_points(&pts);
        assert_eq!(ext.len(), 4);
        assert!(!ext.contains(&vec![qi(1), qi(1)]));
        // order independence
        pts.reverse();
        let mut a = extreme_points(&pts);
        let mut b = ext;
        a.sort_by_key(|p| format!("{:?}", p.iter().map(crate::rational::q_to_string).collect::<Vec<_>>()));
        b.sort_by_key(|p| format!("{:?}", p.iter().map(crate::rational::q_to_string).collect::<Vec<_>>()));
        assert_eq!(a, b);
    }

    #[test]
    fn affinely_independent_set_unchanged() {
        let pts = vec![vec![qi(0), qi(0)], vec![qi(1), qi(0)], vec![qi(0), qi(1)]];
        assert_eq!(extreme_points(&pts).len(), 3);
    }

    #[test]
    fn idempotent() {
        let pts = vec![
            vec![qi(0)],
            vec![qi(1)],
            vec![qr(1, 2)],
        ];
        let once = extreme_points(&pts);
        let twice = extreme_points(&once);
        assert_eq!(once, twice);
    }

    #[test]
    fn duplicates_removed_before_testing() {
        let pts = vec![vec![qi(0)], vec![qi(0)], vec![qi(1)]];
        assert_eq!(extreme_points(&pts).len(), 2);
    }

    #[test]
    fn midpoints_on_edges_are_dropped() {
        // Boundary-but-not-extreme points exercise the exact fallback: the
        // separation search must fail on them and the hull LP must drop them.
        let pts = vec![
            vec![qi(0), qi(0)],
            vec![qi(2), qi(0)],
            vec![qi(0), qi(2)],
            vec![qi(1), qi(0)],
            vec![qi(0), qi(1)],
            vec![qi(1), qi(1)],
        ];
        let ext = extreme_points(&pts);
        assert_eq!(ext.len(), 3);
    }

    #[test]
    fn prefilter_agrees_with_exact_on_small_inputs() {
        let pts: Vec<Vec<Q>> = (0..12)
            .map(|i| vec![qi(i % 4), qi(i / 4)])
            .collect();
        let exact = extreme_points(&pts);
        let reduced = reduce_to_extreme(&pts, 4); // force the prefilter path
        assert_eq!(exact.len(), reduced.len());
        for p in &exact {
            assert!(reduced.contains(p));
        }
    }
}
