//! The contraction norm: slice polytope, difference body, and gauge.
//!
//! Given the lifted cone K ⊂ ℝ^{n+1} and the stoichiometric span
//! S = Im(Γ) × {0}, the polytope P = {s ∈ S : b + s ∈ K} (b = sum of the
//! cone's generators) is compact because K meets S only at the origin. Its
//! difference body H = P − P is symmetric and full-dimensional in S, and the
//! gauge of H is the norm in which trajectory distances are measured.
//!
//! All polytope data is exact; only the gauge evaluation itself runs in f64
//! (a small dense LP), with the input prescaled by its ∞-norm so that
//! homogeneity holds to rounding.

use crate::cones::ConeRepr;
use crate::geometry::dd::{polytope_vertices, DdError};
use crate::geometry::extreme::reduce_to_extreme;
use crate::geometry::lp_f64::{minimize, LpOutcome};
use crate::matrix::{dot, QMatrix};
use crate::rational::{q_to_f64, Q};
use num::{Signed, Zero};

/// Cap under which the difference-body reduction stays fully exact.
pub const H_EXACT_CAP: usize = 400;
/// Above this many slice vertices the difference body is not materialized:
/// the quadratically many pairwise differences would dominate memory, and
/// the gauge is evaluated directly from the slice vertices instead.
pub const H_EXPLICIT_VERTEX_CAP: usize = 600;
/// Relative tolerance for the span-membership residual of gauge inputs.
pub const SPAN_RESIDUAL_TOL: f64 = 1e-8;

#[derive(Debug, thiserror::Error)]
pub enum BallError {
    #[error("cone generator has non-positive lift coordinate; cone meets the span")]
    ConeMeetsSpan,
    #[error("stoichiometric span is not contained in the cone's span")]
    SpanDeficient,
    #[error("slice polytope is empty")]
    EmptySlice,
    #[error("slice polytope is unbounded")]
    UnboundedSlice,
    #[error("difference body does not span the stoichiometric space")]
    DegenerateBody,
    #[error("input is outside the stoichiometric span (residual {0:.3e})")]
    OutsideSpan(f64),
    #[error("gauge LP failed: {0}")]
    Numeric(String),
}

/// The norm ball data: H in span coordinates plus the maps in and out.
#[derive(Debug, Clone)]
pub struct NormBall {
    /// Extreme points of H = P − P (possibly with a few redundant points
    /// above the exact cap; redundancy does not change the gauge). Empty
    /// when the slice has more than `H_EXPLICIT_VERTEX_CAP` vertices — the
    /// gauge then runs on the slice vertices directly, which defines the
    /// same norm without materializing the quadratic difference set.
    pub h_points: Vec<Vec<Q>>,
    /// Vertices of the slice polytope P, in span coordinates.
    pub slice_vertices: Vec<Vec<Q>>,
    /// Basis of Im(Γ) in species space; column l is `im_basis[l]`.
    pub im_basis: Vec<Vec<Q>>,
    /// dim Im(Γ).
    pub dim: usize,
    /// f64 pseudo-inverse mapping species-space vectors to span coordinates.
    pinv: Vec<Vec<f64>>,
    im_basis_f64: Vec<Vec<f64>>,
    h_f64: Vec<Vec<f64>>,
    slice_f64: Vec<Vec<f64>>,
}

/// Builds the norm ball for a lifted species-space cone and stoichiometric
/// matrix.
pub fn norm_ball(cone: &ConeRepr, gamma: &QMatrix) -> Result<NormBall, BallError> {
    norm_ball_with_cap(cone, gamma, H_EXPLICIT_VERTEX_CAP)
}

/// As `norm_ball`, with an explicit threshold on how many slice vertices
/// still get a materialized difference body.
pub fn norm_ball_with_cap(
    cone: &ConeRepr,
    gamma: &QMatrix,
    explicit_vertex_cap: usize,
) -> Result<NormBall, BallError> {
    let n = gamma.rows;
    assert_eq!(cone.dim, n + 1, "cone must live in the lifted species space");
    // K ∩ S = {0}: every generator must sit strictly above the S hyperplane,
    // so any conic combination with zero lift coordinate is trivial.
    for g in &cone.generators {
        if !g[n].is_positive() {
            return Err(BallError::ConeMeetsSpan);
        }
    }
    let im_cols = gamma.column_space_basis();
    let im_basis: Vec<Vec<Q>> = im_cols.iter().map(|&j| gamma.col(j)).collect();
    let d = im_basis.len();
    // S ⊆ span(K), checked exactly; otherwise P is flat inside S and no norm
    // on Im(Γ) comes out of it.
    let span_t = QMatrix::from_rows(cone.span_basis.clone()).transpose();
    for bvec in &im_basis {
        let mut lifted = bvec.clone();
        lifted.push(Q::zero());
        if span_t.solve(&lifted).is_none() {
            return Err(BallError::SpanDeficient);
        }
    }
    // b = sum of generators (interior point of K relative to its span).
    let mut b = vec![Q::zero(); n + 1];
    for g in &cone.generators {
        for (bi, gi) in b.iter_mut().zip(g) {
            *bi = &*bi + gi;
        }
    }
    // P = {t : ⟨u, b + Σ_l t_l (B_l, 0)⟩ ≥ 0 for every dual generator u}.
    let a_rows: Vec<Vec<Q>> = cone
        .dual_generators
        .iter()
        .map(|u| im_basis.iter().map(|bl| dot(&u[..n], bl)).collect())
        .collect();
    let c: Vec<Q> = cone.dual_generators.iter().map(|u| -dot(u, &b)).collect();
    let slice_vertices = polytope_vertices(&a_rows, &c).map_err(|e| match e {
        DdError::EmptyPolytope => BallError::EmptySlice,
        DdError::Unbounded => BallError::UnboundedSlice,
    })?;
    let h_points = if slice_vertices.len() <= explicit_vertex_cap {
        // H = P − P via pairwise vertex differences.
        let mut diffs: Vec<Vec<Q>> = Vec::new();
        for v in &slice_vertices {
            for w in &slice_vertices {
                if v == w {
                    continue;
                }
                diffs.push(v.iter().zip(w).map(|(a, b)| a - b).collect());
            }
        }
        reduce_to_extreme(&diffs, H_EXACT_CAP)
    } else {
        Vec::new()
    };
    // Full-dimensionality of H within the span: span(P − P) is spanned by
    // the differences against any one vertex.
    let v0 = &slice_vertices[0];
    let rel: Vec<Vec<Q>> = slice_vertices[1..]
        .iter()
        .map(|v| v.iter().zip(v0).map(|(a, b)| a - b).collect())
        .collect();
    if crate::matrix::rank_of_rows(&rel) != d {
        return Err(BallError::DegenerateBody);
    }
    // Exact pseudo-inverse (BᵀB)⁻¹Bᵀ, then stored as f64.
    let bmat = QMatrix::from_rows(im_basis.clone()).transpose(); // n × d
    let gram = bmat.transpose().mul(&bmat); // d × d, invertible
    let mut pinv = vec![vec![0.0; n]; d];
    for i in 0..n {
        let rhs: Vec<Q> = (0..d).map(|l| bmat.get(i, l).clone()).collect();
        let z = gram.solve(&rhs).expect("Gram matrix of a basis is invertible");
        for l in 0..d {
            pinv[l][i] = q_to_f64(&z[l]);
        }
    }
    let im_basis_f64 = im_basis
        .iter()
        .map(|bl| bl.iter().map(q_to_f64).collect())
        .collect();
    let h_f64 = h_points
        .iter()
        .map(|h| h.iter().map(q_to_f64).collect())
        .collect();
    let slice_f64 = slice_vertices
        .iter()
        .map(|v| v.iter().map(q_to_f64).collect())
        .collect();
    Ok(NormBall { h_points, slice_vertices, im_basis, dim: d, pinv, im_basis_f64, h_f64, slice_f64 })
}

impl NormBall {
    /// Span coordinates of a species-space vector, with residual check.
    pub fn to_span_coords(&self, x: &[f64]) -> Result<Vec<f64>, BallError> {
        let n = self.pinv.first().map_or(0, |r| r.len());
        assert_eq!(x.len(), n, "dimension mismatch");
        let t: Vec<f64> = self.pinv.iter().map(|row| dot_f64(row, x)).collect();
        // residual ‖B t − x‖∞ relative to ‖x‖∞
        let scale = x.iter().fold(0.0_f64, |a, &v| a.max(v.abs())).max(1e-300);
        let mut worst = 0.0_f64;
        for i in 0..n {
            let rec: f64 = (0..self.dim).map(|l| self.im_basis_f64[l][i] * t[l]).sum();
            worst = worst.max((rec - x[i]).abs());
        }
        if worst > SPAN_RESIDUAL_TOL * scale {
            return Err(BallError::OutsideSpan(worst / scale));
        }
        Ok(t)
    }

    /// Gauge of H evaluated at span coordinates t, prescaled by its ∞-norm
    /// for LP conditioning. With explicit H points: min Σμ with Σ μ_i h_i = t,
    /// μ ≥ 0. Otherwise directly from the slice vertices v_i: t ∈ λ(P − P)
    /// iff t = Σ α_i v_i − Σ β_i v_i with α, β ≥ 0 and Σα = Σβ = λ, so the
    /// gauge is the minimum of Σα under those constraints.
    fn gauge_from_span(&self, t: &[f64]) -> Result<f64, BallError> {
        let scale = t.iter().fold(0.0_f64, |a, &v| a.max(v.abs()));
        if scale == 0.0 {
            return Ok(0.0);
        }
        let ts: Vec<f64> = t.iter().map(|v| v / scale).collect();
        let out = if !self.h_f64.is_empty() {
            let k = self.h_f64.len();
            let a: Vec<Vec<f64>> = (0..self.dim)
                .map(|l| self.h_f64.iter().map(|h| h[l]).collect())
                .collect();
            let c = vec![1.0; k];
            minimize(&a, &ts, &c)
        } else {
            let k = self.slice_f64.len();
            let mut a: Vec<Vec<f64>> = (0..self.dim)
                .map(|l| {
                    let mut row: Vec<f64> = self.slice_f64.iter().map(|v| v[l]).collect();
                    row.extend(self.slice_f64.iter().map(|v| -v[l]));
                    row
                })
                .collect();
            let mut balance = vec![1.0; k];
            balance.extend(vec![-1.0; k]);
            a.push(balance);
            let mut b = ts.clone();
            b.push(0.0);
            let mut c = vec![1.0; k];
            c.extend(vec![0.0; k]);
            minimize(&a, &b, &c)
        };
        match out {
            LpOutcome::Optimal { value, .. } => Ok(value * scale),
            LpOutcome::Infeasible => {
                Err(BallError::Numeric("gauge LP infeasible inside the span".into()))
            }
            LpOutcome::Unbounded => Err(BallError::Numeric("gauge LP unbounded".into())),
        }
    }

    /// Gauge of H at x ∈ Im(Γ): min Σμ with Σ μ_i h_i = x, μ ≥ 0.
    pub fn gauge(&self, x: &[f64]) -> Result<f64, BallError> {
        let scale = x.iter().fold(0.0_f64, |a, &v| a.max(v.abs()));
        if scale == 0.0 {
            return Ok(0.0);
        }
        let xs: Vec<f64> = x.iter().map(|v| v / scale).collect();
        let t = self.to_span_coords(&xs)?;
        Ok(self.gauge_from_span(&t)? * scale)
    }

    /// Distance d(x, y) = gauge(x − y); defined when x − y ∈ Im(Γ).
    ///
    /// The span-membership residual is measured relative to the size of the
    /// states, not of their difference: for nearly coincident trajectories
    /// the difference is dominated by integrator roundoff, which lives at
    /// the scale of the states themselves. The gauge is then evaluated on
    /// the span projection of the difference.
    pub fn distance(&self, x: &[f64], y: &[f64]) -> Result<f64, BallError> {
        let n = self.pinv.first().map_or(0, |r| r.len());
        assert_eq!(x.len(), n, "dimension mismatch");
        assert_eq!(y.len(), n, "dimension mismatch");
        let diff: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        let state_scale = x
            .iter()
            .chain(y.iter())
            .fold(0.0_f64, |a, &v| a.max(v.abs()))
            .max(1e-300);
        let t: Vec<f64> = self.pinv.iter().map(|row| dot_f64(row, &diff)).collect();
        let mut worst = 0.0_f64;
        for i in 0..n {
            let rec: f64 = (0..self.dim).map(|l| self.im_basis_f64[l][i] * t[l]).sum();
            worst = worst.max((rec - diff[i]).abs());
        }
        if worst > SPAN_RESIDUAL_TOL * state_scale {
            return Err(BallError::OutsideSpan(worst / state_scale));
        }
        self.gauge_from_span(&t)
    }
}

fn dot_f64(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
