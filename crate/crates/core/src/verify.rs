//! Numerical verification: monotonicity of the flow with respect to a cone,
//! strong-monotonicity witnesses on the cone's face lattice, and trajectory
//! checks (weak contractivity of the norm, convergence within a
//! compatibility class).
//!
//! The oracle side works on the lifted Jacobian J̃ = diag(J, 0): the flow is
//! monotone with respect to the cone K iff ⟨J̃k, u⟩ ≥ 0 for every extreme
//! generator k of K and extreme dual ray u with ⟨k, u⟩ = 0 — linearity makes
//! the extreme pairs sufficient.

use crate::ball::{BallError, NormBall};
use crate::cones::{apply_p, lift_points, ConeConstruction, ConeRepr};
use crate::graphs::positive_flux_vector;
use crate::kinetics::{KineticsSpec, RateEvaluator};
use crate::matrix::dot;
use crate::network::{compat_class, rational_in_range, ReactionNetwork};
use crate::rational::{q_to_f64, Q};
use num::{Signed, Zero};
use rand::Rng;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

/// Default slack for pairing minima in the monotonicity oracle.
pub const MONOTONICITY_TOL: f64 = 1e-9;
/// Checkpoint-to-checkpoint slack in the contractivity check.
pub const CONTRACTIVITY_TOL: f64 = 1e-9;
/// Required relative total decrease of the distance over the horizon.
pub const CONTRACTIVITY_DECREASE: f64 = 1e-6;
/// A trajectory grazing the boundary closer than this is discarded.
pub const BOUNDARY_MARGIN: f64 = 1e-10;

// ---------------------------------------------------------------------------
// Monotonicity oracle
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct MonotonicityReport {
    pub n_states: usize,
    pub n_pairs: usize,
    /// Smallest ⟨J̃k, u⟩ over all states and incident (k, u) pairs, with k
    /// and u normalized to unit Euclidean length.
    pub min_pairing: f64,
    pub pass: bool,
}

/// Evaluates the pairing minima at random states x ∈ [0.1, 5]ⁿ.
pub fn monotonicity_oracle<R: Rng>(
    ev: &RateEvaluator,
    cone: &ConeRepr,
    n_states: usize,
    rng: &mut R,
    tol: f64,
) -> MonotonicityReport {
    let n = ev.n;
    let unit = |v: &[Q]| -> Vec<f64> {
        let f: Vec<f64> = v.iter().map(q_to_f64).collect();
        let norm = f.iter().map(|x| x * x).sum::<f64>().sqrt();
        f.iter().map(|x| x / norm).collect()
    };
    let gens: Vec<Vec<f64>> = cone.generators.iter().map(|g| unit(g)).collect();
    let duals: Vec<Vec<f64>> = cone.dual_generators.iter().map(|u| unit(u)).collect();
    let pairs: Vec<(usize, usize)> = (0..gens.len())
        .flat_map(|i| {
            (0..duals.len())
                .filter(move |&k| cone.incidence[i][k])
                .map(move |k| (i, k))
        })
        .collect();
    let mut min_pairing = f64::INFINITY;
    let mut jg = vec![vec![0.0; n]; gens.len()];
    for _ in 0..n_states {
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..5.0)).collect();
        let jac = ev.field_jacobian(&x);
        // ⟨J̃ g, u⟩ only involves the species block; J g is shared across all
        // dual rays incident to the same generator.
        for (i, g) in gens.iter().enumerate() {
            for a in 0..n {
                jg[i][a] = (0..n).map(|b| jac[a][b] * g[b]).sum();
            }
        }
        for &(i, k) in &pairs {
            let s: f64 = (0..n).map(|a| duals[k][a] * jg[i][a]).sum();
            min_pairing = min_pairing.min(s);
        }
    }
    MonotonicityReport {
        n_states,
        n_pairs: pairs.len(),
        min_pairing,
        pass: min_pairing >= -tol,
    }
}

// ---------------------------------------------------------------------------
// Strong-monotonicity witnesses on the face lattice
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct FaceWitness {
    /// Generator indices spanning the face.
    pub face: Vec<usize>,
    /// (reaction, generator in face, viable-set point outside) when found;
    /// the third index refers to the construction's viable-set vector list.
    pub witness: Option<(usize, usize, usize)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StrongWitnessReport {
    pub n_proper_faces: usize,
    pub n_witnessed: usize,
    pub all_witnessed: bool,
    pub faces: Vec<FaceWitness>,
}

/// Cap on the size of the enumerated face lattice. Beyond it the witness
/// check degenerates into a resource-cap error rather than a partial answer.
pub const FACE_LATTICE_CAP: usize = 1 << 14;

/// The cone's face lattice is too large to enumerate; the strong-monotonicity
/// witness check cannot be completed within the resource cap.
#[derive(Debug, thiserror::Error)]
#[error("face lattice exceeds {cap} faces; strong-monotonicity witnesses were not enumerated")]
pub struct FaceLatticeCap {
    pub cap: usize,
}

/// Enumerates proper faces of the cone as generator subsets: facets come
/// from the dual rays, and the lattice is their closure under intersection.
/// Faces are kept as word-packed generator bitsets so cones of any size fit;
/// the count is capped by `FACE_LATTICE_CAP`.
fn proper_faces(cone: &ConeRepr) -> Result<Vec<Vec<usize>>, FaceLatticeCap> {
    let ng = cone.generators.len();
    let words = ng.div_ceil(64);
    let bit = |b: &[u64], i: usize| b[i / 64] & (1 << (i % 64)) != 0;
    let mut full = vec![0u64; words];
    for i in 0..ng {
        full[i / 64] |= 1 << (i % 64);
    }
    let facets: Vec<Vec<u64>> = (0..cone.dual_generators.len())
        .map(|k| {
            let mut b = vec![0u64; words];
            for i in 0..ng {
                if cone.incidence[i][k] {
                    b[i / 64] |= 1 << (i % 64);
                }
            }
            b
        })
        .filter(|b| *b != full && b.iter().any(|&w| w != 0))
        .collect();
    let mut faces: Vec<Vec<u64>> = Vec::new();
    let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
    for f in facets {
        if seen.insert(f.clone()) {
            faces.push(f);
        }
    }
    // Closure under pairwise intersection.
    let mut idx = 0;
    while idx < faces.len() {
        for j in 0..idx {
            let c: Vec<u64> =
                faces[idx].iter().zip(&faces[j]).map(|(a, b)| a & b).collect();
            if c.iter().any(|&w| w != 0) && !seen.contains(&c) {
                seen.insert(c.clone());
                faces.push(c);
            }
        }
        idx += 1;
        if faces.len() > FACE_LATTICE_CAP {
            return Err(FaceLatticeCap { cap: FACE_LATTICE_CAP });
        }
    }
    Ok(faces
        .into_iter()
        .map(|b| (0..ng).filter(|&i| bit(&b, i)).collect())
        .collect())
}

/// Looks, on every proper face F, for a single reaction step that crosses
/// the face: an extreme ray k ∈ F and a viable-set point k' whose lift lies
/// in K ∖ F, with k − k' equal to exactly one reaction step ±P·Nⱼ and k not
/// sign-neutral for that reaction (k ∉ Q₂(Γⱼ)).
///
/// The candidates k' come from the viable-set closure, so the certificate
/// mirrors how the cone was built: every crossing reported corresponds to a
/// permissible operation of the construction.
pub fn strong_witnesses(
    net: &ReactionNetwork,
    cons: &ConeConstruction,
) -> Result<StrongWitnessReport, FaceLatticeCap> {
    let n = net.n_species();
    let cone = &cons.cone;
    let fact = cons
        .classification
        .factorization
        .as_ref()
        .expect("cone constructions carry a factorization");
    // Lifted viable-set points in species space (superset of the generators).
    let closure = apply_p(&fact.p, &lift_points(&cons.viable.vectors));
    // One reaction step in species space per factor column: P·Nⱼ = Γⱼ/dⱼ.
    let steps: Vec<Vec<Q>> = (0..fact.n.cols).map(|j| fact.p.mul_vec(&fact.n.col(j))).collect();
    let faces = proper_faces(cone)?;
    // Candidate crossings do not depend on the face: generator a, reaction j
    // and closure point m with a − m = ±step_j and a sharing support with the
    // step. m = a ∓ step_j, so each candidate is one map lookup. Ordered by
    // (closure index, reaction) to keep the selected witness deterministic.
    let closure_index: BTreeMap<&Vec<Q>, usize> =
        closure.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let crossings: Vec<Vec<(usize, usize)>> = cone
        .generators
        .iter()
        .map(|ga| {
            let mut cands: Vec<(usize, usize)> = Vec::new();
            for (j, step) in steps.iter().enumerate() {
                // k ∉ Q₂(Γⱼ): the ray must share support with the step.
                if !(0..n).any(|i| !ga[i].is_zero() && !step[i].is_zero()) {
                    continue;
                }
                for sign in [1i64, -1] {
                    let mut m: Vec<Q> = (0..n)
                        .map(|i| {
                            if sign > 0 { &ga[i] - &step[i] } else { &ga[i] + &step[i] }
                        })
                        .collect();
                    m.push(ga[n].clone());
                    if let Some(&mi) = closure_index.get(&m) {
                        cands.push((mi, j));
                    }
                }
            }
            cands.sort();
            cands.dedup();
            cands
        })
        .collect();
    // Dual-incidence mask per closure point: m lies in a face iff it is
    // orthogonal to every dual ray cutting that face out.
    let nd = cone.dual_generators.len();
    let dwords = nd.div_ceil(64).max(1);
    let closure_mask: Vec<Vec<u64>> = closure
        .iter()
        .map(|m| {
            let mut b = vec![0u64; dwords];
            for (k, u) in cone.dual_generators.iter().enumerate() {
                if dot(m, u).is_zero() {
                    b[k / 64] |= 1 << (k % 64);
                }
            }
            b
        })
        .collect();
    let gen_mask: Vec<Vec<u64>> = (0..cone.generators.len())
        .map(|i| {
            let mut b = vec![0u64; dwords];
            for k in 0..nd {
                if cone.incidence[i][k] {
                    b[k / 64] |= 1 << (k % 64);
                }
            }
            b
        })
        .collect();
    let mut out = Vec::new();
    let mut witnessed = 0;
    for face in faces {
        // Duals vanishing on the whole face cut it out of the cone.
        let mut cutting = vec![!0u64; dwords];
        for &i in &face {
            for (c, g) in cutting.iter_mut().zip(&gen_mask[i]) {
                *c &= g;
            }
        }
        let in_face = |mask: &[u64]| -> bool {
            cutting.iter().zip(mask).all(|(c, m)| c & !m == 0)
        };
        let mut found: Option<(usize, usize, usize)> = None;
        'search: for &a in &face {
            for &(mi, j) in &crossings[a] {
                if !in_face(&closure_mask[mi]) {
                    found = Some((j, a, mi));
                    break 'search;
                }
            }
        }
        if found.is_some() {
            witnessed += 1;
        }
        out.push(FaceWitness { face, witness: found });
    }
    Ok(StrongWitnessReport {
        n_proper_faces: out.len(),
        n_witnessed: witnessed,
        all_witnessed: witnessed == out.len(),
        faces: out,
    })
}

// ---------------------------------------------------------------------------
// Integration
// ---------------------------------------------------------------------------

#[derive(Debug, thiserror::Error)]
pub enum IntegrateError {
    #[error("step size underflow near t = {t}")]
    StepUnderflow { t: f64 },
    #[error("state became non-finite near t = {t}")]
    NonFinite { t: f64 },
}

#[derive(Debug, Clone)]
pub struct IntegrationResult {
    /// State at each requested checkpoint time, in order.
    pub states: Vec<Vec<f64>>,
    /// Worst |⟨c, x(t)⟩ − ⟨c, x(0)⟩| over conservation laws c and steps.
    pub conservation_drift: f64,
    /// Smallest coordinate value seen along the trajectory.
    pub min_coordinate: f64,
    pub halvings: usize,
}

/// Classic RK4 with a fixed nominal step; a step whose result dips below
/// −1e-12 in any coordinate is retried at half size, and accepted results
/// are clipped at zero. Fixed-step RK4 preserves linear invariants to
/// roundoff, which the drift figure confirms.
pub fn integrate_checkpoints(
    ev: &RateEvaluator,
    x0: &[f64],
    checkpoints: &[f64],
    dt: f64,
    conservation: &[Vec<f64>],
) -> Result<IntegrationResult, IntegrateError> {
    assert!(checkpoints.windows(2).all(|w| w[0] < w[1]), "checkpoints must increase");
    assert!(dt > 0.0);
    let clamp = |x: &[f64]| -> Vec<f64> { x.iter().map(|&v| v.max(0.0)).collect() };
    let rk4 = |x: &[f64], h: f64| -> Vec<f64> {
        let k1 = ev.field(&clamp(x));
        let x2: Vec<f64> = x.iter().zip(&k1).map(|(a, k)| a + 0.5 * h * k).collect();
        let k2 = ev.field(&clamp(&x2));
        let x3: Vec<f64> = x.iter().zip(&k2).map(|(a, k)| a + 0.5 * h * k).collect();
        let k3 = ev.field(&clamp(&x3));
        let x4: Vec<f64> = x.iter().zip(&k3).map(|(a, k)| a + h * k).collect();
        let k4 = ev.field(&clamp(&x4));
        (0..x.len())
            .map(|i| x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
            .collect()
    };
    let initial_invariants: Vec<f64> = conservation.iter().map(|c| dotf(c, x0)).collect();
    let mut x = x0.to_vec();
    let mut t = 0.0;
    let mut drift = 0.0_f64;
    let mut min_coord = x.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut halvings = 0usize;
    let mut states = Vec::with_capacity(checkpoints.len());
    for &target in checkpoints {
        while t < target - 1e-15 * target.max(1.0) {
            let mut h = dt.min(target - t);
            let next = loop {
                let cand = rk4(&x, h);
                if cand.iter().any(|v| !v.is_finite()) {
                    return Err(IntegrateError::NonFinite { t });
                }
                if cand.iter().all(|&v| v >= -1e-12) {
                    break cand;
                }
                h *= 0.5;
                halvings += 1;
                if h < 1e-12 * dt {
                    return Err(IntegrateError::StepUnderflow { t });
                }
            };
            x = next.iter().map(|&v| v.max(0.0)).collect();
            t += h;
            min_coord = x.iter().cloned().fold(min_coord, f64::min);
            for (c, &i0) in conservation.iter().zip(&initial_invariants) {
                drift = drift.max((dotf(c, &x) - i0).abs());
            }
        }
        states.push(x.clone());
    }
    Ok(IntegrationResult {
        states,
        conservation_drift: drift,
        min_coordinate: min_coord,
        halvings,
    })
}

fn dotf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Conservation laws of the network as f64 row vectors.
pub fn conservation_rows(net: &ReactionNetwork) -> Vec<Vec<f64>> {
    net.gamma
        .left_null_space()
        .iter()
        .map(|c| c.iter().map(q_to_f64).collect())
        .collect()
}

// ---------------------------------------------------------------------------
// Weak contractivity along trajectories
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct ContractivityReport {
    pub pairs_requested: usize,
    pub pairs_checked: usize,
    pub pairs_discarded: usize,
    /// Largest positive jump d(t_{k+1}) − d(t_k) seen, 0 if none.
    pub max_increase: f64,
    /// Smallest relative total decrease (d(0) − d(T)) / d(0) over pairs.
    pub min_relative_decrease: f64,
    /// Pairs where the plain Euclidean distance increased somewhere — shown
    /// for contrast; the cone norm is the one under test.
    pub euclidean_nonmonotone_pairs: usize,
    pub pass: bool,
    pub notes: Vec<String>,
}

/// Integrates sampled compatible pairs and checks that the cone-norm
/// distance never increases (within `tol`) and shrinks overall.
#[allow(clippy::too_many_arguments)]
pub fn contractivity_check<R: Rng>(
    net: &ReactionNetwork,
    ball: &NormBall,
    n_pairs: usize,
    t_end: f64,
    n_checkpoints: usize,
    dt: f64,
    rng: &mut R,
    tol: f64,
) -> Result<ContractivityReport, BallError> {
    let checkpoints: Vec<f64> =
        (1..=n_checkpoints).map(|k| t_end * k as f64 / n_checkpoints as f64).collect();
    let conservation = conservation_rows(net);
    let anchor: Vec<Q> = vec![crate::rational::qi(1); net.n_species()];
    let cls = compat_class(net, &anchor);
    let mut checked = 0;
    let mut discarded = 0;
    let mut max_increase = 0.0_f64;
    let mut min_rel_decrease = f64::INFINITY;
    let mut euclid_bad = 0;
    let mut notes = Vec::new();
    let mut attempts = 0;
    while checked < n_pairs && attempts < 8 * n_pairs {
        attempts += 1;
        let spec = KineticsSpec::random(net, rng, None);
        let ev = RateEvaluator::new(net, &spec).expect("random kinetics are valid");
        let Ok((x0q, y0q)) = crate::network::sample_compatible_pair(&cls, net, rng) else {
            discarded += 1;
            continue;
        };
        let x0: Vec<f64> = x0q.iter().map(q_to_f64).collect();
        let y0: Vec<f64> = y0q.iter().map(q_to_f64).collect();
        let (Ok(tx), Ok(ty)) = (
            integrate_checkpoints(&ev, &x0, &checkpoints, dt, &conservation),
            integrate_checkpoints(&ev, &y0, &checkpoints, dt, &conservation),
        ) else {
            discarded += 1;
            notes.push("integration failure; pair discarded".into());
            continue;
        };
        if tx.min_coordinate < BOUNDARY_MARGIN || ty.min_coordinate < BOUNDARY_MARGIN {
            discarded += 1;
            notes.push("trajectory grazed the boundary; pair discarded".into());
            continue;
        }
        let d0 = ball.distance(&x0, &y0)?;
        if d0 <= 0.0 {
            discarded += 1;
            continue;
        }
        let mut prev = d0;
        let mut prev_euclid = euclidean(&x0, &y0);
        let mut euclid_up = false;
        for (sx, sy) in tx.states.iter().zip(&ty.states) {
            let d = ball.distance(sx, sy)?;
            max_increase = max_increase.max(d - prev - tol * prev.max(1.0));
            let e = euclidean(sx, sy);
            if e > prev_euclid + tol * prev_euclid.max(1.0) {
                euclid_up = true;
            }
            prev = d;
            prev_euclid = e;
        }
        if euclid_up {
            euclid_bad += 1;
        }
        min_rel_decrease = min_rel_decrease.min((d0 - prev) / d0);
        checked += 1;
    }
    let pass = checked == n_pairs
        && max_increase <= 0.0
        && min_rel_decrease >= CONTRACTIVITY_DECREASE;
    Ok(ContractivityReport {
        pairs_requested: n_pairs,
        pairs_checked: checked,
        pairs_discarded: discarded,
        max_increase: max_increase.max(0.0),
        min_relative_decrease: min_rel_decrease,
        euclidean_nonmonotone_pairs: euclid_bad,
        pass,
        notes,
    })
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

// ---------------------------------------------------------------------------
// Convergence within a compatibility class
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    /// A strictly positive conservation vector exists, so classes are
    /// compact and trajectories stay bounded.
    pub classes_compact: bool,
    pub n_starts: usize,
    /// ∞-norm diameter of the cluster of final states.
    pub final_diameter: f64,
    /// Worst ‖ΓR(x_final)‖∞ over the starts.
    pub max_residual: f64,
    pub pass: bool,
}

/// Integrates several starts from one compatibility class to a long horizon
/// and checks they cluster at a common equilibrium.
#[allow(clippy::too_many_arguments)]
pub fn convergence_check<R: Rng>(
    net: &ReactionNetwork,
    spec: &KineticsSpec,
    n_starts: usize,
    t_end: f64,
    dt: f64,
    rng: &mut R,
    diameter_tol: f64,
    residual_tol: f64,
) -> Result<ConvergenceReport, IntegrateError> {
    let compact = positive_flux_vector(&net.gamma.transpose()).is_some();
    let ev = RateEvaluator::new(net, spec).expect("kinetics validated by caller");
    let conservation = conservation_rows(net);
    // One anchor, then starts = anchor + Γw with w shrunk until positive.
    let n = net.n_species();
    let anchor: Vec<Q> = (0..n).map(|_| rational_in_range(rng, 1.0, 3.0)).collect();
    let mut starts: Vec<Vec<f64>> = vec![anchor.iter().map(q_to_f64).collect()];
    while starts.len() < n_starts {
        let mut w: Vec<Q> =
            (0..net.n_reactions()).map(|_| rational_in_range(rng, -0.5, 0.5)).collect();
        let mut placed = false;
        for _ in 0..12 {
            let delta = net.gamma.mul_vec(&w);
            let cand: Vec<Q> = anchor.iter().zip(&delta).map(|(a, d)| a + d).collect();
            if cand.iter().all(|v| *v >= crate::rational::qr(1, 20)) {
                starts.push(cand.iter().map(q_to_f64).collect());
                placed = true;
                break;
            }
            for wi in w.iter_mut() {
                *wi = &*wi / crate::rational::qi(2);
            }
        }
        if !placed {
            starts.push(starts[0].clone()); // degenerate fallback, still valid
        }
    }
    let checkpoints = vec![t_end];
    let mut finals = Vec::new();
    for s in &starts {
        let res = integrate_checkpoints(&ev, s, &checkpoints, dt, &conservation)?;
        finals.push(res.states[0].clone());
    }
    let mut diameter = 0.0_f64;
    for i in 0..finals.len() {
        for j in i + 1..finals.len() {
            let d = finals[i]
                .iter()
                .zip(&finals[j])
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            diameter = diameter.max(d);
        }
    }
    let max_residual = finals
        .iter()
        .map(|x| ev.field(x).iter().map(|v| v.abs()).fold(0.0, f64::max))
        .fold(0.0, f64::max);
    Ok(ConvergenceReport {
        classes_compact: compact,
        n_starts: starts.len(),
        final_diameter: diameter,
        max_residual,
        pass: compact && diameter <= diameter_tol && max_residual <= residual_tol,
    })
}
