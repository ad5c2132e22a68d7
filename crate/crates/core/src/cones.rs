//! Viable sets in the factor space and the lifted cones they generate.
//!
//! Each cone family comes with a direct construction of its viable set — a
//! finite set of integer vectors closed under the permissible reaction
//! operations. Constructions are always re-checked by an independent closure
//! audit before any cone is built from them, so a wrong family-specific
//! shortcut fails loudly instead of producing a bad cone. The cone itself is
//! the conic hull of the viable set's extreme points lifted by an extra
//! coordinate fixed to 1, mapped into species space through P.

use crate::factorize::{classify, ClassificationReport, ConeFamily, PNDFactorization, Stage};
use crate::geometry::dd::{extreme_rays, normalize_ray};
use crate::geometry::extreme::reduce_to_extreme;
use crate::geometry::lp::feasible_point;
use crate::graphs::{build_r_graph, orthant_sign_assignment};
use crate::matrix::{dot, rank_of_rows, QMatrix};
use crate::network::{permissible_ops, ReactionNetwork};
use crate::rational::{sgn, Q};
use num::{One, Zero};
use std::collections::{BTreeSet, VecDeque};

/// Hard cap on viable-set size during closure.
pub const CLOSURE_CAP: usize = 1 << 16;
/// Hard cap on the dimension of the cone's linear span.
pub const SPAN_DIM_CAP: usize = 12;
/// Above this many points, extreme-point reduction uses the f64 prefilter.
pub const EXTREME_EXACT_CAP: usize = 400;

#[derive(Debug, thiserror::Error)]
pub enum ConeError {
    #[error("network does not factor (rejected at {0:?})")]
    NotFactorizable(Stage),
    #[error("no supported cone family for this factorization")]
    NoConeFamily,
    #[error("viable-set closure exceeded {cap} vectors")]
    ClosureCap { cap: usize },
    #[error("viable set is not closed: {0}")]
    ClosureAudit(String),
    #[error("no consistent column sign assignment; inconsistent cycle {0:?}")]
    SignAssignment(Vec<usize>),
    #[error("cone span dimension {dim} exceeds cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("cone is not pointed")]
    NotPointed,
    #[error("degenerate construction: {0}")]
    Degenerate(String),
}

/// A finite set of vectors in the factor row space, closed under the
/// permissible operations of the factor network.
#[derive(Debug, Clone)]
pub struct ViableSet {
    pub vectors: Vec<Vec<Q>>,
    pub family: ConeFamily,
    /// The set was replaced by its union with its negation.
    pub symmetrized: bool,
    /// Some closure operation moved along an irreversible reaction.
    pub irreversible_ops_used: bool,
    pub notes: Vec<String>,
}

fn unit(dim: usize, i: usize) -> Vec<Q> {
    let mut e = vec![Q::zero(); dim];
    e[i] = Q::one();
    e
}

/// Network whose stoichiometry is the factor matrix N; reactant/product
/// roles follow the signs of N and reversibility carries over column-wise.
pub fn factor_network(fact: &PNDFactorization, reversible: &[bool]) -> ReactionNetwork {
    let species = (0..fact.n.rows).map(|i| format!("y{}", i + 1)).collect();
    ReactionNetwork::from_gamma(species, fact.n.clone(), reversible.to_vec(), "factor".into())
        .expect("factor matrix has no zero rows or columns")
}

/// BFS closure of the seeds under permissible operations.
///
/// Returns the closed set (sorted, deterministic) and whether any operation
/// used an irreversible reaction.
pub fn viable_closure(
    seeds: &[Vec<Q>],
    net: &ReactionNetwork,
    cap: usize,
) -> Result<(Vec<Vec<Q>>, bool), ConeError> {
    let mut set: BTreeSet<Vec<Q>> = seeds.iter().cloned().collect();
    let mut queue: VecDeque<Vec<Q>> = set.iter().cloned().collect();
    let mut irrev = false;
    while let Some(v) = queue.pop_front() {
        let ops =
            permissible_ops(&v, net).map_err(|e| ConeError::Degenerate(e.to_string()))?;
        for op in ops {
            if !net.reactions[op.reaction].reversible {
                irrev = true;
            }
            if set.insert(op.result.clone()) {
                if set.len() > cap {
                    return Err(ConeError::ClosureCap { cap });
                }
                queue.push_back(op.result);
            }
        }
    }
    Ok((set.into_iter().collect(), irrev))
}

/// Independent closure audit: every member must be permissible and every
/// permissible operation from a member must land back in the set.
pub fn audit_closure(set: &[Vec<Q>], net: &ReactionNetwork) -> Result<bool, String> {
    let members: BTreeSet<&Vec<Q>> = set.iter().collect();
    let mut irrev = false;
    for v in set {
        let ops = permissible_ops(v, net).map_err(|e| e.to_string())?;
        for op in ops {
            if !net.reactions[op.reaction].reversible {
                irrev = true;
            }
            if !members.contains(&op.result) {
                return Err(format!(
                    "operation ±column {} escapes the set from {:?}",
                    op.reaction + 1,
                    v.iter().map(crate::rational::q_to_string).collect::<Vec<_>>()
                ));
            }
        }
    }
    Ok(irrev)
}

/// Viable set for a type C factor with dependent rows: the closure of a
/// single signed unit vector seeded on the first support row of column 1.
pub fn simplex_viable_set(net: &ReactionNetwork) -> Result<(Vec<Vec<Q>>, bool), ConeError> {
    let r = net.n_species();
    let seed_row = (0..r)
        .find(|&i| !net.gamma.get(i, 0).is_zero())
        .ok_or_else(|| ConeError::Degenerate("zero first column".into()))?;
    let (mut set, irrev) = viable_closure(&[unit(r, seed_row)], net, CLOSURE_CAP)?;
    // A ± pair in the closure means the set is direction-symmetric; complete
    // the symmetry and close again.
    let has_pair = set
        .iter()
        .any(|v| v.iter().any(|x| !x.is_zero()) && set.contains(&negate(v)));
    if has_pair {
        let mut seeds = set.clone();
        seeds.extend(set.iter().map(|v| negate(v)));
        let (closed, irrev2) = viable_closure(&seeds, net, CLOSURE_CAP)?;
        set = closed;
        return Ok((set, irrev || irrev2));
    }
    Ok((set, irrev))
}

fn negate(v: &[Q]) -> Vec<Q> {
    v.iter().map(|x| -x.clone()).collect()
}

/// Viable set for a type C factor with independent rows: all signed unit
/// vectors plus the origin (the origin absorbs single-nonzero columns).
pub fn cross_polytope_viable_set(r: usize) -> Vec<Vec<Q>> {
    let mut set = vec![vec![Q::zero(); r]];
    for i in 0..r {
        set.push(unit(r, i));
        set.push(negate(&unit(r, i)));
    }
    set
}

/// Viable set for a cubical factor: the image of the 0/1 cube, translated to
/// the corner determined by row sign uniformity (rows whose nonzero entries
/// all share a sign get the opposite sign; mixed rows get zero).
pub fn cubical_viable_set(n: &QMatrix) -> Result<Vec<Vec<Q>>, ConeError> {
    let m = n.cols;
    if m > 16 {
        return Err(ConeError::ClosureCap { cap: CLOSURE_CAP });
    }
    let mut v = vec![Q::zero(); n.rows];
    for i in 0..n.rows {
        let signs: Vec<i32> =
            (0..m).map(|j| sgn(n.get(i, j))).filter(|&s| s != 0).collect();
        if signs.iter().all(|&s| s == signs[0]) {
            v[i] = Q::from_integer((-signs[0]).into());
        }
    }
    let mut set = BTreeSet::new();
    for mask in 0u32..(1 << m) {
        let mut a = v.clone();
        for j in 0..m {
            if mask & (1 << j) != 0 {
                for i in 0..n.rows {
                    a[i] = &a[i] + n.get(i, j);
                }
            }
        }
        set.insert(a);
    }
    Ok(set.into_iter().collect())
}

/// Viable set for a dependent-column factor with ≤2 nonzeros per row: all
/// subset sums of the columns after flipping signs so that any two columns
/// sharing a row do so with opposite signs.
pub fn subset_sum_viable_set(n: &QMatrix) -> Result<Vec<Vec<Q>>, ConeError> {
    let m = n.cols;
    if m > 16 {
        return Err(ConeError::ClosureCap { cap: CLOSURE_CAP });
    }
    let g = build_r_graph(n);
    let sigma = orthant_sign_assignment(&g).map_err(|w| ConeError::SignAssignment(w.cycle))?;
    let cols: Vec<Vec<Q>> = (0..m)
        .map(|j| {
            (0..n.rows)
                .map(|i| {
                    if sigma[j] < 0 {
                        -n.get(i, j).clone()
                    } else {
                        n.get(i, j).clone()
                    }
                })
                .collect()
        })
        .collect();
    let mut set = BTreeSet::new();
    for mask in 0u32..(1 << m) {
        let mut a = vec![Q::zero(); n.rows];
        for (j, col) in cols.iter().enumerate() {
            if mask & (1 << j) != 0 {
                for i in 0..n.rows {
                    a[i] = &a[i] + &col[i];
                }
            }
        }
        set.insert(a);
    }
    Ok(set.into_iter().collect())
}

/// Builds and audits the viable set for a classified factorization.
pub fn viable_set(
    fact: &PNDFactorization,
    family: ConeFamily,
    reversible: &[bool],
) -> Result<ViableSet, ConeError> {
    let net = factor_network(fact, reversible);
    let mut notes = Vec::new();
    let (mut vectors, mut irrev) = match family {
        ConeFamily::Simplex => simplex_viable_set(&net)?,
        ConeFamily::CrossPolytope => (cross_polytope_viable_set(fact.n.rows), false),
        ConeFamily::Cube => (cubical_viable_set(&fact.n)?, false),
        ConeFamily::SubsetSum => (subset_sum_viable_set(&fact.n)?, false),
        ConeFamily::None => return Err(ConeError::NoConeFamily),
    };
    irrev |= audit_closure(&vectors, &net).map_err(ConeError::ClosureAudit)?;
    // When the origin is an extreme point of the set's hull, the cone built
    // from it would be one-sided along some direction of the stoichiometric
    // span; completing the set to its negation-symmetric hull fixes that and
    // keeps closure (operations commute with negation).
    let zero = vec![Q::zero(); fact.n.rows];
    let mut symmetrized = false;
    let ext = reduce_to_extreme(&vectors, EXTREME_EXACT_CAP);
    if ext.contains(&zero) {
        let mut set: BTreeSet<Vec<Q>> = vectors.iter().cloned().collect();
        set.extend(vectors.iter().map(|v| negate(v)));
        vectors = set.into_iter().collect();
        irrev |= audit_closure(&vectors, &net).map_err(ConeError::ClosureAudit)?;
        symmetrized = true;
        notes.push("origin was extreme; set completed to its negation-symmetric hull".into());
    }
    if irrev {
        notes.push("closure operations traverse irreversible reactions".into());
    }
    Ok(ViableSet { vectors, family, symmetrized, irreversible_ops_used: irrev, notes })
}

/// Appends the lift coordinate 1 to every point.
pub fn lift_points(points: &[Vec<Q>]) -> Vec<Vec<Q>> {
    points
        .iter()
        .map(|p| {
            let mut v = p.clone();
            v.push(Q::one());
            v
        })
        .collect()
}

/// Maps lifted factor-space vectors (a, s) to lifted species-space vectors
/// (P·a, s).
pub fn apply_p(p: &QMatrix, lifted: &[Vec<Q>]) -> Vec<Vec<Q>> {
    lifted
        .iter()
        .map(|v| {
            let (a, s) = v.split_at(v.len() - 1);
            let mut out = p.mul_vec(a);
            out.push(s[0].clone());
            out
        })
        .collect()
}

/// A pointed polyhedral cone given by extreme generators, with the extreme
/// rays of its dual (relative to the cone's linear span) and the
/// generator/dual orthogonality incidence.
#[derive(Debug, Clone)]
pub struct ConeRepr {
    pub generators: Vec<Vec<Q>>,
    pub dual_generators: Vec<Vec<Q>>,
    /// Basis of the linear span of the cone.
    pub span_basis: Vec<Vec<Q>>,
    /// incidence[i][k] ⇔ ⟨generators[i], dual_generators[k]⟩ = 0.
    pub incidence: Vec<Vec<bool>>,
    pub dim: usize,
}

impl ConeRepr {
    /// Exact membership x ∈ cone(generators), by rational feasibility LP.
    pub fn contains(&self, x: &[Q]) -> bool {
        let g = QMatrix::from_rows(self.generators.clone()).transpose();
        feasible_point(&g, x).is_some()
    }
}

/// Builds the cone representation from generators: span basis, dual extreme
/// rays by double description in span coordinates, and incidence.
pub fn cone_from_generators(generators: Vec<Vec<Q>>) -> Result<ConeRepr, ConeError> {
    if generators.is_empty() {
        return Err(ConeError::Degenerate("no generators".into()));
    }
    let dim = generators[0].len();
    let (rr, pivots) = QMatrix::from_rows(generators.clone()).rref();
    let span_basis: Vec<Vec<Q>> = (0..pivots.len()).map(|i| rr.row(i)).collect();
    let k = span_basis.len();
    if k > SPAN_DIM_CAP {
        return Err(ConeError::DimensionCap { dim: k, cap: SPAN_DIM_CAP });
    }
    // Dual cone within the span: {u : ⟨g, B u⟩ ≥ 0 for all generators g},
    // where y = Bᵀu ranges over the span.
    let halfspaces: Vec<Vec<Q>> = generators
        .iter()
        .map(|g| span_basis.iter().map(|b| dot(g, b)).collect())
        .collect();
    let dual_cone = extreme_rays(&halfspaces, k);
    if !dual_cone.lineality.is_empty() {
        return Err(ConeError::NotPointed);
    }
    let dual_generators: Vec<Vec<Q>> = dual_cone
        .rays
        .iter()
        .map(|u| {
            let mut y = vec![Q::zero(); dim];
            for (ul, b) in u.iter().zip(&span_basis) {
                for (yi, bi) in y.iter_mut().zip(b) {
                    *yi = &*yi + ul * bi;
                }
            }
            normalize_ray(&y)
        })
        .collect();
    // The dual spans the same space iff the primal cone is pointed in its
    // span (no line fits inside it).
    if rank_of_rows(&dual_generators) != k {
        return Err(ConeError::NotPointed);
    }
    let incidence = generators
        .iter()
        .map(|g| dual_generators.iter().map(|y| dot(g, y).is_zero()).collect())
        .collect();
    Ok(ConeRepr { generators, dual_generators, span_basis, incidence, dim })
}

/// The nonnegative orthant of ℝ^dim as a ConeRepr (self-dual); used as a
/// deliberately wrong cone in negative-control tests.
pub fn orthant_cone(dim: usize) -> ConeRepr {
    let generators: Vec<Vec<Q>> = (0..dim).map(|i| unit(dim, i)).collect();
    cone_from_generators(generators).expect("orthant is pointed and full-dimensional")
}

/// End-to-end cone construction for a network.
#[derive(Debug, Clone)]
pub struct ConeConstruction {
    pub classification: ClassificationReport,
    pub viable: ViableSet,
    /// Extreme generators in the lifted factor space (dimension r + 1).
    pub factor_generators: Vec<Vec<Q>>,
    /// The cone in the lifted species space (dimension n + 1).
    pub cone: ConeRepr,
}

pub fn build_cone(net: &ReactionNetwork) -> Result<ConeConstruction, ConeError> {
    let classification = classify(net);
    let Some(fact) = classification.factorization.clone() else {
        return Err(ConeError::NotFactorizable(
            classification.failure_stage.expect("unfactorizable reports carry a stage"),
        ));
    };
    let family = classification.cone_family;
    if family == ConeFamily::None {
        return Err(ConeError::NoConeFamily);
    }
    let viable = viable_set(&fact, family, &net.reversible())?;
    let extreme = reduce_to_extreme(&viable.vectors, EXTREME_EXACT_CAP);
    let factor_generators = lift_points(&extreme);
    let species_generators = apply_p(&fact.p, &factor_generators);
    let cone = cone_from_generators(species_generators)?;
    Ok(ConeConstruction { classification, viable, factor_generators, cone })
}
