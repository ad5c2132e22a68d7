//! Γ = P·N·D factorization over exact rationals, plus the structural
//! classification that decides which cone construction applies.
//!
//! The factorization proceeds in three stages, each with its own rejection:
//! row coordinate-equivalence classes give the columns of P; a rank check
//! within each class guards the construction; a bipartite constraint
//! propagation rescales the middle factor to entries in {−1, 0, 1}; finally
//! the middle factor must have at most two nonzeros per column or per row.

use crate::graphs::{ri_graph, strongly_connected};
use crate::matrix::QMatrix;
use crate::network::{is_non_catalytic, ReactionNetwork};
use crate::rational::{q_to_string, sgn, Q};
use num::{One, Signed, Zero};
use serde::Serialize;

/// Partition of Γ's rows into coordinate-equivalence classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowPartition {
    /// Row-index blocks, ordered by smallest member; members ascending.
    /// Zero rows are excluded.
    pub blocks: Vec<Vec<usize>>,
    /// Per block: the lowest-index column of Γ whose support covers it.
    pub representative: Vec<usize>,
    /// Rows of Γ that are identically zero (pure catalysts); they get a
    /// zero row in P and no block.
    pub zero_rows: Vec<usize>,
}

/// Two rows are coordinate-equivalent when they have the same nonzero column
/// support and the sign of the entry product is constant across that support.
pub fn rows_equivalent(gamma: &QMatrix, i: usize, j: usize) -> bool {
    let support = |r: usize| -> Vec<usize> {
        (0..gamma.cols).filter(|&c| !gamma.get(r, c).is_zero()).collect()
    };
    let si = support(i);
    if si != support(j) {
        return false;
    }
    let prods: Vec<i32> = si.iter().map(|&c| sgn(gamma.get(i, c)) * sgn(gamma.get(j, c))).collect();
    prods.windows(2).all(|w| w[0] == w[1])
}

pub fn row_equivalence(gamma: &QMatrix) -> RowPartition {
    let n = gamma.rows;
    let is_zero_row = |i: usize| (0..gamma.cols).all(|c| gamma.get(i, c).is_zero());
    let mut assigned = vec![false; n];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut zero_rows = Vec::new();
    for i in 0..n {
        if assigned[i] {
            continue;
        }
        assigned[i] = true;
        if is_zero_row(i) {
            zero_rows.push(i);
            continue;
        }
        let mut block = vec![i];
        for j in i + 1..n {
            if !assigned[j] && rows_equivalent(gamma, i, j) {
                block.push(j);
                assigned[j] = true;
            }
        }
        blocks.push(block);
    }
    let representative = blocks
        .iter()
        .map(|b| {
            (0..gamma.cols)
                .find(|&c| !gamma.get(b[0], c).is_zero())
                .expect("blocks contain no zero rows")
        })
        .collect();
    RowPartition { blocks, representative, zero_rows }
}

/// Stage at which a factorization attempt was rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Stage {
    RankWithinClass,
    InconsistentScaling,
    Membership,
}

#[derive(Debug, thiserror::Error)]
#[error("no factorization: {stage:?}")]
pub struct NoFactorization {
    pub stage: Stage,
}

/// Builds P′ (one column per block) and N′ with P′N′ = Γ exactly.
///
/// Each P′ column copies the representative column's entries on the block's
/// rows, sign-normalized so the last entry of the block is positive; the
/// rank-1 structure of each block is what makes N′ well defined.
pub fn build_p_prime(
    gamma: &QMatrix,
    part: &RowPartition,
) -> Result<(QMatrix, QMatrix), NoFactorization> {
    let r = part.blocks.len();
    let mut p = QMatrix::zeros(gamma.rows, r);
    let mut n = QMatrix::zeros(r, gamma.cols);
    for (b, block) in part.blocks.iter().enumerate() {
        let rep = part.representative[b];
        let last = *block.last().unwrap();
        let flip = gamma.get(last, rep).is_negative();
        let col: Vec<Q> = block
            .iter()
            .map(|&i| {
                let v = gamma.get(i, rep).clone();
                if flip {
                    -v
                } else {
                    v
                }
            })
            .collect();
        for (&i, v) in block.iter().zip(&col) {
            p.set(i, b, v.clone());
        }
        // N′ entry per column: the proportionality factor of the block's
        // rows against the P′ column; failure of proportionality means the
        // block's row submatrix has rank ≥ 2.
        let anchor = block[0];
        for j in 0..gamma.cols {
            let lead = gamma.get(anchor, j);
            if lead.is_zero() {
                // equal supports within a block: all rows must vanish here
                if block.iter().any(|&i| !gamma.get(i, j).is_zero()) {
                    return Err(NoFactorization { stage: Stage::RankWithinClass });
                }
                continue;
            }
            let alpha = lead / &col[0];
            for (&i, pv) in block.iter().zip(&col) {
                if gamma.get(i, j) != &(&alpha * pv) {
                    return Err(NoFactorization { stage: Stage::RankWithinClass });
                }
            }
            n.set(b, j, alpha);
        }
    }
    debug_assert_eq!(p.mul(&n), *gamma);
    Ok((p, n))
}

/// Finds positive diagonal D1, D2 with D1·N′·D2 having entries in {−1,0,1}.
///
/// Propagates |entry|·d1ᵢ·d2ⱼ = 1 constraints by BFS over the nonzero
/// pattern; each connected component is anchored at its first row with
/// d1 = 1. Returns (diag of D1, N, diag of D2).
pub fn rescale_to_alignment(
    nprime: &QMatrix,
) -> Result<(Vec<Q>, QMatrix, Vec<Q>), NoFactorization> {
    let (r, m) = (nprime.rows, nprime.cols);
    let mut d1: Vec<Option<Q>> = vec![None; r];
    let mut d2: Vec<Option<Q>> = vec![None; m];
    for anchor in 0..r {
        if d1[anchor].is_some() {
            continue;
        }
        d1[anchor] = Some(Q::one());
        // queue entries: (is_row, index)
        let mut queue = std::collections::VecDeque::from([(true, anchor)]);
        while let Some((is_row, idx)) = queue.pop_front() {
            if is_row {
                let di = d1[idx].clone().unwrap();
                for j in 0..m {
                    let e = nprime.get(idx, j);
                    if e.is_zero() {
                        continue;
                    }
                    let need = Q::one() / (&di * e.abs());
                    match &d2[j] {
                        None => {
                            d2[j] = Some(need);
                            queue.push_back((false, j));
                        }
                        Some(have) if *have != need => {
                            return Err(NoFactorization { stage: Stage::InconsistentScaling })
                        }
                        _ => {}
                    }
                }
            } else {
                let dj = d2[idx].clone().unwrap();
                for i in 0..r {
                    let e = nprime.get(i, idx);
                    if e.is_zero() {
                        continue;
                    }
                    let need = Q::one() / (&dj * e.abs());
                    match &d1[i] {
                        None => {
                            d1[i] = Some(need);
                            queue.push_back((true, i));
                        }
                        Some(have) if *have != need => {
                            return Err(NoFactorization { stage: Stage::InconsistentScaling })
                        }
                        _ => {}
                    }
                }
            }
        }
    }
    let d1: Vec<Q> = d1.into_iter().map(|x| x.unwrap()).collect();
    // A column untouched by any row would be a zero column, excluded upstream.
    let d2: Vec<Q> = d2.into_iter().map(|x| x.expect("no zero columns")).collect();
    let mut n = QMatrix::zeros(r, m);
    for i in 0..r {
        for j in 0..m {
            let e = nprime.get(i, j);
            if !e.is_zero() {
                let scaled = &d1[i] * e * &d2[j];
                debug_assert!(scaled.abs().is_one());
                n.set(i, j, scaled);
            }
        }
    }
    Ok((d1, n, d2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Membership {
    /// ≤ 2 nonzeros per column.
    pub in_s: bool,
    /// ≤ 2 nonzeros per row.
    pub in_st: bool,
}

pub fn membership(n: &QMatrix) -> Membership {
    let col_counts = (0..n.cols)
        .all(|j| (0..n.rows).filter(|&i| !n.get(i, j).is_zero()).count() <= 2);
    let row_counts = (0..n.rows)
        .all(|i| (0..n.cols).filter(|&j| !n.get(i, j).is_zero()).count() <= 2);
    Membership { in_s: col_counts, in_st: row_counts }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NClass {
    S,
    STranspose,
    Both,
}

#[derive(Debug, Clone)]
pub struct PNDFactorization {
    /// n × r, at most one nonzero per row, no zero column.
    pub p: QMatrix,
    /// r × m with entries in {−1, 0, 1}.
    pub n: QMatrix,
    /// Diagonal of the positive m × m matrix D.
    pub d: Vec<Q>,
    pub n_class: NClass,
    pub partition: RowPartition,
}

impl PNDFactorization {
    /// Reassembles P·N·D (used by tests to assert exact equality with Γ).
    pub fn product(&self) -> QMatrix {
        let mut nd = self.n.clone();
        for i in 0..nd.rows {
            for j in 0..nd.cols {
                let v = nd.get(i, j) * &self.d[j];
                nd.set(i, j, v);
            }
        }
        self.p.mul(&nd)
    }
}

/// Full factorization pipeline: Γ = P·N·D or a stage-tagged rejection.
pub fn pnd_factorize(gamma: &QMatrix) -> Result<PNDFactorization, NoFactorization> {
    let part = row_equivalence(gamma);
    let (p_prime, n_prime) = build_p_prime(gamma, &part)?;
    let (d1, n, d2) = rescale_to_alignment(&n_prime)?;
    let mem = membership(&n);
    let n_class = match (mem.in_s, mem.in_st) {
        (true, true) => NClass::Both,
        (true, false) => NClass::S,
        (false, true) => NClass::STranspose,
        (false, false) => return Err(NoFactorization { stage: Stage::Membership }),
    };
    // Γ = P′N′ = (P′ D1⁻¹)(D1 N′ D2)(D2⁻¹) = P N D.
    let mut p = p_prime;
    for b in 0..p.cols {
        for i in 0..p.rows {
            if !p.get(i, b).is_zero() {
                let v = p.get(i, b) / &d1[b];
                p.set(i, b, v);
            }
        }
    }
    let d: Vec<Q> = d2.iter().map(|x| Q::one() / x).collect();
    let fact = PNDFactorization { p, n, d, n_class, partition: part };
    debug_assert_eq!(fact.product(), *gamma);
    Ok(fact)
}

/// Alignment test: (1) a positive diagonal rescaling puts all entries in
/// {−1,0,1}; (2) two columns share at most one same-sign and one
/// opposite-sign coordinate; (3) each column has at most one nonzero
/// coordinate that is zero in every other column.
pub fn is_aligned(n: &QMatrix) -> bool {
    for j in 0..n.cols {
        let mags: Vec<Q> = (0..n.rows)
            .map(|i| n.get(i, j).abs())
            .filter(|x| !x.is_zero())
            .collect();
        if !mags.windows(2).all(|w| w[0] == w[1]) {
            return false;
        }
    }
    for a in 0..n.cols {
        for b in a + 1..n.cols {
            let mut same = 0;
            let mut opposite = 0;
            for i in 0..n.rows {
                let s = sgn(n.get(i, a)) * sgn(n.get(i, b));
                if s > 0 {
                    same += 1;
                } else if s < 0 {
                    opposite += 1;
                }
            }
            if same > 1 || opposite > 1 {
                return false;
            }
        }
    }
    for j in 0..n.cols {
        let private = (0..n.rows)
            .filter(|&i| {
                !n.get(i, j).is_zero() && (0..n.cols).all(|k| k == j || n.get(i, k).is_zero())
            })
            .count();
        if private > 1 {
            return false;
        }
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConeFamily {
    CrossPolytope,
    Simplex,
    Cube,
    SubsetSum,
    None,
}

#[derive(Debug, Clone, Serialize, Default)]
pub struct ClassFlags {
    /// Some positive diagonal D makes N·D type C.
    pub type_c: bool,
    /// N aligned, ≤2 nonzeros per row, independent columns.
    pub cubical: bool,
    /// N ∈ S with linearly dependent rows.
    pub type_i_core: bool,
    /// N with ≤2 nonzeros per row and dependent columns.
    pub type_a: bool,
    /// N aligned with ≤2 nonzeros per row.
    pub aligned_rows_le2: bool,
    /// N aligned with ≤2 nonzeros per column.
    pub aligned_cols_le2: bool,
}

#[derive(Debug, Clone)]
pub struct ClassificationReport {
    pub factorizable: bool,
    pub factorization: Option<PNDFactorization>,
    pub failure_stage: Option<Stage>,
    pub flags: ClassFlags,
    pub cone_family: ConeFamily,
    pub ri_strongly_connected: bool,
    pub non_catalytic: bool,
    pub theorem_applies: bool,
    pub notes: Vec<String>,
}

/// Diagonal that doubles every single-nonzero column of N, turning an
/// N ∈ S factor into a candidate type C matrix.
pub fn type_c_scaling(n: &QMatrix) -> Vec<Q> {
    (0..n.cols)
        .map(|j| {
            let nz = (0..n.rows).filter(|&i| !n.get(i, j).is_zero()).count();
            if nz == 1 {
                Q::from_integer(2.into())
            } else {
                Q::one()
            }
        })
        .collect()
}

/// Checks the type C conditions on N·diag(d): entries in {−2,…,2}, every
/// column ℓ₁-norm exactly 2, no zero rows.
pub fn is_type_c(n: &QMatrix, d: &[Q]) -> bool {
    let two = Q::from_integer(2.into());
    for j in 0..n.cols {
        let mut l1 = Q::zero();
        for i in 0..n.rows {
            let e = (n.get(i, j) * &d[j]).abs();
            if e > two {
                return false;
            }
            l1 = l1 + e;
        }
        if l1 != two {
            return false;
        }
    }
    (0..n.rows).any(|_| true) && (0..n.rows).all(|i| (0..n.cols).any(|j| !n.get(i, j).is_zero()))
}

/// Full structural classification per the factorization case split.
pub fn classify(net: &ReactionNetwork) -> ClassificationReport {
    let non_catalytic = is_non_catalytic(net);
    let ri_ok = strongly_connected(&ri_graph(net));
    let mut notes = Vec::new();
    match pnd_factorize(&net.gamma) {
        Err(e) => ClassificationReport {
            factorizable: false,
            factorization: None,
            failure_stage: Some(e.stage),
            flags: ClassFlags::default(),
            cone_family: ConeFamily::None,
            ri_strongly_connected: ri_ok,
            non_catalytic,
            theorem_applies: false,
            notes,
        },
        Ok(fact) => {
            let n = &fact.n;
            let mem = membership(n);
            let aligned = is_aligned(n);
            let rows_le2 =
                (0..n.rows).all(|i| (0..n.cols).filter(|&j| !n.get(i, j).is_zero()).count() <= 2);
            let cols_independent = n.rank() == n.cols;
            let rows_independent = n.rank() == n.rows;
            let dc = type_c_scaling(n);
            let type_c = mem.in_s && is_type_c(n, &dc);
            let flags = ClassFlags {
                type_c,
                cubical: aligned && rows_le2 && cols_independent,
                type_i_core: mem.in_s && !rows_independent,
                type_a: rows_le2 && !cols_independent,
                aligned_rows_le2: aligned && mem.in_st,
                aligned_cols_le2: aligned && mem.in_s,
            };
            // Type C matrices whose rows are independent give the full
            // signed-basis set; dependent rows give a simplex.
            let cone_family = if flags.type_c {
                let nd_rows_independent = {
                    let mut nd = n.clone();
                    for j in 0..nd.cols {
                        for i in 0..nd.rows {
                            let v = nd.get(i, j) * &dc[j];
                            nd.set(i, j, v);
                        }
                    }
                    nd.rank() == nd.rows
                };
                if nd_rows_independent {
                    ConeFamily::CrossPolytope
                } else {
                    ConeFamily::Simplex
                }
            } else if flags.cubical {
                ConeFamily::Cube
            } else if flags.type_a && aligned {
                ConeFamily::SubsetSum
            } else {
                ConeFamily::None
            };
            if flags.cubical && !mem.in_s {
                notes.push(
                    "cubical superclass established; full type S membership is not decided".into(),
                );
            }
            if !aligned && rows_le2 {
                notes.push("middle factor has ≤2 nonzeros per row but is not aligned".into());
            }
            if cone_family == ConeFamily::None {
                notes.push(
                    "weak contractivity holds, but no explicit cone construction is \
                     available for this factor shape"
                        .into(),
                );
            }
            // The main theorem needs only the factorization, non-catalyticity,
            // and RI strong connectivity; the cone family governs which
            // explicit certificate can be built, not applicability.
            let theorem_applies = non_catalytic && ri_ok;
            ClassificationReport {
                factorizable: true,
                factorization: Some(fact),
                failure_stage: None,
                flags,
                cone_family,
                ri_strongly_connected: ri_ok,
                non_catalytic,
                theorem_applies,
                notes,
            }
        }
    }
}

impl ClassificationReport {
    pub fn to_json_value(&self) -> serde_json::Value {
        let fact = self.factorization.as_ref().map(|f| {
            serde_json::json!({
                "P": matrix_strings(&f.p),
                "N": matrix_strings(&f.n),
                "D": f.d.iter().map(q_to_string).collect::<Vec<_>>(),
                "n_class": format!("{:?}", f.n_class),
            })
        });
        serde_json::json!({
            "factorizable": self.factorizable,
            "stage": self.failure_stage.map(|s| format!("{s:?}")),
            "factorization": fact,
            "flags": self.flags,
            "cone_family": self.cone_family,
            "ri_strongly_connected": self.ri_strongly_connected,
            "non_catalytic": self.non_catalytic,
            "theorem_applies": self.theorem_applies,
            "notes": self.notes,
        })
    }
}

pub fn matrix_strings(m: &QMatrix) -> Vec<Vec<String>> {
    (0..m.rows).map(|i| (0..m.cols).map(|j| q_to_string(m.get(i, j))).collect()).collect()
}
