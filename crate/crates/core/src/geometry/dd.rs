//! Double description: from halfspaces to extreme rays, over exact rationals.
//!
//! Maintains a minimal (lineality, rays) pair and inserts halfspaces one at a
//! time. Adjacency of positive/negative rays is decided with the standard
//! combinatorial test on tight-constraint sets, which stays valid because the
//! representation is minimal after every insertion.

use crate::matrix::dot;
use crate::rational::Q;
use num::bigint::BigInt;
use num::{Integer, One, Signed, Zero};

/// A cone as lineality space plus extreme rays, both exact.
#[derive(Debug, Clone)]
pub struct DdCone {
    pub rays: Vec<Vec<Q>>,
    pub lineality: Vec<Vec<Q>>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum DdError {
    #[error("polytope is empty")]
    EmptyPolytope,
    #[error("polytope is unbounded")]
    Unbounded,
}

/// Bitset over halfspace indices tight at a ray.
#[derive(Clone, PartialEq, Eq)]
struct TightSet(Vec<u64>);

impl TightSet {
    fn new(n: usize) -> Self {
        TightSet(vec![0; n.div_ceil(64)])
    }
    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn intersect(&self, other: &TightSet) -> TightSet {
        TightSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }
    fn is_superset(&self, other: &TightSet) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & b == *b)
    }
}

struct Ray {
    v: Vec<Q>,
    tight: TightSet,
}

/// Scales a rational vector to a primitive integer vector (same orientation).
pub fn normalize_ray(v: &[Q]) -> Vec<Q> {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * &lcm / x.denom()).collect();
    let mut gcd = BigInt::zero();
    for x in &ints {
        gcd = gcd.gcd(x);
    }
    if gcd.is_zero() {
        return v.to_vec();
    }
    ints.into_iter().map(|x| Q::from_integer(x / &gcd)).collect()
}

/// Extreme rays and lineality of {x ∈ ℝ^dim : ⟨a, x⟩ ≥ 0 for each halfspace a}.
pub fn extreme_rays(halfspaces: &[Vec<Q>], dim: usize) -> DdCone {
    let nh = halfspaces.len();
    let mut lineality: Vec<Vec<Q>> = (0..dim)
        .map(|i| {
            let mut e = vec![Q::zero(); dim];
            e[i] = Q::one();
            e
        })
        .collect();
    let mut rays: Vec<Ray> = Vec::new();

    for (h, a) in halfspaces.iter().enumerate() {
        debug_assert_eq!(a.len(), dim);
        // Case 1: the halfspace cuts the lineality space.
        if let Some(pos) = lineality.iter().position(|l| !dot(a, l).is_zero()) {
            let mut l0 = lineality.remove(pos);
            let mut s0 = dot(a, &l0);
            if s0.is_negative() {
                for x in l0.iter_mut() {
                    *x = -x.clone();
                }
                s0 = -s0;
            }
            for l in lineality.iter_mut() {
                let f = dot(a, l) / &s0;
                if !f.is_zero() {
                    for (x, y) in l.iter_mut().zip(&l0) {
                        *x = &*x - &f * y;
                    }
                }
            }
            for r in rays.iter_mut() {
                let f = dot(a, &r.v) / &s0;
                if !f.is_zero() {
                    for (x, y) in r.v.iter_mut().zip(&l0) {
                        *x = &*x - &f * y;
                    }
                    r.v = normalize_ray(&r.v);
                }
                r.tight.insert(h);
            }
            let mut tight = TightSet::new(nh);
            // l0 was in the lineality space, hence tight on every earlier cut.
            for e in 0..h {
                tight.insert(e);
            }
            rays.push(Ray { v: normalize_ray(&l0), tight });
            continue;
        }

        // Case 2: partition rays by the sign of ⟨a, r⟩.
        let sign: Vec<i32> = rays.iter().map(|r| crate::rational::sgn(&dot(a, &r.v))).collect();
        if sign.iter().all(|&s| s >= 0) {
            for (r, &s) in rays.iter_mut().zip(&sign) {
                if s == 0 {
                    r.tight.insert(h);
                }
            }
            continue;
        }
        let mut next: Vec<Ray> = Vec::new();
        let mut combos: Vec<Ray> = Vec::new();
        for (i, r) in rays.iter().enumerate() {
            if sign[i] > 0 {
                continue;
            }
            if sign[i] == 0 {
                continue;
            }
            // negative ray: pair with each adjacent positive ray
            for (j, p) in rays.iter().enumerate() {
                if sign[j] <= 0 {
                    continue;
                }
                let common = r.tight.intersect(&p.tight);
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(k, other)| k == i || k == j || !other.tight.is_superset(&common));
                if !adjacent {
                    continue;
                }
                let ap = dot(a, &p.v);
                let an = dot(a, &r.v); // negative
                let w: Vec<Q> = p
                    .v
                    .iter()
                    .zip(&r.v)
                    .map(|(pv, nv)| &ap * nv - &an * pv)
                    .collect();
                let mut tight = common.clone();
                tight.insert(h);
                combos.push(Ray { v: normalize_ray(&w), tight });
            }
        }
        for (i, r) in rays.into_iter().enumerate() {
            if sign[i] > 0 {
                next.push(r);
            } else if sign[i] == 0 {
                let mut r = r;
                r.tight.insert(h);
                next.push(r);
            }
        }
        next.extend(combos);
        // Deduplicate identical directions (can arise from parallel combos).
        let mut seen: Vec<Vec<Q>> = Vec::new();
        rays = next
            .into_iter()
            .filter(|r| {
                if seen.contains(&r.v) {
                    false
                } else {
                    seen.push(r.v.clone());
                    true
                }
            })
            .collect();
    }

    DdCone {
        rays: rays.into_iter().map(|r| r.v).collect(),
        lineality,
    }
}

/// Vertices of the polytope {t ∈ ℝ^d : A t ≥ c}, via homogenization.
pub fn polytope_vertices(a_rows: &[Vec<Q>], c: &[Q]) -> Result<Vec<Vec<Q>>, DdError> {
    assert_eq!(a_rows.len(), c.len());
    let d = a_rows.first().map_or(0, |r| r.len());
    let mut halfspaces: Vec<Vec<Q>> = Vec::with_capacity(a_rows.len() + 1);
    for (row, ci) in a_rows.iter().zip(c) {
        let mut h = row.clone();
        h.push(-ci.clone());
        halfspaces.push(h);
    }
    let mut top = vec![Q::zero(); d + 1];
    top[d] = Q::one();
    halfspaces.push(top);

    let cone = extreme_rays(&halfspaces, d + 1);
    if !cone.lineality.is_empty() {
        return Err(DdError::Unbounded);
    }
    let mut vertices = Vec::new();
    for ray in &cone.rays {
        let s = &ray[d];
        if s.is_zero() {
            if ray.iter().any(|x| !x.is_zero()) {
                return Err(DdError::Unbounded);
            }
        } else {
            vertices.push(ray[..d].iter().map(|x| x / s).collect());
        }
    }
    if vertices.is_empty() {
        return Err(DdError::EmptyPolytope);
    }
    Ok(vertices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;

    fn sorted(mut v: Vec<Vec<Q>>) -> Vec<Vec<Q>> {
        v.sort_by_key(|r| r.iter().map(crate::rational::q_to_string).collect::<Vec<_>>());
        v
    }

    #[test]
    fn orthant_is_self_described() {
        // {x ≥ 0, y ≥ 0} → rays e1, e2
        let hs = vec![vec![qi(1), qi(0)], vec![qi(0), qi(1)]];
        let cone = extreme_rays(&hs, 2);
        assert!(cone.lineality.is_empty());
        assert_eq!(
            sorted(cone.rays),
            sorted(vec![vec![qi(1), qi(0)], vec![qi(0), qi(1)]])
        );
    }

    #[test]
    fn halfplane_keeps_lineality() {
        let hs = vec![vec![qi(1), qi(0)]];
        let cone = extreme_rays(&hs, 2);
        assert_eq!(cone.lineality.len(), 1);
        assert_eq!(cone.rays.len(), 1);
    }

    #[test]
    fn three_dim_cross_section_counts() {
        // Facets of the cone over a square: x3 ≥ |x1|, x3 ≥ |x2| → 4 rays.
        let hs = vec![
            vec![qi(1), qi(0), qi(1)],
            vec![qi(-1), qi(0), qi(1)],
            vec![qi(0), qi(1), qi(1)],
            vec![qi(0), qi(-1), qi(1)],
        ];
        let cone = extreme_rays(&hs, 3);
        assert!(cone.lineality.is_empty());
        assert_eq!(cone.rays.len(), 4);
    }

    #[test]
    fn square_vertices() {
        // 0 ≤ x ≤ 1, 0 ≤ y ≤ 1
        let a = vec![
            vec![qi(1), qi(0)],
            vec![qi(-1), qi(0)],
            vec![qi(0), qi(1)],
            vec![qi(0), qi(-1)],
        ];
        let c = vec![qi(0), qi(-1), qi(0), qi(-1)];
        let verts = polytope_vertices(&a, &c).unwrap();
        assert_eq!(verts.len(), 4);
    }

    #[test]
    fn unbounded_polytope_reported() {
        let a = vec![vec![qi(1), qi(0)], vec![qi(0), qi(1)]];
        let c = vec![qi(0), qi(0)];
        assert_eq!(polytope_vertices(&a, &c).unwrap_err(), DdError::Unbounded);
    }

    #[test]
    fn empty_polytope_reported() {
        // x ≥ 1 and −x ≥ 0 cannot both hold
        let a = vec![vec![qi(1)], vec![qi(-1)]];
        let c = vec![qi(1), qi(0)];
        assert_eq!(polytope_vertices(&a, &c).unwrap_err(), DdError::EmptyPolytope);
    }
}
