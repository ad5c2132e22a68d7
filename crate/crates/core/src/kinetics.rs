//! Mass-action kinetics and its analytic Jacobian.
//!
//! The rate laws follow the standing kinetic assumptions: a reversible
//! reaction has rate k⁺∏ x_j^{a_j} − k⁻∏ x_j^{b_j} over its reactant and
//! product coefficients; an irreversible reaction keeps the forward term
//! only. Other admissible rate families would plug in behind the same
//! evaluator interface.

use crate::network::ReactionNetwork;
use crate::rational::q_to_f64;
use rand::Rng;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct KineticsSpec {
    pub kf: Vec<f64>,
    /// None for irreversible reactions.
    pub kr: Vec<Option<f64>>,
    /// Seed used when the constants were drawn randomly.
    pub seed: Option<u64>,
}

impl KineticsSpec {
    /// Constants drawn log-uniformly on [0.1, 10].
    pub fn random<R: Rng>(net: &ReactionNetwork, rng: &mut R, seed: Option<u64>) -> Self {
        let draw = |rng: &mut R| -> f64 {
            let e: f64 = rng.gen_range(-1.0..1.0);
            10f64.powf(e)
        };
        let kf = (0..net.n_reactions()).map(|_| draw(rng)).collect();
        let kr = net
            .reactions
            .iter()
            .map(|r| if r.reversible { Some(draw(rng)) } else { None })
            .collect();
        KineticsSpec { kf, kr, seed }
    }

    /// Constants from the source file where given, filled in with random
    /// draws elsewhere.
    pub fn from_hints<R: Rng>(net: &ReactionNetwork, rng: &mut R, seed: Option<u64>) -> Self {
        let mut spec = Self::random(net, rng, seed);
        for (j, r) in net.reactions.iter().enumerate() {
            if let Some(kf) = r.kf_hint {
                spec.kf[j] = kf;
            }
            if let (Some(kr), true) = (r.kr_hint, r.reversible) {
                spec.kr[j] = Some(kr);
            }
        }
        spec
    }

    pub fn validate(&self, net: &ReactionNetwork) -> Result<(), String> {
        if self.kf.len() != net.n_reactions() || self.kr.len() != net.n_reactions() {
            return Err("kinetics length mismatch".into());
        }
        for (j, r) in net.reactions.iter().enumerate() {
            if self.kf[j] <= 0.0 {
                return Err(format!("k+ for reaction {} must be positive", j + 1));
            }
            match (r.reversible, self.kr[j]) {
                (true, Some(kr)) if kr > 0.0 => {}
                (true, _) => return Err(format!("k- for reversible reaction {} must be positive", j + 1)),
                (false, None) => {}
                (false, Some(_)) => {
                    return Err(format!("irreversible reaction {} has a backward constant", j + 1))
                }
            }
        }
        Ok(())
    }
}

/// Evaluates R(x), ∂R(x), and the vector field f(x) = ΓR(x) in f64.
#[derive(Clone)]
pub struct RateEvaluator {
    /// Per reaction: (species, coefficient) for each side, as f64 exponents.
    reactants: Vec<Vec<(usize, f64)>>,
    products: Vec<Vec<(usize, f64)>>,
    reversible: Vec<bool>,
    kf: Vec<f64>,
    kr: Vec<f64>,
    /// Γ as floats, n × m row-major.
    gamma: Vec<Vec<f64>>,
    pub n: usize,
    pub m: usize,
}

fn monomial(terms: &[(usize, f64)], x: &[f64]) -> f64 {
    terms.iter().map(|&(i, a)| x[i].powf(a)).product()
}

/// ∂(∏ x_l^{a_l})/∂x_j, written to stay finite when x_j = 0 and a_j = 1.
fn monomial_partial(terms: &[(usize, f64)], x: &[f64], j: usize) -> f64 {
    let Some(&(_, aj)) = terms.iter().find(|&&(i, _)| i == j) else {
        return 0.0;
    };
    let rest: f64 = terms
        .iter()
        .filter(|&&(i, _)| i != j)
        .map(|&(i, a)| x[i].powf(a))
        .product();
    aj * x[j].powf(aj - 1.0) * rest
}

impl RateEvaluator {
    pub fn new(net: &ReactionNetwork, spec: &KineticsSpec) -> Result<Self, String> {
        spec.validate(net)?;
        let n = net.n_species();
        let m = net.n_reactions();
        let conv = |side: &[(usize, crate::rational::Q)]| -> Vec<(usize, f64)> {
            side.iter().map(|(i, c)| (*i, q_to_f64(c))).collect()
        };
        Ok(RateEvaluator {
            reactants: net.reactions.iter().map(|r| conv(&r.reactants)).collect(),
            products: net.reactions.iter().map(|r| conv(&r.products)).collect(),
            reversible: net.reversible(),
            kf: spec.kf.clone(),
            kr: spec.kr.iter().map(|k| k.unwrap_or(0.0)).collect(),
            gamma: (0..n)
                .map(|i| (0..m).map(|j| q_to_f64(net.gamma.get(i, j))).collect())
                .collect(),
            n,
            m,
        })
    }

    /// Reaction rates R(x). Negative concentrations are a domain error.
    pub fn rates(&self, x: &[f64]) -> Vec<f64> {
        assert!(x.iter().all(|&v| v >= 0.0), "negative concentration");
        (0..self.m)
            .map(|j| {
                let fwd = self.kf[j] * monomial(&self.reactants[j], x);
                if self.reversible[j] {
                    fwd - self.kr[j] * monomial(&self.products[j], x)
                } else {
                    fwd
                }
            })
            .collect()
    }

    /// ∂R/∂x as an m × n matrix.
    pub fn rate_jacobian(&self, x: &[f64]) -> Vec<Vec<f64>> {
        (0..self.m)
            .map(|j| {
                (0..self.n)
                    .map(|i| {
                        let fwd = self.kf[j] * monomial_partial(&self.reactants[j], x, i);
                        if self.reversible[j] {
                            fwd - self.kr[j] * monomial_partial(&self.products[j], x, i)
                        } else {
                            fwd
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Vector field f(x) = ΓR(x).
    pub fn field(&self, x: &[f64]) -> Vec<f64> {
        let r = self.rates(x);
        (0..self.n)
            .map(|i| self.gamma[i].iter().zip(&r).map(|(g, rj)| g * rj).sum())
            .collect()
    }

    /// Jacobian of the vector field, J = Γ·∂R, n × n.
    pub fn field_jacobian(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let dr = self.rate_jacobian(x);
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|k| (0..self.m).map(|j| self.gamma[i][j] * dr[j][k]).sum())
                    .collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::parse_network;
    use rand::SeedableRng;

    fn ab() -> (ReactionNetwork, KineticsSpec) {
        let net = parse_network("A <-> B\n").unwrap();
        let spec = KineticsSpec { kf: vec![1.0], kr: vec![Some(2.0)], seed: None };
        (net, spec)
    }

    #[test]
    fn direct_rate_evaluation() {
        let (net, spec) = ab();
        let ev = RateEvaluator::new(&net, &spec).unwrap();
        assert_eq!(ev.rates(&[1.0, 1.0]), vec![-1.0]);
    }

    #[test]
    fn reversible_rate_nonnegative_when_product_absent() {
        let (net, spec) = ab();
        let ev = RateEvaluator::new(&net, &spec).unwrap();
        assert!(ev.rates(&[0.7, 0.0])[0] >= 0.0);
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let net = parse_network("X + E1 <-> XE1\nX + E2 <-> XE2\nXE1 -> X + E2\n").unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let spec = KineticsSpec::random(&net, &mut rng, Some(7));
        let ev = RateEvaluator::new(&net, &spec).unwrap();
        let x = vec![1.3, 0.8, 2.1, 0.4, 1.7];
        let jac = ev.rate_jacobian(&x);
        let h = 1e-6;
        for j in 0..ev.m {
            for i in 0..ev.n {
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[i] += h;
                xm[i] -= h;
                let fd = (ev.rates(&xp)[j] - ev.rates(&xm)[j]) / (2.0 * h);
                assert!(
                    (jac[j][i] - fd).abs() < 1e-6 * (1.0 + fd.abs()),
                    "∂R{j}/∂x{i}: analytic {} vs fd {fd}",
                    jac[j][i]
                );
            }
        }
    }

    #[test]
    fn sign_pattern_of_rate_jacobian() {
        // reactant ⇒ ≥ 0, product ⇒ ≤ 0 (reversible), others 0; strict when
        // all relevant species are present
        let net = parse_network("X + E1 <-> XE1\nX + E2 <-> XE2\n").unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let spec = KineticsSpec::random(&net, &mut rng, None);
            let ev = RateEvaluator::new(&net, &spec).unwrap();
            let x: Vec<f64> = (0..5).map(|_| rng.gen_range(0.1..5.0)).collect();
            let jac = ev.rate_jacobian(&x);
            for j in 0..2 {
                for i in 0..5 {
                    let d = jac[j][i];
                    if net.reactions[j].reactants.iter().any(|&(s, _)| s == i) {
                        assert!(d > 0.0);
                    } else if net.reactions[j].products.iter().any(|&(s, _)| s == i) {
                        assert!(d < 0.0);
                    } else {
                        assert_eq!(d, 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn irreversible_rate_ignores_products() {
        let net = parse_network("A -> B\n").unwrap();
        let spec = KineticsSpec { kf: vec![3.0], kr: vec![None], seed: None };
        let ev = RateEvaluator::new(&net, &spec).unwrap();
        assert_eq!(ev.rates(&[2.0, 100.0]), vec![6.0]);
        assert_eq!(ev.rate_jacobian(&[2.0, 100.0])[0][1], 0.0);
        assert_eq!(ev.rates(&[0.0, 1.0]), vec![0.0]); // absent reactant
    }
}
