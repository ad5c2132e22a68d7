//! Reaction-adjacency graphs and their connectivity/sign analyses.
//!
//! Three views of a network: the undirected signed R-graph (reactions sharing
//! species, labeled by shared-sign agreement), the directed RI-graph
//! (reactant influence), and the bipartite species–reaction digraph whose
//! strong connectivity is equivalent to the RI-graph's.

use crate::geometry::lp::feasible_point;
use crate::matrix::QMatrix;
use crate::network::ReactionNetwork;
use crate::rational::{qi, sgn, Q};
use num::Zero;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EdgeSign {
    Positive,
    Negative,
    Unsigned,
}

/// Undirected reaction graph with signed edges.
#[derive(Debug, Clone, Serialize)]
pub struct SignedGraph {
    pub n_nodes: usize,
    /// (i, j, sign, shared species indices) with i < j.
    pub edges: Vec<(usize, usize, EdgeSign, Vec<usize>)>,
}

impl SignedGraph {
    pub fn neighbors(&self, v: usize) -> Vec<(usize, EdgeSign)> {
        self.edges
            .iter()
            .filter_map(|&(a, b, s, _)| {
                if a == v {
                    Some((b, s))
                } else if b == v {
                    Some((a, s))
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        if self.n_nodes == 0 {
            return true;
        }
        let mut seen = vec![false; self.n_nodes];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for (w, _) in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// R-graph: reactions adjacent when they share a species; the edge is
/// positive when every shared species enters with the same sign on both,
/// negative when every one enters with opposite signs, unsigned otherwise.
pub fn r_graph(net: &ReactionNetwork) -> SignedGraph {
    build_r_graph(&net.gamma)
}

/// R-graph directly from a stoichiometric matrix (used for factor matrices).
pub fn build_r_graph(gamma: &QMatrix) -> SignedGraph {
    let m = gamma.cols;
    let mut edges = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let shared: Vec<usize> = (0..gamma.rows)
                .filter(|&s| !gamma.get(s, i).is_zero() && !gamma.get(s, j).is_zero())
                .collect();
            if shared.is_empty() {
                continue;
            }
            let all_same = shared.iter().all(|&s| sgn(gamma.get(s, i)) == sgn(gamma.get(s, j)));
            let all_opposite = shared.iter().all(|&s| sgn(gamma.get(s, i)) == -sgn(gamma.get(s, j)));
            let sign = if all_same {
                EdgeSign::Positive
            } else if all_opposite {
                EdgeSign::Negative
            } else {
                EdgeSign::Unsigned
            };
            edges.push((i, j, sign, shared));
        }
    }
    SignedGraph { n_nodes: m, edges }
}

/// Plain adjacency-list digraph.
#[derive(Debug, Clone, Serialize)]
pub struct Digraph {
    pub adj: Vec<Vec<usize>>,
}

impl Digraph {
    pub fn n_nodes(&self) -> usize {
        self.adj.len()
    }
}

/// RI-graph: Γᵢ → Γⱼ when Γⱼ is irreversible and some species of Γᵢ is a
/// reactant of Γⱼ, or Γⱼ is reversible and the two reactions share a species.
pub fn ri_graph(net: &ReactionNetwork) -> Digraph {
    let m = net.n_reactions();
    let species_of = |j: usize| -> Vec<usize> {
        let mut s = net.reactant_indices(j);
        s.extend(net.product_indices(j));
        s.sort_unstable();
        s.dedup();
        s
    };
    let all_species: Vec<Vec<usize>> = (0..m).map(species_of).collect();
    let mut adj = vec![Vec::new(); m];
    for i in 0..m {
        for j in 0..m {
            if i == j {
                continue;
            }
            let hit = if net.reactions[j].reversible {
                all_species[i].iter().any(|s| all_species[j].contains(s))
            } else {
                let reactants = net.reactant_indices(j);
                all_species[i].iter().any(|s| reactants.contains(s))
            };
            if hit {
                adj[i].push(j);
            }
        }
    }
    Digraph { adj }
}

/// Bipartite species–reaction digraph G_{Γ,∂R}: nodes 0..n are species,
/// n..n+m are reactions. Species i → reaction j iff Γᵢⱼ ≠ 0; reaction j →
/// species i iff ∂Rⱼ/∂xᵢ is structurally nonzero (reactants always,
/// products only when the reaction is reversible).
pub fn bipartite_graph(net: &ReactionNetwork) -> Digraph {
    let n = net.n_species();
    let m = net.n_reactions();
    let mut adj = vec![Vec::new(); n + m];
    for j in 0..m {
        for i in 0..n {
            if !net.gamma.get(i, j).is_zero() {
                adj[i].push(n + j);
            }
        }
        let mut influencers = net.reactant_indices(j);
        if net.reactions[j].reversible {
            influencers.extend(net.product_indices(j));
        }
        influencers.sort_unstable();
        influencers.dedup();
        for i in influencers {
            adj[n + j].push(i);
        }
    }
    Digraph { adj }
}

/// Tarjan SCC; returns the number of strongly connected components.
pub fn scc_count(g: &Digraph) -> usize {
    let n = g.n_nodes();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0usize;
    let mut count = 0usize;

    // Iterative Tarjan: frames of (node, next child position).
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        while let Some(&(v, ci)) = call.last() {
            if index[v] == usize::MAX {
                index[v] = next_index;
                low[v] = next_index;
                next_index += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if ci < g.adj[v].len() {
                call.last_mut().unwrap().1 += 1;
                let w = g.adj[v][ci];
                if index[w] == usize::MAX {
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                if low[v] == index[v] {
                    count += 1;
                    while let Some(w) = stack.pop() {
                        on_stack[w] = false;
                        if w == v {
                            break;
                        }
                    }
                }
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
            }
        }
    }
    count
}

pub fn strongly_connected(g: &Digraph) -> bool {
    g.n_nodes() >= 1 && scc_count(g) == 1
}

#[derive(Debug, Clone, Serialize)]
pub struct CycleWitness {
    /// Node sequence of an inconsistent cycle (first == last).
    pub cycle: Vec<usize>,
}

/// Per-reaction signs σ with σ opposite across positive edges and equal
/// across negative edges, found by BFS with σ = +1 anchors per component.
pub fn orthant_sign_assignment(g: &SignedGraph) -> Result<Vec<i32>, CycleWitness> {
    let n = g.n_nodes;
    let mut sigma = vec![0i32; n];
    let mut parent = vec![usize::MAX; n];
    for start in 0..n {
        if sigma[start] != 0 {
            continue;
        }
        sigma[start] = 1;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for (w, s) in g.neighbors(v) {
                let want = match s {
                    EdgeSign::Positive => -sigma[v],
                    EdgeSign::Negative => sigma[v],
                    EdgeSign::Unsigned => {
                        return Err(CycleWitness { cycle: vec![v, w, v] });
                    }
                };
                if sigma[w] == 0 {
                    sigma[w] = want;
                    parent[w] = v;
                    queue.push_back(w);
                } else if sigma[w] != want {
                    // Stitch the violating cycle from the two BFS tree paths.
                    let path_to_root = |mut x: usize| {
                        let mut p = vec![x];
                        while parent[x] != usize::MAX {
                            x = parent[x];
                            p.push(x);
                        }
                        p
                    };
                    let pv = path_to_root(v);
                    let pw = path_to_root(w);
                    let common: Vec<usize> =
                        pv.iter().copied().filter(|x| pw.contains(x)).collect();
                    let meet = common[0];
                    let mut cycle: Vec<usize> =
                        pv.iter().take_while(|&&x| x != meet).copied().collect();
                    cycle.push(meet);
                    let tail: Vec<usize> =
                        pw.iter().take_while(|&&x| x != meet).copied().collect();
                    cycle.extend(tail.into_iter().rev());
                    cycle.push(v);
                    return Err(CycleWitness { cycle });
                }
            }
        }
    }
    Ok(sigma)
}

/// True iff every edge is signed and every cycle has an even number of
/// positive edges — equivalently, a consistent orthant sign assignment
/// exists.
pub fn signed_loop_property(g: &SignedGraph) -> bool {
    if g.edges.iter().any(|&(_, _, s, _)| s == EdgeSign::Unsigned) {
        return false;
    }
    orthant_sign_assignment(g).is_ok()
}

/// Strictly positive v with Γv = 0 (scaled so min coordinate is 1), when the
/// LP {Γv = 0, v ≥ 1} is feasible.
pub fn positive_flux_vector(gamma: &QMatrix) -> Option<Vec<Q>> {
    // Substitute v = 1 + w, w ≥ 0: Γw = −Γ·1.
    let ones = vec![qi(1); gamma.cols];
    let b: Vec<Q> = gamma.mul_vec(&ones).into_iter().map(|x| -x).collect();
    let w = feasible_point(gamma, &b)?;
    Some(w.into_iter().map(|wi| wi + qi(1)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::parse_network;

    #[test]
    fn r_graph_edge_signs() {
        let chain = parse_network("A <-> B\nB <-> C\n").unwrap();
        let g = r_graph(&chain);
        assert_eq!(g.edges.len(), 1);
        assert_eq!(g.edges[0].2, EdgeSign::Negative); // shared B: +1 vs −1
        let fork = parse_network("A <-> B\nA <-> C\n").unwrap();
        let g = r_graph(&fork);
        assert_eq!(g.edges[0].2, EdgeSign::Positive); // shared A: −1, −1
    }

    #[test]
    fn ri_graph_reversible_is_symmetric() {
        let net = parse_network("A <-> B\nB <-> C\nC <-> A\n").unwrap();
        let g = ri_graph(&net);
        for i in 0..3 {
            for &j in &g.adj[i] {
                assert!(g.adj[j].contains(&i));
            }
        }
        assert!(strongly_connected(&g));
    }

    #[test]
    fn ri_graph_irreversible_chain_not_strong() {
        let net = parse_network("A -> B\nB -> C\n").unwrap();
        assert!(!strongly_connected(&ri_graph(&net)));
        let cycle = parse_network("A -> B\nB -> A\n").unwrap();
        assert!(strongly_connected(&ri_graph(&cycle)));
    }

    #[test]
    fn two_isolated_reactions_not_strong() {
        let net = parse_network("A <-> B\nC <-> D\n").unwrap();
        assert!(!strongly_connected(&ri_graph(&net)));
        assert_eq!(scc_count(&ri_graph(&net)), 2);
    }

    #[test]
    fn bipartite_respects_irreversibility() {
        let net = parse_network("A -> B\n").unwrap();
        let g = bipartite_graph(&net);
        // species A=0, B=1, reaction node 2
        assert_eq!(g.adj[0], vec![2]);
        assert_eq!(g.adj[1], vec![2]);
        assert_eq!(g.adj[2], vec![0]); // only the reactant influences the rate
    }

    #[test]
    fn signed_loops_and_assignment() {
        // Triangle, all negative: consistent, all σ = +1.
        let tri_neg = SignedGraph {
            n_nodes: 3,
            edges: vec![
                (0, 1, EdgeSign::Negative, vec![]),
                (1, 2, EdgeSign::Negative, vec![]),
                (0, 2, EdgeSign::Negative, vec![]),
            ],
        };
        assert!(signed_loop_property(&tri_neg));
        assert_eq!(orthant_sign_assignment(&tri_neg).unwrap(), vec![1, 1, 1]);

        // Triangle with exactly one positive edge: odd positive cycle.
        let tri_one = SignedGraph {
            n_nodes: 3,
            edges: vec![
                (0, 1, EdgeSign::Positive, vec![]),
                (1, 2, EdgeSign::Negative, vec![]),
                (0, 2, EdgeSign::Negative, vec![]),
            ],
        };
        assert!(!signed_loop_property(&tri_one));
        let witness = orthant_sign_assignment(&tri_one).unwrap_err();
        assert!(witness.cycle.len() >= 3);

        // A tree is vacuously fine.
        let tree = SignedGraph {
            n_nodes: 3,
            edges: vec![
                (0, 1, EdgeSign::Positive, vec![]),
                (1, 2, EdgeSign::Positive, vec![]),
            ],
        };
        assert!(signed_loop_property(&tree));
    }

    #[test]
    fn single_positive_edge_assignment() {
        let g = SignedGraph {
            n_nodes: 2,
            edges: vec![(0, 1, EdgeSign::Positive, vec![])],
        };
        assert_eq!(orthant_sign_assignment(&g).unwrap(), vec![1, -1]);
    }

    #[test]
    fn flux_vector_cycle_vs_chain() {
        let cycle = parse_network("A -> B\nB -> A\n").unwrap();
        let v = positive_flux_vector(&cycle.gamma).unwrap();
        assert!(cycle.gamma.mul_vec(&v).iter().all(|x| x.is_zero()));
        assert!(v.iter().all(|x| *x >= qi(1)));

        let chain = parse_network("A -> B\n").unwrap();
        assert!(positive_flux_vector(&chain.gamma).is_none());
    }
}
