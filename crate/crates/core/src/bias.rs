//! Agent semantics: true distances to the target, perceived costs under the
//! present-bias factor, the feasible-edge subgraph, and the Markov transition
//! policy over feasible edges.
//!
//! Everything here is exact rational arithmetic. Which edges are feasible
//! hinges on exact perceived-cost ties (the gadget constructions are built
//! from such ties), so floating point is never used.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::graph::{topological_order, TaskGraph};
use crate::rational::format_rational;
use crate::{Error, Result};

/// Per-vertex true distances, perceived costs, and the feasible edge set.
///
/// Vertices that cannot reach the target are absent from both maps: the agent
/// never considers them because no path to the target passes through them.
#[derive(Debug, Clone)]
pub struct PerceptionTable {
    pub true_dist: BTreeMap<String, BigInt>,
    pub perceived: BTreeMap<String, BigRational>,
    pub feasible_edges: BTreeSet<(String, String)>,
}

impl PerceptionTable {
    /// Feasible out-edges of `v` with weights, lexicographic by head.
    pub fn feasible_out<'a>(&'a self, g: &'a TaskGraph, v: &str) -> Vec<(String, BigInt)> {
        g.out_edges(v)
            .filter(|(u, _)| self.feasible_edges.contains(&(v.to_string(), u.to_string())))
            .map(|(u, w)| (u.to_string(), w.clone()))
            .collect()
    }
}

/// Exact shortest-path cost from every vertex to the target, by backward DP
/// over reverse topological order. Vertices with no path to the target are
/// omitted from the map.
pub fn true_distances_to_target(g: &TaskGraph) -> Result<BTreeMap<String, BigInt>> {
    let order = topological_order(g)?;
    let mut dist: BTreeMap<String, BigInt> = BTreeMap::new();
    dist.insert(g.target().to_string(), BigInt::zero());
    for v in order.iter().rev() {
        if v == g.target() {
            continue;
        }
        let best = g
            .out_edges(v)
            .filter_map(|(u, w)| dist.get(u).map(|d| w + d))
            .min();
        if let Some(d) = best {
            dist.insert(v.clone(), d);
        }
    }
    Ok(dist)
}

/// Computes perceived costs and the feasible edge set for bias `beta`.
///
/// For a vertex `v` that reaches the target, the perceived cost to the target
/// is `min over edges (v,u) of w(v,u) + beta * d(u,t)`, where the minimum
/// ranges over heads that themselves reach the target. An edge is feasible
/// exactly when it attains that minimum, by exact rational equality.
pub fn perceived_costs(g: &TaskGraph, beta: &BigRational) -> Result<PerceptionTable> {
    if *beta <= BigRational::zero() || *beta > BigRational::one() {
        return Err(Error::Domain(format!(
            "beta must satisfy 0 < beta <= 1, got {}",
            format_rational(beta)
        )));
    }
    let true_dist = true_distances_to_target(g)?;
    let mut perceived: BTreeMap<String, BigRational> = BTreeMap::new();
    let mut feasible_edges: BTreeSet<(String, String)> = BTreeSet::new();
    perceived.insert(g.target().to_string(), BigRational::zero());

    for v in true_dist.keys() {
        if v == g.target() {
            continue;
        }
        let candidates: Vec<(String, BigRational)> = g
            .out_edges(v)
            .filter_map(|(u, w)| {
                true_dist
                    .get(u)
                    .map(|d| (u.to_string(), BigRational::from_integer(w.clone()) + beta * BigRational::from_integer(d.clone())))
            })
            .collect();
        let best = candidates
            .iter()
            .map(|(_, z)| z)
            .min()
            .cloned()
            .expect("vertex reaching target has an out-edge toward it");
        for (u, z) in &candidates {
            if *z == best {
                feasible_edges.insert((v.clone(), u.clone()));
            }
        }
        perceived.insert(v.clone(), best);
    }
    Ok(PerceptionTable { true_dist, perceived, feasible_edges })
}

/// A task graph with a bias factor and a transition policy: probabilities on
/// feasible edges, summing to one at every vertex the agent can stand on.
#[derive(Debug, Clone)]
pub struct BiasModel {
    graph: TaskGraph,
    beta: BigRational,
    table: PerceptionTable,
    policy: BTreeMap<String, Vec<(String, BigRational)>>,
}

impl BiasModel {
    pub fn graph(&self) -> &TaskGraph {
        &self.graph
    }

    pub fn beta(&self) -> &BigRational {
        &self.beta
    }

    pub fn perception(&self) -> &PerceptionTable {
        &self.table
    }

    /// Policy entries at `v` as `(head, probability)`, covering exactly the
    /// feasible out-edges of `v`. Empty slice at the target.
    pub fn policy_at(&self, v: &str) -> &[(String, BigRational)] {
        self.policy.get(v).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Transition probability of edge `(u, v)`; zero if not a policy edge.
    pub fn transition_prob(&self, u: &str, v: &str) -> BigRational {
        self.policy_at(u)
            .iter()
            .find(|(h, _)| h == v)
            .map(|(_, p)| p.clone())
            .unwrap_or_else(BigRational::zero)
    }

    /// Optimal distance from source to target.
    pub fn optimal_distance(&self) -> &BigInt {
        self.table
            .true_dist
            .get(self.graph.source())
            .expect("valid model has a source-target path")
    }

    /// Vertices the agent occupies with positive probability: the forward
    /// closure of the source under positive-probability policy edges.
    pub fn agent_reachable(&self) -> BTreeSet<String> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(self.graph.source().to_string());
        queue.push_back(self.graph.source().to_string());
        while let Some(v) = queue.pop_front() {
            for (u, p) in self.policy_at(&v) {
                if !p.is_zero() && seen.insert(u.clone()) {
                    queue.push_back(u.clone());
                }
            }
        }
        seen
    }
}

/// Builds a validated model. Where `explicit_policy` gives no probabilities
/// for a vertex, each of its `l` feasible edges gets `1/l`. Explicit entries
/// must sit on feasible edges, lie in `[0, 1]`, and sum to one per vertex;
/// feasible edges left unmentioned at an explicitly configured vertex get
/// probability zero.
pub fn build_model(
    g: &TaskGraph,
    beta: &BigRational,
    explicit_policy: Option<&BTreeMap<(String, String), BigRational>>,
) -> Result<BiasModel> {
    let table = perceived_costs(g, beta)?;
    if !table.true_dist.contains_key(g.source()) {
        return Err(Error::InvalidGraph(format!(
            "target '{}' is not reachable from source '{}'",
            g.target(),
            g.source()
        )));
    }

    if let Some(explicit) = explicit_policy {
        for ((u, v), p) in explicit {
            if g.weight(u, v).is_none() {
                return Err(Error::InvalidPolicy(format!("prob on missing edge {u} -> {v}")));
            }
            if !table.feasible_edges.contains(&(u.clone(), v.clone())) {
                return Err(Error::InvalidPolicy(format!("prob on infeasible edge {u} -> {v}")));
            }
            if *p < BigRational::zero() || *p > BigRational::one() {
                return Err(Error::InvalidPolicy(format!(
                    "probability {} on edge {u} -> {v} outside [0, 1]",
                    format_rational(p)
                )));
            }
        }
    }

    let mut policy: BTreeMap<String, Vec<(String, BigRational)>> = BTreeMap::new();
    for v in table.true_dist.keys() {
        if v == g.target() {
            continue;
        }
        let feasible = table.feasible_out(g, v);
        let explicit_here: Vec<(String, BigRational)> = feasible
            .iter()
            .filter_map(|(u, _)| {
                explicit_policy
                    .and_then(|m| m.get(&(v.clone(), u.clone())))
                    .map(|p| (u.clone(), p.clone()))
            })
            .collect();
        let entries: Vec<(String, BigRational)> = if explicit_here.is_empty() {
            let l = BigRational::from_integer(BigInt::from(feasible.len()));
            feasible.iter().map(|(u, _)| (u.clone(), l.recip())).collect()
        } else {
            let sum: BigRational = explicit_here.iter().map(|(_, p)| p.clone()).sum();
            if !sum.is_one() {
                return Err(Error::InvalidPolicy(format!(
                    "probabilities at vertex '{v}' sum to {}, expected 1",
                    format_rational(&sum)
                )));
            }
            feasible
                .iter()
                .map(|(u, _)| {
                    let p = explicit_here
                        .iter()
                        .find(|(h, _)| h == u)
                        .map(|(_, p)| p.clone())
                        .unwrap_or_else(BigRational::zero);
                    (u.clone(), p)
                })
                .collect()
        };
        policy.insert(v.clone(), entries);
    }

    Ok(BiasModel { graph: g.clone(), beta: beta.clone(), table, policy })
}
