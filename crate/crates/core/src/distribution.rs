//! The law of the traversal cost: extremes by the min/max dynamic program,
//! the exact sparse full-distribution DP, the dense pseudo-polynomial array
//! DP, a path enumeration oracle, and a deterministic Monte Carlo sampler.
//!
//! The sparse DP is the primary exact engine: hardness instances carry
//! weights exponential in the vertex count, where a dense cost-indexed array
//! is infeasible but the number of distinct path costs stays small (bounded
//! by 2^fes). The dense array backend covers the small-weight regime.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bias::BiasModel;
use crate::graph::topological_order;
use crate::rational::floor_to_int;
use crate::{Error, Result};

/// Default cap on distinct `(vertex, cost)` states in the sparse DP.
pub const DEFAULT_SPARSE_CAP: usize = 10_000_000;
/// Default cap on cells of the dense cost-indexed arrays.
pub const DEFAULT_DENSE_CAP: u128 = 100_000_000;
/// Default cap on paths returned by the enumeration oracle.
pub const DEFAULT_ENUM_LIMIT: usize = 1 << 20;

/// Exact finite law of the traversal cost: cost -> probability, zero
/// entries never stored, probabilities summing to one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostDistribution {
    pub entries: BTreeMap<BigInt, BigRational>,
    pub optimal_distance: BigInt,
}

impl CostDistribution {
    pub fn min_cost(&self) -> &BigInt {
        self.entries.keys().next().expect("distribution is nonempty")
    }

    pub fn max_cost(&self) -> &BigInt {
        self.entries.keys().next_back().expect("distribution is nonempty")
    }

    /// Pr(cost <= bound).
    pub fn cdf(&self, bound: &BigInt) -> BigRational {
        self.entries
            .range(..=bound.clone())
            .map(|(_, p)| p.clone())
            .sum()
    }

    pub fn expectation(&self) -> BigRational {
        self.entries
            .iter()
            .map(|(c, p)| BigRational::from_integer(c.clone()) * p)
            .sum()
    }

    pub fn second_moment(&self) -> BigRational {
        self.entries
            .iter()
            .map(|(c, p)| BigRational::from_integer(c * c) * p)
            .sum()
    }
}

/// Minimum-cost result: the smallest cost the agent realizes with positive
/// probability, the probability of arriving at the target with that cost
/// via locally minimal prefixes, and the ratio to the optimal distance
/// (absent when the optimal distance is zero).
#[derive(Debug, Clone)]
pub struct ExtremeCost {
    pub cost: BigInt,
    /// Probability from the extremal DP; `None` for the maximum variant.
    pub prob: Option<BigRational>,
    /// cost / d(s,t); `None` when d(s,t) = 0.
    pub ratio: Option<BigRational>,
}

/// Transitions the agent actually takes: positive-probability policy edges
/// out of agent-occupied vertices, keyed by head for in-edge lookups.
struct WalkGraph {
    order: Vec<String>,
    /// head -> list of (tail, weight, transition probability)
    in_edges: BTreeMap<String, Vec<(String, BigInt, BigRational)>>,
    occupied: BTreeSet<String>,
}

fn walk_graph(m: &BiasModel) -> Result<WalkGraph> {
    let occupied = m.agent_reachable();
    let order: Vec<String> = topological_order(m.graph())?
        .into_iter()
        .filter(|v| occupied.contains(v))
        .collect();
    let mut in_edges: BTreeMap<String, Vec<(String, BigInt, BigRational)>> = BTreeMap::new();
    for v in &occupied {
        for (head, p) in m.policy_at(v) {
            if p.is_zero() {
                continue;
            }
            let w = m.graph().weight(v, head).expect("policy edge exists").clone();
            in_edges.entry(head.clone()).or_default().push((v.clone(), w, p.clone()));
        }
    }
    if !occupied.contains(m.graph().target()) {
        return Err(Error::Domain("no feasible source-target path; model is inconsistent".into()));
    }
    Ok(WalkGraph { order, in_edges, occupied })
}

fn ratio_of(cost: &BigInt, d: &BigInt) -> Option<BigRational> {
    if d.is_zero() {
        None
    } else {
        Some(BigRational::new(cost.clone(), d.clone()))
    }
}

/// Minimum realized cost with its arrival probability: forward DP over the
/// topological order keeping, per vertex, the cheapest agent-realizable
/// prefix cost and the probability of arriving at that cost.
pub fn min_cost_of_irrationality(m: &BiasModel) -> Result<ExtremeCost> {
    let wg = walk_graph(m)?;
    let mut best: BTreeMap<&str, (BigInt, BigRational)> = BTreeMap::new();
    best.insert(m.graph().source(), (BigInt::zero(), BigRational::one()));
    for v in &wg.order {
        if v == m.graph().source() {
            continue;
        }
        let mut d_v: Option<BigInt> = None;
        let mut p_v = BigRational::zero();
        for (u, w, p) in wg.in_edges.get(v).map(Vec::as_slice).unwrap_or(&[]) {
            let (d_u, p_u) = &best[u.as_str()];
            let cand = w + d_u;
            match &d_v {
                Some(cur) if *cur < cand => {}
                Some(cur) if *cur == cand => p_v += p_u * p,
                _ => {
                    d_v = Some(cand);
                    p_v = p_u * p;
                }
            }
        }
        let d_v = d_v.expect("occupied non-source vertex has an in-edge");
        best.insert(v, (d_v, p_v));
    }
    let (cost, prob) = best[m.graph().target()].clone();
    let ratio = ratio_of(&cost, m.optimal_distance());
    Ok(ExtremeCost { cost, prob: Some(prob), ratio })
}

/// Maximum cost of any positive-probability path, by the mirrored DP.
pub fn max_cost_of_irrationality(m: &BiasModel) -> Result<ExtremeCost> {
    let wg = walk_graph(m)?;
    let mut best: BTreeMap<&str, BigInt> = BTreeMap::new();
    best.insert(m.graph().source(), BigInt::zero());
    for v in &wg.order {
        if v == m.graph().source() {
            continue;
        }
        let d_v = wg
            .in_edges
            .get(v)
            .map(Vec::as_slice)
            .unwrap_or(&[])
            .iter()
            .map(|(u, w, _)| w + &best[u.as_str()])
            .max()
            .expect("occupied non-source vertex has an in-edge");
        best.insert(v, d_v);
    }
    let cost = best[m.graph().target()].clone();
    let ratio = ratio_of(&cost, m.optimal_distance());
    Ok(ExtremeCost { cost, prob: None, ratio })
}

/// Exact full law of the traversal cost by the sparse per-vertex map DP:
/// `P_v[c] = sum over in-edges (u,v) of P_u[c - w(u,v)] * p(u,v)`.
/// Errors when the number of live `(vertex, cost)` states exceeds `cap`.
pub fn cost_distribution_sparse(m: &BiasModel, cap: usize) -> Result<CostDistribution> {
    let wg = walk_graph(m)?;
    let mut maps: BTreeMap<&str, BTreeMap<BigInt, BigRational>> = BTreeMap::new();
    maps.insert(m.graph().source(), BTreeMap::from([(BigInt::zero(), BigRational::one())]));
    let mut states = 1usize;
    for v in &wg.order {
        if v == m.graph().source() {
            continue;
        }
        let mut acc: BTreeMap<BigInt, BigRational> = BTreeMap::new();
        for (u, w, p) in wg.in_edges.get(v).map(Vec::as_slice).unwrap_or(&[]) {
            for (c, pr) in &maps[u.as_str()] {
                let entry = acc.entry(c + w).or_insert_with(BigRational::zero);
                *entry += pr * p;
            }
        }
        states += acc.len();
        if states > cap {
            return Err(Error::CapExceeded(format!(
                "sparse distribution exceeds {cap} (vertex, cost) states; consider Monte Carlo sampling"
            )));
        }
        maps.insert(v, acc);
    }
    let entries = maps.remove(m.graph().target()).expect("target is occupied");
    Ok(CostDistribution { entries, optimal_distance: m.optimal_distance().clone() })
}

/// Dense pseudo-polynomial backend: per-vertex probability arrays indexed by
/// cost `0 ..= bound`, truncating mass above `bound`. Returns
/// Pr(cost <= bound). Errors when the table would exceed `cell_cap` cells.
pub fn cdf_dense(m: &BiasModel, bound: &BigInt, cell_cap: u128) -> Result<BigRational> {
    if bound < &BigInt::zero() {
        return Ok(BigRational::zero());
    }
    let wg = walk_graph(m)?;
    let width = (bound + 1u8)
        .to_u128()
        .ok_or_else(|| Error::CapExceeded("dense bound does not fit the cell budget".into()))?;
    let cells = width.checked_mul(wg.occupied.len() as u128);
    match cells {
        Some(c) if c <= cell_cap => {}
        _ => {
            return Err(Error::CapExceeded(format!(
                "dense table would need more than {cell_cap} cells"
            )))
        }
    }
    let width = width as usize;
    let mut arrays: BTreeMap<&str, Vec<BigRational>> = BTreeMap::new();
    let mut start = vec![BigRational::zero(); width];
    start[0] = BigRational::one();
    arrays.insert(m.graph().source(), start);
    for v in &wg.order {
        if v == m.graph().source() {
            continue;
        }
        let mut acc = vec![BigRational::zero(); width];
        for (u, w, p) in wg.in_edges.get(v).map(Vec::as_slice).unwrap_or(&[]) {
            if let Some(w) = w.to_usize() {
                if w < width {
                    let src = &arrays[u.as_str()];
                    for k in w..width {
                        if !src[k - w].is_zero() {
                            let add = &src[k - w] * p;
                            acc[k] += add;
                        }
                    }
                }
            }
        }
        arrays.insert(v, acc);
    }
    Ok(arrays[m.graph().target()].iter().cloned().sum())
}

/// Which engine answers a CDF query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CdfBackend {
    Auto,
    Sparse,
    Dense,
}

/// Caps for the exact engines; `Default` gives the documented values.
#[derive(Debug, Clone, Copy)]
pub struct Caps {
    pub sparse_states: usize,
    pub dense_cells: u128,
    pub enum_limit: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            sparse_states: DEFAULT_SPARSE_CAP,
            dense_cells: DEFAULT_DENSE_CAP,
            enum_limit: DEFAULT_ENUM_LIMIT,
        }
    }
}

/// Pr(cost <= floor(threshold_ratio * d(s,t))), the flooring semantics of
/// the cost-of-irrationality CDF. `Auto` tries the sparse engine first and
/// falls back to the dense array when the sparse cap is exceeded.
pub fn cdf_at(m: &BiasModel, threshold_ratio: &BigRational, backend: CdfBackend, caps: Caps) -> Result<BigRational> {
    if threshold_ratio < &BigRational::zero() {
        return Err(Error::Domain("threshold must be non-negative".into()));
    }
    let bound = floor_to_int(&(threshold_ratio * BigRational::from_integer(m.optimal_distance().clone())));
    match backend {
        CdfBackend::Sparse => Ok(cost_distribution_sparse(m, caps.sparse_states)?.cdf(&bound)),
        CdfBackend::Dense => cdf_dense(m, &bound, caps.dense_cells),
        CdfBackend::Auto => match cost_distribution_sparse(m, caps.sparse_states) {
            Ok(dist) => Ok(dist.cdf(&bound)),
            Err(Error::CapExceeded(_)) => cdf_dense(m, &bound, caps.dense_cells),
            Err(e) => Err(e),
        },
    }
}

/// A positive-probability source-target path with its exact cost and
/// probability (product of transition probabilities along it).
#[derive(Debug, Clone)]
pub struct FeasiblePath {
    pub edges: Vec<(String, String)>,
    pub cost: BigInt,
    pub probability: BigRational,
}

/// Enumerates every positive-probability source-target path by DFS over the
/// policy edges. Independent of the DP engines; serves as their oracle.
/// Errors past `limit`, reporting the 2^fes bound as guidance.
pub fn enumerate_feasible_paths(m: &BiasModel, limit: usize) -> Result<Vec<FeasiblePath>> {
    if limit < 1 {
        return Err(Error::Domain("enumeration limit must be at least 1".into()));
    }
    let mut paths = Vec::new();
    let mut stack: Vec<(String, String)> = Vec::new();

    fn dfs(
        m: &BiasModel,
        v: &str,
        cost: BigInt,
        prob: BigRational,
        stack: &mut Vec<(String, String)>,
        paths: &mut Vec<FeasiblePath>,
        limit: usize,
    ) -> Result<()> {
        if v == m.graph().target() {
            if paths.len() == limit {
                let fes = crate::structural::feedback_edge_number(m.graph());
                return Err(Error::CapExceeded(format!(
                    "more than {limit} feasible paths; the feedback-edge bound allows up to 2^{fes}"
                )));
            }
            paths.push(FeasiblePath { edges: stack.clone(), cost, probability: prob });
            return Ok(());
        }
        for (head, p) in m.policy_at(v) {
            if p.is_zero() {
                continue;
            }
            let w = m.graph().weight(v, head).expect("policy edge exists");
            stack.push((v.to_string(), head.clone()));
            dfs(m, head, &cost + w, &prob * p, stack, paths, limit)?;
            stack.pop();
        }
        Ok(())
    }

    dfs(m, m.graph().source(), BigInt::zero(), BigRational::one(), &mut stack, &mut paths, limit)?;
    Ok(paths)
}

/// Aggregates enumerated paths into a law; oracle counterpart of
/// [`cost_distribution_sparse`].
pub fn law_from_paths(paths: &[FeasiblePath], optimal_distance: BigInt) -> CostDistribution {
    let mut entries: BTreeMap<BigInt, BigRational> = BTreeMap::new();
    for p in paths {
        *entries.entry(p.cost.clone()).or_insert_with(BigRational::zero) += &p.probability;
    }
    entries.retain(|_, p| !p.is_zero());
    CostDistribution { entries, optimal_distance }
}

/// Sub-seed for shard `shard` of a run seeded with `seed`: one round of
/// splitmix64 over `seed + shard`. Sharded runs merged by summing frequency
/// maps reproduce [`monte_carlo_sharded`] exactly.
pub fn shard_seed(seed: u64, shard: u64) -> u64 {
    let mut z = seed.wrapping_add(shard).wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Samples `samples` traversals, choosing at each vertex by the policy
/// probabilities. Deterministic given `(seed, samples)`; frequencies sum to
/// `samples`.
pub fn monte_carlo(m: &BiasModel, samples: u64, seed: u64) -> BTreeMap<BigInt, u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let two_pow_64 = BigInt::one() << 64u32;
    let mut freq: BTreeMap<BigInt, u64> = BTreeMap::new();
    for _ in 0..samples {
        let mut v = m.graph().source().to_string();
        let mut cost = BigInt::zero();
        while v != m.graph().target() {
            // Uniform draw in [0,1) at 2^-64 granularity, compared exactly
            // against the cumulative rational probabilities.
            let draw = BigRational::new(BigInt::from(rng.next_u64()), two_pow_64.clone());
            let entries = m.policy_at(&v);
            let mut cum = BigRational::zero();
            let mut chosen: Option<&str> = None;
            for (head, p) in entries {
                cum += p;
                if draw < cum {
                    chosen = Some(head);
                    break;
                }
            }
            // Rounding slack: fall back to the last positive-probability edge.
            let head = chosen
                .or_else(|| {
                    entries
                        .iter()
                        .rev()
                        .find(|(_, p)| !p.is_zero())
                        .map(|(h, _)| h.as_str())
                })
                .expect("occupied vertex has a positive-probability edge");
            cost += m.graph().weight(&v, head).expect("policy edge exists");
            v = head.to_string();
        }
        *freq.entry(cost).or_insert(0) += 1;
    }
    freq
}

/// Runs `shards` independent shards of `samples_per_shard` each, seeded with
/// [`shard_seed`], and merges by summing frequencies.
pub fn monte_carlo_sharded(m: &BiasModel, samples_per_shard: u64, seed: u64, shards: u64) -> BTreeMap<BigInt, u64> {
    let mut merged: BTreeMap<BigInt, u64> = BTreeMap::new();
    for shard in 0..shards {
        for (cost, n) in monte_carlo(m, samples_per_shard, shard_seed(seed, shard)) {
            *merged.entry(cost).or_insert(0) += n;
        }
    }
    merged
}
