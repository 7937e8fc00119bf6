//! Structural parameters of the underlying undirected graph: exact feedback
//! edge number, bounded-search feedback vertex number, and the path-count
//! bounds used to size the exact engines.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;

use crate::graph::TaskGraph;
use crate::{Error, Result};

/// Documented cap on the feedback-vertex exhaustive search.
pub const FVS_SEARCH_CAP: usize = 10;

#[derive(Debug, Clone)]
pub struct StructureReport {
    pub fes: usize,
    /// Present when the minimum feedback vertex set is at most the search cap.
    pub fvs: Option<usize>,
    /// 2^fes, an upper bound on the number of source-target paths.
    pub path_bound_fes: BigInt,
    /// fvs^fvs * n^(2*fvs), the vertex-based path bound.
    pub path_bound_fvs: Option<BigInt>,
}

/// Undirected simple view: vertex indices and adjacency. Parallel directed
/// edges are disallowed and a DAG admits no antiparallel pair, so the
/// underlying undirected graph is simple.
struct Undirected {
    n: usize,
    edges: Vec<(usize, usize)>,
}

fn undirected(g: &TaskGraph) -> Undirected {
    let index: BTreeMap<&str, usize> = g.vertices().enumerate().map(|(i, v)| (v, i)).collect();
    let edges = g
        .edges()
        .map(|(u, v, _)| {
            let (a, b) = (index[u], index[v]);
            if a < b { (a, b) } else { (b, a) }
        })
        .collect();
    Undirected { n: index.len(), edges }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        if self.0[x] != x {
            let root = self.find(self.0[x]);
            self.0[x] = root;
        }
        self.0[x]
    }

    /// Returns false if `a` and `b` were already connected.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra] = rb;
        true
    }
}

fn component_count(u: &Undirected) -> usize {
    let mut uf = UnionFind::new(u.n);
    let mut comps = u.n;
    for &(a, b) in &u.edges {
        if uf.union(a, b) {
            comps -= 1;
        }
    }
    comps
}

/// Exact minimum feedback edge set size of the underlying undirected graph:
/// the cycle-space dimension `|E| - |V| + components`.
pub fn feedback_edge_number(g: &TaskGraph) -> usize {
    let u = undirected(g);
    u.edges.len() + component_count(&u) - u.n
}

fn is_forest_without(u: &Undirected, removed: &[usize]) -> bool {
    let mut uf = UnionFind::new(u.n);
    for &(a, b) in &u.edges {
        if removed.contains(&a) || removed.contains(&b) {
            continue;
        }
        if !uf.union(a, b) {
            return false;
        }
    }
    true
}

/// Minimum size of a vertex set whose removal makes the underlying
/// undirected graph a forest, found by exhaustive subset search; `None` when
/// it exceeds `k_max`. `k_max` must not exceed [`FVS_SEARCH_CAP`].
pub fn feedback_vertex_number(g: &TaskGraph, k_max: usize) -> Result<Option<usize>> {
    if k_max > FVS_SEARCH_CAP {
        return Err(Error::Domain(format!(
            "feedback vertex search is capped at {FVS_SEARCH_CAP}, got {k_max}"
        )));
    }
    let u = undirected(g);
    // Only vertices of undirected degree >= 2 can break a cycle.
    let mut degree = vec![0usize; u.n];
    for &(a, b) in &u.edges {
        degree[a] += 1;
        degree[b] += 1;
    }
    let candidates: Vec<usize> = (0..u.n).filter(|&v| degree[v] >= 2).collect();

    fn search(u: &Undirected, candidates: &[usize], chosen: &mut Vec<usize>, start: usize, budget: usize) -> bool {
        if is_forest_without(u, chosen) {
            return true;
        }
        if budget == 0 {
            return false;
        }
        for i in start..candidates.len() {
            chosen.push(candidates[i]);
            if search(u, candidates, chosen, i + 1, budget - 1) {
                chosen.pop();
                return true;
            }
            chosen.pop();
        }
        false
    }

    for k in 0..=k_max {
        let mut chosen = Vec::new();
        if search(&u, &candidates, &mut chosen, 0, k) {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// Upper bounds on the feasible-path count from the structural parameters.
pub fn path_count_bounds(g: &TaskGraph, fvs_cap: usize) -> Result<StructureReport> {
    let fes = feedback_edge_number(g);
    let fvs = feedback_vertex_number(g, fvs_cap)?;
    let path_bound_fes = BigInt::one() << fes;
    let path_bound_fvs = fvs.map(|k| {
        if k == 0 {
            return BigInt::one();
        }
        let n = BigInt::from(g.vertex_count());
        let mut bound = BigInt::one();
        for _ in 0..k {
            bound *= BigInt::from(k);
        }
        for _ in 0..(2 * k) {
            bound *= &n;
        }
        bound
    });
    Ok(StructureReport { fes, fvs, path_bound_fes, path_bound_fvs })
}
