//! Task-graph data model: a weighted DAG with a designated source and target,
//! the canonical line-oriented text format, and structural validation.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::rational::{format_rational, parse_rational};
use crate::{Error, Result};

/// Weighted directed acyclic task graph. Vertices are opaque UTF-8 strings;
/// weights are arbitrary-precision non-negative integers (hardness instances
/// use weights exponential in the vertex count, so fixed width won't do).
///
/// Construction does not enforce acyclicity or reachability; run
/// [`validate`] to get a report, or [`topological_order`] which fails on
/// cycles. All analysis entry points require a graph that validated clean.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaskGraph {
    vertices: BTreeSet<String>,
    out: BTreeMap<String, BTreeMap<String, BigInt>>,
    inc: BTreeMap<String, BTreeMap<String, BigInt>>,
    source: String,
    target: String,
    edge_count: usize,
}

impl TaskGraph {
    /// Builds a graph from explicit parts. Rejects negative weights,
    /// duplicate edges, self-loops, and endpoints missing from the vertex
    /// set; acyclicity is left to [`validate`].
    pub fn new<I>(vertices: I, edges: Vec<(String, String, BigInt)>, source: &str, target: &str) -> Result<Self>
    where
        I: IntoIterator<Item = String>,
    {
        let mut g = TaskGraph {
            vertices: vertices.into_iter().collect(),
            out: BTreeMap::new(),
            inc: BTreeMap::new(),
            source: source.to_string(),
            target: target.to_string(),
            edge_count: 0,
        };
        for (u, v, w) in edges {
            g.vertices.insert(u.clone());
            g.vertices.insert(v.clone());
            g.insert_edge(u, v, w)?;
        }
        if !g.vertices.contains(&g.source) {
            return Err(Error::InvalidGraph(format!("source '{}' not in vertex set", g.source)));
        }
        if !g.vertices.contains(&g.target) {
            return Err(Error::InvalidGraph(format!("target '{}' not in vertex set", g.target)));
        }
        Ok(g)
    }

    fn insert_edge(&mut self, u: String, v: String, w: BigInt) -> Result<()> {
        if w.is_negative() {
            return Err(Error::InvalidGraph(format!("negative weight on edge {u} -> {v}")));
        }
        if u == v {
            return Err(Error::InvalidGraph(format!("self-loop at {u}")));
        }
        let prev = self.out.entry(u.clone()).or_default().insert(v.clone(), w.clone());
        if prev.is_some() {
            return Err(Error::InvalidGraph(format!("duplicate edge {u} -> {v}")));
        }
        self.inc.entry(v).or_default().insert(u, w);
        self.edge_count += 1;
        Ok(())
    }

    pub fn vertices(&self) -> impl Iterator<Item = &str> {
        self.vertices.iter().map(String::as_str)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn target(&self) -> &str {
        &self.target
    }

    pub fn contains_vertex(&self, v: &str) -> bool {
        self.vertices.contains(v)
    }

    pub fn weight(&self, u: &str, v: &str) -> Option<&BigInt> {
        self.out.get(u).and_then(|m| m.get(v))
    }

    /// Outgoing edges of `u` as `(head, weight)`, in lexicographic head order.
    pub fn out_edges(&self, u: &str) -> impl Iterator<Item = (&str, &BigInt)> {
        self.out.get(u).into_iter().flatten().map(|(v, w)| (v.as_str(), w))
    }

    /// Incoming edges of `v` as `(tail, weight)`, in lexicographic tail order.
    pub fn in_edges(&self, v: &str) -> impl Iterator<Item = (&str, &BigInt)> {
        self.inc.get(v).into_iter().flatten().map(|(u, w)| (u.as_str(), w))
    }

    /// All edges as `(tail, head, weight)`, sorted by `(tail, head)`.
    pub fn edges(&self) -> impl Iterator<Item = (&str, &str, &BigInt)> {
        self.out
            .iter()
            .flat_map(|(u, m)| m.iter().map(move |(v, w)| (u.as_str(), v.as_str(), w)))
    }

    /// Vertices from which the target is reachable (always includes the
    /// target itself), by reverse traversal.
    pub fn reaches_target(&self) -> BTreeSet<String> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(self.target.clone());
        queue.push_back(self.target.clone());
        while let Some(v) = queue.pop_front() {
            for (u, _) in self.in_edges(&v) {
                if seen.insert(u.to_string()) {
                    queue.push_back(u.to_string());
                }
            }
        }
        seen
    }

    /// Returns a copy with every edge weight multiplied by `factor`.
    pub fn scale_weights(&self, factor: &BigInt) -> Result<TaskGraph> {
        let edges = self
            .edges()
            .map(|(u, v, w)| (u.to_string(), v.to_string(), w * factor))
            .collect();
        TaskGraph::new(self.vertices.iter().cloned(), edges, &self.source, &self.target)
    }

    /// Returns a copy with `delta` added to every edge weight.
    pub fn shift_weights(&self, delta: &BigInt) -> Result<TaskGraph> {
        let edges = self
            .edges()
            .map(|(u, v, w)| (u.to_string(), v.to_string(), w + delta))
            .collect();
        TaskGraph::new(self.vertices.iter().cloned(), edges, &self.source, &self.target)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone)]
pub struct Issue {
    pub severity: Severity,
    pub code: &'static str,
    pub message: String,
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub ok: bool,
    pub issues: Vec<Issue>,
    pub unreachable_to_target: BTreeSet<String>,
}

/// Checks the structural invariants and reports everything found instead of
/// failing on the first problem. `ok` is true iff no error-severity issue
/// exists; warnings (dead-end vertices, isolated vertices) don't clear it.
pub fn validate(g: &TaskGraph) -> ValidationReport {
    let mut issues = Vec::new();

    if topological_order(g).is_err() {
        issues.push(Issue {
            severity: Severity::Error,
            code: "cycle",
            message: "graph contains a directed cycle".into(),
        });
    }

    let reaches = g.reaches_target();
    if !reaches.contains(g.source()) {
        issues.push(Issue {
            severity: Severity::Error,
            code: "target-unreachable",
            message: format!("target '{}' is not reachable from source '{}'", g.target(), g.source()),
        });
    }

    let unreachable: BTreeSet<String> = g
        .vertices()
        .filter(|v| !reaches.contains(*v))
        .map(str::to_string)
        .collect();
    for v in &unreachable {
        issues.push(Issue {
            severity: Severity::Warning,
            code: "dead-end",
            message: format!("vertex '{v}' cannot reach the target and never lies on a feasible path"),
        });
    }

    for v in g.vertices() {
        if g.out_edges(v).next().is_none() && g.in_edges(v).next().is_none() {
            issues.push(Issue {
                severity: Severity::Warning,
                code: "isolated",
                message: format!("vertex '{v}' has no edges"),
            });
        }
    }

    let ok = issues.iter().all(|i| i.severity != Severity::Error);
    ValidationReport { ok, issues, unreachable_to_target: unreachable }
}

/// Kahn's algorithm with a lexicographic tie-break, so the order is
/// deterministic across runs and platforms.
pub fn topological_order(g: &TaskGraph) -> Result<Vec<String>> {
    let mut indeg: BTreeMap<&str, usize> = g.vertices().map(|v| (v, 0)).collect();
    for (_, v, _) in g.edges() {
        *indeg.get_mut(v).expect("edge head in vertex set") += 1;
    }
    let mut ready: BTreeSet<&str> = indeg.iter().filter(|(_, d)| **d == 0).map(|(v, _)| *v).collect();
    let mut order = Vec::with_capacity(g.vertex_count());
    while let Some(&v) = ready.iter().next() {
        ready.remove(v);
        order.push(v.to_string());
        for (u, _) in g.out_edges(v) {
            let d = indeg.get_mut(u).expect("edge head in vertex set");
            *d -= 1;
            if *d == 0 {
                ready.insert(u);
            }
        }
    }
    if order.len() != g.vertex_count() {
        return Err(Error::Cycle);
    }
    Ok(order)
}

/// A parsed instance file: the graph plus the declarations consumed by the
/// bias engine (`beta`, explicit `prob` lines).
#[derive(Debug, Clone)]
pub struct ParsedInstance {
    pub graph: TaskGraph,
    pub beta: BigRational,
    pub explicit_policy: BTreeMap<(String, String), BigRational>,
}

/// Parses the canonical text format.
///
/// Lines are whitespace-tokenized, `#` starts a comment:
///
/// ```text
/// beta P/Q        # exactly once, 0 < P/Q <= 1
/// source ID       # exactly once
/// target ID       # exactly once
/// edge U V W      # weight W is a decimal non-negative integer
/// prob U V P/Q    # optional explicit transition probability
/// node ID         # declares an isolated vertex
/// ```
pub fn parse_task_graph(text: &str) -> Result<ParsedInstance> {
    let mut beta: Option<BigRational> = None;
    let mut source: Option<String> = None;
    let mut target: Option<String> = None;
    let mut nodes: Vec<String> = Vec::new();
    let mut edges: Vec<(String, String, BigInt)> = Vec::new();
    let mut seen_edges: BTreeSet<(String, String)> = BTreeSet::new();
    let mut explicit_policy: BTreeMap<(String, String), BigRational> = BTreeMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |msg: String| Error::Parse { line, msg };
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        match tokens[0] {
            "beta" => {
                if tokens.len() != 2 {
                    return Err(err("expected 'beta P/Q'".into()));
                }
                if beta.is_some() {
                    return Err(err("duplicate beta declaration".into()));
                }
                let b = parse_rational(tokens[1]).map_err(|e| err(e.to_string()))?;
                if b <= BigRational::zero() || b > BigRational::one() {
                    return Err(err(format!("beta must satisfy 0 < beta <= 1, got {}", format_rational(&b))));
                }
                beta = Some(b);
            }
            "source" => {
                if tokens.len() != 2 {
                    return Err(err("expected 'source ID'".into()));
                }
                if source.is_some() {
                    return Err(err("duplicate source declaration".into()));
                }
                source = Some(tokens[1].to_string());
            }
            "target" => {
                if tokens.len() != 2 {
                    return Err(err("expected 'target ID'".into()));
                }
                if target.is_some() {
                    return Err(err("duplicate target declaration".into()));
                }
                target = Some(tokens[1].to_string());
            }
            "node" => {
                if tokens.len() != 2 {
                    return Err(err("expected 'node ID'".into()));
                }
                nodes.push(tokens[1].to_string());
            }
            "edge" => {
                if tokens.len() != 4 {
                    return Err(err("expected 'edge U V W'".into()));
                }
                let w: BigInt = tokens[3]
                    .parse()
                    .map_err(|_| err(format!("bad weight '{}'", tokens[3])))?;
                if w.is_negative() {
                    return Err(err(format!("negative weight on edge {} -> {}", tokens[1], tokens[2])));
                }
                let key = (tokens[1].to_string(), tokens[2].to_string());
                if !seen_edges.insert(key.clone()) {
                    return Err(err(format!("duplicate edge {} -> {}", tokens[1], tokens[2])));
                }
                edges.push((key.0, key.1, w));
            }
            "prob" => {
                if tokens.len() != 4 {
                    return Err(err("expected 'prob U V P/Q'".into()));
                }
                let p = parse_rational(tokens[3]).map_err(|e| err(e.to_string()))?;
                let key = (tokens[1].to_string(), tokens[2].to_string());
                if explicit_policy.insert(key, p).is_some() {
                    return Err(err(format!("duplicate prob for edge {} -> {}", tokens[1], tokens[2])));
                }
            }
            other => return Err(err(format!("unknown directive '{other}'"))),
        }
    }

    let beta = beta.ok_or(Error::Parse { line: 0, msg: "missing beta declaration".into() })?;
    let source = source.ok_or(Error::Parse { line: 0, msg: "missing source declaration".into() })?;
    let target = target.ok_or(Error::Parse { line: 0, msg: "missing target declaration".into() })?;

    let graph = TaskGraph::new(nodes, edges, &source, &target)?;
    Ok(ParsedInstance { graph, beta, explicit_policy })
}

/// Serializes to the canonical text format; `parse_task_graph` round-trips it.
pub fn serialize(
    g: &TaskGraph,
    beta: &BigRational,
    explicit_policy: &BTreeMap<(String, String), BigRational>,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "beta {}", format_rational(beta));
    let _ = writeln!(out, "source {}", g.source());
    let _ = writeln!(out, "target {}", g.target());
    for v in g.vertices() {
        if g.out_edges(v).next().is_none() && g.in_edges(v).next().is_none() {
            let _ = writeln!(out, "node {v}");
        }
    }
    for (u, v, w) in g.edges() {
        let _ = writeln!(out, "edge {u} {v} {w}");
    }
    for ((u, v), p) in explicit_policy {
        let _ = writeln!(out, "prob {u} {v} {}", format_rational(p));
    }
    out
}
