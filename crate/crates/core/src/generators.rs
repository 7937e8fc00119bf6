//! Gadget-family instance generators: the procrastination chain, the
//! exponential branch chain, the partition diamond chain, and the k-sum
//! gadget chain. Each returns a [`GeneratedInstance`] carrying the graph,
//! the bias it was built for, and the metadata the test harness checks
//! (target cost, applied weight shift, expected feasible-path count).

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::graph::{serialize, TaskGraph};
use crate::rational::format_rational;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct GeneratedInstance {
    pub graph: TaskGraph,
    pub beta: BigRational,
    /// Hardness-instance target cost, already adjusted for the weight shift.
    pub target_cost: Option<BigInt>,
    /// Non-negative shift added to every edge weight to clear negatives.
    pub shift: BigInt,
    /// Number of feasible source-target paths the construction promises.
    pub expected_path_count: BigInt,
    pub notes: String,
}

impl GeneratedInstance {
    /// Canonical text format plus a comment trailer with the metadata.
    pub fn to_canonical_text(&self) -> String {
        let mut out = serialize(&self.graph, &self.beta, &BTreeMap::new());
        if let Some(tc) = &self.target_cost {
            let _ = writeln!(out, "# target_cost {tc}");
        }
        let _ = writeln!(out, "# shift {}", self.shift);
        let _ = writeln!(out, "# expected_paths {}", self.expected_path_count);
        if !self.notes.is_empty() {
            let _ = writeln!(out, "# {}", self.notes);
        }
        out
    }
}

fn edge(u: &str, v: &str, w: BigInt) -> (String, String, BigInt) {
    (u.to_string(), v.to_string(), w)
}

/// Procrastination chain: `days` day vertices, each with a direct edge to
/// the reviews target (weight `review_cost`) and, except the last, an edge
/// to the next day (weight `distraction_cost`).
///
/// With `x + beta*c = c` exactly, every non-final day ties between finishing
/// and procrastinating; with `x + beta*c < c` only procrastination is
/// feasible until the final day; with `x + beta*c > c` only the direct edge.
pub fn gen_akerlof(days: u32, review_cost: u64, distraction_cost: u64, beta: BigRational) -> Result<GeneratedInstance> {
    if days < 2 {
        return Err(Error::Generator("akerlof chain needs at least 2 days".into()));
    }
    let width = days.to_string().len();
    let day = |i: u32| format!("day{:0width$}", i + 1);
    let target = "reviews";
    let mut edges = Vec::new();
    for i in 0..days {
        edges.push(edge(&day(i), target, BigInt::from(review_cost)));
        if i + 1 < days {
            edges.push(edge(&day(i), &day(i + 1), BigInt::from(distraction_cost)));
        }
    }
    let graph = TaskGraph::new(Vec::new(), edges, &day(0), target)?;

    // Path count: a tie at every non-final day yields `days` feasible paths;
    // otherwise the walk is deterministic.
    let tie = BigRational::from_integer(BigInt::from(distraction_cost))
        + &beta * BigRational::from_integer(BigInt::from(review_cost));
    let c = BigRational::from_integer(BigInt::from(review_cost));
    let expected_path_count = if tie == c { BigInt::from(days) } else { BigInt::one() };

    Ok(GeneratedInstance {
        graph,
        beta,
        target_cost: None,
        shift: BigInt::zero(),
        expected_path_count,
        notes: format!("akerlof days={days} c={review_cost} x={distraction_cost}"),
    })
}

/// Chain of `k` four-vertex branch gadgets with bias fixed at 1/2.
///
/// Gadget `i` (zero-based) carries weights `a = A-1`, `b = 1` on the upper
/// arm and `c = A - 2^i - 1`, `d = 1 + 2^(i+1)` on the lower arm, so both
/// arms tie in perceived cost while their real costs differ by exactly
/// `2^i`. The 2^k feasible path costs are exactly `k*A + m` for
/// `m = 0 .. 2^k - 1`, each with probability `2^-k`.
///
/// Zero-based gadget indices make the achievable offsets cover every
/// integer in that range rather than only even ones.
pub fn gen_exponential_chain(k: u32, big_a: Option<BigInt>) -> Result<GeneratedInstance> {
    if k < 1 {
        return Err(Error::Generator("chain needs at least one gadget".into()));
    }
    let default_a = BigInt::from(2u8).pow(k) + 2;
    let a_const = big_a.unwrap_or(default_a);
    // All weights stay >= 1 iff A >= 2^(k-1) + 2.
    let min_a = BigInt::from(2u8).pow(k - 1) + 2;
    if a_const < min_a {
        return Err(Error::Generator(format!(
            "A={a_const} too small for k={k}: need A >= {min_a} to keep all weights positive"
        )));
    }

    let width = (k + 1).to_string().len();
    let branch = |i: u32| if i == k { "t".to_string() } else { format!("b{:0width$}", i) };
    let mut edges = Vec::new();
    for i in 0..k {
        let pow_i = BigInt::from(2u8).pow(i);
        let upper = format!("u{:0width$}", i);
        let lower = format!("l{:0width$}", i);
        edges.push(edge(&branch(i), &upper, &a_const - 1));
        edges.push(edge(&upper, &branch(i + 1), BigInt::one()));
        edges.push(edge(&branch(i), &lower, &a_const - &pow_i - 1));
        edges.push(edge(&lower, &branch(i + 1), BigInt::one() + &pow_i * 2));
    }
    let graph = TaskGraph::new(Vec::new(), edges, &branch(0), "t")?;
    Ok(GeneratedInstance {
        graph,
        beta: BigRational::new(1.into(), 2.into()),
        target_cost: None,
        shift: BigInt::zero(),
        expected_path_count: BigInt::from(2u8).pow(k),
        notes: format!("expchain k={k} A={a_const}"),
    })
}

/// Diamond chain encoding partition counting, bias fixed at 1/2.
///
/// Diamond `i` carries `s_i`, `2*(W - s_i)` on the upper arms and `-s_i`,
/// `2*(W + s_i)` on the lower arms, with `W = max(S) + 1`; a uniform shift
/// of `max(S)` per edge clears the negatives. Every one of the `2^n` paths
/// is feasible with probability `2^-n`, and `2^n * Pr(C = target_cost)`
/// counts the ordered equal-sum bipartitions of `S`.
pub fn gen_partition(s: &[u64]) -> Result<GeneratedInstance> {
    gen_partition_shifted(s, &BigInt::zero())
}

/// Same construction with `extra` added on top of the canonical shift.
/// Valid because every source-target path has exactly `2n` edges, so a
/// uniform per-edge shift moves all path costs by the same amount; used to
/// test shift invariance of the feasible set and the cost law.
pub fn gen_partition_shifted(s: &[u64], extra: &BigInt) -> Result<GeneratedInstance> {
    if s.is_empty() {
        return Err(Error::Generator("partition instance needs at least one number".into()));
    }
    let n = s.len();
    let max = *s.iter().max().expect("nonempty");
    let w_const = BigInt::from(max) + 1;
    let delta = BigInt::from(max) + extra;

    let width = (n + 1).to_string().len();
    let entry = |i: usize| if i == n { "t".to_string() } else { format!("e{:0width$}", i) };
    let mut edges = Vec::new();
    for (i, &si) in s.iter().enumerate() {
        let si = BigInt::from(si);
        let upper = format!("u{:0width$}", i);
        let lower = format!("l{:0width$}", i);
        edges.push(edge(&entry(i), &upper, &si + &delta));
        edges.push(edge(&upper, &entry(i + 1), (&w_const - &si) * 2 + &delta));
        edges.push(edge(&entry(i), &lower, -&si + &delta));
        edges.push(edge(&lower, &entry(i + 1), (&w_const + &si) * 2 + &delta));
    }
    let graph = TaskGraph::new(Vec::new(), edges, &entry(0), "t")?;
    debug_assert!(all_paths_have_edge_count(&graph, 2 * n));

    let n_big = BigInt::from(n);
    let target_cost = &n_big * &w_const * 2 + &n_big * &delta * 2;
    Ok(GeneratedInstance {
        graph,
        beta: BigRational::new(1.into(), 2.into()),
        target_cost: Some(target_cost),
        shift: delta,
        expected_path_count: BigInt::from(2u8).pow(n as u32),
        notes: format!("partition n={n} W={w_const}"),
    })
}

/// Gadget chain encoding k-sum selection, bias fixed at 1/2.
///
/// Gadget `i` offers one two-edge route per element `c` of `X_i`: first edge
/// weight `c`, completion edge `2*(W - c)` with `W = 1 + max over all
/// elements`. All routes tie in perceived cost, so every path is feasible;
/// a path of cost `Y = 2*k*W - T` exists iff some selection sums to `T`.
pub fn gen_ksum(x_sets: &[Vec<u64>], t_sum: i64) -> Result<GeneratedInstance> {
    if x_sets.is_empty() || x_sets.iter().any(Vec::is_empty) {
        return Err(Error::Generator("every k-sum set must be nonempty".into()));
    }
    let k = x_sets.len();
    let max = *x_sets.iter().flatten().max().expect("nonempty sets");
    let w_const = BigInt::from(max) + 1;
    let target_cost = BigInt::from(k) * &w_const * 2 - BigInt::from(t_sum);
    if target_cost < BigInt::zero() {
        return Err(Error::Generator(format!(
            "target sum {t_sum} puts the path target cost below zero"
        )));
    }

    let width = (k + 1).to_string().len();
    let entry = |i: usize| if i == k { "t".to_string() } else { format!("g{:0width$}", i) };
    let mut edges = Vec::new();
    let mut path_count = BigInt::one();
    for (i, xs) in x_sets.iter().enumerate() {
        let mut xs: Vec<u64> = xs.clone();
        xs.sort_unstable();
        xs.dedup();
        path_count *= BigInt::from(xs.len());
        for &c in &xs {
            let c_big = BigInt::from(c);
            let mid = format!("m{:0width$}x{c}", i);
            edges.push(edge(&entry(i), &mid, c_big.clone()));
            edges.push(edge(&mid, &entry(i + 1), (&w_const - &c_big) * 2));
        }
    }
    let graph = TaskGraph::new(Vec::new(), edges, &entry(0), "t")?;
    debug_assert!(all_paths_have_edge_count(&graph, 2 * k));
    Ok(GeneratedInstance {
        graph,
        beta: BigRational::new(1.into(), 2.into()),
        target_cost: Some(target_cost),
        shift: BigInt::zero(),
        expected_path_count: path_count,
        notes: format!("ksum k={k} T={t_sum} W={w_const}"),
    })
}

/// Checks that every source-target path has exactly `len` edges; the
/// uniform-shift argument of the diamond constructions relies on it.
fn all_paths_have_edge_count(g: &TaskGraph, len: usize) -> bool {
    fn depths(g: &TaskGraph, v: &str, acc: usize, len: usize) -> bool {
        if v == g.target() {
            return acc == len;
        }
        g.out_edges(v).all(|(u, _)| depths(g, u, acc + 1, len))
    }
    depths(g, g.source(), 0, len)
}

/// Parses the rendered beta of a generated instance back; convenience for
/// CLI round trips.
pub fn beta_label(inst: &GeneratedInstance) -> String {
    format_rational(&inst.beta)
}
