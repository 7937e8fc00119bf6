//! Shared test fixtures: a deterministic random-DAG corpus and brute-force
//! oracles that stay independent of the library's DP engines.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use biaswalk::bias::{build_model, BiasModel};
use biaswalk::generators::{gen_akerlof, gen_exponential_chain, gen_ksum, gen_partition};
use biaswalk::graph::TaskGraph;

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Random DAG on at most `max_n` vertices in a fixed topological layout,
/// with the target always reachable from the source.
pub fn random_graph(rng: &mut StdRng, max_n: usize, max_w: u64) -> TaskGraph {
    let n = rng.gen_range(2..=max_n);
    let name = |i: usize| format!("v{i:02}");
    let mut edges: Vec<(String, String, BigInt)> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen_bool(0.4) {
                edges.push((name(i), name(j), BigInt::from(rng.gen_range(0..=max_w))));
            }
        }
    }
    let mut g = TaskGraph::new(
        (0..n).map(name),
        edges.clone(),
        &name(0),
        &name(n - 1),
    )
    .unwrap();
    if !g.reaches_target().contains(&name(0)) {
        edges.push((name(0), name(n - 1), BigInt::from(rng.gen_range(1..=max_w))));
        g = TaskGraph::new((0..n).map(name), edges, &name(0), &name(n - 1)).unwrap();
    }
    g
}

pub fn random_beta(rng: &mut StdRng) -> BigRational {
    let choices = [(1, 2), (1, 3), (2, 3), (3, 4), (1, 4), (1, 1), (2, 5)];
    let (n, d) = choices[rng.gen_range(0..choices.len())];
    rat(n, d)
}

/// Deterministic corpus of random models: `count` DAGs on up to `max_n`
/// vertices with assorted bias values.
pub fn random_models(seed: u64, count: usize, max_n: usize) -> Vec<BiasModel> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let g = random_graph(&mut rng, max_n, 9);
            let beta = random_beta(&mut rng);
            build_model(&g, &beta, None).unwrap()
        })
        .collect()
}

/// All generator fixtures used across the acceptance criteria.
pub fn generator_models() -> Vec<BiasModel> {
    let mut models = Vec::new();
    for (days, c, x, beta) in [(5, 6, 3, rat(1, 2)), (2, 4, 1, rat(3, 4)), (4, 10, 2, rat(1, 2)), (6, 8, 2, rat(3, 4))] {
        let inst = gen_akerlof(days, c, x, beta).unwrap();
        models.push(build_model(&inst.graph, &inst.beta, None).unwrap());
    }
    for k in 1..=6 {
        let inst = gen_exponential_chain(k, None).unwrap();
        models.push(build_model(&inst.graph, &inst.beta, None).unwrap());
    }
    for s in [&[1u64, 2, 3][..], &[1], &[2, 2], &[5, 1, 4, 2], &[3, 3, 3, 3]] {
        let inst = gen_partition(s).unwrap();
        models.push(build_model(&inst.graph, &inst.beta, None).unwrap());
    }
    for (sets, t) in [
        (vec![vec![1u64, 2], vec![3]], 4i64),
        (vec![vec![1], vec![1]], 5),
        (vec![vec![2, 4, 6], vec![1, 3], vec![5]], 10),
    ] {
        let inst = gen_ksum(&sets, t).unwrap();
        models.push(build_model(&inst.graph, &inst.beta, None).unwrap());
    }
    // Randomized gadget parameters: ties by construction, so these carry
    // spread-out laws that random weights almost never produce.
    let mut rng = StdRng::seed_from_u64(0xF1D5);
    for _ in 0..20 {
        let n = rng.gen_range(1..=6usize);
        let s: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=9)).collect();
        let inst = gen_partition(&s).unwrap();
        models.push(build_model(&inst.graph, &inst.beta, None).unwrap());
    }
    for _ in 0..15 {
        // x + beta*c = c exactly: pick x and beta = (c-x)/c with c > x.
        let x = rng.gen_range(1..=6u64);
        let c = x + rng.gen_range(1..=6u64);
        let beta = BigRational::new(BigInt::from(c - x), BigInt::from(c));
        let inst = gen_akerlof(rng.gen_range(2..=7), c, x, beta).unwrap();
        models.push(build_model(&inst.graph, &inst.beta, None).unwrap());
    }
    for _ in 0..10 {
        let k = rng.gen_range(1..=6u32);
        let inst = gen_exponential_chain(k, None).unwrap();
        models.push(build_model(&inst.graph, &inst.beta, None).unwrap());
    }
    models
}

/// Number of ordered pairs (A, B) partitioning `s` with equal sums, by
/// exhaustive subset enumeration.
pub fn ordered_equal_bipartitions(s: &[u64]) -> u64 {
    let n = s.len();
    let total: i128 = s.iter().map(|&x| x as i128).sum();
    let mut count = 0;
    for mask in 0u64..(1 << n) {
        let sum_a: i128 = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| s[i] as i128).sum();
        if 2 * sum_a == total {
            count += 1;
        }
    }
    count
}

/// Whether some selection x_i in X_i sums to `t`, by exhaustive search.
pub fn ksum_exists(sets: &[Vec<u64>], t: i64) -> bool {
    fn go(sets: &[Vec<u64>], i: usize, acc: i128, t: i128) -> bool {
        if i == sets.len() {
            return acc == t;
        }
        sets[i].iter().any(|&x| go(sets, i + 1, acc + x as i128, t))
    }
    go(sets, 0, 0, t as i128)
}
