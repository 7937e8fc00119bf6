//! Acceptance suite: one test per criterion, each printing a pass line.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

mod common;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use biaswalk::bias::{build_model, BiasModel};
use biaswalk::distribution::{
    cdf_at, cost_distribution_sparse, enumerate_feasible_paths, law_from_paths,
    max_cost_of_irrationality, min_cost_of_irrationality, monte_carlo, CdfBackend, Caps,
    CostDistribution, DEFAULT_SPARSE_CAP,
};
use biaswalk::generators::{gen_akerlof, gen_exponential_chain, gen_ksum, gen_partition, gen_partition_shifted};
use biaswalk::moments::{chebyshev_reward, moments};
use biaswalk::rational::floor_to_int;
use biaswalk::structural::feedback_edge_number;

use common::*;

const ENUM_LIMIT: usize = 1 << 13;

fn akerlof_model() -> BiasModel {
    let inst = gen_akerlof(5, 6, 3, rat(1, 2)).unwrap();
    build_model(&inst.graph, &inst.beta, None).unwrap()
}

fn law(m: &BiasModel) -> CostDistribution {
    cost_distribution_sparse(m, DEFAULT_SPARSE_CAP).unwrap()
}

fn corpus() -> Vec<BiasModel> {
    let mut models = generator_models();
    models.extend(random_models(0xB1A5, 200, 12));
    models
}

#[test]
fn criterion_01_akerlof_golden_distribution_and_cdf() {
    let m = akerlof_model();
    let d = law(&m);
    let expect: Vec<(i64, BigRational)> = vec![
        (6, rat(1, 2)),
        (9, rat(1, 4)),
        (12, rat(1, 8)),
        (15, rat(1, 16)),
        (18, rat(1, 16)),
    ];
    assert_eq!(d.entries.len(), expect.len());
    for (c, p) in expect {
        assert_eq!(d.entries[&BigInt::from(c)], p, "mass at {c}");
    }
    let caps = Caps::default();
    assert_eq!(cdf_at(&m, &rat(1, 1), CdfBackend::Auto, caps).unwrap(), rat(1, 2));
    assert_eq!(cdf_at(&m, &rat(3, 2), CdfBackend::Auto, caps).unwrap(), rat(3, 4));
    for i in 1..=4i64 {
        // Pr(X <= 1 + (i-1)/2) = sum_{j=1..i} 2^-j.
        let threshold = rat(1, 1) + rat(i - 1, 2);
        let expect: BigRational = (1..=i).map(|j| rat(1, 1 << j)).sum();
        assert_eq!(cdf_at(&m, &threshold, CdfBackend::Auto, caps).unwrap(), expect, "i={i}");
    }
    assert_eq!(cdf_at(&m, &rat(3, 1), CdfBackend::Auto, caps).unwrap(), rat(1, 1));
    println!("criterion 1 PASS: akerlof golden distribution and CDF values exact");
}

#[test]
fn criterion_02_akerlof_extremes() {
    let m = akerlof_model();
    let mci = min_cost_of_irrationality(&m).unwrap();
    assert_eq!(mci.cost, BigInt::from(6));
    assert_eq!(mci.prob, Some(rat(1, 2)));
    let maxci = max_cost_of_irrationality(&m).unwrap();
    assert_eq!(maxci.cost, BigInt::from(18));
    println!("criterion 2 PASS: akerlof extremes (W_min, p) = (6, 1/2), W_max = 18");
}

#[test]
fn criterion_03_moments_match_distribution_sums() {
    let corpus = corpus();
    assert!(corpus.len() >= 200);
    for (i, m) in corpus.iter().enumerate() {
        let rep = moments(m).unwrap();
        let d = law(m);
        let e = d.expectation();
        assert_eq!(rep.e_c, e, "E mismatch on corpus[{i}]");
        assert_eq!(rep.var_c, d.second_moment() - &e * &e, "Var mismatch on corpus[{i}]");
        assert!(rep.var_c >= BigRational::zero());
    }
    println!("criterion 3 PASS: moments DP equals distribution sums on {} models", corpus.len());
}

#[test]
fn criterion_04_oracle_equivalence_and_extreme_keys() {
    let corpus = corpus();
    for (i, m) in corpus.iter().enumerate() {
        let d = law(m);
        let paths = enumerate_feasible_paths(m, ENUM_LIMIT).unwrap();
        let oracle = law_from_paths(&paths, d.optimal_distance.clone());
        assert_eq!(d, oracle, "law mismatch on corpus[{i}]");
        let mci = min_cost_of_irrationality(m).unwrap();
        let maxci = max_cost_of_irrationality(m).unwrap();
        assert_eq!(&mci.cost, d.min_cost(), "min key mismatch on corpus[{i}]");
        assert_eq!(&maxci.cost, d.max_cost(), "max key mismatch on corpus[{i}]");
    }
    println!("criterion 4 PASS: enumeration oracle equals sparse DP entry-for-entry on {} models", corpus.len());
}

#[test]
fn criterion_05_exponential_chain_reproduction() {
    for k in 1..=10u32 {
        let inst = gen_exponential_chain(k, None).unwrap();
        let a = BigInt::from(2u8).pow(k) + 2; // default budget
        let m = build_model(&inst.graph, &inst.beta, None).unwrap();
        let paths = enumerate_feasible_paths(&m, ENUM_LIMIT).unwrap();
        assert_eq!(paths.len(), 1 << k, "path count at k={k}");
        let costs: BTreeSet<BigInt> = paths.iter().map(|p| p.cost.clone()).collect();
        assert_eq!(costs.len(), 1 << k, "distinct costs at k={k}");
        let base = BigInt::from(k) * &a;
        for mcost in 0..(1u64 << k) {
            assert!(costs.contains(&(&base + BigInt::from(mcost))), "missing cost k={k} m={mcost}");
        }
        let d = law(&m);
        let uniform = BigRational::new(BigInt::one(), BigInt::one() << k);
        for p in d.entries.values() {
            assert_eq!(*p, uniform, "non-uniform mass at k={k}");
        }
        assert_eq!(inst.graph.vertex_count(), 3 * k as usize + 1);
    }
    println!("criterion 5 PASS: 2^k feasible paths with 2^k distinct uniform costs for k=1..=10 (31 vertices at k=10)");
}

#[test]
fn criterion_06_partition_reduction_soundness() {
    // Exhaustive over small multisets, plus hand-picked and random larger
    // ones up to |S| = 12.
    let mut suites: Vec<Vec<u64>> = Vec::new();
    for a in 1..=4u64 {
        suites.push(vec![a]);
        for b in a..=4 {
            suites.push(vec![a, b]);
            for c in b..=4 {
                suites.push(vec![a, b, c]);
            }
        }
    }
    suites.push(vec![1, 2, 3, 4, 5, 6, 7, 8]);
    suites.push(vec![2, 2, 2, 2, 2, 2]);
    let mut rng = StdRng::seed_from_u64(0x9A27);
    for n in [10usize, 12] {
        suites.push((0..n).map(|_| rng.gen_range(1..=6)).collect());
    }
    for s in &suites {
        let inst = gen_partition(s).unwrap();
        let m = build_model(&inst.graph, &inst.beta, None).unwrap();
        let d = law(&m);
        let target = inst.target_cost.clone().unwrap();
        let mass = d.entries.get(&target).cloned().unwrap_or_else(BigRational::zero);
        let scaled = mass * BigRational::from_integer(BigInt::one() << s.len());
        assert_eq!(
            scaled,
            BigRational::from_integer(BigInt::from(ordered_equal_bipartitions(s))),
            "partition count mismatch for S={s:?}"
        );
    }
    println!("criterion 6 PASS: 2^n * Pr(C = target) counts ordered equal bipartitions on {} multisets", suites.len());
}

#[test]
fn criterion_07_ksum_reduction_soundness() {
    let mut rng = StdRng::seed_from_u64(0x5D11);
    let mut positive = 0usize;
    for trial in 0..60 {
        let k = rng.gen_range(1..=4usize);
        let sets: Vec<Vec<u64>> = (0..k)
            .map(|_| {
                let len = rng.gen_range(1..=5usize);
                (0..len).map(|_| rng.gen_range(1..=9u64)).collect()
            })
            .collect();
        let t = rng.gen_range(1..=(9 * k as i64 + 3));
        let inst = gen_ksum(&sets, t).unwrap();
        let m = build_model(&inst.graph, &inst.beta, None).unwrap();
        let d = law(&m);
        let y = inst.target_cost.clone().unwrap();
        let hit = d.entries.contains_key(&y);
        assert_eq!(hit, ksum_exists(&sets, t), "trial {trial}: sets={sets:?} T={t}");
        if hit {
            positive += 1;
        }
    }
    assert!(positive > 5, "suite should exercise both outcomes, got {positive} positive");
    println!("criterion 7 PASS: Pr(C = Y) > 0 iff a k-sum selection exists, 60 random instances");
}

#[test]
fn criterion_08_feedback_edge_bound() {
    for (i, m) in corpus().iter().enumerate() {
        let fes = feedback_edge_number(m.graph());
        let paths = enumerate_feasible_paths(m, ENUM_LIMIT).unwrap();
        assert!(
            BigInt::from(paths.len()) <= (BigInt::one() << fes),
            "bound violated on corpus[{i}]"
        );
    }
    // Tight on partition instances: exactly 2^n paths with fes = n.
    for s in [&[1u64, 2, 3][..], &[2, 2], &[5, 1, 4, 2]] {
        let inst = gen_partition(s).unwrap();
        let m = build_model(&inst.graph, &inst.beta, None).unwrap();
        let fes = feedback_edge_number(m.graph());
        assert_eq!(fes, s.len());
        let paths = enumerate_feasible_paths(&m, ENUM_LIMIT).unwrap();
        assert_eq!(BigInt::from(paths.len()), BigInt::one() << fes, "tightness for S={s:?}");
    }
    println!("criterion 8 PASS: feasible-path count <= 2^fes corpus-wide, tight on partition instances");
}

#[test]
fn criterion_09_chebyshev_guarantee() {
    let mut checked = 0usize;
    for m in &corpus() {
        let rep = moments(m).unwrap();
        if rep.var_c.is_zero() {
            continue;
        }
        let reward = chebyshev_reward(m, &rat(3, 4)).unwrap();
        let d = law(m);
        assert!(
            d.cdf(&floor_to_int(&reward)) >= rat(3, 4),
            "guarantee violated: E={} Var={}",
            rep.e_c,
            rep.var_c
        );
        checked += 1;
    }
    assert!(checked >= 50, "corpus should contain spread-out laws, got {checked}");
    println!("criterion 9 PASS: Pr(C <= reward(3/4)) >= 3/4 on {checked} models with positive variance");
}

#[test]
fn criterion_10_rational_agent_point_mass() {
    for (i, m) in corpus().iter().enumerate() {
        let rational = build_model(m.graph(), &rat(1, 1), None).unwrap();
        let d = law(&rational);
        assert_eq!(d.entries.len(), 1, "corpus[{i}] law not a point mass");
        let (cost, p) = d.entries.iter().next().unwrap();
        assert_eq!(cost, rational.optimal_distance(), "corpus[{i}] mass off the optimum");
        assert!(p.is_one());
    }
    println!("criterion 10 PASS: beta = 1 concentrates the law on d(s,t) corpus-wide");
}

#[test]
fn criterion_11_invariance_suite() {
    // Weight scaling preserves the feasible set, the probabilities, and
    // every ratio quantity; costs scale by exactly lambda.
    for m in corpus().iter().take(60) {
        let d = law(m);
        let mci = min_cost_of_irrationality(m).unwrap();
        for lambda in [2i64, 7, 1000] {
            let lam = BigInt::from(lambda);
            let scaled_graph = m.graph().scale_weights(&lam).unwrap();
            let scaled = build_model(&scaled_graph, m.beta(), None).unwrap();
            assert_eq!(
                m.perception().feasible_edges,
                scaled.perception().feasible_edges,
                "feasible set changed under lambda={lambda}"
            );
            let sd = law(&scaled);
            assert_eq!(sd.entries.len(), d.entries.len());
            for (c, p) in &d.entries {
                assert_eq!(&sd.entries[&(c * &lam)], p, "mass moved under lambda={lambda}");
            }
            let smci = min_cost_of_irrationality(&scaled).unwrap();
            assert_eq!(smci.ratio, mci.ratio, "ratio changed under lambda={lambda}");
            assert_eq!(smci.prob, mci.prob);
        }
    }
    // Uniform shift on equal-edge-count graphs preserves the feasible set;
    // the law translates by (path length) * shift.
    for s in [&[1u64, 2, 3][..], &[2, 2], &[5, 1, 4, 2]] {
        let base = gen_partition(s).unwrap();
        let m = build_model(&base.graph, &base.beta, None).unwrap();
        let d = law(&m);
        for extra in [1i64, 5] {
            let shifted = gen_partition_shifted(s, &BigInt::from(extra)).unwrap();
            let sm = build_model(&shifted.graph, &shifted.beta, None).unwrap();
            assert_eq!(
                m.perception().feasible_edges,
                sm.perception().feasible_edges,
                "feasible set changed under shift {extra} for S={s:?}"
            );
            let sd = law(&sm);
            let offset = BigInt::from(2 * s.len() as i64 * extra);
            for (c, p) in &d.entries {
                assert_eq!(&sd.entries[&(c + &offset)], p, "law not translated for S={s:?}");
            }
        }
    }
    println!("criterion 11 PASS: scaling by 2, 7, 1000 and uniform shifts preserve feasibility and ratios");
}

#[test]
fn criterion_12_monte_carlo_calibration() {
    let m = akerlof_model();
    let n = 100_000u64;
    let freq = monte_carlo(&m, n, 2024);
    assert_eq!(freq, monte_carlo(&m, n, 2024), "same seed must reproduce");
    assert_eq!(freq.values().sum::<u64>(), n);
    let d = law(&m);
    for (cost, p) in &d.entries {
        let p = p.to_f64().unwrap();
        let emp = *freq.get(cost).unwrap_or(&0) as f64 / n as f64;
        let se = (p * (1.0 - p) / n as f64).sqrt();
        assert!(
            (emp - p).abs() <= 3.0 * se,
            "atom {cost}: empirical {emp} vs exact {p}, 3se = {}",
            3.0 * se
        );
    }
    println!("criterion 12 PASS: 1e5-sample run within 3 binomial standard errors per atom, deterministic by seed");
}
