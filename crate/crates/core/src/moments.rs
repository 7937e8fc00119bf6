//! Exact expectation and variance of the traversal cost by a single forward
//! DP, and the Chebyshev-based motivation reward built on them.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::bias::BiasModel;
use crate::graph::topological_order;
use crate::rational::{sqrt_upper, SQRT_SCALE};
use crate::{Error, Result};

/// Exact moments of the traversal cost and of its ratio to the optimal
/// distance. The ratio moments are absent when the optimal distance is zero.
#[derive(Debug, Clone)]
pub struct MomentsReport {
    /// Probability that the agent ever stands on each vertex it can occupy.
    pub reach_prob: BTreeMap<String, BigRational>,
    pub e_c: BigRational,
    pub var_c: BigRational,
    pub e_x: Option<BigRational>,
    pub var_x: Option<BigRational>,
}

/// Forward DP over the occupied subgraph maintaining, per vertex, the
/// arrival probability, the unnormalized first moment of the prefix cost,
/// and the unnormalized second moment. At the target these are exactly
/// Pr = 1, E(cost) and E(cost^2).
pub fn moments(m: &BiasModel) -> Result<MomentsReport> {
    let occupied = m.agent_reachable();
    let order: Vec<String> = topological_order(m.graph())?
        .into_iter()
        .filter(|v| occupied.contains(v))
        .collect();

    let mut reach: BTreeMap<String, BigRational> = BTreeMap::new();
    let mut first: BTreeMap<String, BigRational> = BTreeMap::new();
    let mut second: BTreeMap<String, BigRational> = BTreeMap::new();
    let src = m.graph().source().to_string();
    reach.insert(src.clone(), BigRational::one());
    first.insert(src.clone(), BigRational::zero());
    second.insert(src, BigRational::zero());

    for v in &order {
        if v == m.graph().source() {
            continue;
        }
        let mut r = BigRational::zero();
        let mut e = BigRational::zero();
        let mut d = BigRational::zero();
        for (u, w) in m.graph().in_edges(v) {
            if !occupied.contains(u) {
                continue;
            }
            let p = m.transition_prob(u, v);
            if p.is_zero() {
                continue;
            }
            let w = BigRational::from_integer(w.clone());
            r += &reach[u] * &p;
            e += &p * &first[u] + &w * &p * &reach[u];
            d += &p * &second[u] + &w * &w * &p * &reach[u]
                + BigRational::from_integer(BigInt::from(2)) * &first[u] * &w * &p;
        }
        reach.insert(v.clone(), r);
        first.insert(v.clone(), e);
        second.insert(v.clone(), d);
    }

    let t = m.graph().target();
    let e_c = first[t].clone();
    let var_c = &second[t] - &e_c * &e_c;
    let dist = m.optimal_distance();
    let (e_x, var_x) = if dist.is_zero() {
        (None, None)
    } else {
        let d = BigRational::from_integer(dist.clone());
        (Some(&e_c / &d), Some(&var_c / (&d * &d)))
    };
    Ok(MomentsReport { reach_prob: reach, e_c, var_c, e_x, var_x })
}

/// Reward `E + sqrt(Var / (1 - confidence))`, rounded upward so the
/// Chebyshev guarantee `Pr(cost <= reward) >= confidence` survives the
/// rational square-root approximation. Confidence 3/4 gives `E + 2*sigma`.
pub fn chebyshev_reward(m: &BiasModel, confidence: &BigRational) -> Result<BigRational> {
    chebyshev_reward_with_scale(m, confidence, SQRT_SCALE)
}

/// Same with an explicit square-root precision scale (relative error about
/// `1/scale`, always rounded up).
pub fn chebyshev_reward_with_scale(m: &BiasModel, confidence: &BigRational, scale: u64) -> Result<BigRational> {
    if *confidence <= BigRational::zero() || *confidence >= BigRational::one() {
        return Err(Error::Domain("confidence must lie strictly between 0 and 1".into()));
    }
    let rep = moments(m)?;
    let slack = BigRational::one() - confidence;
    let spread = sqrt_upper(&(&rep.var_c / slack), scale)?;
    Ok(rep.e_c + spread)
}
