use super::{AlgorithmKind, AlgorithmReport};
use crate::config::SolverConfig;
use crate::error::Result;
use crate::model::{Allocation, Instance, Region, Topology, Valuation};
use crate::split::{exact_split, SplitRequest};
use crate::Rational;

/// `2n·log2(n̂) − 2n̂ + 2` with `n̂` the next power of two; zero for `n = 1`.
pub fn upper_bound_cuts(n: u64) -> u64 {
    assert!(n >= 1, "upper bound needs at least one agent");
    let hat = n.next_power_of_two();
    let log = u64::from(hat.trailing_zeros());
    2 * n * log + 2 - 2 * hat
}

/// Recursive halving: split the agents into the first `⌊n/2⌋` and the rest,
/// cut the cake into two parts that every agent values exactly in the
/// ratio of the two groups' entitlements, and recurse on each side.
/// Every agent ends up with exactly `t_i` of its value.
pub fn recursive_divide(inst: &Instance, config: &SolverConfig) -> Result<AlgorithmReport> {
    let valuations: Vec<&Valuation> = inst.valuations().iter().collect();
    let pieces = divide_subcake(
        &valuations,
        inst.entitlements(),
        Region::full(),
        inst.topology(),
        config.enumeration_cap,
    )?;
    let bound = upper_bound_cuts(inst.agent_count() as u64);
    Ok(AlgorithmReport::new(
        inst,
        Allocation::new(pieces),
        AlgorithmKind::Recursive,
        bound,
    ))
}

/// Divides `subcake` among the given agents so that agent `k` receives exactly
/// `weights[k] / Σ weights` of its value of the sub-cake.
pub(crate) fn divide_subcake(
    valuations: &[&Valuation],
    weights: &[Rational],
    subcake: Region,
    topology: Topology,
    cap: u64,
) -> Result<Vec<Region>> {
    let n = valuations.len();
    if n == 1 {
        return Ok(vec![subcake]);
    }
    let n_a = n / 2;
    let weight_a: Rational = weights[..n_a].iter().sum();
    let weight_all: Rational = weights.iter().sum();
    let request = SplitRequest {
        valuations: valuations.to_vec(),
        subcake,
        topology,
        ratio: weight_a / weight_all,
    };
    let split = exact_split(&request, cap)?;
    let mut pieces = divide_subcake(&valuations[..n_a], &weights[..n_a], split.part, topology, cap)?;
    pieces.extend(divide_subcake(
        &valuations[n_a..],
        &weights[n_a..],
        split.complement,
        topology,
        cap,
    )?);
    Ok(pieces)
}
