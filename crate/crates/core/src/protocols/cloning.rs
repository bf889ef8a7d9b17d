use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use super::proportional::connected_proportional;
use super::{AlgorithmKind, AlgorithmReport};
use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::model::{Allocation, Instance, Interval, Region, Valuation};
use crate::rational::common_denominator;

/// Agent cloning: with `D` the common denominator of the entitlements, agent
/// `i` is replaced by `t_i·D` clones (kept consecutive), the clones share the
/// cake by connected proportional division, and each agent collects its
/// clones' pieces. At most `D − 1` cuts.
pub fn clone_divide(inst: &Instance, config: &SolverConfig) -> Result<AlgorithmReport> {
    let d = common_denominator(inst.entitlements());
    let d = clone_count(&d, config)?;
    let copies: Vec<usize> = inst
        .entitlements()
        .iter()
        .map(|t| (t * BigInt::from(d)).to_integer().to_usize().expect("at most D clones"))
        .collect();
    let allocation = divide_among_clones(inst, &copies);
    Ok(AlgorithmReport::new(
        inst,
        allocation,
        AlgorithmKind::Clone,
        d as u64 - 1,
    ))
}

/// `(heavy agent, D)` when at least `n − 1` entitlements equal `1/D`. The
/// heavy agent is the one left over, or the last agent when all are equal.
pub fn near_equal_pattern(inst: &Instance) -> Option<(usize, usize)> {
    let t = inst.entitlements();
    let n = t.len();
    if n == 1 {
        return Some((0, 1));
    }
    let mut unit_denominators: Vec<BigInt> = t
        .iter()
        .filter(|x| x.numer().is_one())
        .map(|x| x.denom().clone())
        .collect();
    unit_denominators.sort();
    unit_denominators.dedup();
    for d in unit_denominators {
        let matching = t.iter().filter(|x| x.numer().is_one() && x.denom() == &d).count();
        if matching + 1 < n {
            continue;
        }
        let heavy = if matching == n {
            n - 1
        } else {
            t.iter()
                .position(|x| !(x.numer().is_one() && x.denom() == &d))
                .expect("exactly one agent differs")
        };
        return Some((heavy, d.to_usize()?));
    }
    None
}

/// Cloning with only the heavy agent replicated: with `n − 1` entitlements
/// equal to `1/D`, the heavy agent gets `D − n + 1` clones and every light
/// agent a single interval. At most `2(n − 1)` cuts.
pub fn near_equal_divide(inst: &Instance, config: &SolverConfig) -> Result<AlgorithmReport> {
    let (heavy, d) = near_equal_pattern(inst)
        .ok_or_else(|| Error::PreconditionViolated("fewer than n - 1 entitlements equal a common 1/D".into()))?;
    clone_count(&BigInt::from(d), config)?;
    let n = inst.agent_count();
    let copies: Vec<usize> = (0..n).map(|i| if i == heavy { d + 1 - n } else { 1 }).collect();
    let allocation = divide_among_clones(inst, &copies);
    let bound = 2 * (n as u64 - 1);
    Ok(AlgorithmReport::new(inst, allocation, AlgorithmKind::NearEqual, bound))
}

fn clone_count(d: &BigInt, config: &SolverConfig) -> Result<usize> {
    match d.to_u64() {
        Some(v) if v <= config.enumeration_cap => Ok(v as usize),
        _ => Err(Error::BudgetExceeded {
            required: d.to_u128().unwrap_or(u128::MAX),
            cap: config.enumeration_cap,
        }),
    }
}

fn divide_among_clones(inst: &Instance, copies: &[usize]) -> Allocation {
    let mut owners = Vec::new();
    let mut participants: Vec<&Valuation> = Vec::new();
    for (agent, (&c, v)) in copies.iter().zip(inst.valuations()).enumerate() {
        for _ in 0..c {
            owners.push(agent);
            participants.push(v);
        }
    }
    let clone_pieces = connected_proportional(&participants, &Interval::full()).into_pieces();
    let mut pieces = vec![Region::empty(); inst.agent_count()];
    for (owner, piece) in owners.into_iter().zip(clone_pieces) {
        pieces[owner] = pieces[owner].union(&piece);
    }
    Allocation::new(pieces)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Topology;
    use crate::rational::{one, ratio, zero};

    fn uniform_instance(t: Vec<crate::Rational>) -> Instance {
        let vals = vec![Valuation::uniform(); t.len()];
        Instance::new(Topology::Interval, vals, t).unwrap()
    }

    #[test]
    fn two_fifths_uniform_pair() {
        let inst = uniform_instance(vec![ratio(2, 5), ratio(3, 5)]);
        let rep = clone_divide(&inst, &SolverConfig::default()).unwrap();
        assert_eq!(
            rep.allocation.pieces()[0],
            Region::interval(zero(), ratio(2, 5)).unwrap()
        );
        assert_eq!(
            rep.allocation.pieces()[1],
            Region::interval(ratio(2, 5), one()).unwrap()
        );
        assert_eq!(rep.cuts, vec![ratio(2, 5)]);
        assert_eq!(rep.bound, 4);
    }

    #[test]
    fn equal_halves() {
        let inst = uniform_instance(vec![ratio(1, 2), ratio(1, 2)]);
        let rep = clone_divide(&inst, &SolverConfig::default()).unwrap();
        assert_eq!(rep.cuts, vec![ratio(1, 2)]);
    }

    #[test]
    fn pattern_detection() {
        let p = |t: Vec<crate::Rational>| near_equal_pattern(&uniform_instance(t));
        assert_eq!(p(vec![ratio(1, 4), ratio(1, 4), ratio(1, 2)]), Some((2, 4)));
        assert_eq!(p(vec![ratio(1, 2), ratio(1, 4), ratio(1, 4)]), Some((0, 4)));
        assert_eq!(p(vec![ratio(1, 2), ratio(1, 2)]), Some((1, 2)));
        assert_eq!(p(vec![ratio(1, 3), ratio(1, 3), ratio(1, 3)]), Some((2, 3)));
        assert_eq!(p(vec![ratio(2, 3), ratio(1, 3)]), Some((0, 3)));
        assert_eq!(p(vec![ratio(1, 7), ratio(2, 7), ratio(4, 7)]), None);
        assert_eq!(p(vec![ratio(2, 5), ratio(3, 5)]), None);
        assert_eq!(p(vec![one()]), Some((0, 1)));
    }

    #[test]
    fn near_equal_quarter_quarter_half() {
        let inst = uniform_instance(vec![ratio(1, 4), ratio(1, 4), ratio(1, 2)]);
        let rep = near_equal_divide(&inst, &SolverConfig::default()).unwrap();
        assert_eq!(rep.cuts, vec![ratio(1, 4), ratio(1, 2)]);
        assert_eq!(
            rep.allocation.pieces()[2],
            Region::interval(ratio(1, 2), one()).unwrap()
        );
        assert_eq!(rep.bound, 4);
    }

    #[test]
    fn near_equal_rejects_other_patterns() {
        let inst = uniform_instance(vec![ratio(1, 7), ratio(2, 7), ratio(4, 7)]);
        assert!(matches!(
            near_equal_divide(&inst, &SolverConfig::default()),
            Err(Error::PreconditionViolated(_))
        ));
    }
}
