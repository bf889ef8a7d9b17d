//! Independent allocation checks.
//!
//! Only measure evaluation and region arithmetic from the model are used; no
//! protocol code is trusted here.

use num_traits::Zero;

use crate::model::{measure_of, Allocation, Instance, Region};
use crate::rational::format_rational;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgentCheck {
    pub agent: usize,
    pub value: Rational,
    /// `t_i · V_i(C)`.
    pub threshold: Rational,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Overlap {
    pub first: usize,
    pub second: usize,
    pub length: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub agents: Vec<AgentCheck>,
    /// Number of pieces in the allocation against agents in the instance.
    pub pieces: usize,
    pub expected_pieces: usize,
    pub overlaps: Vec<Overlap>,
    /// Part of the cake no piece covers.
    pub uncovered: Region,
    pub cuts: Vec<Rational>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn cut_count(&self) -> usize {
        self.cuts.len()
    }

    /// One line per failed check.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.pieces != self.expected_pieces {
            out.push(format!(
                "piece count: {} pieces for {} agents",
                self.pieces, self.expected_pieces
            ));
        }
        for a in self.agents.iter().filter(|a| !a.pass) {
            out.push(format!(
                "proportionality: agent {} receives {} < {}",
                a.agent + 1,
                format_rational(&a.value),
                format_rational(&a.threshold)
            ));
        }
        for o in &self.overlaps {
            out.push(format!(
                "disjointness: pieces of agents {} and {} overlap on length {}",
                o.first + 1,
                o.second + 1,
                format_rational(&o.length)
            ));
        }
        if !self.uncovered.is_empty() {
            out.push(format!("coverage: {} is not allocated", self.uncovered));
        }
        out
    }
}

pub fn verify_allocation(inst: &Instance, a: &Allocation) -> VerificationReport {
    let pieces = a.pieces();
    let agents: Vec<AgentCheck> = (0..inst.agent_count())
        .map(|i| {
            let value = pieces
                .get(i)
                .map(|p| measure_of(&inst.valuations()[i], p))
                .unwrap_or_else(Rational::zero);
            let threshold = inst.threshold(i);
            AgentCheck {
                agent: i,
                pass: value >= threshold,
                value,
                threshold,
            }
        })
        .collect();

    let mut overlaps = Vec::new();
    for i in 0..pieces.len() {
        for j in i + 1..pieces.len() {
            let common = pieces[i].intersection(&pieces[j]);
            if !common.is_empty() {
                overlaps.push(Overlap {
                    first: i,
                    second: j,
                    length: common.length(),
                });
            }
        }
    }
    let covered = pieces.iter().fold(Region::empty(), |acc, p| acc.union(p));
    let uncovered = Region::full().difference(&covered);

    let pass = pieces.len() == inst.agent_count()
        && agents.iter().all(|a| a.pass)
        && overlaps.is_empty()
        && uncovered.is_empty();
    VerificationReport {
        agents,
        pieces: pieces.len(),
        expected_pieces: inst.agent_count(),
        overlaps,
        uncovered,
        cuts: a.cut_points_on(inst.topology()),
        pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Topology, Valuation};
    use crate::rational::{one, ratio, zero};

    #[test]
    fn single_agent_passes() {
        let inst = Instance::new(Topology::Interval, vec![Valuation::uniform()], vec![one()]).unwrap();
        let rep = verify_allocation(&inst, &Allocation::new(vec![Region::full()]));
        assert!(rep.pass);
        assert_eq!(rep.cut_count(), 0);
    }

    #[test]
    fn short_piece_fails() {
        let u = Valuation::uniform();
        let inst = Instance::new(Topology::Interval, vec![u.clone(), u], vec![ratio(1, 2), ratio(1, 2)]).unwrap();
        let a = Allocation::new(vec![
            Region::interval(zero(), ratio(1, 4)).unwrap(),
            Region::interval(ratio(1, 4), one()).unwrap(),
        ]);
        let rep = verify_allocation(&inst, &a);
        assert!(!rep.pass);
        assert!(!rep.agents[0].pass);
        assert!(rep.agents[1].pass);
        assert_eq!(rep.agents[0].value, ratio(1, 4));
        assert_eq!(
            rep.failures(),
            vec!["proportionality: agent 1 receives 1/4 < 1/2".to_string()]
        );
    }

    #[test]
    fn overlap_and_gap_reported() {
        let u = Valuation::uniform();
        let inst = Instance::new(Topology::Interval, vec![u.clone(), u], vec![ratio(1, 2), ratio(1, 2)]).unwrap();
        let a = Allocation::new(vec![
            Region::interval(zero(), ratio(3, 4)).unwrap(),
            Region::interval(ratio(1, 2), ratio(7, 8)).unwrap(),
        ]);
        let rep = verify_allocation(&inst, &a);
        assert!(!rep.pass);
        assert_eq!(
            rep.overlaps,
            vec![Overlap {
                first: 0,
                second: 1,
                length: ratio(1, 4)
            }]
        );
        assert_eq!(rep.uncovered, Region::interval(ratio(7, 8), one()).unwrap());
    }

    #[test]
    fn missing_piece_fails() {
        let u = Valuation::uniform();
        let inst = Instance::new(Topology::Interval, vec![u.clone(), u], vec![ratio(1, 2), ratio(1, 2)]).unwrap();
        let rep = verify_allocation(&inst, &Allocation::new(vec![Region::full()]));
        assert!(!rep.pass);
        assert_eq!(rep.pieces, 1);
    }
}
