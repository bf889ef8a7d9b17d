use std::fmt;

use num_traits::{One, Signed};

use super::valuation::Valuation;
use crate::error::{Error, Result};
use crate::rational::format_rational;
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Topology {
    #[default]
    Interval,
    /// Endpoints `0` and `1` identified.
    Pie,
}

impl Topology {
    pub fn as_str(self) -> &'static str {
        match self {
            Topology::Interval => "interval",
            Topology::Pie => "pie",
        }
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Topology {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "interval" => Ok(Topology::Interval),
            "pie" => Ok(Topology::Pie),
            other => Err(Error::Parse(format!("unknown topology {other:?}"))),
        }
    }
}

/// A division problem: `n` agents, their measures and their entitlements.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Instance {
    topology: Topology,
    names: Vec<String>,
    valuations: Vec<Valuation>,
    entitlements: Vec<Rational>,
}

impl Instance {
    /// Agents are named `agent-1 … agent-n`.
    pub fn new(topology: Topology, valuations: Vec<Valuation>, entitlements: Vec<Rational>) -> Result<Self> {
        let names = (1..=valuations.len()).map(|i| format!("agent-{i}")).collect();
        Self::with_names(topology, names, valuations, entitlements)
    }

    pub fn with_names(
        topology: Topology,
        names: Vec<String>,
        valuations: Vec<Valuation>,
        entitlements: Vec<Rational>,
    ) -> Result<Self> {
        let n = valuations.len();
        if n == 0 {
            return Err(Error::InvalidInstance("at least one agent is required".into()));
        }
        if entitlements.len() != n || names.len() != n {
            return Err(Error::InvalidInstance(format!(
                "{n} valuations but {} entitlements and {} names",
                entitlements.len(),
                names.len()
            )));
        }
        if let Some((i, t)) = entitlements.iter().enumerate().find(|(_, t)| !t.is_positive()) {
            return Err(Error::InvalidInstance(format!(
                "entitlement of agent {} is {}, must be positive",
                i + 1,
                format_rational(t)
            )));
        }
        let sum: Rational = entitlements.iter().sum();
        if !sum.is_one() {
            return Err(Error::InvalidInstance(format!(
                "entitlements sum to {}, must sum to 1",
                format_rational(&sum)
            )));
        }
        if valuations.iter().any(|v| v.domain_end() != &Rational::one()) {
            return Err(Error::InvalidInstance("every valuation must cover [0, 1]".into()));
        }
        Ok(Self {
            topology,
            names,
            valuations,
            entitlements,
        })
    }

    pub fn agent_count(&self) -> usize {
        self.valuations.len()
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn valuations(&self) -> &[Valuation] {
        &self.valuations
    }

    pub fn entitlements(&self) -> &[Rational] {
        &self.entitlements
    }

    /// `t_i · V_i(C)`, the value agent `i` is owed.
    pub fn threshold(&self, agent: usize) -> Rational {
        &self.entitlements[agent] * self.valuations[agent].total()
    }

    /// Sorted union of all agents' breakpoints.
    pub fn common_breakpoints(&self) -> Vec<Rational> {
        common_refinement(self.valuations.iter())
    }
}

pub(crate) fn common_refinement<'a>(valuations: impl Iterator<Item = &'a Valuation>) -> Vec<Rational> {
    let mut all: Vec<Rational> = valuations.flat_map(|v| v.breakpoints().iter().cloned()).collect();
    all.sort();
    all.dedup();
    all
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn validation() {
        let u = Valuation::uniform();
        assert!(Instance::new(Topology::Interval, vec![u.clone()], vec![ratio(1, 1)]).is_ok());
        let sum_two = Instance::new(
            Topology::Interval,
            vec![u.clone(), u.clone()],
            vec![ratio(1, 1), ratio(1, 1)],
        );
        assert!(matches!(sum_two, Err(Error::InvalidInstance(m)) if m.contains("sum to 2")));
        let zero_share = Instance::new(
            Topology::Interval,
            vec![u.clone(), u.clone()],
            vec![ratio(0, 1), ratio(1, 1)],
        );
        assert!(matches!(zero_share, Err(Error::InvalidInstance(m)) if m.contains("positive")));
        assert!(Instance::new(Topology::Interval, vec![], vec![]).is_err());
        assert!(Instance::new(Topology::Pie, vec![u], vec![ratio(1, 2), ratio(1, 2)]).is_err());
    }
}
