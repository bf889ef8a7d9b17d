//! Division protocols.
//!
//! Every protocol returns an [`AlgorithmReport`]: the allocation, its cut
//! points, and the cut bound that applies to the protocol on this instance.

mod cloning;
mod dispatch;
mod proportional;
mod recursive;
mod special;

use std::fmt;

pub use cloning::{clone_divide, near_equal_divide, near_equal_pattern};
pub use dispatch::auto_solve;
pub use proportional::connected_proportional;
pub use recursive::{recursive_divide, upper_bound_cuts};
pub use special::{
    cut_and_choose, cut_and_choose_arc, equal_pair, special3_equal_pair, special3_equal_pair_traced, special3_half,
    EqualPairTrace,
};

use crate::error::Error;
use crate::model::{Allocation, Instance};
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlgorithmKind {
    Recursive,
    Clone,
    Special3Half,
    Special3EqualPair,
    NearEqual,
}

impl AlgorithmKind {
    pub const ALL: [AlgorithmKind; 5] = [
        AlgorithmKind::Recursive,
        AlgorithmKind::Clone,
        AlgorithmKind::Special3Half,
        AlgorithmKind::Special3EqualPair,
        AlgorithmKind::NearEqual,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AlgorithmKind::Recursive => "recursive",
            AlgorithmKind::Clone => "clone",
            AlgorithmKind::Special3Half => "special3a",
            AlgorithmKind::Special3EqualPair => "special3b",
            AlgorithmKind::NearEqual => "near-equal",
        }
    }
}

impl fmt::Display for AlgorithmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for AlgorithmKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        AlgorithmKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown algorithm {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgorithmReport {
    pub allocation: Allocation,
    /// Sorted cut points of `allocation` on the instance's topology.
    pub cuts: Vec<Rational>,
    pub algorithm: AlgorithmKind,
    /// The cut bound guaranteed for this algorithm on this instance.
    pub bound: u64,
}

impl AlgorithmReport {
    pub(crate) fn new(inst: &Instance, allocation: Allocation, algorithm: AlgorithmKind, bound: u64) -> Self {
        let cuts = allocation.cut_points_on(inst.topology());
        Self {
            allocation,
            cuts,
            algorithm,
            bound,
        }
    }

    pub fn cut_count(&self) -> usize {
        self.cuts.len()
    }
}

/// Runs one protocol by kind.
pub fn run_algorithm(
    kind: AlgorithmKind,
    inst: &Instance,
    config: &crate::config::SolverConfig,
) -> crate::Result<AlgorithmReport> {
    match kind {
        AlgorithmKind::Recursive => recursive_divide(inst, config),
        AlgorithmKind::Clone => clone_divide(inst, config),
        AlgorithmKind::Special3Half => special3_half(inst, config),
        AlgorithmKind::Special3EqualPair => special3_equal_pair(inst, config),
        AlgorithmKind::NearEqual => near_equal_divide(inst, config),
    }
}
