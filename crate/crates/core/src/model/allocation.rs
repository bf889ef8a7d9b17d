use num_traits::{One, Zero};

use super::instance::Topology;
use super::region::Region;
use crate::Rational;

/// One region per agent, indexed like the instance's agents.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Allocation {
    pieces: Vec<Region>,
}

impl Allocation {
    pub fn new(pieces: Vec<Region>) -> Self {
        Self { pieces }
    }

    pub fn pieces(&self) -> &[Region] {
        &self.pieces
    }

    pub fn into_pieces(self) -> Vec<Region> {
        self.pieces
    }

    pub fn agent_count(&self) -> usize {
        self.pieces.len()
    }

    /// Distinct boundary points strictly inside `(0, 1)`, sorted.
    pub fn cut_points(&self) -> Vec<Rational> {
        let mut cuts: Vec<Rational> = self
            .pieces
            .iter()
            .flat_map(|p| p.endpoints())
            .filter(|x| !x.is_zero() && !x.is_one())
            .cloned()
            .collect();
        cuts.sort();
        cuts.dedup();
        cuts
    }

    /// Cut points for the given topology. On a pie the seam `0 ≡ 1` is a cut
    /// exactly when different agents own the two sides of it.
    pub fn cut_points_on(&self, topology: Topology) -> Vec<Rational> {
        let mut cuts = self.cut_points();
        if topology == Topology::Pie {
            let owner_at = |pred: &dyn Fn(&Region) -> bool| self.pieces.iter().position(pred);
            let starts = owner_at(&|p| p.intervals().first().is_some_and(|iv| iv.lo().is_zero()));
            let ends = owner_at(&|p| p.intervals().last().is_some_and(|iv| iv.hi().is_one()));
            if let (Some(a), Some(b)) = (starts, ends) {
                if a != b {
                    cuts.insert(0, Rational::zero());
                }
            }
        }
        cuts
    }
}

/// Number of distinct interior boundary points of an interval-cake allocation.
pub fn cut_count(a: &Allocation) -> usize {
    a.cut_points().len()
}
