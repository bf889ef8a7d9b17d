//! Seeded random instances with small-denominator rational data.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{Instance, Topology, Valuation};
use crate::rational::{one, ratio, zero};
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomSpec {
    pub agents: usize,
    /// Upper bound on the number of cells of each agent's density.
    pub max_cells: usize,
    /// Upper bound on every denominator drawn.
    pub denom_bound: u64,
}

impl RandomSpec {
    pub fn new(agents: usize, max_cells: usize, denom_bound: u64) -> Self {
        Self {
            agents,
            max_cells,
            denom_bound,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.agents == 0 {
            return Err(Error::PreconditionViolated("at least one agent is required".into()));
        }
        if self.max_cells == 0 {
            return Err(Error::PreconditionViolated("max-cells must be at least 1".into()));
        }
        if self.denom_bound < 2 {
            return Err(Error::PreconditionViolated(
                "denom-bound must be at least 2: no interior rational breakpoints exist otherwise".into(),
            ));
        }
        if self.denom_bound > 1_000_000 {
            return Err(Error::PreconditionViolated("denom-bound must be at most 10^6".into()));
        }
        Ok(())
    }
}

/// All fractions in `(0, 1)` with denominator at most `bound`, sorted.
fn interior_fractions(bound: u64) -> Vec<Rational> {
    let mut out: Vec<Rational> = (2..=bound as i64)
        .flat_map(|q| (1..q).map(move |p| ratio(p, q)))
        .collect();
    out.sort();
    out.dedup();
    out
}

pub fn random_valuation(rng: &mut ChaCha8Rng, max_cells: usize, denom_bound: u64) -> Valuation {
    let candidates = interior_fractions(denom_bound.min(64));
    let cells = rng.random_range(1..=max_cells.min(candidates.len() + 1));
    let mut picks: Vec<usize> = sample(rng, candidates.len(), cells - 1).into_vec();
    picks.sort_unstable();
    let mut breakpoints = vec![zero()];
    breakpoints.extend(picks.into_iter().map(|k| candidates[k].clone()));
    breakpoints.push(one());
    let bound = denom_bound as i64;
    let mut densities: Vec<Rational> = (0..cells)
        .map(|_| ratio(rng.random_range(0..=bound), rng.random_range(1..=bound)))
        .collect();
    if densities.iter().all(|d| *d == zero()) {
        let k = rng.random_range(0..cells);
        densities[k] = one();
    }
    Valuation::new(breakpoints, densities).expect("generated valuation is valid")
}

pub fn random_entitlements(rng: &mut ChaCha8Rng, agents: usize, denom_bound: u64) -> Vec<Rational> {
    let weights: Vec<i64> = (0..agents).map(|_| rng.random_range(1..=denom_bound as i64)).collect();
    let sum: i64 = weights.iter().sum();
    weights.into_iter().map(|w| ratio(w, sum)).collect()
}

/// Draws an interval-cake instance; identical `(spec, seed)` pairs give
/// identical instances.
pub fn random_instance(spec: &RandomSpec, seed: u64) -> Result<Instance> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let valuations = (0..spec.agents)
        .map(|_| random_valuation(&mut rng, spec.max_cells, spec.denom_bound))
        .collect();
    let entitlements = random_entitlements(&mut rng, spec.agents, spec.denom_bound);
    Instance::new(Topology::Interval, valuations, entitlements)
}
