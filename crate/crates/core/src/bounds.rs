//! Lower-bound instances and the brute-force minimal-cut oracle.
//!
//! The oracle decides whether a proportional allocation with at most `k`
//! cuts exists. Cuts `y_1 <= … <= y_k` are pinned to cells of the common
//! breakpoint refinement (weakly increasing, so pieces may be empty), each of
//! the `k + 1` pieces is given an owner, and for every combination the
//! conditions "agent `i` gets at least `t_i·V_i(C)`" form a linear system in
//! the cut positions. Combinations are visited in a fixed canonical order
//! (cells lexicographically, then owner maps lexicographically) and the
//! first feasible one is returned.

use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::feasibility::{solve_feasibility, FeasibilityResult, LinearConstraint};
use crate::io::instance_digest;
use crate::model::{Allocation, Instance, Interval, Region, Topology, Valuation};
use crate::rational::{int, one, ratio, zero};
use crate::split::binomial;
use crate::Rational;

/// The family on which `2n − 2` cuts are necessary: `2n − 1` equal cells,
/// agent 1 on the odd cells with entitlement `(n − 9/10)/n`, agent `k >= 2`
/// on cell `2(k − 1)` with entitlement `9/(10n(n − 1))` (cells counted from 1).
pub fn gen_lower_bound_instance(n: usize) -> Result<Instance> {
    if n < 2 {
        return Err(Error::PreconditionViolated("lower-bound family needs n >= 2".into()));
    }
    let cells = 2 * n - 1;
    let breakpoints: Vec<Rational> = (0..=cells).map(|j| ratio(j as i64, cells as i64)).collect();
    let density_on = |positive: &dyn Fn(usize) -> bool| -> Valuation {
        let densities = (0..cells).map(|c| if positive(c) { one() } else { zero() }).collect();
        Valuation::new(breakpoints.clone(), densities).expect("lower-bound valuation is valid")
    };
    let mut valuations = vec![density_on(&|c| c % 2 == 0)];
    for k in 2..=n {
        valuations.push(density_on(&|c| c == 2 * k - 3));
    }
    let nn = int(n as i64);
    let first = (&nn - ratio(9, 10)) / &nn;
    let other = ratio(9, 10) / (&nn * int(n as i64 - 1));
    let mut entitlements = vec![first];
    entitlements.extend(std::iter::repeat_n(other, n - 1));
    Instance::new(Topology::Interval, valuations, entitlements)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertificateStatus {
    Feasible(Allocation),
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutBudgetCertificate {
    /// SHA-256 of the canonical instance document.
    pub instance_digest: String,
    pub k: usize,
    pub status: CertificateStatus,
    /// Combinations whose linear conditions were examined.
    pub systems_examined: u64,
}

impl CutBudgetCertificate {
    pub fn is_feasible(&self) -> bool {
        matches!(self.status, CertificateStatus::Feasible(_))
    }

    pub fn allocation(&self) -> Option<&Allocation> {
        match &self.status {
            CertificateStatus::Feasible(a) => Some(a),
            CertificateStatus::Infeasible => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleOptions {
    /// Skip owner maps giving two neighbouring pieces to the same agent. Such
    /// a map wastes a cut, and an equivalent map without the waste exists
    /// (empty pieces at the left end absorb spare cuts), so decisions do not
    /// change. Ignored for a single agent.
    pub skip_wasted_cuts: bool,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self { skip_wasted_cuts: true }
    }
}

/// Upper bound on combinations for `k` cuts over `cells` cells and `n` agents:
/// `C(cells + k − 1, k) · n^(k + 1)`.
pub fn oracle_space(cells: usize, agents: usize, k: usize) -> u128 {
    let assignments = binomial(cells + k - 1, k);
    let maps = (agents as u128).checked_pow(k as u32 + 1).unwrap_or(u128::MAX);
    assignments.saturating_mul(maps)
}

pub fn feasible_with_k_cuts(inst: &Instance, k: usize, config: &SolverConfig) -> Result<CutBudgetCertificate> {
    feasible_with_k_cuts_with(inst, k, config, OracleOptions::default())
}

pub fn feasible_with_k_cuts_with(
    inst: &Instance,
    k: usize,
    config: &SolverConfig,
    options: OracleOptions,
) -> Result<CutBudgetCertificate> {
    let oracle = Oracle::new(inst, options);
    let required = oracle_space(oracle.cells(), inst.agent_count(), k);
    if required > config.enumeration_cap as u128 {
        return Err(Error::BudgetExceeded {
            required,
            cap: config.enumeration_cap,
        });
    }
    let mut examined = 0u64;
    let status = match oracle.search(k, &mut examined)? {
        Some(a) => CertificateStatus::Feasible(a),
        None => CertificateStatus::Infeasible,
    };
    Ok(CutBudgetCertificate {
        instance_digest: instance_digest(inst),
        k,
        status,
        systems_examined: examined,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinCutsOutcome {
    /// Smallest feasible budget, if one was found within `k_max`.
    pub min_cuts: Option<usize>,
    pub k_max: usize,
    /// The feasible certificate at `min_cuts`, or the infeasible one at `k_max`.
    pub certificate: CutBudgetCertificate,
    pub systems_examined: u64,
}

pub fn min_cuts(inst: &Instance, k_max: usize, config: &SolverConfig) -> Result<MinCutsOutcome> {
    let mut total = 0u64;
    let mut last = None;
    for k in 0..=k_max {
        let cert = feasible_with_k_cuts(inst, k, config)?;
        total += cert.systems_examined;
        if cert.is_feasible() {
            return Ok(MinCutsOutcome {
                min_cuts: Some(k),
                k_max,
                certificate: cert,
                systems_examined: total,
            });
        }
        last = Some(cert);
    }
    Ok(MinCutsOutcome {
        min_cuts: None,
        k_max,
        certificate: last.expect("k ranges over at least 0"),
        systems_examined: total,
    })
}

struct Oracle<'a> {
    inst: &'a Instance,
    grid: Vec<Rational>,
    /// `cumulative[i][c]` = `F_i(grid[c])`.
    cumulative: Vec<Vec<Rational>>,
    density: Vec<Vec<Rational>>,
    thresholds: Vec<Rational>,
    skip_wasted_cuts: bool,
}

impl<'a> Oracle<'a> {
    fn new(inst: &'a Instance, options: OracleOptions) -> Self {
        let grid = inst.common_breakpoints();
        let cells = grid.len() - 1;
        let cumulative = inst
            .valuations()
            .iter()
            .map(|v| grid.iter().map(|g| v.cumulative(g)).collect())
            .collect();
        let density = inst
            .valuations()
            .iter()
            .map(|v| (0..cells).map(|c| v.densities()[v.cell_of(&grid[c])].clone()).collect())
            .collect();
        let thresholds = (0..inst.agent_count()).map(|i| inst.threshold(i)).collect();
        Self {
            inst,
            grid,
            cumulative,
            density,
            thresholds,
            skip_wasted_cuts: options.skip_wasted_cuts && inst.agent_count() > 1,
        }
    }

    fn cells(&self) -> usize {
        self.grid.len() - 1
    }

    fn agents(&self) -> usize {
        self.thresholds.len()
    }

    fn search(&self, k: usize, examined: &mut u64) -> Result<Option<Allocation>> {
        let mut cells = vec![0usize; k];
        loop {
            if let Some(a) = self.search_maps(&cells, examined)? {
                return Ok(Some(a));
            }
            if !next_weak_increasing(&mut cells, self.cells()) {
                return Ok(None);
            }
        }
    }

    fn search_maps(&self, cells: &[usize], examined: &mut u64) -> Result<Option<Allocation>> {
        let pieces = cells.len() + 1;
        let mut owners = vec![0usize; pieces];
        loop {
            if self.structurally_valid(&owners) {
                *examined += 1;
                if self.may_reach_thresholds(cells, &owners) {
                    if let Some(a) = self.solve(cells, &owners)? {
                        return Ok(Some(a));
                    }
                }
            }
            if !next_map(&mut owners, self.agents()) {
                return Ok(None);
            }
        }
    }

    fn structurally_valid(&self, owners: &[usize]) -> bool {
        if self.skip_wasted_cuts && owners.windows(2).any(|w| w[0] == w[1]) {
            return false;
        }
        (0..self.agents()).all(|i| owners.contains(&i))
    }

    /// Piece `p` spans from cut `p` to cut `p + 1`; cut 0 is the left end of
    /// the cake and cut `k + 1` the right end. Returns the bounds of cut `j`'s
    /// feasible range as grid indices.
    fn cut_range(&self, cells: &[usize], j: usize) -> (usize, usize) {
        if j == 0 {
            (0, 0)
        } else if j == cells.len() + 1 {
            (self.cells(), self.cells())
        } else {
            (cells[j - 1], cells[j - 1] + 1)
        }
    }

    /// Cheap necessary condition: relaxing the order of the cuts, each piece
    /// is worth at most `F(right end of its last cell) − F(left end of its
    /// first cell)`.
    fn may_reach_thresholds(&self, cells: &[usize], owners: &[usize]) -> bool {
        (0..self.agents()).all(|i| {
            let best: Rational = owners
                .iter()
                .enumerate()
                .filter(|(_, &o)| o == i)
                .map(|(p, _)| {
                    let (start_lo, _) = self.cut_range(cells, p);
                    let (_, end_hi) = self.cut_range(cells, p + 1);
                    &self.cumulative[i][end_hi] - &self.cumulative[i][start_lo]
                })
                .sum();
            best >= self.thresholds[i]
        })
    }

    fn solve(&self, cells: &[usize], owners: &[usize]) -> Result<Option<Allocation>> {
        let k = cells.len();
        if k == 0 {
            // A single piece: everyone else gets nothing.
            let a = Allocation::new(
                (0..self.agents())
                    .map(|i| {
                        if owners[0] == i {
                            Region::full()
                        } else {
                            Region::empty()
                        }
                    })
                    .collect(),
            );
            let ok = (0..self.agents()).all(|i| owners[0] == i || self.thresholds[i] <= zero());
            return Ok(ok.then_some(a));
        }
        let mut constraints = Vec::with_capacity(3 * k + self.agents());
        for (j, &c) in cells.iter().enumerate() {
            let mut e = vec![zero(); k];
            e[j] = one();
            constraints.push(LinearConstraint::ge(e.clone(), self.grid[c].clone()));
            constraints.push(LinearConstraint::le(e, self.grid[c + 1].clone()));
            if j + 1 < k {
                let mut d = vec![zero(); k];
                d[j] = one();
                d[j + 1] = -one();
                constraints.push(LinearConstraint::le(d, zero()));
            }
        }
        for i in 0..self.agents() {
            let mut coeffs = vec![zero(); k];
            let mut bound = self.thresholds[i].clone();
            for (p, _) in owners.iter().enumerate().filter(|(_, &o)| o == i) {
                // + F_i(cut p+1) − F_i(cut p)
                for (cut, sign) in [(p + 1, 1i64), (p, -1i64)] {
                    if cut == 0 {
                        continue;
                    }
                    if cut == k + 1 {
                        bound -= int(sign) * self.inst.valuations()[i].total();
                        continue;
                    }
                    let c = cells[cut - 1];
                    let d = &self.density[i][c];
                    let constant = &self.cumulative[i][c] - d * &self.grid[c];
                    coeffs[cut - 1] += int(sign) * d;
                    bound -= int(sign) * constant;
                }
            }
            constraints.push(LinearConstraint::ge(coeffs, bound));
        }
        let FeasibilityResult::Feasible(y) = solve_feasibility(k, &constraints)? else {
            return Ok(None);
        };
        let mut cuts = vec![zero()];
        cuts.extend(y);
        cuts.push(one());
        let mut spans = vec![Vec::new(); self.agents()];
        for (p, &o) in owners.iter().enumerate() {
            spans[o].push(Interval::new(cuts[p].clone(), cuts[p + 1].clone()).expect("sorted cuts"));
        }
        Ok(Some(Allocation::new(spans.into_iter().map(Region::new).collect())))
    }
}

/// Advances a weakly increasing sequence over `0..cells` in lexicographic
/// order; false once exhausted.
fn next_weak_increasing(seq: &mut [usize], cells: usize) -> bool {
    for j in (0..seq.len()).rev() {
        if seq[j] + 1 < cells {
            let v = seq[j] + 1;
            for x in seq[j..].iter_mut() {
                *x = v;
            }
            return true;
        }
    }
    false
}

fn next_map(owners: &mut [usize], agents: usize) -> bool {
    for j in (0..owners.len()).rev() {
        if owners[j] + 1 < agents {
            owners[j] += 1;
            for x in owners[j + 1..].iter_mut() {
                *x = 0;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::cut_count;
    use crate::random::{random_instance, RandomSpec};
    use crate::verify::verify_allocation;

    #[test]
    fn lower_bound_family_shapes() {
        let two = gen_lower_bound_instance(2).unwrap();
        assert_eq!(two.entitlements(), &[ratio(11, 20), ratio(9, 20)]);
        assert_eq!(two.valuations()[0].densities(), &[one(), zero(), one()]);
        assert_eq!(two.valuations()[1].densities(), &[zero(), one(), zero()]);

        let three = gen_lower_bound_instance(3).unwrap();
        assert_eq!(three.entitlements(), &[ratio(7, 10), ratio(3, 20), ratio(3, 20)]);
        assert_eq!(
            three.valuations()[2].densities(),
            &[zero(), zero(), zero(), one(), zero()]
        );

        for n in 2..9 {
            let inst = gen_lower_bound_instance(n).unwrap();
            assert_eq!(inst.entitlements().iter().sum::<Rational>(), one());
            assert_eq!(inst.valuations()[0].cell_count(), 2 * n - 1);
        }
        assert!(gen_lower_bound_instance(1).is_err());
    }

    #[test]
    fn enumeration_orders() {
        let mut seq = vec![0, 0];
        let mut all = vec![seq.clone()];
        while next_weak_increasing(&mut seq, 3) {
            all.push(seq.clone());
        }
        assert_eq!(
            all,
            vec![vec![0, 0], vec![0, 1], vec![0, 2], vec![1, 1], vec![1, 2], vec![2, 2]]
        );
        let mut m = vec![0, 0];
        let mut count = 1;
        while next_map(&mut m, 3) {
            count += 1;
        }
        assert_eq!(count, 9);
    }

    #[test]
    fn n2_lower_bound_decisions() {
        let cfg = SolverConfig::default();
        let inst = gen_lower_bound_instance(2).unwrap();
        assert!(!feasible_with_k_cuts(&inst, 1, &cfg).unwrap().is_feasible());
        let cert = feasible_with_k_cuts(&inst, 2, &cfg).unwrap();
        let a = cert.allocation().unwrap();
        assert!(verify_allocation(&inst, a).pass);
        assert!(cut_count(a) <= 2);
    }

    #[test]
    fn single_agent_needs_no_cut() {
        let inst = Instance::new(Topology::Interval, vec![Valuation::uniform()], vec![one()]).unwrap();
        let cfg = SolverConfig::default();
        let cert = feasible_with_k_cuts(&inst, 0, &cfg).unwrap();
        assert_eq!(cert.allocation().unwrap().pieces(), &[Region::full()]);
        assert!(feasible_with_k_cuts(&inst, 2, &cfg).unwrap().is_feasible());
        assert_eq!(min_cuts(&inst, 3, &cfg).unwrap().min_cuts, Some(0));
    }

    #[test]
    fn skipping_wasted_cuts_keeps_decisions() {
        let cfg = SolverConfig::default();
        let full = OracleOptions {
            skip_wasted_cuts: false,
        };
        for n in 1..=3 {
            for seed in 0..8 {
                let inst = random_instance(&RandomSpec::new(n, 2, 4), seed).unwrap();
                for k in 0..=3 {
                    let pruned = feasible_with_k_cuts(&inst, k, &cfg).unwrap();
                    let plain = feasible_with_k_cuts_with(&inst, k, &cfg, full).unwrap();
                    assert_eq!(pruned.is_feasible(), plain.is_feasible(), "n={n} seed={seed} k={k}");
                    if !plain.is_feasible() {
                        assert!(pruned.systems_examined <= plain.systems_examined);
                    }
                }
            }
        }
    }

    #[test]
    fn feasibility_is_monotone_and_certified() {
        let cfg = SolverConfig::default();
        for n in 1..=3 {
            for seed in 0..8 {
                let inst = random_instance(&RandomSpec::new(n, 2, 4), 100 + seed).unwrap();
                let mut seen_feasible = false;
                for k in 0..=4 {
                    let cert = feasible_with_k_cuts(&inst, k, &cfg).unwrap();
                    assert!(!seen_feasible || cert.is_feasible(), "n={n} seed={seed} k={k}");
                    if let Some(a) = cert.allocation() {
                        let rep = verify_allocation(&inst, a);
                        assert!(rep.pass && rep.cut_count() <= k);
                        seen_feasible = true;
                    }
                }
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let inst = gen_lower_bound_instance(3).unwrap();
        let cfg = SolverConfig {
            enumeration_cap: 100,
            ..SolverConfig::default()
        };
        assert!(matches!(
            feasible_with_k_cuts(&inst, 3, &cfg),
            Err(Error::BudgetExceeded { .. })
        ));
        assert_eq!(oracle_space(5, 3, 3), 35 * 81);
    }
}
