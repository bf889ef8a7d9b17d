//! Exact consensus splitting for piecewise-constant measures.
//!
//! Given `n` measures on a sub-cake and a ratio `r`, find a region that every
//! agent values at exactly `r` times its value of the sub-cake, made of at
//! most `max(1, n - 1)` arcs when the sub-cake is viewed as a pie.
//!
//! The sub-cake is first flattened: its intervals are concatenated onto
//! `[0, L]` without rescaling and the two ends of `[0, L]` are identified.
//! A candidate part with `m` arcs is described by `2m` sorted endpoints. Once
//! every endpoint is pinned to a cell of the common breakpoint refinement,
//! each agent's value of the part is affine in the endpoints, so the exact
//! conditions form a small linear system. Cell assignments are enumerated in
//! lexicographic order with interval-arithmetic pruning, and the first
//! feasible system (lexicographically minimal witness) wins.

use num_bigint::BigUint;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::feasibility::{solve_feasibility, FeasibilityResult, LinearConstraint};
use crate::model::{common_refinement, measure_of, Interval, Region, Topology, Valuation};
use crate::rational::{one, zero};
use crate::Rational;

/// Maps flattened coordinates back onto the original cake.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordinateMap {
    /// `(flat start, original interval)` per component, in order.
    components: Vec<(Rational, Interval)>,
    length: Rational,
}

impl CoordinateMap {
    pub fn length(&self) -> &Rational {
        &self.length
    }

    /// Original coordinate of a flat point. At a junction between two
    /// components the start of the later component is returned.
    pub fn to_original(&self, x: &Rational) -> Rational {
        let k = self.components.iter().rposition(|(start, _)| start <= x).unwrap_or(0);
        let (start, iv) = &self.components[k];
        let offset = (x - start).min(iv.length());
        iv.lo() + offset
    }

    /// Image of a flat region; pieces that straddle a junction are split.
    pub fn region_to_original(&self, flat: &Region) -> Region {
        let mut out = Vec::new();
        for f in flat.intervals() {
            for (start, iv) in &self.components {
                let end = start + iv.length();
                let lo = f.lo().clone().max(start.clone());
                let hi = f.hi().clone().min(end);
                if lo < hi {
                    let a = iv.lo() + (&lo - start);
                    let b = iv.lo() + (&hi - start);
                    out.push(Interval::new(a, b).expect("image stays inside the component"));
                }
            }
        }
        Region::new(out)
    }
}

/// A sub-cake laid out on `[0, L]`.
#[derive(Debug, Clone)]
pub struct FlatCake {
    pub length: Rational,
    pub valuations: Vec<Valuation>,
    pub map: CoordinateMap,
}

pub fn flatten(subcake: &Region, valuations: &[&Valuation]) -> Result<FlatCake> {
    if subcake.is_empty() {
        return Err(Error::EmptySubcake);
    }
    let mut components = Vec::with_capacity(subcake.interval_count());
    let mut offset = zero();
    for iv in subcake.intervals() {
        components.push((offset.clone(), iv.clone()));
        offset += iv.length();
    }
    let flat = valuations
        .iter()
        .enumerate()
        .map(|(i, v)| {
            v.flattened(subcake)
                .map_err(|_| Error::InvalidSplitRequest(format!("agent {i} has no value on the sub-cake")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FlatCake {
        length: offset.clone(),
        valuations: flat,
        map: CoordinateMap {
            components,
            length: offset,
        },
    })
}

#[derive(Debug, Clone)]
pub struct SplitRequest<'a> {
    pub valuations: Vec<&'a Valuation>,
    pub subcake: Region,
    pub topology: Topology,
    pub ratio: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitResult {
    pub part: Region,
    pub complement: Region,
    /// Number of arcs of `part` on the flattened pie.
    pub arcs: usize,
    /// Linear systems handed to the solver before the first feasible one.
    pub systems_solved: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Origin {
    Outside,
    Inside,
}

/// Number of cell assignments budgeted for a request with `cells` cells and
/// up to `max_arcs` arcs: `Σ_m 2 · C(cells + 2m, 2m)`.
pub fn enumeration_estimate(cells: usize, max_arcs: usize) -> u128 {
    (1..=max_arcs).map(|m| 2 * binomial(cells + 2 * m, 2 * m)).sum()
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc.to_u128().unwrap_or(u128::MAX)
}

pub fn exact_split(req: &SplitRequest<'_>, enumeration_cap: u64) -> Result<SplitResult> {
    let n = req.valuations.len();
    if n == 0 {
        return Err(Error::InvalidSplitRequest("no agents".into()));
    }
    if !(req.ratio.is_positive() && req.ratio < one()) {
        return Err(Error::InvalidSplitRequest(format!(
            "ratio {} outside (0, 1)",
            req.ratio
        )));
    }
    let flat = flatten(&req.subcake, &req.valuations)?;
    let search = Search::new(&flat, &req.ratio);
    let max_arcs = n.saturating_sub(1).max(1);
    let required = enumeration_estimate(search.cells(), max_arcs);
    if required > enumeration_cap as u128 {
        return Err(Error::BudgetExceeded {
            required,
            cap: enumeration_cap,
        });
    }

    let mut solved = 0u64;
    for m in 1..=max_arcs {
        for origin in [Origin::Outside, Origin::Inside] {
            if let Some(endpoints) = search.run(m, origin, &mut solved)? {
                let flat_part = flat_part(&endpoints, origin, &flat.length);
                let arcs = pie_arcs(&flat_part, origin, &flat.length);
                let part = flat.map.region_to_original(&flat_part);
                let complement = req.subcake.difference(&part);
                debug_assert!(req
                    .valuations
                    .iter()
                    .all(|v| { measure_of(v, &part) == &req.ratio * measure_of(v, &req.subcake) }));
                return Ok(SplitResult {
                    part,
                    complement,
                    arcs,
                    systems_solved: solved,
                });
            }
        }
    }
    Err(Error::NoSplitFound)
}

fn flat_part(endpoints: &[Rational], origin: Origin, length: &Rational) -> Region {
    let mut spans = Vec::new();
    match origin {
        Origin::Outside => {
            for pair in endpoints.chunks(2) {
                spans.push((pair[0].clone(), pair[1].clone()));
            }
        }
        Origin::Inside => {
            spans.push((zero(), endpoints[0].clone()));
            for pair in endpoints[1..endpoints.len() - 1].chunks(2) {
                spans.push((pair[0].clone(), pair[1].clone()));
            }
            spans.push((endpoints[endpoints.len() - 1].clone(), length.clone()));
        }
    }
    Region::new(
        spans
            .into_iter()
            .map(|(a, b)| Interval::new(a, b).expect("sorted endpoints inside [0, L]"))
            .collect(),
    )
}

fn pie_arcs(flat: &Region, origin: Origin, length: &Rational) -> usize {
    let count = flat.interval_count();
    let ivs = flat.intervals();
    let wraps = origin == Origin::Inside && count >= 2 && ivs[0].lo().is_zero() && ivs[count - 1].hi() == length;
    if wraps {
        count - 1
    } else {
        count
    }
}

/// Precomputed per-cell data on the common refinement of the flat cake.
struct Search {
    grid: Vec<Rational>,
    /// `cumulative[i][c]` = `F_i(grid[c])`.
    cumulative: Vec<Vec<Rational>>,
    /// `density[i][c]` on `[grid[c], grid[c + 1]]`.
    density: Vec<Vec<Rational>>,
    totals: Vec<Rational>,
    ratio: Rational,
}

impl Search {
    fn new(flat: &FlatCake, ratio: &Rational) -> Self {
        let grid = common_refinement(flat.valuations.iter());
        let cells = grid.len() - 1;
        let cumulative = flat
            .valuations
            .iter()
            .map(|v| grid.iter().map(|g| v.cumulative(g)).collect())
            .collect();
        let density = flat
            .valuations
            .iter()
            .map(|v| (0..cells).map(|c| v.densities()[v.cell_of(&grid[c])].clone()).collect())
            .collect();
        let totals = flat.valuations.iter().map(|v| v.total().clone()).collect();
        Self {
            grid,
            cumulative,
            density,
            totals,
            ratio: ratio.clone(),
        }
    }

    fn cells(&self) -> usize {
        self.grid.len() - 1
    }

    fn agents(&self) -> usize {
        self.totals.len()
    }

    /// First feasible endpoint vector with `m` arcs, in lexicographic cell
    /// order. The alternating sum `Σ ±F_i(x_j)` (minus for odd positions,
    /// counting from one) must equal the target for every agent.
    fn run(&self, m: usize, origin: Origin, solved: &mut u64) -> Result<Option<Vec<Rational>>> {
        let share = match origin {
            Origin::Outside => self.ratio.clone(),
            Origin::Inside => one() - &self.ratio,
        };
        let targets: Vec<Rational> = self.totals.iter().map(|t| t * &share).collect();
        let zeros = vec![zero(); self.agents()];
        let mut cells = Vec::with_capacity(2 * m);
        self.descend(2 * m, &targets, &zeros, &zeros, 0, &mut cells, solved)
    }

    #[allow(clippy::too_many_arguments)]
    fn descend(
        &self,
        endpoints: usize,
        targets: &[Rational],
        lo: &[Rational],
        hi: &[Rational],
        first_cell: usize,
        cells: &mut Vec<usize>,
        solved: &mut u64,
    ) -> Result<Option<Vec<Rational>>> {
        let pos = cells.len();
        let plus = pos % 2 == 1;
        let remaining = endpoints - pos - 1;
        for c in first_cell..self.cells() {
            let mut next_lo = Vec::with_capacity(self.agents());
            let mut next_hi = Vec::with_capacity(self.agents());
            let mut viable = true;
            for i in 0..self.agents() {
                let f_left = &self.cumulative[i][c];
                let f_right = &self.cumulative[i][c + 1];
                let (l, h) = if plus {
                    (&lo[i] + f_left, &hi[i] + f_right)
                } else {
                    (&lo[i] - f_right, &hi[i] - f_left)
                };
                // Later endpoints are sorted values of F_i in [F_i(g_c), total].
                let (rest_lo, rest_hi) = if remaining == 0 {
                    (zero(), zero())
                } else if remaining % 2 == 1 {
                    (f_left.clone(), self.totals[i].clone())
                } else {
                    (zero(), &self.totals[i] - f_left)
                };
                if targets[i] < &l + rest_lo || targets[i] > &h + rest_hi {
                    viable = false;
                    break;
                }
                next_lo.push(l);
                next_hi.push(h);
            }
            if !viable {
                continue;
            }
            cells.push(c);
            let found = if remaining == 0 {
                *solved += 1;
                self.solve_leaf(cells, targets)?
            } else {
                self.descend(endpoints, targets, &next_lo, &next_hi, c, cells, solved)?
            };
            cells.pop();
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }

    fn solve_leaf(&self, cells: &[usize], targets: &[Rational]) -> Result<Option<Vec<Rational>>> {
        let vars = cells.len();
        let mut constraints = Vec::with_capacity(3 * vars + self.agents());
        for (j, &c) in cells.iter().enumerate() {
            constraints.push(LinearConstraint::ge(unit(vars, j, one()), self.grid[c].clone()));
            constraints.push(LinearConstraint::le(unit(vars, j, one()), self.grid[c + 1].clone()));
            if j + 1 < vars {
                let mut coeffs = unit(vars, j, one());
                coeffs[j + 1] = -one();
                constraints.push(LinearConstraint::le(coeffs, zero()));
            }
        }
        for (i, target) in targets.iter().enumerate() {
            let mut coeffs = vec![zero(); vars];
            let mut bound = target.clone();
            for (j, &c) in cells.iter().enumerate() {
                let d = &self.density[i][c];
                // F_i(x) = F_i(g_c) + d (x - g_c) on cell c
                let constant = &self.cumulative[i][c] - d * &self.grid[c];
                if j % 2 == 1 {
                    coeffs[j] += d;
                    bound -= constant;
                } else {
                    coeffs[j] -= d;
                    bound += constant;
                }
            }
            constraints.push(LinearConstraint::eq(coeffs, bound));
        }
        Ok(match solve_feasibility(vars, &constraints)? {
            FeasibilityResult::Feasible(x) => Some(x),
            FeasibilityResult::Infeasible => None,
        })
    }
}

fn unit(vars: usize, j: usize, value: Rational) -> Vec<Rational> {
    let mut v = vec![zero(); vars];
    v[j] = value;
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn front_heavy() -> Valuation {
        Valuation::new(vec![zero(), ratio(1, 2), one()], vec![int(2), int(0)]).unwrap()
    }

    fn iv(a: Rational, b: Rational) -> Interval {
        Interval::new(a, b).unwrap()
    }

    #[test]
    fn flatten_examples() {
        let u = Valuation::uniform();
        let full = flatten(&Region::full(), &[&u]).unwrap();
        assert_eq!(full.length, one());
        assert_eq!(full.map.to_original(&ratio(3, 7)), ratio(3, 7));

        let two = Region::new(vec![iv(zero(), ratio(1, 4)), iv(ratio(1, 2), ratio(3, 4))]);
        let flat = flatten(&two, &[&u]).unwrap();
        assert_eq!(flat.length, ratio(1, 2));
        assert_eq!(flat.map.to_original(&ratio(3, 8)), ratio(5, 8));
        assert_eq!(flat.map.to_original(&ratio(1, 4)), ratio(1, 2));
        assert_eq!(flat.map.to_original(&ratio(1, 2)), ratio(3, 4));

        let third = Region::interval(ratio(1, 3), ratio(2, 3)).unwrap();
        let flat = flatten(&third, &[&u]).unwrap();
        assert_eq!(flat.length, ratio(1, 3));
        assert_eq!(flat.map.to_original(&zero()), ratio(1, 3));

        assert_eq!(flatten(&Region::empty(), &[&u]).unwrap_err(), Error::EmptySubcake);
    }

    #[test]
    fn region_unflattening_splits_at_junctions() {
        let u = Valuation::uniform();
        let two = Region::new(vec![iv(zero(), ratio(1, 4)), iv(ratio(1, 2), ratio(3, 4))]);
        let flat = flatten(&two, &[&u]).unwrap();
        let img = flat
            .map
            .region_to_original(&Region::interval(ratio(1, 8), ratio(3, 8)).unwrap());
        assert_eq!(
            img,
            Region::new(vec![iv(ratio(1, 8), ratio(1, 4)), iv(ratio(1, 2), ratio(5, 8))])
        );
    }

    #[test]
    fn single_agent_half() {
        let u = Valuation::uniform();
        let req = SplitRequest {
            valuations: vec![&u],
            subcake: Region::full(),
            topology: Topology::Pie,
            ratio: ratio(1, 2),
        };
        let res = exact_split(&req, 1_000).unwrap();
        assert_eq!(res.part, Region::interval(zero(), ratio(1, 2)).unwrap());
        assert_eq!(res.complement, Region::interval(ratio(1, 2), one()).unwrap());
        assert_eq!(res.arcs, 1);
    }

    #[test]
    fn two_agents_half() {
        let u = Valuation::uniform();
        let f = front_heavy();
        let req = SplitRequest {
            valuations: vec![&u, &f],
            subcake: Region::full(),
            topology: Topology::Interval,
            ratio: ratio(1, 2),
        };
        let res = exact_split(&req, 1_000).unwrap();
        assert_eq!(res.part, Region::interval(ratio(1, 4), ratio(3, 4)).unwrap());
        assert_eq!(measure_of(&u, &res.part), ratio(1, 2));
        assert_eq!(measure_of(&f, &res.part), ratio(1, 2));
    }

    #[test]
    fn rejects_bad_requests() {
        let u = Valuation::uniform();
        let mut req = SplitRequest {
            valuations: vec![&u],
            subcake: Region::full(),
            topology: Topology::Interval,
            ratio: one(),
        };
        assert!(matches!(exact_split(&req, 100), Err(Error::InvalidSplitRequest(_))));
        req.ratio = ratio(1, 2);
        let back = Valuation::new(vec![zero(), ratio(1, 2), one()], vec![int(0), int(1)]).unwrap();
        req.valuations = vec![&back];
        req.subcake = Region::interval(zero(), ratio(1, 2)).unwrap();
        assert!(matches!(exact_split(&req, 100), Err(Error::InvalidSplitRequest(_))));
    }

    #[test]
    fn budget_guard() {
        let u = Valuation::uniform();
        let req = SplitRequest {
            valuations: vec![&u],
            subcake: Region::full(),
            topology: Topology::Interval,
            ratio: ratio(1, 2),
        };
        // one cell, one arc: 2 * C(3, 2) = 6 systems
        assert_eq!(enumeration_estimate(1, 1), 6);
        assert!(matches!(
            exact_split(&req, 5),
            Err(Error::BudgetExceeded { required: 6, cap: 5 })
        ));
        assert!(exact_split(&req, 6).is_ok());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(28, 8), 3_108_105);
        assert_eq!(binomial(4, 0), 1);
    }
}
