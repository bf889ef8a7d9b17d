use num_traits::{Signed, Zero};

use super::region::{Interval, Region};
use crate::error::{Error, Result};
use crate::rational::{one, zero};
use crate::Rational;

/// A nonatomic value measure with piecewise-constant density.
///
/// `densities[j]` is the value per unit length on `[breakpoints[j],
/// breakpoints[j + 1]]`. Cumulative values at the breakpoints are cached so
/// evaluating the distribution function is a binary search plus one
/// multiply.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Valuation {
    breakpoints: Vec<Rational>,
    densities: Vec<Rational>,
    cumulative: Vec<Rational>,
}

impl Valuation {
    /// Builds a valuation on the unit cake. Breakpoints must run strictly
    /// increasing from 0 to 1.
    pub fn new(breakpoints: Vec<Rational>, densities: Vec<Rational>) -> Result<Self> {
        if breakpoints.last() != Some(&one()) {
            return Err(Error::InvalidValuation("last breakpoint must be 1".into()));
        }
        Self::on_domain(breakpoints, densities)
    }

    /// Same as [`Valuation::new`] but on `[0, L]` for any `0 < L <= 1`; used
    /// for flattened sub-cakes.
    pub(crate) fn on_domain(breakpoints: Vec<Rational>, densities: Vec<Rational>) -> Result<Self> {
        let invalid = |msg: &str| Err(Error::InvalidValuation(msg.into()));
        if breakpoints.len() < 2 {
            return invalid("need at least two breakpoints");
        }
        if densities.len() + 1 != breakpoints.len() {
            return invalid("need exactly one density per cell");
        }
        if !breakpoints[0].is_zero() {
            return invalid("first breakpoint must be 0");
        }
        if breakpoints.last().unwrap() > &one() {
            return invalid("breakpoints must lie in [0, 1]");
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return invalid("breakpoints must be strictly increasing");
        }
        if densities.iter().any(Signed::is_negative) {
            return invalid("densities must be nonnegative");
        }
        let mut cumulative = Vec::with_capacity(breakpoints.len());
        let mut acc = zero();
        cumulative.push(acc.clone());
        for (j, d) in densities.iter().enumerate() {
            acc += d * (&breakpoints[j + 1] - &breakpoints[j]);
            cumulative.push(acc.clone());
        }
        if !acc.is_positive() {
            return invalid("total value must be positive");
        }
        Ok(Self {
            breakpoints,
            densities,
            cumulative,
        })
    }

    pub fn uniform() -> Self {
        Self::new(vec![zero(), one()], vec![one()]).expect("uniform valuation is valid")
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn densities(&self) -> &[Rational] {
        &self.densities
    }

    pub fn cell_count(&self) -> usize {
        self.densities.len()
    }

    pub fn domain_end(&self) -> &Rational {
        self.breakpoints.last().unwrap()
    }

    pub fn total(&self) -> &Rational {
        self.cumulative.last().unwrap()
    }

    /// Value of the cake at the cached breakpoint `j`, i.e. `F(b_j)`.
    pub fn cumulative_at_breakpoint(&self, j: usize) -> &Rational {
        &self.cumulative[j]
    }

    /// Index of the cell containing `x`; the last cell owns the right end.
    pub fn cell_of(&self, x: &Rational) -> usize {
        let k = self.breakpoints.partition_point(|b| b <= x);
        k.saturating_sub(1).min(self.cell_count() - 1)
    }

    /// `F(x)`, the value of `[0, x]`.
    pub fn cumulative(&self, x: &Rational) -> Rational {
        if x <= &self.breakpoints[0] {
            return zero();
        }
        if x >= self.domain_end() {
            return self.total().clone();
        }
        let j = self.cell_of(x);
        &self.cumulative[j] + &self.densities[j] * (x - &self.breakpoints[j])
    }

    pub fn value_of_interval(&self, iv: &Interval) -> Rational {
        self.cumulative(iv.hi()) - self.cumulative(iv.lo())
    }

    /// The valuation restricted to `subcake` with the sub-cake's intervals
    /// concatenated onto `[0, L]`, `L` its total length.
    pub(crate) fn flattened(&self, subcake: &Region) -> Result<Valuation> {
        let mut bps = vec![zero()];
        let mut dens = Vec::new();
        let mut offset = zero();
        for iv in subcake.intervals() {
            let shift = &offset - iv.lo();
            let first = self.cell_of(iv.lo());
            let mut j = first;
            loop {
                let right = self.breakpoints[j + 1].clone().min(iv.hi().clone());
                dens.push(self.densities[j].clone());
                bps.push(&right + &shift);
                if &right >= iv.hi() {
                    break;
                }
                j += 1;
            }
            offset += iv.length();
        }
        // Merge neighbouring cells with equal density so the flat breakpoint
        // list stays minimal.
        let mut merged_bps = vec![bps[0].clone()];
        let mut merged_dens: Vec<Rational> = Vec::new();
        for (j, d) in dens.into_iter().enumerate() {
            if merged_dens.last() == Some(&d) {
                *merged_bps.last_mut().unwrap() = bps[j + 1].clone();
            } else {
                merged_dens.push(d);
                merged_bps.push(bps[j + 1].clone());
            }
        }
        Valuation::on_domain(merged_bps, merged_dens)
    }

    /// Same measure with every density multiplied by `factor > 0`.
    pub fn scaled(&self, factor: &Rational) -> Valuation {
        let densities = self.densities.iter().map(|d| d * factor).collect();
        Valuation::on_domain(self.breakpoints.clone(), densities).expect("positive scaling keeps the valuation valid")
    }
}

/// Exact value of a region: the sum of the density integrals over its intervals.
pub fn measure_of(v: &Valuation, r: &Region) -> Rational {
    r.intervals()
        .iter()
        .fold(zero(), |acc, iv| acc + v.value_of_interval(iv))
}

/// Leftmost `x >= start` with `V([start, x]) = target`.
pub fn mark_right(v: &Valuation, start: &Rational, target: &Rational) -> Result<Rational> {
    let base = v.cumulative(start);
    let remainder = v.total() - &base;
    if target > &remainder || target.is_negative() {
        return Err(Error::TargetExceedsRemainder {
            target: Box::new(target.clone()),
            remainder: Box::new(remainder),
        });
    }
    if target.is_zero() {
        return Ok(start.clone());
    }
    let goal = base + target;
    let mut j = v.cell_of(start);
    // The first cell whose right-end cumulative reaches the goal has positive
    // density, since the cumulative at its left end is still below the goal.
    while v.cumulative[j + 1] < goal {
        j += 1;
    }
    let left = start.clone().max(v.breakpoints[j].clone());
    let at_left = v.cumulative(&left);
    Ok(left + (goal - at_left) / &v.densities[j])
}

/// `D - 1` leftmost marks cutting the cake into `D` parts of equal value.
pub fn equal_marks(v: &Valuation, parts: usize) -> Vec<Rational> {
    let share = v.total() / Rational::from_integer(parts.into());
    let mut marks = Vec::with_capacity(parts.saturating_sub(1));
    let mut start = zero();
    for _ in 1..parts {
        let m = mark_right(v, &start, &share).expect("equal shares never exceed the remainder");
        marks.push(m.clone());
        start = m;
    }
    marks
}
