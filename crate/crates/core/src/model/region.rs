use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{format_rational, one, zero};
use crate::Rational;

/// A closed interval `[lo, hi]` of cake coordinates, `0 <= lo <= hi <= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo < zero() || hi > one() || lo > hi {
            return Err(Error::InvalidInterval {
                lo: Box::new(lo),
                hi: Box::new(hi),
            });
        }
        Ok(Self { lo, hi })
    }

    pub fn full() -> Self {
        Self { lo: zero(), hi: one() }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", format_rational(&self.lo), format_rational(&self.hi))
    }
}

/// A finite union of intervals in canonical form: sorted, pairwise separated
/// by positive gaps, no degenerate members.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Region {
    intervals: Vec<Interval>,
}

impl Region {
    /// Canonicalizes: drops degenerate intervals, sorts, merges touching or
    /// overlapping ones.
    pub fn new(mut intervals: Vec<Interval>) -> Self {
        intervals.retain(|iv| !iv.is_degenerate());
        intervals.sort();
        let mut merged: Vec<Interval> = Vec::with_capacity(intervals.len());
        for iv in intervals {
            match merged.last_mut() {
                Some(last) if iv.lo <= last.hi => {
                    if iv.hi > last.hi {
                        last.hi = iv.hi;
                    }
                }
                _ => merged.push(iv),
            }
        }
        Self { intervals: merged }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn full() -> Self {
        Self::new(vec![Interval::full()])
    }

    pub fn interval(lo: Rational, hi: Rational) -> Result<Self> {
        Ok(Self::new(vec![Interval::new(lo, hi)?]))
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn interval_count(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn length(&self) -> Rational {
        self.intervals
            .iter()
            .fold(Rational::zero(), |acc, iv| acc + iv.length())
    }

    pub fn union(&self, other: &Region) -> Region {
        let mut all = self.intervals.clone();
        all.extend(other.intervals.iter().cloned());
        Region::new(all)
    }

    pub fn intersection(&self, other: &Region) -> Region {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.intervals.len() && j < other.intervals.len() {
            let a = &self.intervals[i];
            let b = &other.intervals[j];
            let lo = a.lo.clone().max(b.lo.clone());
            let hi = a.hi.clone().min(b.hi.clone());
            if lo < hi {
                out.push(Interval { lo, hi });
            }
            if a.hi < b.hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        Region::new(out)
    }

    /// `self` minus `other` (closure of the set difference).
    pub fn difference(&self, other: &Region) -> Region {
        let mut out = Vec::new();
        for a in &self.intervals {
            let mut cursor = a.lo.clone();
            for b in &other.intervals {
                if b.hi <= cursor || b.lo >= a.hi {
                    continue;
                }
                if b.lo > cursor {
                    out.push(Interval {
                        lo: cursor.clone(),
                        hi: b.lo.clone(),
                    });
                }
                cursor = cursor.max(b.hi.clone());
            }
            if cursor < a.hi {
                out.push(Interval {
                    lo: cursor,
                    hi: a.hi.clone(),
                });
            }
        }
        Region::new(out)
    }

    /// Endpoints of all maximal intervals, in order.
    pub fn endpoints(&self) -> impl Iterator<Item = &Rational> {
        self.intervals.iter().flat_map(|iv| [&iv.lo, &iv.hi])
    }

    /// True if the region is one arc of the pie `[0, 1]` with `0 ≡ 1`:
    /// a single interval, or two intervals touching `0` and `1`.
    pub fn is_pie_arc(&self) -> bool {
        match self.intervals.as_slice() {
            [_] => true,
            [a, b] => a.lo.is_zero() && b.hi == one(),
            _ => false,
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return write!(f, "∅");
        }
        for (k, iv) in self.intervals.iter().enumerate() {
            if k > 0 {
                write!(f, " ∪ ")?;
            }
            write!(f, "{iv}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn iv(a: (i64, i64), b: (i64, i64)) -> Interval {
        Interval::new(ratio(a.0, a.1), ratio(b.0, b.1)).unwrap()
    }

    #[test]
    fn canonicalization_merges_and_drops() {
        let r = Region::new(vec![
            iv((1, 2), (3, 4)),
            iv((0, 1), (1, 4)),
            iv((1, 4), (1, 3)),
            iv((2, 3), (2, 3)),
            iv((5, 8), (7, 8)),
        ]);
        assert_eq!(r.intervals(), &[iv((0, 1), (1, 3)), iv((1, 2), (7, 8))]);
        assert_eq!(Region::new(r.intervals().to_vec()), r);
    }

    #[test]
    fn rejects_out_of_range_interval() {
        assert!(Interval::new(ratio(1, 2), ratio(1, 4)).is_err());
        assert!(Interval::new(ratio(-1, 2), ratio(1, 4)).is_err());
        assert!(Interval::new(ratio(0, 1), ratio(5, 4)).is_err());
    }

    #[test]
    fn set_operations() {
        let a = Region::new(vec![iv((0, 1), (1, 2))]);
        let b = Region::new(vec![iv((1, 4), (3, 4))]);
        assert_eq!(a.intersection(&b), Region::new(vec![iv((1, 4), (1, 2))]));
        assert_eq!(a.difference(&b), Region::new(vec![iv((0, 1), (1, 4))]));
        assert_eq!(b.difference(&a), Region::new(vec![iv((1, 2), (3, 4))]));
        assert_eq!(a.union(&b), Region::new(vec![iv((0, 1), (3, 4))]));
        assert_eq!(Region::full().difference(&b).interval_count(), 2);
        assert_eq!(Region::full().difference(&b).length(), ratio(1, 2));
    }

    #[test]
    fn pie_arcs() {
        assert!(Region::full().is_pie_arc());
        let wrap = Region::new(vec![iv((0, 1), (1, 4)), iv((3, 4), (1, 1))]);
        assert!(wrap.is_pie_arc());
        let gap = Region::new(vec![iv((1, 8), (1, 4)), iv((3, 4), (1, 1))]);
        assert!(!gap.is_pie_arc());
    }
}
