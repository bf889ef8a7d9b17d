//! Three-agent protocols reaching four cuts.

use num_traits::ToPrimitive;

use super::recursive::divide_subcake;
use super::{AlgorithmKind, AlgorithmReport};
use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::model::{equal_marks, mark_right, measure_of, Allocation, Instance, Interval, Region, Valuation};
use crate::rational::{int, one, ratio, zero};
use crate::Rational;

/// Cut-and-choose on a single interval: `owner` halves it by its own measure,
/// `chooser` takes the side it values weakly more (ties: left side).
/// Returns `(owner part, chooser part)`.
pub fn cut_and_choose(owner: &Valuation, chooser: &Valuation, piece: &Region) -> Result<(Region, Region)> {
    if piece.interval_count() != 1 {
        return Err(Error::PieceNotConnected {
            intervals: piece.interval_count(),
        });
    }
    Ok(halve_and_choose(owner, chooser, piece.intervals().to_vec()))
}

/// Cut-and-choose on an arc of the pie: either a single interval or a pair
/// `[b, 1] ∪ [0, a]` running through the seam. The owner's mark is taken
/// along the arc starting at `b`; "left" is the side containing the arc's
/// start. One cut, since the seam is not a cut on an interval cake.
pub fn cut_and_choose_arc(owner: &Valuation, chooser: &Valuation, piece: &Region) -> Result<(Region, Region)> {
    if !piece.is_pie_arc() {
        return Err(Error::PieceNotConnected {
            intervals: piece.interval_count(),
        });
    }
    let mut order = piece.intervals().to_vec();
    let last = order.len() - 1;
    order.rotate_right(last);
    Ok(halve_and_choose(owner, chooser, order))
}

fn halve_and_choose(owner: &Valuation, chooser: &Valuation, path: Vec<Interval>) -> (Region, Region) {
    let total: Rational = path.iter().map(|iv| owner.value_of_interval(iv)).sum();
    let half = total / Rational::from_integer(2.into());
    let mut first = Vec::new();
    let mut second = Vec::new();
    let mut acc = zero();
    let mut placed = false;
    for iv in path {
        if placed {
            second.push(iv);
            continue;
        }
        let value = owner.value_of_interval(&iv);
        if &acc + &value >= half {
            let mark = mark_right(owner, iv.lo(), &(&half - &acc)).expect("half lies within this interval");
            first.push(Interval::new(iv.lo().clone(), mark.clone()).expect("mark inside interval"));
            second.push(Interval::new(mark, iv.hi().clone()).expect("mark inside interval"));
            placed = true;
        } else {
            acc += value;
            first.push(iv);
        }
    }
    let first = Region::new(first);
    let second = Region::new(second);
    if measure_of(chooser, &first) >= measure_of(chooser, &second) {
        (second, first)
    } else {
        (first, second)
    }
}

/// Three agents, one of them entitled to exactly one half (the first such
/// agent chooses). The other two split the cake in the ratio of their doubled
/// entitlements, then each runs cut-and-choose with the chooser on its piece.
pub fn special3_half(inst: &Instance, config: &SolverConfig) -> Result<AlgorithmReport> {
    if inst.agent_count() != 3 {
        return Err(Error::PreconditionViolated(
            "special3a needs exactly three agents".into(),
        ));
    }
    let t = inst.entitlements();
    let half = ratio(1, 2);
    let chooser = t
        .iter()
        .position(|x| *x == half)
        .ok_or_else(|| Error::PreconditionViolated("no entitlement equals 1/2".into()))?;
    let others: Vec<usize> = (0..3).filter(|&i| i != chooser).collect();
    let vals = inst.valuations();
    let pieces = divide_subcake(
        &[&vals[others[0]], &vals[others[1]]],
        &[&t[others[0]] * int(2), &t[others[1]] * int(2)],
        Region::full(),
        inst.topology(),
        config.enumeration_cap,
    )?;

    let mut out = vec![Region::empty(); 3];
    for (&owner, piece) in others.iter().zip(&pieces) {
        let (kept, given) = split_with_chooser(&vals[owner], &vals[chooser], piece)?;
        out[owner] = kept;
        out[chooser] = out[chooser].union(&given);
    }
    Ok(AlgorithmReport::new(
        inst,
        Allocation::new(out),
        AlgorithmKind::Special3Half,
        4,
    ))
}

fn split_with_chooser(owner: &Valuation, chooser: &Valuation, piece: &Region) -> Result<(Region, Region)> {
    if piece.is_empty() {
        return Ok((Region::empty(), Region::empty()));
    }
    cut_and_choose_arc(owner, chooser, piece)
}

/// Intermediate decisions of [`special3_equal_pair`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EqualPairTrace {
    /// The equal pair, lower index first, and the third agent.
    pub first: usize,
    pub second: usize,
    pub third: usize,
    /// Shared entitlement `B / D` in lowest terms.
    pub b: usize,
    pub d: usize,
    /// The first agent's `D − 1` equal-value marks.
    pub marks: Vec<Rational>,
    /// Index of the first of the `B` consecutive parts chosen by the third agent.
    pub window_start: usize,
    pub window: Region,
    /// Agent that takes the window.
    pub taker: usize,
}

/// First pair `(i, j)`, `i < j`, of equal entitlements, with the remaining agent.
pub fn equal_pair(inst: &Instance) -> Option<(usize, usize, usize)> {
    if inst.agent_count() != 3 {
        return None;
    }
    let t = inst.entitlements();
    [(0, 1, 2), (0, 2, 1), (1, 2, 0)]
        .into_iter()
        .find(|&(i, j, _)| t[i] == t[j])
}

/// Three agents, two of them with equal entitlement `B/D`.
pub fn special3_equal_pair(inst: &Instance, config: &SolverConfig) -> Result<AlgorithmReport> {
    special3_equal_pair_traced(inst, config).map(|(report, _)| report)
}

/// [`special3_equal_pair`] together with its decision trace.
///
/// The pie is cut into `D` parts of equal value to the first pair member. The
/// third agent picks the `B` consecutive parts (wrapping through the seam) it
/// values least, which is at most `B/D` of its value. The second pair member
/// takes that window if it is worth more than its share to them, otherwise
/// the first member takes it. The remaining arc is split exactly between the
/// other two agents in the ratio of their entitlements.
pub fn special3_equal_pair_traced(inst: &Instance, config: &SolverConfig) -> Result<(AlgorithmReport, EqualPairTrace)> {
    let (first, second, third) =
        equal_pair(inst).ok_or_else(|| Error::PreconditionViolated("no two entitlements are equal".into()))?;
    let t = inst.entitlements();
    let vals = inst.valuations();
    let share = &t[first];
    let (b, d) = match (share.numer().to_usize(), share.denom().to_usize()) {
        (Some(b), Some(d)) if 2 * b < d => (b, d),
        _ => {
            return Err(Error::PreconditionViolated(format!(
                "shared entitlement {share} is not B/D with D > 2B"
            )))
        }
    };
    if d as u64 > config.enumeration_cap {
        return Err(Error::BudgetExceeded {
            required: d as u128,
            cap: config.enumeration_cap,
        });
    }

    let marks = equal_marks(&vals[first], d);
    let mut boundaries = Vec::with_capacity(d + 1);
    boundaries.push(zero());
    boundaries.extend(marks.iter().cloned());
    boundaries.push(one());
    let window_at = |s: usize| -> Region {
        let end = s + b;
        let iv = |lo: &Rational, hi: &Rational| Interval::new(lo.clone(), hi.clone()).expect("marks are sorted");
        if end <= d {
            Region::new(vec![iv(&boundaries[s], &boundaries[end])])
        } else {
            Region::new(vec![iv(&boundaries[s], &one()), iv(&zero(), &boundaries[end - d])])
        }
    };

    let mut best: Option<(Rational, usize, Region)> = None;
    for s in 0..d {
        let w = window_at(s);
        let value = measure_of(&vals[third], &w);
        if best.as_ref().is_none_or(|(v, _, _)| value < *v) {
            best = Some((value, s, w));
        }
    }
    let (_, window_start, window) = best.expect("D >= 1 windows");

    let second_value = measure_of(&vals[second], &window);
    let (taker, other) = if second_value <= inst.threshold(second) {
        (first, second)
    } else {
        (second, first)
    };
    let remainder = Region::full().difference(&window);
    let (lo_agent, hi_agent) = if other < third { (other, third) } else { (third, other) };
    let split = divide_subcake(
        &[&vals[lo_agent], &vals[hi_agent]],
        &[t[lo_agent].clone(), t[hi_agent].clone()],
        remainder,
        inst.topology(),
        config.enumeration_cap,
    )?;

    let mut pieces = vec![Region::empty(); 3];
    pieces[taker] = window.clone();
    pieces[lo_agent] = split[0].clone();
    pieces[hi_agent] = split[1].clone();
    let report = AlgorithmReport::new(inst, Allocation::new(pieces), AlgorithmKind::Special3EqualPair, 4);
    let trace = EqualPairTrace {
        first,
        second,
        third,
        b,
        d,
        marks,
        window_start,
        window,
        taker,
    };
    Ok((report, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Topology;

    fn front_heavy() -> Valuation {
        Valuation::new(vec![zero(), ratio(1, 2), one()], vec![int(2), int(0)]).unwrap()
    }

    #[test]
    fn cut_and_choose_tie_goes_left() {
        let u = Valuation::uniform();
        let (owner, chooser) = cut_and_choose(&u, &u, &Region::full()).unwrap();
        assert_eq!(chooser, Region::interval(zero(), ratio(1, 2)).unwrap());
        assert_eq!(owner, Region::interval(ratio(1, 2), one()).unwrap());
    }

    #[test]
    fn cut_and_choose_front_heavy_chooser() {
        let u = Valuation::uniform();
        let f = front_heavy();
        let (_, chooser) = cut_and_choose(&u, &f, &Region::full()).unwrap();
        assert_eq!(chooser, Region::interval(zero(), ratio(1, 2)).unwrap());
        assert_eq!(measure_of(&f, &chooser), one());
    }

    #[test]
    fn cut_and_choose_front_heavy_owner() {
        let u = Valuation::uniform();
        let f = front_heavy();
        let (owner, chooser) = cut_and_choose(&f, &u, &Region::full()).unwrap();
        assert_eq!(chooser, Region::interval(ratio(1, 4), one()).unwrap());
        assert_eq!(owner, Region::interval(zero(), ratio(1, 4)).unwrap());
        assert_eq!(measure_of(&u, &chooser), ratio(3, 4));
    }

    #[test]
    fn cut_and_choose_rejects_disconnected() {
        let u = Valuation::uniform();
        let piece = Region::new(vec![
            Interval::new(zero(), ratio(1, 4)).unwrap(),
            Interval::new(ratio(1, 2), one()).unwrap(),
        ]);
        assert_eq!(
            cut_and_choose(&u, &u, &piece).unwrap_err(),
            Error::PieceNotConnected { intervals: 2 }
        );
        // the same piece is an arc through the seam
        let (owner, chooser) = cut_and_choose_arc(&u, &u, &piece).unwrap();
        assert_eq!(chooser, Region::interval(ratio(1, 2), ratio(7, 8)).unwrap());
        assert_eq!(
            owner,
            Region::new(vec![
                Interval::new(zero(), ratio(1, 4)).unwrap(),
                Interval::new(ratio(7, 8), one()).unwrap(),
            ])
        );
    }

    #[test]
    fn equal_thirds_trace() {
        let u = Valuation::uniform();
        let inst = Instance::new(Topology::Interval, vec![u.clone(), u.clone(), u], vec![ratio(1, 3); 3]).unwrap();
        let (rep, trace) = special3_equal_pair_traced(&inst, &SolverConfig::default()).unwrap();
        assert_eq!((trace.b, trace.d), (1, 3));
        assert_eq!(trace.marks, vec![ratio(1, 3), ratio(2, 3)]);
        assert_eq!(trace.window_start, 0);
        assert_eq!(trace.taker, 0);
        assert_eq!(
            rep.allocation.pieces()[0],
            Region::interval(zero(), ratio(1, 3)).unwrap()
        );
        assert_eq!(
            rep.allocation.pieces()[1],
            Region::interval(ratio(1, 3), ratio(2, 3)).unwrap()
        );
        assert_eq!(
            rep.allocation.pieces()[2],
            Region::interval(ratio(2, 3), one()).unwrap()
        );
        assert_eq!(rep.cut_count(), 2);
    }

    #[test]
    fn preconditions() {
        let u = Valuation::uniform();
        let inst = Instance::new(
            Topology::Interval,
            vec![u.clone(), u.clone(), u],
            vec![ratio(1, 7), ratio(2, 7), ratio(4, 7)],
        )
        .unwrap();
        let cfg = SolverConfig::default();
        assert!(matches!(
            special3_half(&inst, &cfg),
            Err(Error::PreconditionViolated(_))
        ));
        assert!(matches!(
            special3_equal_pair(&inst, &cfg),
            Err(Error::PreconditionViolated(_))
        ));
    }
}
