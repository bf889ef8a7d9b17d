use crate::model::{mark_right, Allocation, Interval, Region, Valuation};
use crate::Rational;

/// Divide-and-conquer proportional division with connected pieces: every
/// participant marks the point where the left part is worth `⌊n/2⌋/n` of its
/// value, the cake is cut at the `⌊n/2⌋`-th smallest mark (ties by index) and
/// each side recurses with its participants. Each participant receives one
/// interval worth at least `1/n` of its value of `subcake`; `n − 1` cuts.
pub fn connected_proportional(valuations: &[&Valuation], subcake: &Interval) -> Allocation {
    let mut out = vec![Region::empty(); valuations.len()];
    if valuations.is_empty() {
        return Allocation::new(out);
    }
    let ids: Vec<usize> = (0..valuations.len()).collect();
    divide(valuations, ids, subcake.lo().clone(), subcake.hi().clone(), &mut out);
    Allocation::new(out)
}

fn divide(valuations: &[&Valuation], ids: Vec<usize>, lo: Rational, hi: Rational, out: &mut [Region]) {
    let n = ids.len();
    if n == 1 {
        out[ids[0]] = Region::new(vec![Interval::new(lo, hi).expect("sub-interval of the cake")]);
        return;
    }
    let left_count = n / 2;
    let share = Rational::new(left_count.into(), n.into());
    let mut marks: Vec<(Rational, usize)> = ids
        .into_iter()
        .map(|id| {
            let v = valuations[id];
            let own = v.cumulative(&hi) - v.cumulative(&lo);
            let mark = mark_right(v, &lo, &(own * &share)).expect("share of own value is reachable");
            (mark, id)
        })
        .collect();
    marks.sort();
    let cut = marks[left_count - 1].0.clone();
    let right: Vec<usize> = marks.split_off(left_count).into_iter().map(|(_, id)| id).collect();
    let left: Vec<usize> = marks.into_iter().map(|(_, id)| id).collect();
    divide(valuations, left, lo, cut.clone(), out);
    divide(valuations, right, cut, hi, out);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{cut_count, measure_of};
    use crate::rational::{int, one, ratio, zero};

    #[test]
    fn single_participant() {
        let u = Valuation::uniform();
        let a = connected_proportional(&[&u], &Interval::full());
        assert_eq!(a.pieces(), &[Region::full()]);
        assert_eq!(cut_count(&a), 0);
    }

    #[test]
    fn four_identical_uniform() {
        let u = Valuation::uniform();
        let a = connected_proportional(&[&u, &u, &u, &u], &Interval::full());
        assert_eq!(a.cut_points(), vec![ratio(1, 4), ratio(1, 2), ratio(3, 4)]);
        for (k, p) in a.pieces().iter().enumerate() {
            let lo = ratio(k as i64, 4);
            assert_eq!(p, &Region::interval(lo, ratio(k as i64 + 1, 4)).unwrap());
        }
    }

    #[test]
    fn lower_mark_goes_left() {
        let a_val = Valuation::uniform();
        let b_val = Valuation::new(vec![zero(), ratio(1, 2), one()], vec![int(2), int(0)]).unwrap();
        let a = connected_proportional(&[&a_val, &b_val], &Interval::full());
        assert_eq!(a.pieces()[1], Region::interval(zero(), ratio(1, 4)).unwrap());
        assert_eq!(a.pieces()[0], Region::interval(ratio(1, 4), one()).unwrap());
        assert_eq!(measure_of(&b_val, &a.pieces()[1]), ratio(1, 2));
        assert_eq!(measure_of(&a_val, &a.pieces()[0]), ratio(3, 4));
    }

    #[test]
    fn works_on_a_subinterval() {
        let u = Valuation::uniform();
        let sub = Interval::new(ratio(1, 2), one()).unwrap();
        let a = connected_proportional(&[&u, &u], &sub);
        assert_eq!(a.pieces()[0], Region::interval(ratio(1, 2), ratio(3, 4)).unwrap());
        assert_eq!(a.pieces()[1], Region::interval(ratio(3, 4), one()).unwrap());
    }
}
