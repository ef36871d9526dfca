//! Integer points of a bounded constraint system by depth-first search with
//! interval propagation.

use super::{ConstraintSystem, Inequality};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Interval {
    pub lo: i64,
    pub hi: i64,
}

/// Tightens `box_` against every inequality until nothing changes. Returns
/// false when some interval becomes empty.
pub(crate) fn propagate(ineqs: &[Inequality], box_: &mut [Interval]) -> bool {
    loop {
        let mut changed = false;
        for ineq in ineqs {
            // smallest possible value of the left side
            let min_lhs: i64 = ineq
                .coeffs
                .iter()
                .zip(box_.iter())
                .map(|(&a, iv)| if a >= 0 { a * iv.lo } else { a * iv.hi })
                .sum();
            if min_lhs > ineq.bound {
                return false;
            }
            for (k, &a) in ineq.coeffs.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let own = if a > 0 { a * box_[k].lo } else { a * box_[k].hi };
                let slack = ineq.bound - (min_lhs - own);
                let iv = &mut box_[k];
                if a > 0 {
                    let hi = slack.div_euclid(a);
                    if hi < iv.hi {
                        iv.hi = hi;
                        changed = true;
                    }
                } else {
                    // a x >= -slack with a < 0  <=>  x >= ceil(slack / a)
                    let lo = -(slack.div_euclid(-a));
                    if lo > iv.lo {
                        iv.lo = lo;
                        changed = true;
                    }
                }
                if iv.lo > iv.hi {
                    return false;
                }
            }
            if changed {
                break;
            }
        }
        if !changed {
            return true;
        }
    }
}

pub(crate) fn visit(sys: &ConstraintSystem, start: &[Interval], f: &mut impl FnMut(&[i64])) {
    let mut box_ = start.to_vec();
    if !propagate(&sys.inequalities, &mut box_) {
        return;
    }
    match box_.iter().position(|iv| iv.lo < iv.hi) {
        None => {
            let point: Vec<i64> = box_.iter().map(|iv| iv.lo).collect();
            if sys.satisfied_by(&point) {
                f(&point);
            }
        }
        Some(k) => {
            for value in box_[k].lo..=box_[k].hi {
                let mut child = box_.clone();
                child[k] = Interval { lo: value, hi: value };
                visit(sys, &child, f);
            }
        }
    }
}
