//! Exact minimum of a maximum of affine functions on `[0, 1]`.

use std::cmp::Ordering;

use num_traits::{One, Zero};

use crate::rational::Rational;

/// `intercept + slope * q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    pub intercept: Rational,
    pub slope: Rational,
}

impl Line {
    pub fn at(&self, q: &Rational) -> Rational {
        &self.intercept + &self.slope * q
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnvelopeMin {
    pub value: Rational,
    /// Smallest minimizer in `[0, 1]`.
    pub argmin: Rational,
}

/// `min_{q in [0,1]} max_i lines[i](q)`.
///
/// The upper envelope is convex and piecewise linear, so the minimum sits at
/// `0`, `1`, or one of the envelope's breakpoints. The envelope is built with
/// the usual slope-sorted hull sweep.
pub fn min_of_upper_envelope(lines: &[Line]) -> EnvelopeMin {
    assert!(!lines.is_empty(), "envelope of no lines");

    let mut sorted: Vec<&Line> = lines.iter().collect();
    sorted.sort_by(|x, y| match x.slope.cmp(&y.slope) {
        Ordering::Equal => y.intercept.cmp(&x.intercept),
        o => o,
    });
    sorted.dedup_by(|later, earlier| later.slope == earlier.slope);

    let mut hull: Vec<&Line> = Vec::with_capacity(sorted.len());
    for line in sorted {
        while hull.len() >= 2 {
            let l1 = hull[hull.len() - 2];
            let l2 = hull[hull.len() - 1];
            if crossing(l1, line) <= crossing(l1, l2) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(line);
    }

    let zero = Rational::zero();
    let one = Rational::one();
    // Segment i of the hull is active on [crossing(i-1,i), crossing(i,i+1)].
    let mut best = EnvelopeMin {
        value: envelope_at(&hull, &zero),
        argmin: zero.clone(),
    };
    for pair in hull.windows(2) {
        let x = crossing(pair[0], pair[1]);
        if x > zero && x < one {
            let v = pair[0].at(&x);
            if v < best.value {
                best = EnvelopeMin {
                    value: v,
                    argmin: x,
                };
            }
        }
    }
    let at_one = envelope_at(&hull, &one);
    if at_one < best.value {
        best = EnvelopeMin {
            value: at_one,
            argmin: one,
        };
    }
    best
}

/// Abscissa where two lines of distinct slope meet.
fn crossing(a: &Line, b: &Line) -> Rational {
    (&a.intercept - &b.intercept) / (&b.slope - &a.slope)
}

fn envelope_at(lines: &[&Line], q: &Rational) -> Rational {
    lines.iter().map(|l| l.at(q)).max().expect("non-empty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn line(a: Rational, b: Rational) -> Line {
        Line {
            intercept: a,
            slope: b,
        }
    }

    /// Brute force: every endpoint and every pairwise crossing in [0,1].
    fn oracle(lines: &[Line]) -> Rational {
        let mut candidates = vec![int(0), int(1)];
        for (i, a) in lines.iter().enumerate() {
            for b in &lines[i + 1..] {
                if a.slope != b.slope {
                    let x = crossing(a, b);
                    if x >= int(0) && x <= int(1) {
                        candidates.push(x);
                    }
                }
            }
        }
        candidates
            .iter()
            .map(|q| lines.iter().map(|l| l.at(q)).max().unwrap())
            .min()
            .unwrap()
    }

    #[test]
    fn absolute_value_minimum_at_root() {
        // |q - 1/3| as two lines
        let ls = [line(ratio(-1, 3), int(1)), line(ratio(1, 3), int(-1))];
        let m = min_of_upper_envelope(&ls);
        assert_eq!(m.value, int(0));
        assert_eq!(m.argmin, ratio(1, 3));
    }

    #[test]
    fn root_outside_interval_clamps_to_endpoint() {
        // |q + 1|
        let ls = [line(int(1), int(1)), line(int(-1), int(-1))];
        let m = min_of_upper_envelope(&ls);
        assert_eq!(m.value, int(1));
        assert_eq!(m.argmin, int(0));
    }

    #[test]
    fn flat_lines() {
        let ls = [line(ratio(1, 5), int(0)), line(ratio(1, 7), int(0))];
        let m = min_of_upper_envelope(&ls);
        assert_eq!(m.value, ratio(1, 5));
        assert_eq!(m.argmin, int(0));
    }

    fn arb_line() -> impl Strategy<Value = Line> {
        (-12i64..=12, 1i64..=6, -12i64..=12, 1i64..=6)
            .prop_map(|(a, da, b, db)| line(ratio(a, da), ratio(b, db)))
    }

    proptest! {
        #[test]
        fn hull_matches_brute_force(lines in prop::collection::vec(arb_line(), 1..14)) {
            let m = min_of_upper_envelope(&lines);
            prop_assert_eq!(&m.value, &oracle(&lines));
            let at_arg = lines.iter().map(|l| l.at(&m.argmin)).max().unwrap();
            prop_assert_eq!(at_arg, m.value);
        }
    }
}
