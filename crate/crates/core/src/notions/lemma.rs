//! The binary-variable identity linking the summed and per-symbol
//! dependence gaps.

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{abs, serde_str, Rational};

/// Joint law of two bits laid out as
///
/// ```text
///          Y=0  Y=1
///   X=0     a    b
///   X=1     c    d
/// ```
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryJoint {
    #[serde(with = "serde_str")]
    pub a: Rational,
    #[serde(with = "serde_str")]
    pub b: Rational,
    #[serde(with = "serde_str")]
    pub c: Rational,
    #[serde(with = "serde_str")]
    pub d: Rational,
}

impl BinaryJoint {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Result<Self> {
        for (name, v) in [("a", &a), ("b", &b), ("c", &c), ("d", &d)] {
            if v.is_negative() {
                return Err(Error::InvalidBinaryJoint(format!(
                    "{name} = {v} is negative"
                )));
            }
        }
        let total = &a + &b + &c + &d;
        if !total.is_one() {
            return Err(Error::InvalidBinaryJoint(format!(
                "entries sum to {total}, not 1"
            )));
        }
        Ok(BinaryJoint { a, b, c, d })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaRecord {
    /// `|Pr[X=Y] - sum_l Pr[X=l] Pr[Y=l]|`.
    #[serde(with = "serde_str")]
    pub lhs: Rational,
    /// `max_l |Pr[X=Y=l] - Pr[X=l] Pr[Y=l]|`.
    #[serde(with = "serde_str")]
    pub rhs: Rational,
    #[serde(with = "serde_str")]
    pub abs_ad_minus_bc: Rational,
    /// `lhs == 2 * rhs`.
    pub holds: bool,
}

pub fn lemma1_check(j: &BinaryJoint) -> LemmaRecord {
    let BinaryJoint { a, b, c, d } = j;
    let px0 = a + b;
    let px1 = c + d;
    let py0 = a + c;
    let py1 = b + d;
    let lhs = abs(&(a + d - &px0 * &py0 - &px1 * &py1));
    let gap0 = abs(&(a - &px0 * &py0));
    let gap1 = abs(&(d - &px1 * &py1));
    let rhs = gap0.max(gap1);
    let abs_ad_minus_bc = abs(&(a * d - b * c));
    let holds = lhs == &rhs + &rhs;
    LemmaRecord {
        lhs,
        rhs,
        abs_ad_minus_bc,
        holds,
    }
}

/// Every joint whose entries are multiples of `1/denominator`.
pub fn binary_joint_grid(denominator: u32) -> Vec<BinaryJoint> {
    let den = denominator as i64;
    let r = |v: u32| crate::rational::ratio(v as i64, den);
    let mut out = Vec::new();
    for a in 0..=denominator {
        for b in 0..=(denominator - a) {
            for c in 0..=(denominator - a - b) {
                let d = denominator - a - b - c;
                out.push(BinaryJoint {
                    a: r(a),
                    b: r(b),
                    c: r(c),
                    d: r(d),
                });
            }
        }
    }
    out
}
