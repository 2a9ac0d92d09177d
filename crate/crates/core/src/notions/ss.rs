//! Statistical semantic security by exhaustive enumeration of predicates.
//!
//! For a cryptogram test `f` and a message predicate `h`, write
//! `A = Pr[f(C) = h(M)]` and `B = Pr[h(M) = 1]`. A message-independent coin
//! `G` with `Pr[G = 1] = q` matches `h(M)` with probability
//! `q B + (1 - q)(1 - B)`, so the gap is the affine function
//! `A + B - 1 + q (1 - 2B)`. The best coin minimises the largest gap magnitude
//! over all `h`, a one-dimensional convex piecewise-linear problem.
//!
//! Complementing `h` only flips the sign of the gap, and complementing `f`
//! maps `q` to `1 - q`, so half of each enumeration suffices.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::minimax::{min_of_upper_envelope, Line};
use crate::error::{Error, Result};
use crate::prob::{ChannelMatrix, ProbVector};
use crate::rational::{serde_str, Rational};

pub const DEFAULT_SS_CAP: usize = 10;

/// Alphabet-size limits for the `2^|C| * 2^|M|` enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SsCaps {
    pub cryptograms: usize,
    pub messages: usize,
}

impl SsCaps {
    pub fn uniform(cap: usize) -> Self {
        SsCaps {
            cryptograms: cap,
            messages: cap,
        }
    }

    pub fn admits(&self, ch: &ChannelMatrix) -> bool {
        ch.cryptograms().len() <= self.cryptograms && ch.messages().len() <= self.messages
    }

    pub fn check_channel(&self, ch: &ChannelMatrix) -> Result<()> {
        let nc = ch.cryptograms().len();
        let nm = ch.messages().len();
        if nc > self.cryptograms {
            return Err(Error::EnumerationTooLarge {
                what: "cryptogram predicates".into(),
                size: nc,
                cap: self.cryptograms,
            });
        }
        if nm > self.messages {
            return Err(Error::EnumerationTooLarge {
                what: "message predicates".into(),
                size: nm,
                cap: self.messages,
            });
        }
        Ok(())
    }
}

impl Default for SsCaps {
    fn default() -> Self {
        SsCaps::uniform(DEFAULT_SS_CAP)
    }
}

/// The distinguisher attaining the value: `f`, the best coin bias `q`, and the
/// predicate `h` that is worst for that coin. Predicates are listed as the
/// symbols they map to 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SsCertificate {
    pub f: Vec<String>,
    #[serde(with = "serde_str")]
    pub q: Rational,
    pub h: Vec<String>,
}

/// `max_f min_q max_h |Pr[f(C)=h(M)] - Pr[G_q = h(M)]|`.
pub fn eps_ss(ch: &ChannelMatrix, pm: &ProbVector) -> Result<(Rational, SsCertificate)> {
    eps_ss_capped(ch, pm, SsCaps::default())
}

pub fn eps_ss_capped(
    ch: &ChannelMatrix,
    pm: &ProbVector,
    caps: SsCaps,
) -> Result<(Rational, SsCertificate)> {
    let e = eps_ss_with_witness(ch, pm, caps)?;
    Ok((e.value, e.certificate))
}

/// The coin `G_f = f(C*)` with `C*` driven by an independent copy of the
/// message achieves this gap, so it upper-bounds [`eps_ss`].
pub fn ss_witness_bound(ch: &ChannelMatrix, pm: &ProbVector, caps: SsCaps) -> Result<Rational> {
    Ok(eps_ss_with_witness(ch, pm, caps)?.witness_bound)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SsEvaluation {
    pub value: Rational,
    pub certificate: SsCertificate,
    pub witness_bound: Rational,
}

/// [`eps_ss_capped`] and [`ss_witness_bound`] from a single enumeration.
pub fn eps_ss_with_witness(
    ch: &ChannelMatrix,
    pm: &ProbVector,
    caps: SsCaps,
) -> Result<SsEvaluation> {
    let mut best: Option<(Rational, u64, Rational)> = None;
    let mut witness = Rational::zero();
    scan(ch, pm, caps, |f, lines, pr_f| {
        let m = min_of_upper_envelope(lines);
        if best.as_ref().is_none_or(|(v, _, _)| m.value > *v) {
            best = Some((m.value, f, m.argmin));
        }
        for l in lines {
            let v = l.at(pr_f);
            if v > witness {
                witness = v;
            }
        }
    })?;
    let (value, f, q) = best.expect("at least one predicate");
    let h = worst_predicate(ch, pm, f, &q);
    Ok(SsEvaluation {
        value,
        certificate: SsCertificate {
            f: symbols_of(ch.cryptograms().symbols(), f),
            q,
            h: symbols_of(ch.messages().symbols(), h),
        },
        witness_bound: witness,
    })
}

/// Calls `visit(f_mask, lines, Pr[f(C)=1])` for every cryptogram predicate `f`
/// with the last symbol mapped to 0. `lines` holds `+gap` and `-gap` for
/// every message predicate with the last symbol mapped to 0.
fn scan(
    ch: &ChannelMatrix,
    pm: &ProbVector,
    caps: SsCaps,
    mut visit: impl FnMut(u64, &[Line], &Rational),
) -> Result<()> {
    caps.check_channel(ch)?;
    if ch.messages() != pm.alphabet() {
        return Err(Error::AlphabetMismatch(
            "message distribution is not over the channel's messages".into(),
        ));
    }
    let nc = ch.cryptograms().len();
    let nm = ch.messages().len();
    let weights = pm.weights();
    let one = Rational::one();

    // r[m] = Pr[f(C) = 1 | M = m], updated one cryptogram at a time.
    let mut r = vec![Rational::zero(); nm];
    let mut f_mask = 0u64;
    let f_count = 1u64 << (nc - 1);
    let h_count = 1u64 << (nm - 1);
    let mut lines = Vec::with_capacity(2 * h_count as usize);

    for step in 0..f_count {
        if step > 0 {
            let c = step.trailing_zeros() as usize;
            f_mask ^= 1 << c;
            let entering = f_mask & (1 << c) != 0;
            for (m, rm) in r.iter_mut().enumerate() {
                let p = ch.entry(c, m);
                if entering {
                    *rm += p;
                } else {
                    *rm -= p;
                }
            }
        }

        // A_h = Pr[f(C)=0] + sum_{m in h} P_M(m)(2 r_m - 1), B_h = sum_{m in h} P_M(m).
        let pr_f1: Rational = weights.iter().zip(&r).map(|(w, rm)| w * rm).sum();
        let gain: Vec<Rational> = weights
            .iter()
            .zip(&r)
            .map(|(w, rm)| w * (rm + rm - &one))
            .collect();
        let mut a = &one - &pr_f1;
        let mut b = Rational::zero();
        let mut h_mask = 0u64;
        lines.clear();
        for h_step in 0..h_count {
            if h_step > 0 {
                let m = h_step.trailing_zeros() as usize;
                h_mask ^= 1 << m;
                if h_mask & (1 << m) != 0 {
                    a += &gain[m];
                    b += &weights[m];
                } else {
                    a -= &gain[m];
                    b -= &weights[m];
                }
            }
            let intercept = &a + &b - &one;
            let slope = &one - &b - &b;
            lines.push(Line {
                intercept: -intercept.clone(),
                slope: -slope.clone(),
            });
            lines.push(Line { intercept, slope });
        }
        visit(f_mask, &lines, &pr_f1);
    }
    Ok(())
}

/// The message predicate (last symbol mapped to 0) with the largest gap at `q`.
fn worst_predicate(ch: &ChannelMatrix, pm: &ProbVector, f: u64, q: &Rational) -> u64 {
    let nm = ch.messages().len();
    let nc = ch.cryptograms().len();
    let r: Vec<Rational> = (0..nm)
        .map(|m| {
            (0..nc)
                .filter(|c| f & (1 << c) != 0)
                .map(|c| ch.entry(c, m))
                .sum()
        })
        .collect();
    let mut best: Option<(Rational, u64)> = None;
    for h in 0..(1u64 << (nm - 1)) {
        let gap = gap_for(pm.weights(), &r, h, q);
        if best.as_ref().is_none_or(|(v, _)| gap > *v) {
            best = Some((gap, h));
        }
    }
    best.expect("non-empty").1
}

/// `|Pr[f(C)=h(M)] - Pr[G_q = h(M)]|` from the per-message test rates.
fn gap_for(weights: &[Rational], r: &[Rational], h: u64, q: &Rational) -> Rational {
    let one = Rational::one();
    let mut agree = Rational::zero();
    let mut coin = Rational::zero();
    for (m, (w, rm)) in weights.iter().zip(r).enumerate() {
        if h & (1 << m) != 0 {
            agree += w * rm;
            coin += w * q;
        } else {
            agree += w * (&one - rm);
            coin += w * (&one - q);
        }
    }
    let d = agree - coin;
    if d < Rational::zero() {
        -d
    } else {
        d
    }
}

fn symbols_of(symbols: &[String], mask: u64) -> Vec<String> {
    symbols
        .iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .map(|(_, s)| s.clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::{joint, Alphabet};
    use crate::rational::{half, int, ratio};

    fn square(rows: Vec<Vec<Rational>>) -> ChannelMatrix {
        let n = rows.len();
        ChannelMatrix::from_rows(
            Alphabet::indexed("m", n).unwrap(),
            Alphabet::indexed("c", n).unwrap(),
            rows,
        )
        .unwrap()
    }

    /// Direct oracle: all f, all h, exact q-minimisation over every endpoint
    /// and crossing, with probabilities computed from the joint table.
    fn brute_force(ch: &ChannelMatrix, pm: &ProbVector) -> (Rational, Rational) {
        let nc = ch.cryptograms().len();
        let nm = ch.messages().len();
        let j = joint(ch, pm).unwrap();
        let mut ss = int(0);
        let mut witness = int(0);
        for f in 0..(1u64 << nc) {
            let fc = |c: usize| (f >> c) & 1;
            let mut pairs = Vec::new();
            let pr_f1: Rational = (0..nc)
                .filter(|&c| fc(c) == 1)
                .map(|c| j.cryptogram_marginal().prob(c).clone())
                .sum();
            for h in 0..(1u64 << nm) {
                let hm = |m: usize| (h >> m) & 1;
                let mut agree = int(0);
                for c in 0..nc {
                    for m in 0..nm {
                        if fc(c) == hm(m) {
                            agree += j.prob(c, m);
                        }
                    }
                }
                let b: Rational = (0..nm)
                    .filter(|&m| hm(m) == 1)
                    .map(|m| pm.prob(m).clone())
                    .sum();
                pairs.push((agree, b));
            }
            let gap = |q: &Rational| {
                pairs
                    .iter()
                    .map(|(a, b)| {
                        let g = a - (q * b + (int(1) - q) * (int(1) - b));
                        if g < int(0) {
                            -g
                        } else {
                            g
                        }
                    })
                    .max()
                    .unwrap()
            };
            witness = witness.max(gap(&pr_f1));
            // both signs of every gap as (intercept, slope)
            let ls: Vec<(Rational, Rational)> = pairs
                .iter()
                .flat_map(|(a, b)| {
                    let i = a + b - int(1);
                    let s = int(1) - b - b;
                    [(i.clone(), s.clone()), (-i, -s)]
                })
                .collect();
            let mut cands = vec![int(0), int(1)];
            for (i, (a1, s1)) in ls.iter().enumerate() {
                for (a2, s2) in &ls[i + 1..] {
                    if s1 != s2 {
                        let x = (a1 - a2) / (s2 - s1);
                        if x >= int(0) && x <= int(1) {
                            cands.push(x);
                        }
                    }
                }
            }
            let inner = cands.iter().map(gap).min().unwrap();
            ss = ss.max(inner);
        }
        (ss, witness)
    }

    #[test]
    fn all_half_channel_is_zero() {
        let ch = square(vec![vec![half(), half()], vec![half(), half()]]);
        let pm = ProbVector::new(ch.messages().clone(), vec![ratio(1, 3), ratio(2, 3)]).unwrap();
        assert_eq!(eps_ss(&ch, &pm).unwrap().0, int(0));
        assert_eq!(
            ss_witness_bound(&ch, &pm, SsCaps::default()).unwrap(),
            int(0)
        );
    }

    #[test]
    fn point_mass_message_is_zero() {
        let ch = square(vec![
            vec![ratio(1, 2), ratio(1, 3), ratio(1, 6)],
            vec![ratio(1, 3), ratio(1, 6), ratio(1, 2)],
            vec![ratio(1, 6), ratio(1, 2), ratio(1, 3)],
        ]);
        for m in 0..3 {
            let pm = ProbVector::point_mass(ch.messages().clone(), m);
            assert_eq!(eps_ss(&ch, &pm).unwrap().0, int(0));
            assert_eq!(
                ss_witness_bound(&ch, &pm, SsCaps::default()).unwrap(),
                int(0)
            );
        }
    }

    #[test]
    fn identity_uniform_witness_is_half() {
        let ch = square(vec![vec![int(1), int(0)], vec![int(0), int(1)]]);
        let pm = ProbVector::uniform(ch.messages().clone());
        assert_eq!(
            ss_witness_bound(&ch, &pm, SsCaps::default()).unwrap(),
            half()
        );
        // f = h = identity agrees always while any coin agrees half the time
        let (v, _) = eps_ss(&ch, &pm).unwrap();
        assert_eq!(v, brute_force(&ch, &pm).0);
        assert_eq!(v, half());
    }

    #[test]
    fn two_by_two_gap_matrix_brackets() {
        let d = ratio(1, 8);
        let hi = half() + &d;
        let lo = half() - &d;
        let ch = square(vec![vec![hi.clone(), lo.clone()], vec![lo, hi]]);
        let pm = ProbVector::uniform(ch.messages().clone());
        let (v, _) = eps_ss(&ch, &pm).unwrap();
        let (oracle_ss, oracle_w) = brute_force(&ch, &pm);
        assert_eq!(v, oracle_ss);
        assert_eq!(
            ss_witness_bound(&ch, &pm, SsCaps::default()).unwrap(),
            oracle_w
        );
        assert!(v >= &d / int(2) && v <= &d * int(2), "{v}");
    }

    #[test]
    fn matches_brute_force_on_rectangular_channel() {
        let ch = ChannelMatrix::from_columns(
            Alphabet::indexed("m", 3).unwrap(),
            Alphabet::indexed("c", 4).unwrap(),
            vec![
                vec![ratio(1, 2), ratio(1, 4), ratio(1, 4), int(0)],
                vec![int(0), ratio(1, 3), ratio(1, 3), ratio(1, 3)],
                vec![ratio(1, 5), ratio(1, 5), ratio(2, 5), ratio(1, 5)],
            ],
        )
        .unwrap();
        let pm = ProbVector::new(
            ch.messages().clone(),
            vec![ratio(1, 6), ratio(1, 2), ratio(1, 3)],
        )
        .unwrap();
        let (v, cert) = eps_ss(&ch, &pm).unwrap();
        let (oracle_ss, oracle_w) = brute_force(&ch, &pm);
        assert_eq!(v, oracle_ss);
        assert_eq!(
            ss_witness_bound(&ch, &pm, SsCaps::default()).unwrap(),
            oracle_w
        );
        // certificate re-evaluates to the value
        let f: u64 = cert
            .f
            .iter()
            .map(|s| 1u64 << ch.cryptograms().index_of(s).unwrap())
            .sum();
        let h: u64 = cert
            .h
            .iter()
            .map(|s| 1u64 << ch.messages().index_of(s).unwrap())
            .sum();
        let r: Vec<Rational> = (0..3)
            .map(|m| {
                (0..4)
                    .filter(|c| f & (1 << c) != 0)
                    .map(|c| ch.entry(c, m))
                    .sum()
            })
            .collect();
        assert_eq!(gap_for(pm.weights(), &r, h, &cert.q), v);
    }

    #[test]
    fn caps_are_enforced() {
        let ch = square(vec![vec![int(1), int(0)], vec![int(0), int(1)]]);
        let pm = ProbVector::uniform(ch.messages().clone());
        assert!(matches!(
            eps_ss_capped(&ch, &pm, SsCaps::uniform(1)),
            Err(Error::EnumerationTooLarge { .. })
        ));
    }
}
