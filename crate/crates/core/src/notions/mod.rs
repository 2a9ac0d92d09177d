//! Minimal ε under each secrecy notion, with certificates.
//!
//! * IND: largest distance between two columns of the channel.
//! * PS^cs: largest distance between a column and the cryptogram marginal.
//! * PS^cm: distance between the joint and the product of its marginals.
//! * PS^sm: largest distance between a posterior and the prior.
//! * SS: see [`ss`].
//!
//! The `_sup` variants sweep a [`SimplexGrid`]. For PS^cs and PS^cm the grid's
//! point masses and two-point uniforms are extremal, so the swept value is
//! pinned against IND and any disagreement is an
//! [`Error::InvariantViolation`]. For PS^sm and SS the sweep is a lower bound
//! on the supremum over all message distributions.

pub mod lemma;
pub mod minimax;
pub mod ss;

use std::collections::HashSet;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::cryptosystem::is_doubly_stochastic;
use crate::error::{Error, Result};
use crate::prob::{
    half_l1, marginal_weights, simplex_grid_capped, ChannelMatrix, ProbVector, SimplexGrid,
    GRID_CAP,
};
use crate::rational::{abs, half, int, serde_str, serde_vec, Rational};

pub use lemma::{binary_joint_grid, lemma1_check, BinaryJoint, LemmaRecord};
pub use ss::{
    eps_ss, eps_ss_capped, eps_ss_with_witness, ss_witness_bound, SsCaps, SsCertificate,
    SsEvaluation, DEFAULT_SS_CAP,
};

/// Maximum of a notion over a grid: the value and the grid index attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSup {
    pub value: Rational,
    pub point: usize,
    /// Message (PS^cs) or cryptogram (PS^sm) attaining the value at that point.
    pub witness: Option<usize>,
}

/// `max_{m0 < m1} d(P(.|m0), P(.|m1))` and the first pair attaining it.
///
/// Identical columns are at distance zero, so only the first occurrence of
/// each distinct column is compared.
pub fn eps_ind(ch: &ChannelMatrix) -> (Rational, (usize, usize)) {
    let cols = ch.columns();
    let mut seen = HashSet::new();
    let distinct: Vec<usize> = (0..cols.len())
        .filter(|&m| seen.insert(cols[m].weights()))
        .collect();
    let mut best = (Rational::zero(), (0, cols.len().min(2) - 1));
    for (a, &i) in distinct.iter().enumerate() {
        for &j in &distinct[a + 1..] {
            let d = half_l1(cols[i].weights(), cols[j].weights());
            if d > best.0 {
                best = (d, (i, j));
            }
        }
    }
    best
}

/// `max_m d(P(.|m), P_C)`.
pub fn eps_ps_cs(ch: &ChannelMatrix, pm: &ProbVector) -> Result<(Rational, usize)> {
    check_messages(ch, pm)?;
    let pc = marginal_weights(ch, pm);
    Ok(argmax(
        ch.columns().iter().map(|col| half_l1(col.weights(), &pc)),
    ))
}

/// Equal to [`eps_ind`] whenever the grid holds every point mass.
pub fn eps_ps_cs_sup(ch: &ChannelMatrix, grid: &SimplexGrid) -> Result<GridSup> {
    check_grid(ch, grid)?;
    let mut best: Option<GridSup> = None;
    for (i, pm) in grid.points().iter().enumerate() {
        let (v, m) = eps_ps_cs(ch, pm)?;
        if best.as_ref().is_none_or(|b| v > b.value) {
            best = Some(GridSup {
                value: v,
                point: i,
                witness: Some(m),
            });
        }
    }
    let best = best.expect("grid is non-empty");
    let (ind, _) = eps_ind(ch);
    if best.value != ind {
        return Err(Error::InvariantViolation(format!(
            "PS^cs supremum {} differs from IND {}",
            best.value, ind
        )));
    }
    Ok(best)
}

/// `d(P_CM, P_C P_M) = (1/2) sum_{c,m} P_M(m) |P(c|m) - P_C(c)|`.
pub fn eps_ps_cm(ch: &ChannelMatrix, pm: &ProbVector) -> Result<Rational> {
    check_messages(ch, pm)?;
    let pc = marginal_weights(ch, pm);
    let mut total = Rational::zero();
    for (col, w) in ch.columns().iter().zip(pm.weights()) {
        if w.is_zero() {
            continue;
        }
        let spread: Rational = col
            .weights()
            .iter()
            .zip(&pc)
            .map(|(p, q)| abs(&(p - q)))
            .sum();
        total += w * spread;
    }
    Ok(total * half())
}

/// Bracketed by `eps_ind / 2` and `eps_ind`.
pub fn eps_ps_cm_sup(ch: &ChannelMatrix, grid: &SimplexGrid) -> Result<GridSup> {
    check_grid(ch, grid)?;
    let (v, i) = try_argmax(grid.points().iter().map(|pm| eps_ps_cm(ch, pm)))?;
    let (ind, _) = eps_ind(ch);
    check_bracket("PS^cm", &v, &ind, 2)?;
    Ok(GridSup {
        value: v,
        point: i,
        witness: None,
    })
}

/// `max_{c : P_C(c) > 0} d(P_{M|C}(.|c), P_M)`. Cryptograms of probability zero
/// are skipped; `None` only if no cryptogram has positive probability, which a
/// valid channel cannot produce.
pub fn eps_ps_sm(ch: &ChannelMatrix, pm: &ProbVector) -> Result<(Rational, Option<usize>)> {
    check_messages(ch, pm)?;
    let per = posterior_distances(ch, pm)?;
    let mut best: Option<(Rational, usize)> = None;
    for (c, d) in per.into_iter().enumerate() {
        if let Some(d) = d {
            if best.as_ref().is_none_or(|(v, _)| d > *v) {
                best = Some((d, c));
            }
        }
    }
    Ok(match best {
        Some((v, c)) => (v, Some(c)),
        None => (Rational::zero(), None),
    })
}

/// `d(P_{M|C}(.|c), P_M)` for each cryptogram, `None` where `P_C(c) = 0`.
pub fn posterior_distances(ch: &ChannelMatrix, pm: &ProbVector) -> Result<Vec<Option<Rational>>> {
    check_messages(ch, pm)?;
    let pc = marginal_weights(ch, pm);
    Ok(pc
        .iter()
        .enumerate()
        .map(|(c, pc_c)| {
            if pc_c.is_zero() {
                return None;
            }
            let post: Vec<Rational> = ch
                .columns()
                .iter()
                .zip(pm.weights())
                .map(|(col, w)| col.prob(c) * w / pc_c)
                .collect();
            Some(half_l1(&post, pm.weights()))
        })
        .collect())
}

/// Largest PS^sm value over the given distributions. A lower bound on the
/// true supremum.
pub fn eps_ps_sm_sup(ch: &ChannelMatrix, points: &[ProbVector]) -> Result<GridSup> {
    if points.is_empty() {
        return Err(Error::Parse("no message distributions to sweep".into()));
    }
    let mut best: Option<GridSup> = None;
    for (i, pm) in points.iter().enumerate() {
        let (v, c) = eps_ps_sm(ch, pm)?;
        if best.as_ref().is_none_or(|b| v > b.value) {
            best = Some(GridSup {
                value: v,
                point: i,
                witness: c,
            });
        }
    }
    Ok(best.expect("non-empty"))
}

/// Largest SS value over the grid, bracketed by `eps_ind / 4` and `eps_ind`.
pub fn eps_ss_sup(
    ch: &ChannelMatrix,
    grid: &SimplexGrid,
    caps: SsCaps,
) -> Result<(GridSup, SsCertificate)> {
    check_grid(ch, grid)?;
    let mut best: Option<(GridSup, SsCertificate)> = None;
    for (i, pm) in grid.points().iter().enumerate() {
        let (v, cert) = eps_ss_capped(ch, pm, caps)?;
        if best.as_ref().is_none_or(|(b, _)| v > b.value) {
            best = Some((
                GridSup {
                    value: v,
                    point: i,
                    witness: None,
                },
                cert,
            ));
        }
    }
    let best = best.expect("grid is non-empty");
    let (ind, _) = eps_ind(ch);
    check_bracket("SS", &best.0.value, &ind, 4)?;
    Ok(best)
}

fn check_bracket(name: &str, v: &Rational, ind: &Rational, factor: i64) -> Result<()> {
    let lower = ind / int(factor);
    if *v < lower || v > ind {
        return Err(Error::InvariantViolation(format!(
            "{name} supremum {v} outside [{lower}, {ind}]"
        )));
    }
    Ok(())
}

fn check_messages(ch: &ChannelMatrix, pm: &ProbVector) -> Result<()> {
    if ch.messages() != pm.alphabet() {
        return Err(Error::AlphabetMismatch(
            "message distribution is not over the channel's messages".into(),
        ));
    }
    Ok(())
}

fn check_grid(ch: &ChannelMatrix, grid: &SimplexGrid) -> Result<()> {
    if ch.messages() != grid.alphabet() {
        return Err(Error::AlphabetMismatch(
            "grid is not over the channel's messages".into(),
        ));
    }
    Ok(())
}

fn argmax(values: impl Iterator<Item = Rational>) -> (Rational, usize) {
    let mut best: Option<(Rational, usize)> = None;
    for (i, v) in values.enumerate() {
        if best.as_ref().is_none_or(|(b, _)| v > *b) {
            best = Some((v, i));
        }
    }
    best.expect("non-empty")
}

fn try_argmax(values: impl Iterator<Item = Result<Rational>>) -> Result<(Rational, usize)> {
    let collected = values.collect::<Result<Vec<_>>>()?;
    Ok(argmax(collected.into_iter()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCertificate {
    pub m0: String,
    pub m1: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupCertificate {
    /// The message distribution attaining the value, in message order.
    #[serde(with = "serde_vec")]
    pub distribution: Vec<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cryptogram: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distinguisher: Option<SsCertificate>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificates {
    pub ind: PairCertificate,
    pub ps_cs: SupCertificate,
    pub ps_cm: SupCertificate,
    pub ps_sm: SupCertificate,
    pub ss: SupCertificate,
}

/// Every notion for one channel.
///
/// `eps_ind` and `eps_ps_cs_sup` are exact suprema over all message
/// distributions. `eps_ps_cm_sup` is the grid maximum, certified to lie in
/// `[eps_ind / 2, eps_ind]`. `eps_ps_sm_sup` and `eps_ss_sup` are grid lower
/// bounds at `grid_resolution`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NotionReport {
    pub messages: Vec<String>,
    pub cryptograms: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub doubly_stochastic: Option<bool>,
    pub grid_resolution: u32,
    pub grid_points: usize,
    pub ss_caps: SsCaps,
    #[serde(with = "serde_str")]
    pub eps_ind: Rational,
    #[serde(with = "serde_str")]
    pub eps_ps_cs_sup: Rational,
    #[serde(with = "serde_str")]
    pub eps_ps_cm_sup: Rational,
    #[serde(with = "serde_str")]
    pub eps_ps_sm_sup: Rational,
    #[serde(with = "serde_str")]
    pub eps_ss_sup: Rational,
    pub certificates: Certificates,
}

pub fn analyze(ch: &ChannelMatrix, grid_resolution: u32, caps: SsCaps) -> Result<NotionReport> {
    caps.check_channel(ch)?;
    let grid = simplex_grid_capped(ch.messages(), grid_resolution, GRID_CAP)?;
    let msym = |i: usize| ch.messages().symbol(i).to_string();
    let csym = |i: usize| ch.cryptograms().symbol(i).to_string();
    let dist = |i: usize| grid.points()[i].weights().to_vec();

    let (ind, (m0, m1)) = eps_ind(ch);
    let cs = eps_ps_cs_sup(ch, &grid)?;
    let cm = eps_ps_cm_sup(ch, &grid)?;
    let sm = eps_ps_sm_sup(ch, grid.points())?;
    let (ss, ss_cert) = eps_ss_sup(ch, &grid, caps)?;

    let doubly_stochastic = if ch.is_square() {
        Some(is_doubly_stochastic(ch)?)
    } else {
        None
    };

    Ok(NotionReport {
        messages: ch.messages().symbols().to_vec(),
        cryptograms: ch.cryptograms().symbols().to_vec(),
        doubly_stochastic,
        grid_resolution,
        grid_points: grid.len(),
        ss_caps: caps,
        eps_ind: ind,
        eps_ps_cs_sup: cs.value.clone(),
        eps_ps_cm_sup: cm.value.clone(),
        eps_ps_sm_sup: sm.value.clone(),
        eps_ss_sup: ss.value.clone(),
        certificates: Certificates {
            ind: PairCertificate {
                m0: msym(m0),
                m1: msym(m1),
            },
            ps_cs: SupCertificate {
                distribution: dist(cs.point),
                message: cs.witness.map(msym),
                cryptogram: None,
                distinguisher: None,
            },
            ps_cm: SupCertificate {
                distribution: dist(cm.point),
                message: None,
                cryptogram: None,
                distinguisher: None,
            },
            ps_sm: SupCertificate {
                distribution: dist(sm.point),
                message: None,
                cryptogram: sm.witness.map(csym),
                distinguisher: None,
            },
            ss: SupCertificate {
                distribution: dist(ss.point),
                message: None,
                cryptogram: None,
                distinguisher: Some(ss_cert),
            },
        },
    })
}
