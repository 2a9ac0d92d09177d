//! The separating cipher: IND-secure with small ε but with two cryptograms
//! that leak a constant amount about the message.
//!
//! For even `n` and `0 < δ <= 1/n` the channel is
//!
//! ```text
//!   row c1:  1/n+δ  1/n-δ  1/n+δ  1/n-δ ...
//!   row c2:  1/n-δ  1/n+δ  1/n-δ  1/n+δ ...
//!   rows c3..cn: 1/n everywhere
//! ```
//!
//! Columns differ by `0` or `2δ`, while under uniform messages the posterior
//! given `c1` or `c2` sits `nδ/2` away from the prior.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cryptosystem::{induced_channel, is_doubly_stochastic, Cryptosystem};
use crate::error::{Error, Result};
use crate::io::CryptosystemDoc;
use crate::notions::{
    eps_ind, eps_ps_cm_sup, eps_ps_cs_sup, eps_ps_sm, eps_ps_sm_sup, eps_ss_sup,
    posterior_distances, PairCertificate, SsCaps,
};
use crate::prob::{
    composition_count, marginal_c, simplex_grid, Alphabet, ChannelMatrix, ProbVector,
};
use crate::rational::{int, ratio, serde_opt, serde_str, Rational};
use crate::synthesis::synthesize;

/// Largest `grid points * n^2` for which the gap report runs grid sweeps.
pub const GAP_SWEEP_BUDGET: usize = 2_000_000;

/// Largest `grid points * 2^(2n-2)` for which the gap report runs the SS sweep.
pub const GAP_SS_BUDGET: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapParams {
    n: usize,
    delta: Rational,
}

impl GapParams {
    pub fn new(n: usize, delta: Rational) -> Result<Self> {
        if n < 2 || !n.is_multiple_of(2) {
            return Err(Error::InvalidGapParams(format!(
                "n must be an even integer >= 2, got {n}"
            )));
        }
        if !delta.is_positive() || delta > ratio(1, n as i64) {
            return Err(Error::InvalidGapParams(format!(
                "delta must lie in (0, 1/{n}], got {delta}"
            )));
        }
        Ok(GapParams { n, delta })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn delta(&self) -> &Rational {
        &self.delta
    }
}

pub fn gap_matrix(p: &GapParams) -> ChannelMatrix {
    let n = p.n;
    let base = ratio(1, n as i64);
    let hi = &base + &p.delta;
    let lo = &base - &p.delta;
    let columns = (0..n)
        .map(|m| {
            let mut col = vec![base.clone(); n];
            let (first, second) = if m % 2 == 0 { (&hi, &lo) } else { (&lo, &hi) };
            col[0] = first.clone();
            col[1] = second.clone();
            col
        })
        .collect();
    let ch = ChannelMatrix::from_trusted_columns(
        Alphabet::indexed("m", n).expect("n >= 2"),
        Alphabet::indexed("c", n).expect("n >= 2"),
        columns,
    );
    debug_assert!(is_doubly_stochastic(&ch).unwrap_or(false));
    ch
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapReport {
    pub n: usize,
    #[serde(with = "serde_str")]
    pub delta: Rational,
    #[serde(with = "serde_str")]
    pub eps_ind: Rational,
    pub eps_ind_pair: PairCertificate,
    /// PS^sm value under uniform messages; a lower bound on the supremum.
    #[serde(with = "serde_str")]
    pub eps_ps_sm_uniform: Rational,
    /// `d(P_{M|C}(.|c), P_M)` per cryptogram under uniform messages.
    #[serde(with = "crate::rational::serde_vec")]
    pub posterior_distances: Vec<Rational>,
    /// `Pr[C = c1 or C = c2]` under uniform messages.
    #[serde(with = "serde_str")]
    pub insecure_cryptogram_probability: Rational,
    pub grid_resolution: u32,
    #[serde(with = "serde_opt")]
    pub eps_ps_cs_sup: Option<Rational>,
    #[serde(with = "serde_opt")]
    pub eps_ps_cm_sup: Option<Rational>,
    #[serde(with = "serde_opt")]
    pub eps_ps_sm_sup: Option<Rational>,
    #[serde(with = "serde_opt")]
    pub eps_ss_sup: Option<Rational>,
    /// Why an optional entry above is absent.
    pub skipped: Vec<String>,
    pub key_count: usize,
    pub cryptosystem: CryptosystemDoc,
}

pub fn gap_report(p: &GapParams, grid_resolution: u32, caps: SsCaps) -> Result<GapReport> {
    let n = p.n;
    let ch = gap_matrix(p);
    let two = int(2);

    let (ind, (m0, m1)) = eps_ind(&ch);
    if ind != &p.delta * &two {
        return Err(Error::InvariantViolation(format!(
            "gap matrix IND is {ind}, expected 2*delta = {}",
            &p.delta * &two
        )));
    }

    let uniform = ProbVector::uniform(ch.messages().clone());
    let (sm, _) = eps_ps_sm(&ch, &uniform)?;
    let leak = &p.delta * int(n as i64) / &two;
    let per: Vec<Rational> = posterior_distances(&ch, &uniform)?
        .into_iter()
        .map(|d| d.expect("uniform messages give every cryptogram positive probability"))
        .collect();
    let expected_shape = (0..n).all(|c| {
        per[c]
            == if c < 2 {
                leak.clone()
            } else {
                Rational::zero()
            }
    });
    if sm != leak || !expected_shape {
        return Err(Error::InvariantViolation(format!(
            "gap matrix posterior distances {per:?} do not match n*delta/2 = {leak} on c1, c2 and 0 elsewhere"
        )));
    }
    let pc = marginal_c(&ch, &uniform)?;
    let insecure = pc.prob(0) + pc.prob(1);

    let sys = synthesize(&ch)?;
    if induced_channel(&sys)? != ch {
        return Err(Error::InvariantViolation(
            "synthesized cipher does not reproduce the gap matrix".into(),
        ));
    }

    let mut skipped = Vec::new();
    let (mut cs, mut cm, mut sm_sup, mut ss) = (None, None, None, None);
    let grid_size = composition_count(n, grid_resolution).saturating_add(n * (n - 1) / 2);
    if grid_size.saturating_mul(n * n) <= GAP_SWEEP_BUDGET {
        let grid = simplex_grid(ch.messages(), grid_resolution);
        cs = Some(eps_ps_cs_sup(&ch, &grid)?.value);
        cm = Some(eps_ps_cm_sup(&ch, &grid)?.value);
        sm_sup = Some(eps_ps_sm_sup(&ch, grid.points())?.value);
        let ss_work = grid
            .len()
            .saturating_mul(1usize.checked_shl(2 * n as u32 - 2).unwrap_or(usize::MAX));
        if !caps.admits(&ch) {
            skipped.push(format!(
                "eps_ss_sup: n = {n} exceeds the predicate cap {}",
                caps.messages.min(caps.cryptograms)
            ));
        } else if ss_work > GAP_SS_BUDGET {
            skipped.push(format!(
                "eps_ss_sup: {ss_work} predicate evaluations exceed the SS budget {GAP_SS_BUDGET}"
            ));
        } else {
            ss = Some(eps_ss_sup(&ch, &grid, caps)?.0.value);
        }
    } else {
        skipped.push(format!(
            "grid sweeps: more than {} distribution-entry evaluations at n = {n}",
            GAP_SWEEP_BUDGET
        ));
    }

    Ok(GapReport {
        n,
        delta: p.delta.clone(),
        eps_ind: ind,
        eps_ind_pair: PairCertificate {
            m0: ch.messages().symbol(m0).to_string(),
            m1: ch.messages().symbol(m1).to_string(),
        },
        eps_ps_sm_uniform: sm,
        posterior_distances: per,
        insecure_cryptogram_probability: insecure,
        grid_resolution,
        eps_ps_cs_sup: cs,
        eps_ps_cm_sup: cm,
        eps_ps_sm_sup: sm_sup,
        eps_ss_sup: ss,
        skipped,
        key_count: sys.keys().len(),
        cryptosystem: CryptosystemDoc::from(&sys),
    })
}

impl GapReport {
    pub fn cryptosystem(&self) -> Result<Cryptosystem> {
        self.cryptosystem.clone().try_into()
    }
}
