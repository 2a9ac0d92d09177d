//! Exact finite probability: alphabets, distributions, channels, joints and the
//! variational distance.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{half, ratio, Rational};

/// Largest alphabet for which the distinguisher form of the distance is enumerated.
pub const TEST_ENUMERATION_CAP: usize = 20;

/// Largest number of message distributions a grid may hold.
pub const GRID_CAP: usize = 200_000;

/// An ordered set of distinct symbol labels. Index `i` always names label `i`.
#[derive(Clone)]
pub struct Alphabet {
    symbols: Arc<[String]>,
}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        let mut seen = HashSet::with_capacity(symbols.len());
        for s in &symbols {
            if !seen.insert(s.as_str()) {
                return Err(Error::DuplicateSymbol(s.clone()));
            }
        }
        Ok(Alphabet {
            symbols: symbols.into(),
        })
    }

    /// `prefix1, prefix2, ..., prefixN`.
    pub fn indexed(prefix: &str, n: usize) -> Result<Self> {
        Alphabet::new((1..=n).map(|i| format!("{prefix}{i}")))
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol(&self, index: usize) -> &str {
        &self.symbols[index]
    }

    pub fn index_of(&self, symbol: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == symbol)
    }

    pub fn require_index(&self, symbol: &str) -> Result<usize> {
        self.index_of(symbol)
            .ok_or_else(|| Error::UnknownSymbol(symbol.to_string()))
    }

    fn ensure_same(&self, other: &Alphabet, what: &str) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch(format!(
                "{what}: [{}] vs [{}]",
                self.symbols.join(", "),
                other.symbols.join(", ")
            )))
        }
    }
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.symbols, &other.symbols) || self.symbols == other.symbols
    }
}

impl Eq for Alphabet {}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.symbols.iter()).finish()
    }
}

/// A probability distribution over an [`Alphabet`] with exact weights summing to one.
#[derive(Clone, PartialEq, Eq)]
pub struct ProbVector {
    alphabet: Alphabet,
    weights: Vec<Rational>,
}

impl ProbVector {
    pub fn new(alphabet: Alphabet, weights: Vec<Rational>) -> Result<Self> {
        if weights.len() != alphabet.len() {
            return Err(Error::invalid_dist(format!(
                "expected {} weights, got {}",
                alphabet.len(),
                weights.len()
            )));
        }
        if let Some((i, w)) = weights.iter().enumerate().find(|(_, w)| w.is_negative()) {
            return Err(Error::invalid_dist(format!(
                "weight of `{}` is negative ({w})",
                alphabet.symbol(i)
            )));
        }
        let total: Rational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::invalid_dist(format!(
                "weights sum to {total}, not 1"
            )));
        }
        Ok(ProbVector { alphabet, weights })
    }

    /// Caller guarantees nonnegative weights with exact unit sum.
    pub(crate) fn from_trusted(alphabet: Alphabet, weights: Vec<Rational>) -> Self {
        debug_assert_eq!(weights.len(), alphabet.len());
        debug_assert!(weights.iter().sum::<Rational>().is_one());
        ProbVector { alphabet, weights }
    }

    pub fn uniform(alphabet: Alphabet) -> Self {
        let w = ratio(1, alphabet.len() as i64);
        let weights = vec![w; alphabet.len()];
        ProbVector { alphabet, weights }
    }

    pub fn point_mass(alphabet: Alphabet, index: usize) -> Self {
        let mut weights = vec![Rational::zero(); alphabet.len()];
        weights[index] = Rational::one();
        ProbVector { alphabet, weights }
    }

    /// Weight one half on each of two distinct symbols.
    pub fn two_point_uniform(alphabet: Alphabet, i: usize, j: usize) -> Self {
        assert_ne!(i, j, "two-point distribution needs distinct symbols");
        let mut weights = vec![Rational::zero(); alphabet.len()];
        weights[i] = half();
        weights[j] = half();
        ProbVector { alphabet, weights }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn prob(&self, index: usize) -> &Rational {
        &self.weights[index]
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, w)| !w.is_zero())
            .map(|(i, _)| i)
    }
}

impl fmt::Debug for ProbVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, w) in self.weights.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}: {w}", self.alphabet.symbol(i))?;
        }
        f.write_str(")")
    }
}

/// A conditional distribution of cryptograms given messages: one column per message.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChannelMatrix {
    messages: Alphabet,
    cryptograms: Alphabet,
    columns: Vec<ProbVector>,
}

impl ChannelMatrix {
    /// Build from columns, `columns[m][c] = P(c | m)`.
    pub fn from_columns(
        messages: Alphabet,
        cryptograms: Alphabet,
        columns: Vec<Vec<Rational>>,
    ) -> Result<Self> {
        if columns.len() != messages.len() {
            return Err(Error::invalid_dist(format!(
                "expected {} columns, got {}",
                messages.len(),
                columns.len()
            )));
        }
        let columns = columns
            .into_iter()
            .enumerate()
            .map(|(m, col)| {
                ProbVector::new(cryptograms.clone(), col)
                    .map_err(|e| e.with_context(format!("column `{}`", messages.symbol(m))))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ChannelMatrix {
            messages,
            cryptograms,
            columns,
        })
    }

    /// Build from the row-major layout, `rows[c][m] = P(c | m)`.
    pub fn from_rows(
        messages: Alphabet,
        cryptograms: Alphabet,
        rows: Vec<Vec<Rational>>,
    ) -> Result<Self> {
        if rows.len() != cryptograms.len() {
            return Err(Error::invalid_dist(format!(
                "expected {} rows (one per cryptogram), got {}",
                cryptograms.len(),
                rows.len()
            )));
        }
        if let Some((c, row)) = rows
            .iter()
            .enumerate()
            .find(|(_, r)| r.len() != messages.len())
        {
            return Err(Error::invalid_dist(format!(
                "row `{}` has {} entries, expected {}",
                cryptograms.symbol(c),
                row.len(),
                messages.len()
            )));
        }
        let columns = (0..messages.len())
            .map(|m| rows.iter().map(|row| row[m].clone()).collect())
            .collect();
        ChannelMatrix::from_columns(messages, cryptograms, columns)
    }

    pub(crate) fn from_trusted_columns(
        messages: Alphabet,
        cryptograms: Alphabet,
        columns: Vec<Vec<Rational>>,
    ) -> Self {
        let columns = columns
            .into_iter()
            .map(|col| ProbVector::from_trusted(cryptograms.clone(), col))
            .collect();
        ChannelMatrix {
            messages,
            cryptograms,
            columns,
        }
    }

    pub fn messages(&self) -> &Alphabet {
        &self.messages
    }

    pub fn cryptograms(&self) -> &Alphabet {
        &self.cryptograms
    }

    pub fn column(&self, m: usize) -> &ProbVector {
        &self.columns[m]
    }

    pub fn columns(&self) -> &[ProbVector] {
        &self.columns
    }

    /// `P(c | m)`.
    pub fn entry(&self, c: usize, m: usize) -> &Rational {
        &self.columns[m].weights[c]
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        (0..self.cryptograms.len())
            .map(|c| {
                self.columns
                    .iter()
                    .map(|col| col.weights[c].clone())
                    .collect()
            })
            .collect()
    }

    pub fn row_sum(&self, c: usize) -> Rational {
        self.columns.iter().map(|col| &col.weights[c]).sum()
    }

    pub fn is_square(&self) -> bool {
        self.messages.len() == self.cryptograms.len()
    }
}

/// A joint distribution over cryptograms × messages, stored `probs[c][m]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct JointDist {
    cryptograms: Alphabet,
    messages: Alphabet,
    probs: Vec<Vec<Rational>>,
}

impl JointDist {
    pub fn new(
        cryptograms: Alphabet,
        messages: Alphabet,
        probs: Vec<Vec<Rational>>,
    ) -> Result<Self> {
        if probs.len() != cryptograms.len() || probs.iter().any(|r| r.len() != messages.len()) {
            return Err(Error::invalid_dist("joint table has the wrong shape"));
        }
        if probs.iter().flatten().any(|p| p.is_negative()) {
            return Err(Error::invalid_dist("joint table has a negative entry"));
        }
        let total: Rational = probs.iter().flatten().sum();
        if !total.is_one() {
            return Err(Error::invalid_dist(format!(
                "joint table sums to {total}, not 1"
            )));
        }
        Ok(JointDist {
            cryptograms,
            messages,
            probs,
        })
    }

    pub fn cryptograms(&self) -> &Alphabet {
        &self.cryptograms
    }

    pub fn messages(&self) -> &Alphabet {
        &self.messages
    }

    pub fn prob(&self, c: usize, m: usize) -> &Rational {
        &self.probs[c][m]
    }

    pub fn table(&self) -> &[Vec<Rational>] {
        &self.probs
    }

    pub fn message_marginal(&self) -> ProbVector {
        let weights = (0..self.messages.len())
            .map(|m| self.probs.iter().map(|row| &row[m]).sum())
            .collect();
        ProbVector::from_trusted(self.messages.clone(), weights)
    }

    pub fn cryptogram_marginal(&self) -> ProbVector {
        let weights = self.probs.iter().map(|row| row.iter().sum()).collect();
        ProbVector::from_trusted(self.cryptograms.clone(), weights)
    }

    /// Variational distance between two joints on the same product alphabet.
    pub fn distance(&self, other: &JointDist) -> Result<Rational> {
        self.cryptograms
            .ensure_same(&other.cryptograms, "joint cryptograms")?;
        self.messages
            .ensure_same(&other.messages, "joint messages")?;
        let sum: Rational = self
            .probs
            .iter()
            .flatten()
            .zip(other.probs.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .sum();
        Ok(sum * half())
    }
}

/// `(1/2) * sum |p(a) - q(a)|`.
pub fn variational_distance(p: &ProbVector, q: &ProbVector) -> Result<Rational> {
    p.alphabet
        .ensure_same(&q.alphabet, "variational distance")?;
    Ok(half_l1(&p.weights, &q.weights))
}

pub(crate) fn half_l1(p: &[Rational], q: &[Rational]) -> Rational {
    let sum: Rational = p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum();
    sum * half()
}

/// Best advantage of any binary test `f: A -> {0,1}`, found by enumerating all
/// `2^|A|` tests in Gray-code order.
pub fn variational_distance_via_tests(
    p: &ProbVector,
    q: &ProbVector,
    cap: usize,
) -> Result<Rational> {
    p.alphabet
        .ensure_same(&q.alphabet, "variational distance")?;
    let n = p.len();
    if n > cap {
        return Err(Error::EnumerationTooLarge {
            what: "binary tests over the alphabet".into(),
            size: n,
            cap,
        });
    }
    let diffs: Vec<Rational> = p
        .weights
        .iter()
        .zip(&q.weights)
        .map(|(a, b)| a - b)
        .collect();
    let mut in_set = vec![false; n];
    // f == 0 everywhere: advantage 0.
    let mut advantage = Rational::zero();
    let mut best = Rational::zero();
    for step in 1u64..(1u64 << n) {
        let bit = step.trailing_zeros() as usize;
        if in_set[bit] {
            advantage -= &diffs[bit];
        } else {
            advantage += &diffs[bit];
        }
        in_set[bit] = !in_set[bit];
        let mag = advantage.abs();
        if mag > best {
            best = mag;
        }
    }
    Ok(best)
}

/// `P_C(c) = sum_m P(c|m) P_M(m)`.
pub fn marginal_c(ch: &ChannelMatrix, pm: &ProbVector) -> Result<ProbVector> {
    ch.messages
        .ensure_same(&pm.alphabet, "message distribution")?;
    Ok(ProbVector::from_trusted(
        ch.cryptograms.clone(),
        marginal_weights(ch, pm),
    ))
}

pub(crate) fn marginal_weights(ch: &ChannelMatrix, pm: &ProbVector) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); ch.cryptograms.len()];
    for (col, w) in ch.columns.iter().zip(&pm.weights) {
        if w.is_zero() {
            continue;
        }
        for (acc, p) in out.iter_mut().zip(&col.weights) {
            *acc += p * w;
        }
    }
    out
}

/// `P_CM(c, m) = P(c|m) P_M(m)`.
pub fn joint(ch: &ChannelMatrix, pm: &ProbVector) -> Result<JointDist> {
    ch.messages
        .ensure_same(&pm.alphabet, "message distribution")?;
    let probs = (0..ch.cryptograms.len())
        .map(|c| {
            ch.columns
                .iter()
                .zip(&pm.weights)
                .map(|(col, w)| &col.weights[c] * w)
                .collect()
        })
        .collect();
    Ok(JointDist {
        cryptograms: ch.cryptograms.clone(),
        messages: ch.messages.clone(),
        probs,
    })
}

/// `P_{M|C}(. | c)` by Bayes' rule.
pub fn posterior(ch: &ChannelMatrix, pm: &ProbVector, c: usize) -> Result<ProbVector> {
    ch.messages
        .ensure_same(&pm.alphabet, "message distribution")?;
    let pc: Rational = ch
        .columns
        .iter()
        .zip(&pm.weights)
        .map(|(col, w)| &col.weights[c] * w)
        .sum();
    if pc.is_zero() {
        return Err(Error::ZeroProbabilityCryptogram(
            ch.cryptograms.symbol(c).to_string(),
        ));
    }
    let weights = ch
        .columns
        .iter()
        .zip(&pm.weights)
        .map(|(col, w)| &col.weights[c] * w / &pc)
        .collect();
    Ok(ProbVector::from_trusted(ch.messages.clone(), weights))
}

/// `P_C(c) P_M(m)` as a joint table.
pub fn product_dist(pc: &ProbVector, pm: &ProbVector) -> JointDist {
    let probs = pc
        .weights
        .iter()
        .map(|a| pm.weights.iter().map(|b| a * b).collect())
        .collect();
    JointDist {
        cryptograms: pc.alphabet.clone(),
        messages: pm.alphabet.clone(),
        probs,
    }
}

/// All distributions with weights `j/k`, in descending lexicographic order.
pub fn compositions(alphabet: &Alphabet, k: u32) -> Vec<ProbVector> {
    assert!(k >= 1, "grid resolution must be positive");
    let n = alphabet.len();
    let mut out = Vec::new();
    let mut parts = vec![0u32; n];
    fill_compositions(&mut parts, 0, k, &mut |parts| {
        let weights = parts.iter().map(|&j| ratio(j as i64, k as i64)).collect();
        out.push(ProbVector::from_trusted(alphabet.clone(), weights));
    });
    out
}

fn fill_compositions(parts: &mut [u32], pos: usize, remaining: u32, emit: &mut impl FnMut(&[u32])) {
    if pos + 1 == parts.len() {
        parts[pos] = remaining;
        emit(parts);
        return;
    }
    for j in (0..=remaining).rev() {
        parts[pos] = j;
        fill_compositions(parts, pos + 1, remaining - j, emit);
    }
}

/// `C(k + n - 1, n - 1)`, saturating.
pub fn composition_count(n: usize, k: u32) -> usize {
    let mut acc: u128 = 1;
    let top = k as u128 + n as u128 - 1;
    for i in 0..(n as u128 - 1) {
        acc = acc * (top - i) / (i + 1);
        if acc > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    acc as usize
}

/// The search space standing in for "every message distribution".
///
/// Always contains every point mass and every two-point uniform distribution,
/// whatever the resolution.
#[derive(Clone, Debug)]
pub struct SimplexGrid {
    resolution: u32,
    points: Vec<ProbVector>,
}

impl SimplexGrid {
    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    pub fn points(&self) -> &[ProbVector] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.points[0].alphabet()
    }
}

pub fn simplex_grid(alphabet: &Alphabet, k: u32) -> SimplexGrid {
    simplex_grid_capped(alphabet, k, usize::MAX).expect("uncapped grid")
}

pub fn simplex_grid_capped(alphabet: &Alphabet, k: u32, cap: usize) -> Result<SimplexGrid> {
    if k == 0 {
        return Err(Error::Parse("grid resolution must be at least 1".into()));
    }
    let n = alphabet.len();
    let pairs = n * (n - 1) / 2;
    let size = composition_count(n, k).saturating_add(pairs);
    if size > cap {
        return Err(Error::EnumerationTooLarge {
            what: format!("distribution grid (resolution {k}, {n} messages)"),
            size,
            cap,
        });
    }
    let mut points = compositions(alphabet, k);
    let mut seen: HashSet<Vec<Rational>> = points.iter().map(|p| p.weights.clone()).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            let p = ProbVector::two_point_uniform(alphabet.clone(), i, j);
            if seen.insert(p.weights.clone()) {
                points.push(p);
            }
        }
    }
    Ok(SimplexGrid {
        resolution: k,
        points,
    })
}
