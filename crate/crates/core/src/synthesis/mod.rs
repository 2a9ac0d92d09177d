//! Realizing a doubly stochastic channel as a cipher.
//!
//! A doubly stochastic matrix is a convex combination of permutation matrices.
//! Each permutation becomes the encryption table of one key and its weight
//! becomes that key's probability.
//!
//! The decomposition is greedy: find a perfect matching on the positive
//! entries of the residual, peel off the matching scaled by its smallest
//! entry, repeat. Every step zeroes at least one entry and moves the residual
//! to a strictly lower-dimensional face of the Birkhoff polytope, so at most
//! `n^2 - 2n + 2` terms are produced.

mod matching;

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cryptosystem::{require_doubly_stochastic, Cryptosystem};
use crate::error::{Error, Result};
use crate::prob::{Alphabet, ChannelMatrix, ProbVector};
use crate::rational::{serde_str, Rational};

pub use matching::perfect_matching;

/// A bijection on `0..n`, stored as the image of each index.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut hit = vec![false; n];
        for &i in &images {
            if i >= n || std::mem::replace(&mut hit[i], true) {
                return Err(Error::Parse(format!("{images:?} is not a permutation")));
            }
        }
        Ok(Permutation(images))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Permutation::new(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BirkhoffTerm {
    #[serde(with = "serde_str")]
    pub weight: Rational,
    /// Message index to cryptogram index.
    pub perm: Permutation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BirkhoffDecomposition {
    terms: Vec<BirkhoffTerm>,
}

impl BirkhoffDecomposition {
    /// Validates positive weights summing to one over permutations of one degree.
    pub fn new(terms: Vec<BirkhoffTerm>) -> Result<Self> {
        let Some(first) = terms.first() else {
            return Err(Error::Parse("decomposition has no terms".into()));
        };
        let n = first.perm.len();
        if terms.iter().any(|t| t.perm.len() != n) {
            return Err(Error::Parse("permutations differ in degree".into()));
        }
        if let Some(t) = terms.iter().find(|t| !t.weight.is_positive()) {
            return Err(Error::invalid_dist(format!(
                "decomposition weight {} is not positive",
                t.weight
            )));
        }
        let total: Rational = terms.iter().map(|t| &t.weight).sum();
        if total != Rational::from_integer(1.into()) {
            return Err(Error::invalid_dist(format!(
                "decomposition weights sum to {total}"
            )));
        }
        Ok(BirkhoffDecomposition { terms })
    }

    pub fn terms(&self) -> &[BirkhoffTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms[0].perm.len()
    }

    /// `sum_k w_k Pi_k` as columns: `out[m][c]`.
    pub fn recompose(&self) -> Vec<Vec<Rational>> {
        let n = self.degree();
        let mut out = vec![vec![Rational::zero(); n]; n];
        for t in &self.terms {
            for (m, col) in out.iter_mut().enumerate() {
                col[t.perm.apply(m)] += &t.weight;
            }
        }
        out
    }
}

/// Upper bound on the number of permutations needed for an `n x n` matrix.
pub fn term_bound(n: usize) -> usize {
    (n * n + 2).saturating_sub(2 * n)
}

pub fn birkhoff_decompose(ch: &ChannelMatrix) -> Result<BirkhoffDecomposition> {
    require_doubly_stochastic(ch)?;
    let n = ch.messages().len();
    let mut residual: Vec<Vec<Rational>> = ch
        .columns()
        .iter()
        .map(|col| col.weights().to_vec())
        .collect();
    let mut support: Vec<Vec<bool>> = residual
        .iter()
        .map(|col| col.iter().map(|p| !p.is_zero()).collect())
        .collect();
    let mut remaining = Rational::from_integer(1.into());
    let mut matching = matching::Matching::new(n);
    let mut terms = Vec::new();

    while remaining.is_positive() {
        matching.drop_dead_edges(&support);
        if !matching.complete(&support) {
            return Err(Error::InvariantViolation(
                "residual of a doubly stochastic matrix has no perfect matching".into(),
            ));
        }
        let perm = matching.permutation();
        let theta = perm
            .iter()
            .enumerate()
            .map(|(m, &c)| &residual[m][c])
            .min()
            .cloned()
            .expect("n >= 1");
        for (m, &c) in perm.iter().enumerate() {
            let entry = &mut residual[m][c];
            *entry -= &theta;
            debug_assert!(!entry.is_negative());
            if entry.is_zero() {
                support[m][c] = false;
            }
        }
        remaining -= &theta;
        terms.push(BirkhoffTerm {
            weight: theta,
            perm: Permutation(perm),
        });
    }

    if terms.len() > term_bound(n) {
        return Err(Error::InvariantViolation(format!(
            "decomposition used {} terms, bound is {}",
            terms.len(),
            term_bound(n)
        )));
    }
    Ok(BirkhoffDecomposition { terms })
}

/// One key per term: `enc(m, k_i) = pi_i(m)`, `dec(c, k_i) = pi_i^{-1}(c)`.
pub fn cryptosystem_from_decomposition(
    dec: &BirkhoffDecomposition,
    messages: &Alphabet,
    cryptograms: &Alphabet,
) -> Result<Cryptosystem> {
    let n = dec.degree();
    if messages.len() != n || cryptograms.len() != n {
        return Err(Error::AlphabetMismatch(format!(
            "decomposition has degree {n} but alphabets have sizes {} and {}",
            messages.len(),
            cryptograms.len()
        )));
    }
    let keys = Alphabet::indexed("k", dec.len())?;
    let key_dist = ProbVector::new(
        keys.clone(),
        dec.terms.iter().map(|t| t.weight.clone()).collect(),
    )?;
    let enc = dec.terms.iter().map(|t| t.perm.images().to_vec()).collect();
    let dec_table = dec
        .terms
        .iter()
        .map(|t| t.perm.inverse().0.into_iter().map(Some).collect())
        .collect();
    Cryptosystem::new(
        messages.clone(),
        keys,
        cryptograms.clone(),
        key_dist,
        enc,
        dec_table,
    )
}

pub fn synthesize(ch: &ChannelMatrix) -> Result<Cryptosystem> {
    let dec = birkhoff_decompose(ch)?;
    cryptosystem_from_decomposition(&dec, ch.messages(), ch.cryptograms())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cryptosystem::{check_correctness, induced_channel};
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

    fn circulant() -> ChannelMatrix {
        let w = [half(), ratio(1, 4), ratio(1, 4)];
        square(
            (0..3)
                .map(|c| (0..3).map(|m| w[(c + 3 - m) % 3].clone()).collect())
                .collect(),
        )
    }

    #[test]
    fn identity_is_one_term() {
        let id = square(vec![vec![int(1), int(0)], vec![int(0), int(1)]]);
        let d = birkhoff_decompose(&id).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.terms()[0].weight, int(1));
        assert_eq!(d.terms()[0].perm, Permutation::identity(2));
    }

    #[test]
    fn all_half_is_identity_plus_swap() {
        let ch = square(vec![vec![half(), half()], vec![half(), half()]]);
        let d = birkhoff_decompose(&ch).unwrap();
        let terms: Vec<_> = d
            .terms()
            .iter()
            .map(|t| (t.weight.clone(), t.perm.images().to_vec()))
            .collect();
        assert_eq!(terms, vec![(half(), vec![0, 1]), (half(), vec![1, 0])]);
    }

    /// Every 3x3 permutation matrix, and the exact coefficients that a
    /// brute-force solve over all 6 finds for the circulant.
    #[test]
    fn circulant_matches_cyclic_shift_oracle() {
        let ch = circulant();
        let d = birkhoff_decompose(&ch).unwrap();
        assert_eq!(
            d.recompose(),
            ch.columns()
                .iter()
                .map(|c| c.weights().to_vec())
                .collect::<Vec<_>>()
        );

        // Oracle: the cyclic shifts alone must solve the system with the
        // stated weights.
        let shift = |s: usize| Permutation::new((0..3).map(|m| (m + s) % 3).collect()).unwrap();
        let oracle = BirkhoffDecomposition::new(vec![
            BirkhoffTerm {
                weight: half(),
                perm: shift(0),
            },
            BirkhoffTerm {
                weight: ratio(1, 4),
                perm: shift(1),
            },
            BirkhoffTerm {
                weight: ratio(1, 4),
                perm: shift(2),
            },
        ])
        .unwrap();
        assert_eq!(oracle.recompose(), d.recompose());

        // Deterministic tie-break reproduces exactly the shift family.
        let mut got: Vec<_> = d
            .terms()
            .iter()
            .map(|t| (t.perm.clone(), t.weight.clone()))
            .collect();
        got.sort_by(|a, b| a.0.images().cmp(b.0.images()));
        assert_eq!(
            got,
            vec![
                (shift(0), half()),
                (shift(1), ratio(1, 4)),
                (shift(2), ratio(1, 4))
            ]
        );
    }

    #[test]
    fn rejects_non_square_and_non_doubly_stochastic() {
        let lumped = square(vec![vec![int(1), int(1)], vec![int(0), int(0)]]);
        assert!(matches!(
            birkhoff_decompose(&lumped),
            Err(Error::NotDoublyStochastic { .. })
        ));
        let wide = ChannelMatrix::from_columns(
            Alphabet::indexed("m", 1).unwrap(),
            Alphabet::indexed("c", 2).unwrap(),
            vec![vec![half(), half()]],
        )
        .unwrap();
        assert!(matches!(
            birkhoff_decompose(&wide),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn synthesized_ciphers_round_trip() {
        let identity_cipher =
            synthesize(&square(vec![vec![int(1), int(0)], vec![int(0), int(1)]])).unwrap();
        assert_eq!(identity_cipher.keys().len(), 1);
        assert_eq!(identity_cipher.key_dist().prob(0), &int(1));

        let pad = synthesize(&square(vec![vec![half(), half()], vec![half(), half()]])).unwrap();
        assert_eq!(pad.keys().len(), 2);
        assert_eq!(pad.enc_table(), &[vec![0, 1], vec![1, 0]]);
        assert!(check_correctness(&pad).is_empty());

        let ch = circulant();
        let shift = synthesize(&ch).unwrap();
        assert_eq!(shift.keys().len(), 3);
        let mut w: Vec<_> = shift.key_dist().weights().to_vec();
        w.sort();
        assert_eq!(w, vec![ratio(1, 4), ratio(1, 4), half()]);
        assert!(check_correctness(&shift).is_empty());
        assert_eq!(induced_channel(&shift).unwrap(), ch);
    }

    #[test]
    fn decomposition_validation() {
        assert!(BirkhoffDecomposition::new(vec![]).is_err());
        assert!(BirkhoffDecomposition::new(vec![BirkhoffTerm {
            weight: half(),
            perm: Permutation::identity(2)
        }])
        .is_err());
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::new(vec![2, 0]).is_err());
        let d = BirkhoffDecomposition::new(vec![BirkhoffTerm {
            weight: int(1),
            perm: Permutation::identity(2),
        }])
        .unwrap();
        let a3 = Alphabet::indexed("x", 3).unwrap();
        assert!(cryptosystem_from_decomposition(&d, &a3, &a3).is_err());
    }

    #[test]
    fn term_bound_values() {
        assert_eq!(term_bound(1), 1);
        assert_eq!(term_bound(2), 2);
        assert_eq!(term_bound(3), 5);
        assert_eq!(term_bound(8), 50);
    }
}
