//! Symmetric-key ciphers with an independent key and deterministic tables.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::prob::{Alphabet, ChannelMatrix, ProbVector};
use crate::rational::Rational;

/// A key distribution plus dense encryption and decryption tables.
///
/// `enc[k][m]` is the cryptogram index of message `m` under key `k`;
/// `dec[k][c]` is the message index, or `None` where the table leaves a
/// non-image cryptogram unconstrained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cryptosystem {
    messages: Alphabet,
    keys: Alphabet,
    cryptograms: Alphabet,
    key_dist: ProbVector,
    enc: Vec<Vec<usize>>,
    dec: Vec<Vec<Option<usize>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub message: String,
    pub key: String,
    pub cryptogram: String,
    /// What the decryption table returned; `None` if the entry is missing.
    pub decrypted: Option<String>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.decrypted {
            Some(d) => write!(
                f,
                "dec(enc({m}, {k}), {k}) = dec({c}, {k}) = {d}, expected {m}",
                m = self.message,
                k = self.key,
                c = self.cryptogram
            ),
            None => write!(
                f,
                "dec({c}, {k}) is undefined but enc({m}, {k}) = {c}",
                m = self.message,
                k = self.key,
                c = self.cryptogram
            ),
        }
    }
}

impl Cryptosystem {
    /// Checks table shapes and index ranges only; use [`check_correctness`]
    /// for the decryption identity.
    pub fn new(
        messages: Alphabet,
        keys: Alphabet,
        cryptograms: Alphabet,
        key_dist: ProbVector,
        enc: Vec<Vec<usize>>,
        dec: Vec<Vec<Option<usize>>>,
    ) -> Result<Self> {
        if key_dist.alphabet() != &keys {
            return Err(Error::AlphabetMismatch(
                "key distribution is not over the key alphabet".into(),
            ));
        }
        if enc.len() != keys.len() || dec.len() != keys.len() {
            return Err(Error::Parse("enc/dec tables need one entry per key".into()));
        }
        for (k, row) in enc.iter().enumerate() {
            if row.len() != messages.len() || row.iter().any(|&c| c >= cryptograms.len()) {
                return Err(Error::Parse(format!(
                    "enc table for key `{}` is malformed",
                    keys.symbol(k)
                )));
            }
        }
        for (k, row) in dec.iter().enumerate() {
            if row.len() != cryptograms.len() || row.iter().flatten().any(|&m| m >= messages.len())
            {
                return Err(Error::Parse(format!(
                    "dec table for key `{}` is malformed",
                    keys.symbol(k)
                )));
            }
        }
        Ok(Cryptosystem {
            messages,
            keys,
            cryptograms,
            key_dist,
            enc,
            dec,
        })
    }

    /// `enc(m, k) = m + k mod n` over `{0..n-1}` with the given key weights.
    /// With `n = 2` this is the XOR one-time pad.
    pub fn modular_shift(n: usize, key_weights: Vec<Rational>) -> Result<Self> {
        let messages = Alphabet::new((0..n).map(|i| i.to_string()))?;
        let keys = Alphabet::new((0..n).map(|i| format!("k{i}")))?;
        let key_dist = ProbVector::new(keys.clone(), key_weights)?;
        let enc = (0..n)
            .map(|k| (0..n).map(|m| (m + k) % n).collect())
            .collect();
        let dec = (0..n)
            .map(|k| (0..n).map(|c| Some((c + n - k) % n)).collect())
            .collect();
        Cryptosystem::new(messages.clone(), keys, messages, key_dist, enc, dec)
    }

    pub fn messages(&self) -> &Alphabet {
        &self.messages
    }

    pub fn keys(&self) -> &Alphabet {
        &self.keys
    }

    pub fn cryptograms(&self) -> &Alphabet {
        &self.cryptograms
    }

    pub fn key_dist(&self) -> &ProbVector {
        &self.key_dist
    }

    pub fn encrypt(&self, m: usize, k: usize) -> usize {
        self.enc[k][m]
    }

    pub fn decrypt(&self, c: usize, k: usize) -> Option<usize> {
        self.dec[k][c]
    }

    pub fn enc_table(&self) -> &[Vec<usize>] {
        &self.enc
    }

    pub fn dec_table(&self) -> &[Vec<Option<usize>>] {
        &self.dec
    }
}

/// Every `(m, k)` whose decryption does not return `m`. Empty means valid.
pub fn check_correctness(sys: &Cryptosystem) -> Vec<Violation> {
    let mut out = Vec::new();
    for k in 0..sys.keys.len() {
        for m in 0..sys.messages.len() {
            let c = sys.enc[k][m];
            let back = sys.dec[k][c];
            if back != Some(m) {
                out.push(Violation {
                    message: sys.messages.symbol(m).to_string(),
                    key: sys.keys.symbol(k).to_string(),
                    cryptogram: sys.cryptograms.symbol(c).to_string(),
                    decrypted: back.map(|d| sys.messages.symbol(d).to_string()),
                });
            }
        }
    }
    out
}

/// `P(c | m) = Pr[Enc(m, K) = c]`.
pub fn induced_channel(sys: &Cryptosystem) -> Result<ChannelMatrix> {
    let violations = check_correctness(sys);
    if !violations.is_empty() {
        return Err(Error::InvalidCryptosystem(
            violations.iter().map(ToString::to_string).collect(),
        ));
    }
    let mut columns = vec![vec![Rational::zero(); sys.cryptograms.len()]; sys.messages.len()];
    for (k, row) in sys.enc.iter().enumerate() {
        let pk = sys.key_dist.prob(k);
        if pk.is_zero() {
            continue;
        }
        for (m, &c) in row.iter().enumerate() {
            columns[m][c] += pk;
        }
    }
    Ok(ChannelMatrix::from_trusted_columns(
        sys.messages.clone(),
        sys.cryptograms.clone(),
        columns,
    ))
}

/// Rows and columns all sum to one. Columns do by construction, so only rows are checked.
pub fn is_doubly_stochastic(ch: &ChannelMatrix) -> Result<bool> {
    Ok(first_bad_row(ch)?.is_none())
}

/// Like [`is_doubly_stochastic`] but reports the offending row.
pub fn require_doubly_stochastic(ch: &ChannelMatrix) -> Result<()> {
    match first_bad_row(ch)? {
        None => Ok(()),
        Some((c, sum)) => Err(Error::NotDoublyStochastic {
            row: ch.cryptograms().symbol(c).to_string(),
            sum,
        }),
    }
}

fn first_bad_row(ch: &ChannelMatrix) -> Result<Option<(usize, Rational)>> {
    if !ch.is_square() {
        return Err(Error::NotSquare {
            rows: ch.cryptograms().len(),
            cols: ch.messages().len(),
        });
    }
    let one = Rational::from_integer(1.into());
    Ok((0..ch.cryptograms().len())
        .map(|c| (c, ch.row_sum(c)))
        .find(|(_, s)| *s != one))
}
