//! JSON documents for channels and ciphers.
//!
//! A file holds exactly one of
//!
//! ```text
//! {"channel": {"messages": [...], "cryptograms": [...], "matrix": [[...], ...]}}
//! {"cryptosystem": {"keys": [...], "key_dist": [...], "enc": {...}, "dec": {...}}}
//! ```
//!
//! Matrices are row-major (`matrix[c][m] = P(c | m)`). `enc` maps
//! message -> key -> cryptogram and `dec` maps cryptogram -> key -> message.
//! Probabilities are `"p/q"` strings, terminating decimals or integers.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::cryptosystem::Cryptosystem;
use crate::error::{Error, Result};
use crate::prob::{Alphabet, ChannelMatrix, ProbVector};
use crate::rational::{serde_matrix, serde_vec, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelDoc {
    pub messages: Vec<String>,
    pub cryptograms: Vec<String>,
    #[serde(with = "serde_matrix")]
    pub matrix: Vec<Vec<Rational>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CryptosystemDoc {
    /// Defaults to the keys of `enc`, in file order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub messages: Option<Vec<String>>,
    /// Defaults to the keys of `dec`, in file order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cryptograms: Option<Vec<String>>,
    pub keys: Vec<String>,
    #[serde(with = "serde_vec")]
    pub key_dist: Vec<Rational>,
    pub enc: IndexMap<String, IndexMap<String, String>>,
    pub dec: IndexMap<String, IndexMap<String, String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum InputDoc {
    Channel(ChannelDoc),
    Cryptosystem(CryptosystemDoc),
}

/// A validated input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Input {
    Channel(ChannelMatrix),
    Cryptosystem(Cryptosystem),
}

impl From<&ChannelMatrix> for ChannelDoc {
    fn from(ch: &ChannelMatrix) -> Self {
        ChannelDoc {
            messages: ch.messages().symbols().to_vec(),
            cryptograms: ch.cryptograms().symbols().to_vec(),
            matrix: ch.rows(),
        }
    }
}

impl TryFrom<ChannelDoc> for ChannelMatrix {
    type Error = Error;

    fn try_from(doc: ChannelDoc) -> Result<Self> {
        ChannelMatrix::from_rows(
            Alphabet::new(doc.messages)?,
            Alphabet::new(doc.cryptograms)?,
            doc.matrix,
        )
    }
}

impl From<&Cryptosystem> for CryptosystemDoc {
    fn from(sys: &Cryptosystem) -> Self {
        let (ms, ks, cs) = (sys.messages(), sys.keys(), sys.cryptograms());
        let enc = (0..ms.len())
            .map(|m| {
                let row = (0..ks.len())
                    .map(|k| {
                        (
                            ks.symbol(k).to_string(),
                            cs.symbol(sys.encrypt(m, k)).to_string(),
                        )
                    })
                    .collect();
                (ms.symbol(m).to_string(), row)
            })
            .collect();
        let dec = (0..cs.len())
            .map(|c| {
                let row = (0..ks.len())
                    .filter_map(|k| {
                        sys.decrypt(c, k)
                            .map(|m| (ks.symbol(k).to_string(), ms.symbol(m).to_string()))
                    })
                    .collect();
                (cs.symbol(c).to_string(), row)
            })
            .collect();
        CryptosystemDoc {
            messages: Some(ms.symbols().to_vec()),
            cryptograms: Some(cs.symbols().to_vec()),
            keys: ks.symbols().to_vec(),
            key_dist: sys.key_dist().weights().to_vec(),
            enc,
            dec,
        }
    }
}

impl TryFrom<CryptosystemDoc> for Cryptosystem {
    type Error = Error;

    fn try_from(doc: CryptosystemDoc) -> Result<Self> {
        let messages = Alphabet::new(
            doc.messages
                .unwrap_or_else(|| doc.enc.keys().cloned().collect()),
        )?;
        let cryptograms = Alphabet::new(
            doc.cryptograms
                .unwrap_or_else(|| doc.dec.keys().cloned().collect()),
        )?;
        let keys = Alphabet::new(doc.keys)?;
        let key_dist =
            ProbVector::new(keys.clone(), doc.key_dist).map_err(|e| e.with_context("key_dist"))?;

        for m in doc.enc.keys() {
            messages.require_index(m)?;
        }
        for c in doc.dec.keys() {
            cryptograms.require_index(c)?;
        }

        let mut enc = vec![vec![0; messages.len()]; keys.len()];
        for (m, msym) in messages.symbols().iter().enumerate() {
            let row = doc
                .enc
                .get(msym)
                .ok_or_else(|| Error::Parse(format!("enc has no entry for message `{msym}`")))?;
            for k_sym in row.keys() {
                keys.require_index(k_sym)?;
            }
            for (k, ksym) in keys.symbols().iter().enumerate() {
                let c = row.get(ksym).ok_or_else(|| {
                    Error::Parse(format!("enc[`{msym}`] has no entry for key `{ksym}`"))
                })?;
                enc[k][m] = cryptograms.require_index(c)?;
            }
        }

        let mut dec = vec![vec![None; cryptograms.len()]; keys.len()];
        for (c_sym, row) in &doc.dec {
            let c = cryptograms.require_index(c_sym)?;
            for (k_sym, m_sym) in row {
                let k = keys.require_index(k_sym)?;
                dec[k][c] = Some(messages.require_index(m_sym)?);
            }
        }

        Cryptosystem::new(messages, keys, cryptograms, key_dist, enc, dec)
    }
}

impl TryFrom<InputDoc> for Input {
    type Error = Error;

    fn try_from(doc: InputDoc) -> Result<Self> {
        Ok(match doc {
            InputDoc::Channel(c) => Input::Channel(c.try_into()?),
            InputDoc::Cryptosystem(s) => Input::Cryptosystem(s.try_into()?),
        })
    }
}

/// Parse JSON text into a document, reporting the failing field path.
pub fn parse_input_doc(text: &str) -> Result<InputDoc> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if path.is_empty() || path == "." {
            Error::Parse(inner.to_string())
        } else {
            Error::Parse(format!("at `{path}`: {inner}"))
        }
    })
}

/// Parse and validate a channel or cryptosystem document.
pub fn parse_input(text: &str) -> Result<Input> {
    parse_input_doc(text)?.try_into()
}

pub fn channel_to_json(ch: &ChannelMatrix) -> String {
    let doc = InputDoc::Channel(ChannelDoc::from(ch));
    serde_json::to_string_pretty(&doc).expect("channel documents always serialize")
}

pub fn cryptosystem_to_json(sys: &Cryptosystem) -> String {
    let doc = InputDoc::Cryptosystem(CryptosystemDoc::from(sys));
    serde_json::to_string_pretty(&doc).expect("cryptosystem documents always serialize")
}
