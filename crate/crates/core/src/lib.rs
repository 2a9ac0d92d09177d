//! Exact analysis and synthesis of finite symmetric-key ciphers.
//!
//! All arithmetic is over arbitrary-precision rationals, so every notion value
//! and every theorem check is exact.

pub mod cryptosystem;
pub mod error;
pub mod gap;
pub mod io;
pub mod notions;
pub mod prob;
pub mod random;
pub mod rational;
pub mod render;
pub mod synthesis;
pub mod verify;

pub use cryptosystem::{check_correctness, induced_channel, is_doubly_stochastic, Cryptosystem};
pub use error::{Error, Result};
pub use prob::{Alphabet, ChannelMatrix, ProbVector};
pub use rational::Rational;
