//! Seeded random instances with exact rational entries.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::notions::BinaryJoint;
use crate::prob::{Alphabet, ChannelMatrix, ProbVector};
use crate::rational::{int, Rational};
use crate::synthesis::Permutation;

/// Largest integer weight drawn before normalisation.
pub const MAX_RAW_WEIGHT: i64 = 12;

pub fn random_permutation<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Permutation {
    let mut images: Vec<usize> = (0..n).collect();
    images.shuffle(rng);
    Permutation::new(images).expect("a shuffle is a permutation")
}

/// Integer weights in `1..=MAX_RAW_WEIGHT`, normalised to sum to one.
fn positive_weights<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<Rational> {
    let raw: Vec<i64> = (0..len)
        .map(|_| rng.gen_range(1..=MAX_RAW_WEIGHT))
        .collect();
    let total: i64 = raw.iter().sum();
    raw.into_iter()
        .map(|w| Rational::new(w.into(), total.into()))
        .collect()
}

/// A mixture of `t` random permutation matrices, `t` uniform in `1..=n`.
/// Exactly doubly stochastic by construction.
pub fn random_doubly_stochastic<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ChannelMatrix {
    let t = rng.gen_range(1..=n);
    let weights = positive_weights(rng, t);
    let mut columns = vec![vec![int(0); n]; n];
    for w in weights {
        let p = random_permutation(rng, n);
        for (m, col) in columns.iter_mut().enumerate() {
            col[p.apply(m)] += &w;
        }
    }
    ChannelMatrix::from_columns(
        Alphabet::indexed("m", n).expect("n >= 1"),
        Alphabet::indexed("c", n).expect("n >= 1"),
        columns,
    )
    .expect("permutation mixtures are stochastic")
}

/// A distribution over `alphabet` whose entries are multiples of small
/// integers; roughly a third of the entries are forced to zero.
pub fn random_prob_vector<R: Rng + ?Sized>(rng: &mut R, alphabet: &Alphabet) -> ProbVector {
    let n = alphabet.len();
    let mut raw: Vec<i64> = (0..n)
        .map(|_| {
            if rng.gen_ratio(1, 3) {
                0
            } else {
                rng.gen_range(1..=MAX_RAW_WEIGHT)
            }
        })
        .collect();
    if raw.iter().all(|&w| w == 0) {
        raw[rng.gen_range(0..n)] = 1;
    }
    let total: i64 = raw.iter().sum();
    let weights = raw
        .into_iter()
        .map(|w| Rational::new(w.into(), total.into()))
        .collect();
    ProbVector::new(alphabet.clone(), weights).expect("normalised weights")
}

pub fn random_binary_joint<R: Rng + ?Sized>(rng: &mut R) -> BinaryJoint {
    let a = Alphabet::indexed("x", 4).expect("four cells");
    let w = random_prob_vector(rng, &a).weights().to_vec();
    BinaryJoint::new(w[0].clone(), w[1].clone(), w[2].clone(), w[3].clone())
        .expect("a distribution on four cells")
}
