//! Randomised and exhaustive checks of every theorem the library relies on.
//!
//! Each check is tallied separately. A failing instance is kept as a
//! counterexample together with the channel or joint that triggered it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cryptosystem::{check_correctness, induced_channel, Cryptosystem};
use crate::error::{Error, Result};
use crate::io::ChannelDoc;
use crate::notions::{
    binary_joint_grid, eps_ind, eps_ps_cm, eps_ps_cm_sup, eps_ps_cs, eps_ps_cs_sup, eps_ps_sm,
    eps_ss_capped, eps_ss_with_witness, lemma1_check, BinaryJoint, SsCaps, DEFAULT_SS_CAP,
};
use crate::prob::{
    half_l1, simplex_grid, variational_distance, variational_distance_via_tests, Alphabet,
    ChannelMatrix, ProbVector, SimplexGrid,
};
use crate::random::{random_binary_joint, random_doubly_stochastic, random_prob_vector};
use crate::rational::{int, Rational};
use crate::synthesis::{birkhoff_decompose, cryptosystem_from_decomposition, term_bound};

/// Largest alphabet for the distance-via-tests comparison.
pub const MAX_TEST_ALPHABET: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub count: usize,
    pub min_size: usize,
    pub max_size: usize,
    pub seed: u64,
    pub grid: u32,
    pub ss_cap: usize,
    pub lemma_denominator: u32,
    /// Random binary joints and random distribution pairs per matrix.
    pub extra_per_instance: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            count: 100,
            min_size: 2,
            max_size: 6,
            seed: 0,
            grid: 4,
            ss_cap: DEFAULT_SS_CAP,
            lemma_denominator: 12,
            extra_per_instance: 10,
        }
    }
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.min_size < 1 || self.min_size > self.max_size {
            return Err(Error::Parse(format!(
                "size range {}..={} is empty or starts below 1",
                self.min_size, self.max_size
            )));
        }
        if self.grid < 1 {
            return Err(Error::Parse("grid resolution must be at least 1".into()));
        }
        if self.ss_cap < 2 {
            return Err(Error::Parse("SS cap must be at least 2".into()));
        }
        if self.max_size > 64 {
            return Err(Error::EnumerationTooLarge {
                what: "matrix size".into(),
                size: self.max_size,
                cap: 64,
            });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub check: String,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub check: String,
    pub detail: String,
    pub instance: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifySummary {
    pub config: VerifyConfig,
    pub tallies: Vec<Tally>,
    pub counterexamples: Vec<Counterexample>,
}

impl VerifySummary {
    pub fn all_passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

pub const CHECKS: [&str; 9] = [
    "synthesis_round_trip",
    "cs_equals_ind",
    "cm_bracket",
    "cm_two_point",
    "ss_bracket",
    "ss_witness",
    "zero_epsilon_collapse",
    "binary_identity",
    "distance_via_tests",
];

struct Recorder {
    tallies: Vec<Tally>,
    counterexamples: Vec<Counterexample>,
}

impl Recorder {
    fn new() -> Self {
        Recorder {
            tallies: CHECKS
                .iter()
                .map(|c| Tally {
                    check: c.to_string(),
                    passed: 0,
                    failed: 0,
                })
                .collect(),
            counterexamples: Vec::new(),
        }
    }

    fn record(
        &mut self,
        check: &str,
        outcome: Result<()>,
        instance: impl FnOnce() -> serde_json::Value,
    ) {
        let tally = self
            .tallies
            .iter_mut()
            .find(|t| t.check == check)
            .expect("registered check");
        match outcome {
            Ok(()) => tally.passed += 1,
            Err(e) => {
                tally.failed += 1;
                self.counterexamples.push(Counterexample {
                    check: check.to_string(),
                    detail: e.to_string(),
                    instance: instance(),
                });
            }
        }
    }
}

fn violation(msg: String) -> Error {
    Error::InvariantViolation(msg)
}

fn channel_json(ch: &ChannelMatrix) -> serde_json::Value {
    serde_json::to_value(ChannelDoc::from(ch)).expect("channels serialize")
}

pub fn run(config: &VerifyConfig) -> Result<VerifySummary> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut rec = Recorder::new();
    let caps = SsCaps::uniform(config.ss_cap);

    for _ in 0..config.count {
        let n = rng.gen_range(config.min_size..=config.max_size);
        let ch = random_doubly_stochastic(&mut rng, n);
        let grid = simplex_grid(ch.messages(), config.grid);
        let json = || channel_json(&ch);

        rec.record("synthesis_round_trip", check_round_trip(&ch), json);
        rec.record("cs_equals_ind", check_cs_equals_ind(&ch, &grid), json);
        rec.record("cm_bracket", check_cm_bracket(&ch, &grid), json);
        rec.record("cm_two_point", check_two_point(&ch), json);
        if caps.admits(&ch) {
            let (bracket, witness) = check_ss_bracket(&ch, &grid, caps);
            rec.record("ss_bracket", bracket, json);
            rec.record("ss_witness", witness, json);
        }
        rec.record(
            "zero_epsilon_collapse",
            check_collapse(&mut rng, n, caps),
            || serde_json::json!({ "size": n }),
        );

        for _ in 0..config.extra_per_instance {
            let j = random_binary_joint(&mut rng);
            rec.record("binary_identity", check_lemma(&j), || {
                serde_json::to_value(&j).expect("joints serialize")
            });

            let size = rng.gen_range(1..=MAX_TEST_ALPHABET);
            let a = Alphabet::indexed("a", size)?;
            let p = random_prob_vector(&mut rng, &a);
            let q = random_prob_vector(&mut rng, &a);
            rec.record("distance_via_tests", check_distance(&p, &q), || {
                serde_json::json!({
                    "p": p.weights().iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "q": q.weights().iter().map(ToString::to_string).collect::<Vec<_>>(),
                })
            });
        }
    }

    for j in binary_joint_grid(config.lemma_denominator) {
        rec.record("binary_identity", check_lemma(&j), || {
            serde_json::to_value(&j).expect("joints serialize")
        });
    }

    Ok(VerifySummary {
        config: config.clone(),
        tallies: rec.tallies,
        counterexamples: rec.counterexamples,
    })
}

pub fn check_round_trip(ch: &ChannelMatrix) -> Result<()> {
    let dec = birkhoff_decompose(ch)?;
    let n = ch.messages().len();
    if dec.len() > term_bound(n) {
        return Err(violation(format!(
            "{} terms exceed the bound {}",
            dec.len(),
            term_bound(n)
        )));
    }
    let sys = cryptosystem_from_decomposition(&dec, ch.messages(), ch.cryptograms())?;
    let violations = check_correctness(&sys);
    if let Some(v) = violations.first() {
        return Err(violation(format!("synthesized cipher is incorrect: {v}")));
    }
    if induced_channel(&sys)? != *ch {
        return Err(violation("induced channel differs from the input".into()));
    }
    Ok(())
}

pub fn check_cs_equals_ind(ch: &ChannelMatrix, grid: &SimplexGrid) -> Result<()> {
    let (ind, _) = eps_ind(ch);
    let sup = eps_ps_cs_sup(ch, grid)?;
    if sup.value != ind {
        return Err(violation(format!(
            "PS^cs supremum {} != IND {ind}",
            sup.value
        )));
    }
    for pm in grid.points() {
        let (v, _) = eps_ps_cs(ch, pm)?;
        if v > ind {
            return Err(violation(format!("PS^cs value {v} exceeds IND {ind}")));
        }
    }
    Ok(())
}

pub fn check_cm_bracket(ch: &ChannelMatrix, grid: &SimplexGrid) -> Result<()> {
    let (ind, _) = eps_ind(ch);
    let sup = eps_ps_cm_sup(ch, grid)?;
    let lower = &ind / int(2);
    if sup.value < lower || sup.value > ind {
        return Err(violation(format!(
            "PS^cm supremum {} outside [{lower}, {ind}]",
            sup.value
        )));
    }
    for pm in grid.points() {
        let v = eps_ps_cm(ch, pm)?;
        if v > ind {
            return Err(violation(format!("PS^cm value {v} exceeds IND {ind}")));
        }
    }
    Ok(())
}

/// Under the uniform law on `{m0, m1}` the PS^cm value is half the distance
/// between the two columns.
pub fn check_two_point(ch: &ChannelMatrix) -> Result<()> {
    let n = ch.messages().len();
    for i in 0..n {
        for j in i + 1..n {
            let pm = ProbVector::two_point_uniform(ch.messages().clone(), i, j);
            let v = eps_ps_cm(ch, &pm)?;
            let d = half_l1(ch.column(i).weights(), ch.column(j).weights());
            if v != &d / int(2) {
                return Err(violation(format!(
                    "PS^cm at the uniform law on ({}, {}) is {v}, half the column distance is {}",
                    ch.messages().symbol(i),
                    ch.messages().symbol(j),
                    &d / int(2)
                )));
            }
        }
    }
    Ok(())
}

pub fn check_ss_bracket(
    ch: &ChannelMatrix,
    grid: &SimplexGrid,
    caps: SsCaps,
) -> (Result<()>, Result<()>) {
    let (ind, _) = eps_ind(ch);
    let mut sup: Option<Rational> = None;
    let mut witness_result = Ok(());
    for pm in grid.points() {
        let e = match eps_ss_with_witness(ch, pm, caps) {
            Ok(e) => e,
            Err(err) => return (Err(err.clone()), Err(err)),
        };
        if witness_result.is_ok() && (e.value > e.witness_bound || e.witness_bound > ind) {
            witness_result = Err(violation(format!(
                "SS value {} <= witness {} <= IND {ind} fails",
                e.value, e.witness_bound
            )));
        }
        if sup.as_ref().is_none_or(|s| e.value > *s) {
            sup = Some(e.value);
        }
    }
    let sup = sup.expect("grid is non-empty");
    let lower = &ind / int(4);
    let bracket = if sup < lower || sup > ind {
        Err(violation(format!(
            "SS supremum {sup} outside [{lower}, {ind}]"
        )))
    } else {
        Ok(())
    };
    (bracket, witness_result)
}

/// A cipher built from a constant-column channel leaks nothing: every notion
/// is exactly zero for a random message law. A square constant-column
/// doubly stochastic matrix is necessarily uniform.
pub fn check_collapse<R: Rng + ?Sized>(rng: &mut R, n: usize, caps: SsCaps) -> Result<()> {
    let messages = Alphabet::indexed("m", n)?;
    let cryptograms = Alphabet::indexed("c", n)?;
    let column = vec![Rational::new(1.into(), (n as i64).into()); n];
    let ch = ChannelMatrix::from_columns(messages, cryptograms, vec![column; n])?;
    let sys: Cryptosystem = crate::synthesis::synthesize(&ch)?;
    let induced = induced_channel(&sys)?;
    let pm = random_prob_vector(rng, induced.messages());
    let zero = int(0);
    let (ind, _) = eps_ind(&induced);
    let (cs, _) = eps_ps_cs(&induced, &pm)?;
    let cm = eps_ps_cm(&induced, &pm)?;
    let (sm, _) = eps_ps_sm(&induced, &pm)?;
    let ss = if caps.admits(&induced) {
        eps_ss_capped(&induced, &pm, caps)?.0
    } else {
        zero.clone()
    };
    for (name, v) in [
        ("IND", ind),
        ("PS^cs", cs),
        ("PS^cm", cm),
        ("PS^sm", sm),
        ("SS", ss),
    ] {
        if v != zero {
            return Err(violation(format!(
                "{name} is {v} on a perfectly secret cipher"
            )));
        }
    }
    Ok(())
}

pub fn check_lemma(j: &BinaryJoint) -> Result<()> {
    let r = lemma1_check(j);
    if !r.holds {
        return Err(violation(format!("lhs {} != 2 * rhs {}", r.lhs, r.rhs)));
    }
    Ok(())
}

pub fn check_distance(p: &ProbVector, q: &ProbVector) -> Result<()> {
    let direct = variational_distance(p, q)?;
    let via = variational_distance_via_tests(p, q, MAX_TEST_ALPHABET)?;
    if direct != via {
        return Err(violation(format!(
            "half-L1 distance {direct} != best test advantage {via}"
        )));
    }
    Ok(())
}
