//! Law-scan engine and structured check reports.
//!
//! Every checker in this crate reduces to the same scheme: a law is a
//! predicate over a finite tuple space, scanned either exhaustively or by
//! seeded sampling. Scans report the lexicographically least violation
//! (exhaustive) or the first sampled one, so verdicts do not depend on how
//! the scan is scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use std::time::Instant;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How a scan over a tuple space is executed. `Parallel` falls back to the
/// sequential path when the crate is built without the `parallel` feature.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Policy {
    /// Sample count used when a tuple space exceeds `threshold`.
    pub samples: u64,
    /// Seed for the deterministic sample generator.
    pub seed: u64,
    /// Tuple spaces at most this large are scanned exhaustively.
    pub threshold: u128,
}

impl Default for Policy {
    fn default() -> Self {
        Policy { samples: 10_000, seed: 20_240_601, threshold: 200_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanMode {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Refused,
}

/// A violating tuple together with both evaluated sides of the law.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub tuple: Vec<String>,
    pub lhs: String,
    pub rhs: String,
}

impl Counterexample {
    pub fn new<T: Into<String>, L: Into<String>, R: Into<String>>(
        tuple: Vec<T>,
        lhs: L,
        rhs: R,
    ) -> Self {
        Counterexample {
            tuple: tuple.into_iter().map(Into::into).collect(),
            lhs: lhs.into(),
            rhs: rhs.into(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LawReport {
    pub law: String,
    pub cases: u64,
    pub mode: ScanMode,
    pub counterexample: Option<Counterexample>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Outcome of a full check suite. Serializes to deterministic bytes for a
/// fixed input and policy; wall-clock timing is kept out of the JSON and
/// reported on the human side only.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckReport {
    pub status: Status,
    pub laws: Vec<LawReport>,
    pub policy: Policy,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refusal: Option<String>,
    #[serde(skip)]
    pub elapsed_ms: u128,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn law(&self, name: &str) -> Option<&LawReport> {
        self.laws.iter().find(|l| l.law == name)
    }

    pub fn first_violation(&self) -> Option<(&str, &Counterexample)> {
        self.laws
            .iter()
            .find_map(|l| l.counterexample.as_ref().map(|c| (l.law.as_str(), c)))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }
}

/// Accumulates law reports and assembles the final `CheckReport`. Laws are
/// sorted by name so assembly order never leaks into the output bytes.
pub struct Checker {
    policy: Policy,
    laws: Vec<LawReport>,
    started: Instant,
    execution: Execution,
}

impl Checker {
    pub fn new(policy: &Policy) -> Self {
        Checker {
            policy: policy.clone(),
            laws: Vec::new(),
            started: Instant::now(),
            execution: Execution::Parallel,
        }
    }

    pub fn sequential(policy: &Policy) -> Self {
        let mut c = Checker::new(policy);
        c.execution = Execution::Sequential;
        c
    }

    pub fn policy(&self) -> &Policy {
        &self.policy
    }

    pub fn push(&mut self, law: LawReport) {
        self.laws.push(law);
    }

    /// Scan a law over an indexed tuple space. `check` maps an index to a
    /// violation, or `None` when the case holds (or is vacuous).
    pub fn law<C>(&mut self, name: &str, space: u128, check: C)
    where
        C: Fn(u128) -> Option<Counterexample> + Sync,
    {
        let report = scan_law(name, space, &self.policy, self.execution, None, check);
        self.laws.push(report);
    }

    /// Like `law`, but with a custom sampler used when the space exceeds the
    /// enumeration threshold. The sampler returns an encoded case index and
    /// may return `None` to ask for a re-draw.
    pub fn law_with_sampler<C, S>(&mut self, name: &str, space: u128, sampler: S, check: C)
    where
        C: Fn(u128) -> Option<Counterexample> + Sync,
        S: Fn(&mut ChaCha12Rng) -> Option<u128>,
    {
        let report = scan_law(name, space, &self.policy, self.execution, Some(&sampler), check);
        self.laws.push(report);
    }

    /// Exhaustive scan over an explicit case list (a declared sub-carrier).
    pub fn law_over_cases<C>(&mut self, name: &str, cases: &[u128], check: C)
    where
        C: Fn(u128) -> Option<Counterexample> + Sync,
    {
        let hit = min_violation(self.execution, cases.len() as u64, |i| {
            check(cases[i as usize])
        });
        self.laws.push(match hit {
            Some((idx, cx)) => LawReport {
                law: name.to_string(),
                cases: idx,
                mode: ScanMode::Exhaustive,
                counterexample: Some(cx),
            },
            None => LawReport {
                law: name.to_string(),
                cases: cases.len() as u64,
                mode: ScanMode::Exhaustive,
                counterexample: None,
            },
        });
    }

    pub fn refuse(self, reason: impl Into<String>) -> CheckReport {
        let mut laws = self.laws;
        laws.sort_by(|a, b| a.law.cmp(&b.law));
        CheckReport {
            status: Status::Refused,
            laws,
            policy: self.policy,
            refusal: Some(reason.into()),
            elapsed_ms: self.started.elapsed().as_millis(),
        }
    }

    pub fn finish(self) -> CheckReport {
        let mut laws = self.laws;
        laws.sort_by(|a, b| a.law.cmp(&b.law));
        let status = if laws.iter().all(LawReport::passed) { Status::Pass } else { Status::Fail };
        CheckReport {
            status,
            laws,
            policy: self.policy,
            refusal: None,
            elapsed_ms: self.started.elapsed().as_millis(),
        }
    }
}

fn scan_law<C>(
    name: &str,
    space: u128,
    policy: &Policy,
    execution: Execution,
    sampler: Option<&dyn Fn(&mut ChaCha12Rng) -> Option<u128>>,
    check: C,
) -> LawReport
where
    C: Fn(u128) -> Option<Counterexample> + Sync,
{
    if space <= policy.threshold {
        let n = space as u64;
        match min_violation(execution, n, |i| check(i as u128)) {
            Some((idx, cx)) => LawReport {
                law: name.to_string(),
                cases: idx,
                mode: ScanMode::Exhaustive,
                counterexample: Some(cx),
            },
            None => LawReport {
                law: name.to_string(),
                cases: n,
                mode: ScanMode::Exhaustive,
                counterexample: None,
            },
        }
    } else {
        // Draw the sample list single-threaded so the case sequence depends
        // only on (seed, samples); evaluation order is then irrelevant.
        let mut rng = ChaCha12Rng::seed_from_u64(policy.seed);
        let mut cases = Vec::with_capacity(policy.samples as usize);
        while cases.len() < policy.samples as usize {
            let drawn = match sampler {
                Some(s) => {
                    let mut attempt = None;
                    for _ in 0..64 {
                        if let Some(c) = s(&mut rng) {
                            attempt = Some(c);
                            break;
                        }
                    }
                    attempt.unwrap_or_else(|| rng.gen_range(0..space))
                }
                None => rng.gen_range(0..space),
            };
            cases.push(drawn);
        }
        match min_violation(execution, cases.len() as u64, |i| check(cases[i as usize])) {
            Some((idx, cx)) => LawReport {
                law: name.to_string(),
                cases: idx,
                mode: ScanMode::Sampled,
                counterexample: Some(cx),
            },
            None => LawReport {
                law: name.to_string(),
                cases: policy.samples,
                mode: ScanMode::Sampled,
                counterexample: None,
            },
        }
    }
}

/// Least index with a violation, independent of scheduling.
fn min_violation<C>(execution: Execution, n: u64, check: C) -> Option<(u64, Counterexample)>
where
    C: Fn(u64) -> Option<Counterexample> + Sync,
{
    match execution {
        Execution::Sequential => min_violation_seq(n, check),
        Execution::Parallel => min_violation_par(n, check),
    }
}

fn min_violation_seq<C>(n: u64, check: C) -> Option<(u64, Counterexample)>
where
    C: Fn(u64) -> Option<Counterexample>,
{
    (0..n).find_map(|i| check(i).map(|cx| (i, cx)))
}

#[cfg(feature = "parallel")]
fn min_violation_par<C>(n: u64, check: C) -> Option<(u64, Counterexample)>
where
    C: Fn(u64) -> Option<Counterexample> + Sync,
{
    (0..n)
        .into_par_iter()
        .filter_map(|i| check(i).map(|cx| (i, cx)))
        .min_by_key(|(i, _)| *i)
}

#[cfg(not(feature = "parallel"))]
fn min_violation_par<C>(n: u64, check: C) -> Option<(u64, Counterexample)>
where
    C: Fn(u64) -> Option<Counterexample> + Sync,
{
    min_violation_seq(n, check)
}

/// Mixed-radix decoding of tuple indices. Component 0 varies slowest, so
/// index order is lexicographic order on the decoded tuple.
#[derive(Debug, Clone)]
pub struct Radix {
    dims: Vec<u128>,
}

impl Radix {
    pub fn new(dims: &[u128]) -> Self {
        Radix { dims: dims.to_vec() }
    }

    pub fn space(&self) -> u128 {
        self.dims.iter().product()
    }

    pub fn decode(&self, mut idx: u128) -> Vec<u64> {
        let mut out = vec![0u64; self.dims.len()];
        for k in (0..self.dims.len()).rev() {
            out[k] = (idx % self.dims[k]) as u64;
            idx /= self.dims[k];
        }
        out
    }

    pub fn encode(&self, tuple: &[u64]) -> u128 {
        let mut idx = 0u128;
        for (k, &t) in tuple.iter().enumerate() {
            idx = idx * self.dims[k] + t as u128;
        }
        idx
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("enumeration bound exceeded: {0}")]
    Bound(String),
    #[error("precondition refused: {0}")]
    Refused(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
    pub fn bound(msg: impl Into<String>) -> Self {
        Error::Bound(msg.into())
    }
    pub fn refused(msg: impl Into<String>) -> Self {
        Error::Refused(msg.into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exhaustive_reports_least_violation() {
        let policy = Policy::default();
        let mut c = Checker::new(&policy);
        c.law("divisible", 100, |i| {
            if i % 7 == 3 {
                Some(Counterexample::new(vec![i.to_string()], "bad", "good"))
            } else {
                None
            }
        });
        let report = c.finish();
        assert_eq!(report.status, Status::Fail);
        let law = report.law("divisible").unwrap();
        assert_eq!(law.counterexample.as_ref().unwrap().tuple, vec!["3"]);
        assert_eq!(law.cases, 3);
    }

    #[test]
    fn exhaustive_pass_counts_full_space() {
        let policy = Policy::default();
        let mut c = Checker::new(&policy);
        c.law("vacuous", 1234, |_| None);
        let report = c.finish();
        assert_eq!(report.law("vacuous").unwrap().cases, 1234);
        assert!(report.passed());
    }

    #[test]
    fn sampled_reports_are_reproducible() {
        let policy = Policy { samples: 500, seed: 42, threshold: 10 };
        let run = || {
            let mut c = Checker::new(&policy);
            c.law("sampled", 1 << 40, |i| {
                if i % 1000 == 17 {
                    Some(Counterexample::new(vec![i.to_string()], "l", "r"))
                } else {
                    None
                }
            });
            c.finish().to_json()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let policy = Policy { samples: 200, seed: 9, threshold: 100_000 };
        let check = |i: u128| {
            if i == 77_777 {
                Some(Counterexample::new(vec![i.to_string()], "l", "r"))
            } else {
                None
            }
        };
        let mut a = Checker::new(&policy);
        a.law("x", 100_000, check);
        let mut b = Checker::sequential(&policy);
        b.law("x", 100_000, check);
        assert_eq!(a.finish().to_json(), b.finish().to_json());
    }

    #[test]
    fn radix_roundtrip() {
        let r = Radix::new(&[3, 5, 7]);
        assert_eq!(r.space(), 105);
        for i in 0..105u128 {
            let t = r.decode(i);
            assert_eq!(r.encode(&t), i);
        }
        assert_eq!(r.decode(0), vec![0, 0, 0]);
        assert_eq!(r.decode(104), vec![2, 4, 6]);
    }
}
