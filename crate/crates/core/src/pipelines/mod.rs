//! End-to-end verification pipelines. Each turns `(field, seed)` into a
//! concrete instance and a [`CheckReport`].
//!
//! Sampling stages resample until their genericity gates pass, up to a cap.
//! A stage that runs out of attempts marks the report `exhausted`; a check
//! failing on an instance that passed every gate marks it `failed`.

use std::collections::BTreeMap;
use std::fmt::Display;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

mod genus3_even;
mod genus3_odd;
mod genus4_odd;
mod genus4_spin3;

pub use genus3_even::{genus3_spin4_even, Genus3Spin4EvenInstance};
pub use genus3_odd::{genus3_spin4_odd, sigma_system, Genus3Spin4OddInstance};
pub use genus4_odd::{
    genus4_odd_invariants, genus4_odd_sample, invariant_system, six_line_candidates,
    Genus4OddInstance,
};
pub use genus4_spin3::{
    bundle_fiber_dims, genus4_spin3_forward, genus4_spin3_inverse, genus4_spin3_roundtrip,
    Genus4Spin3Instance,
};

pub const DEFAULT_RESAMPLE_CAP: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PipelineConfig {
    pub field: Field,
    pub seed: u64,
    pub resample_cap: usize,
}

impl PipelineConfig {
    pub fn new(field: Field, seed: u64) -> Self {
        Self {
            field,
            seed,
            resample_cap: DEFAULT_RESAMPLE_CAP,
        }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.resample_cap = cap;
        self
    }

    pub(crate) fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Passed,
    Failed,
    Exhausted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub anchor: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub prime: Field,
    pub seed: Option<u64>,
    /// Total rejected samples over all stages.
    pub resamples: usize,
    pub stages: BTreeMap<String, usize>,
    pub status: Status,
    pub checks: Vec<Check>,
    pub observations: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<Value>,
}

impl CheckReport {
    pub fn new(name: &str, field: Field, seed: Option<u64>) -> Self {
        Self {
            name: name.into(),
            prime: field,
            seed,
            resamples: 0,
            stages: BTreeMap::new(),
            status: Status::Passed,
            checks: Vec::new(),
            observations: BTreeMap::new(),
            error: None,
            instance: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Passed
    }

    pub fn check(
        &mut self,
        name: &str,
        anchor: &str,
        expected: impl Display,
        actual: impl Display,
        pass: bool,
    ) -> bool {
        self.checks.push(Check {
            name: name.into(),
            anchor: anchor.into(),
            expected: expected.to_string(),
            actual: actual.to_string(),
            pass,
        });
        pass
    }

    pub fn check_eq<T: PartialEq + Display>(
        &mut self,
        name: &str,
        anchor: &str,
        expected: T,
        actual: T,
    ) -> bool {
        let pass = expected == actual;
        self.check(name, anchor, expected, actual, pass)
    }

    pub fn check_true(&mut self, name: &str, anchor: &str, actual: bool) -> bool {
        self.check_eq(name, anchor, true, actual)
    }

    pub fn check_false(&mut self, name: &str, anchor: &str, actual: bool) -> bool {
        self.check_eq(name, anchor, false, actual)
    }

    pub fn observe(&mut self, key: &str, value: impl Serialize) {
        self.observations.insert(
            key.into(),
            serde_json::to_value(value).unwrap_or(Value::Null),
        );
    }

    pub fn check_named(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Appends the checks and observations of `other` under a prefix.
    pub fn absorb(&mut self, prefix: &str, other: CheckReport) {
        for mut c in other.checks {
            c.name = format!("{prefix}.{}", c.name);
            self.checks.push(c);
        }
        for (k, v) in other.observations {
            self.observations.insert(format!("{prefix}.{k}"), v);
        }
        self.resamples += other.resamples;
        for (k, v) in other.stages {
            *self.stages.entry(format!("{prefix}.{k}")).or_default() += v;
        }
        if other.error.is_some() && self.error.is_none() {
            self.error = other.error;
        }
        match other.status {
            Status::Failed => self.status = Status::Failed,
            Status::Exhausted if self.status == Status::Passed => self.status = Status::Exhausted,
            _ => {}
        }
    }

    /// Settles the status from the checks and the outcome of the run.
    pub(crate) fn finish<T>(mut self, outcome: Result<T>) -> (Option<T>, CheckReport) {
        let value = match outcome {
            Ok(v) => Some(v),
            Err(Error::SearchExhausted { stage, attempts }) => {
                self.status = Status::Exhausted;
                self.error = Some(format!(
                    "stage `{stage}` exhausted after {attempts} attempts"
                ));
                None
            }
            Err(e) => {
                self.status = Status::Failed;
                self.error = Some(e.to_string());
                None
            }
        };
        if self.status == Status::Passed && self.checks.iter().any(|c| !c.pass) {
            self.status = Status::Failed;
        }
        if self.status == Status::Exhausted && self.checks.iter().any(|c| !c.pass) {
            self.status = Status::Failed;
        }
        (value, self)
    }
}

/// Errors that signal a degenerate sample rather than a broken computation.
fn is_degenerate(e: &Error) -> bool {
    matches!(
        e,
        Error::SingularPoint { .. }
            | Error::IdenticallyZero
            | Error::Singular
            | Error::DivisionByZero
            | Error::NotOnCurve
            | Error::SearchExhausted { .. }
    )
}

/// Runs `attempt` until it yields a value, counting rejections.
pub(crate) fn stage<T>(
    report: &mut CheckReport,
    rng: &mut ChaCha8Rng,
    cap: usize,
    name: &str,
    mut attempt: impl FnMut(&mut ChaCha8Rng) -> Result<Option<T>>,
) -> Result<T> {
    let mut rejected = 0;
    let result = loop {
        if rejected >= cap {
            break Err(Error::SearchExhausted {
                stage: name.into(),
                attempts: cap,
            });
        }
        match attempt(rng) {
            Ok(Some(v)) => break Ok(v),
            Ok(None) => rejected += 1,
            Err(e) if is_degenerate(&e) => rejected += 1,
            Err(e) => break Err(e),
        }
    };
    report.resamples += rejected;
    *report.stages.entry(name.into()).or_default() += rejected;
    result
}

pub(crate) fn require_prime(field: Field) -> Result<()> {
    match field {
        Field::Prime(p) if p > 3 => Ok(()),
        Field::Prime(p) => Err(Error::BadCharacteristic(p)),
        Field::Rational => Err(Error::Internal(
            "sampling pipelines need a prime field".into(),
        )),
    }
}

pub(crate) fn strings(p: &[Scalar]) -> Vec<String> {
    p.iter().map(Scalar::to_string).collect()
}

/// The pipelines selectable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PipelineKind {
    Genus4Spin3,
    Genus4Spin3Roundtrip,
    Genus4OddInvariants,
    Genus4OddSample,
    Genus3Spin4Odd,
    Genus3Spin4Even,
    /// Invariants followed by a sampled curve, as run by `all`.
    Genus4Odd,
}

impl PipelineKind {
    pub const ALL: [PipelineKind; 6] = [
        PipelineKind::Genus4Spin3,
        PipelineKind::Genus4Spin3Roundtrip,
        PipelineKind::Genus4OddInvariants,
        PipelineKind::Genus4OddSample,
        PipelineKind::Genus3Spin4Odd,
        PipelineKind::Genus3Spin4Even,
    ];

    /// The composition run by `verify all`.
    pub const SUITE: [PipelineKind; 4] = [
        PipelineKind::Genus4Spin3,
        PipelineKind::Genus4Odd,
        PipelineKind::Genus3Spin4Odd,
        PipelineKind::Genus3Spin4Even,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            PipelineKind::Genus4Spin3 => "genus4-spin3",
            PipelineKind::Genus4Spin3Roundtrip => "genus4-spin3-roundtrip",
            PipelineKind::Genus4OddInvariants => "genus4-odd-invariants",
            PipelineKind::Genus4OddSample => "genus4-odd-sample",
            PipelineKind::Genus3Spin4Odd => "genus3-spin4-odd",
            PipelineKind::Genus3Spin4Even => "genus3-spin4-even",
            PipelineKind::Genus4Odd => "genus4-odd",
        }
    }

    /// Seed-independent pipelines run once regardless of the trial count.
    pub fn is_symbolic(&self) -> bool {
        matches!(self, PipelineKind::Genus4OddInvariants)
    }

    /// Whether the pipeline runs over the rationals.
    pub fn supports_rational(&self) -> bool {
        self.is_symbolic()
    }

    pub fn run(&self, config: &PipelineConfig) -> CheckReport {
        match self {
            PipelineKind::Genus4Spin3 => {
                let (inst, mut report) = genus4_spin3_forward(config);
                if let Some(inst) = inst {
                    report.absorb("fibers", bundle_fiber_dims(&inst));
                    report.absorb("inverse", genus4_spin3_inverse(&inst));
                    report = report.finish::<()>(Ok(())).1;
                }
                report
            }
            PipelineKind::Genus4Spin3Roundtrip => genus4_spin3_roundtrip(config),
            PipelineKind::Genus4OddInvariants => genus4_odd_invariants(config.field),
            PipelineKind::Genus4OddSample => genus4_odd_sample(config).1,
            PipelineKind::Genus3Spin4Odd => genus3_spin4_odd(config).1,
            PipelineKind::Genus3Spin4Even => genus3_spin4_even(config).1,
            PipelineKind::Genus4Odd => {
                let mut report = CheckReport::new(self.name(), config.field, Some(config.seed));
                report.absorb("invariants", genus4_odd_invariants(config.field));
                report.absorb("sample", genus4_odd_sample(config).1);
                report.finish::<()>(Ok(())).1
            }
        }
    }
}

/// Runs seeds `first..first + trials` concurrently; reports come back in
/// seed order.
pub fn run_trials(kind: PipelineKind, base: PipelineConfig, trials: u64) -> Vec<CheckReport> {
    let trials = if kind.is_symbolic() { 1 } else { trials };
    (0..trials)
        .into_par_iter()
        .map(|k| {
            let config = PipelineConfig {
                seed: base.seed + k,
                ..base
            };
            kind.run(&config)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub passed: usize,
    pub failed: usize,
    pub exhausted: usize,
}

impl Tally {
    pub fn of(reports: &[CheckReport]) -> Self {
        let mut t = Tally::default();
        for r in reports {
            match r.status {
                Status::Passed => t.passed += 1,
                Status::Failed => t.failed += 1,
                Status::Exhausted => t.exhausted += 1,
            }
        }
        t
    }

    pub fn add(&mut self, other: Tally) {
        self.passed += other.passed;
        self.failed += other.failed;
        self.exhausted += other.exhausted;
    }

    pub fn total(&self) -> usize {
        self.passed + self.failed + self.exhausted
    }
}
