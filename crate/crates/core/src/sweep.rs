//! Deterministic randomized sweeps comparing computed and predicted lattices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{check_h_relations, check_racah_relations, zeta_pullback};
use crate::catalog::{build_h, irreducibility_criterion, Family, ModuleSpec, Twist};
use crate::lattice::{compare_with_prediction, predicted_lattice, submodule_lattice, Shape};
use crate::rational::{frac, int, Rational};

/// Attempts at drawing an irreducible point before a trial is skipped.
const MAX_RESAMPLES: usize = 200;
const NUMERATOR_BOUND: i64 = 50;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SweepError {
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("d_max must be at least 1")]
    DMaxTooSmall,
    #[error("denominator bound must be at least 1")]
    BadDenominator,
    #[error("no families selected")]
    NoFamilies,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub families: Vec<Family>,
    /// Twists applied to family `E`. Family `O` is always untwisted.
    pub twists: Vec<Twist>,
    pub d_max: u32,
    pub trials: usize,
    pub seed: u64,
    pub denominator_bound: i64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            families: vec![Family::E, Family::O],
            twists: Twist::ALL.to_vec(),
            d_max: 9,
            trials: 100,
            seed: 0,
            denominator_bound: 6,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), SweepError> {
        if self.trials == 0 {
            return Err(SweepError::NoTrials);
        }
        if self.d_max == 0 {
            return Err(SweepError::DMaxTooSmall);
        }
        if self.denominator_bound < 1 {
            return Err(SweepError::BadDenominator);
        }
        if self.families.is_empty() || self.families.iter().all(|f| *f == Family::R) {
            return Err(SweepError::NoFamilies);
        }
        Ok(())
    }

    /// `(family, twist)` slots sampled by generic trials, in a fixed order.
    fn slots(&self) -> Vec<(Family, Twist)> {
        let mut out = Vec::new();
        if self.families.contains(&Family::E) {
            let mut tw = self.twists.clone();
            if tw.is_empty() {
                tw.push(Twist::PlusPlus);
            }
            tw.sort();
            tw.dedup();
            out.extend(tw.into_iter().map(|t| (Family::E, t)));
        }
        if self.families.contains(&Family::O) {
            out.push((Family::O, Twist::PlusPlus));
        }
        out
    }

    /// The measure-zero branches each run must exercise.
    fn forced(&self) -> Vec<Branch> {
        let mut out = Vec::new();
        for (family, twist) in self.slots() {
            match (family, twist) {
                (Family::E, Twist::PlusPlus) => out.push(Branch::EDimOne),
                (Family::E, t) => out.push(Branch::TwistZero(t)),
                (Family::O, _) => {
                    if self.d_max >= 2 {
                        out.push(Branch::OSigmaZero);
                    }
                    out.push(Branch::ODimZero);
                }
                _ => {}
            }
        }
        out
    }
}

/// How the parameters of one trial are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Branch {
    Generic(Family, Twist),
    /// The twisted `E` branch where the distinguished parameter is zero.
    TwistZero(Twist),
    EDimOne,
    OSigmaZero,
    ODimZero,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialFailure {
    pub trial: usize,
    pub spec: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedTrial {
    pub trial: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub trials: usize,
    pub passed: usize,
    pub skipped: usize,
    pub failures: Vec<TrialFailure>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skipped_trials: Vec<SkippedTrial>,
}

impl SweepSummary {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Outcome {
    Passed,
    Skipped(String),
    Failed(String, String),
}

fn random_rational(rng: &mut ChaCha8Rng, den_bound: i64) -> Rational {
    let num = rng.gen_range(-NUMERATOR_BOUND..=NUMERATOR_BOUND);
    let den = rng.gen_range(1..=den_bound);
    frac(num, den)
}

fn random_d(rng: &mut ChaCha8Rng, family: Family, lo: u32, d_max: u32) -> Option<u32> {
    let parity = if family == Family::E { 1 } else { 0 };
    let choices: Vec<u32> = (lo..=d_max).filter(|d| d % 2 == parity).collect();
    if choices.is_empty() {
        None
    } else {
        Some(choices[rng.gen_range(0..choices.len())])
    }
}

fn sample(branch: Branch, rng: &mut ChaCha8Rng, cfg: &SweepConfig) -> Option<ModuleSpec> {
    let mut q = || random_rational(rng, cfg.denominator_bound);
    let (family, eps, mut a, mut b, mut c) = match branch {
        Branch::Generic(f, t) => (f, t, q(), q(), q()),
        Branch::TwistZero(t) => (Family::E, t, q(), q(), q()),
        Branch::EDimOne => (Family::E, Twist::PlusPlus, q(), q(), q()),
        Branch::OSigmaZero | Branch::ODimZero => (Family::O, Twist::PlusPlus, q(), q(), q()),
    };
    let d = match branch {
        Branch::EDimOne => 1,
        Branch::ODimZero => 0,
        Branch::OSigmaZero => random_d(rng, Family::O, 2, cfg.d_max)?,
        _ => random_d(rng, family, 0, cfg.d_max)?,
    };
    match branch {
        Branch::TwistZero(Twist::PlusMinus) => a = int(0),
        Branch::TwistZero(Twist::MinusPlus) => b = int(0),
        Branch::TwistZero(_) => c = int(0),
        Branch::OSigmaZero => c = frac(d as i64 + 1, 2) - &a - &b,
        _ => {}
    }
    ModuleSpec::new(family, d, a, b, c, eps).ok()
}

/// Runs every check for one module and reports the first failure.
pub fn check_spec(spec: &ModuleSpec) -> Result<(), String> {
    let h = build_h(spec).map_err(|e| e.to_string())?;
    let rel = check_h_relations(&h);
    if !rel.ok {
        return Err(format!(
            "H relations fail: {:?}",
            rel.violations.iter().map(|v| &v.name).collect::<Vec<_>>()
        ));
    }
    let racah = check_racah_relations(&zeta_pullback(&h));
    if !racah.ok {
        return Err(format!(
            "Racah relations fail: {:?}",
            racah.violations.iter().map(|v| &v.name).collect::<Vec<_>>()
        ));
    }
    let report = submodule_lattice(&h).map_err(|e| e.to_string())?;
    let predicted = predicted_lattice(spec).map_err(|e| e.to_string())?;
    let cmp = compare_with_prediction(&report, &predicted);
    if !cmp.matches {
        return Err(cmp.mismatches.join("; "));
    }
    if !report.all_subquotients_verified() {
        return Err("some subquotient did not verify".into());
    }
    let by_shape = matches!(report.shape, Shape::Simple | Shape::Diamond);
    if report.t0_diagonalizable != by_shape
        || report.t0_diagonalizable != report.atoms_span_everything()
    {
        return Err(
            "complete reducibility, t0-diagonalizability and lattice shape disagree".into(),
        );
    }
    Ok(())
}

fn run_trial(cfg: &SweepConfig, branch: Branch, trial: usize) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(trial as u64);
    for _ in 0..MAX_RESAMPLES {
        let Some(spec) = sample(branch, &mut rng, cfg) else {
            return Outcome::Skipped("no admissible d for this branch".into());
        };
        if !irreducibility_criterion(&spec) {
            continue;
        }
        return match check_spec(&spec) {
            Ok(()) => Outcome::Passed,
            Err(reason) => Outcome::Failed(spec.to_string(), reason),
        };
    }
    Outcome::Skipped(format!("no irreducible point after {MAX_RESAMPLES} draws"))
}

/// The branch used by each trial: forced branches first, then generic
/// trials cycling through the `(family, twist)` slots.
fn plan(cfg: &SweepConfig) -> Vec<Branch> {
    let forced = cfg.forced();
    let slots = cfg.slots();
    (0..cfg.trials)
        .map(|i| {
            if i < forced.len() {
                forced[i]
            } else {
                let (f, t) = slots[(i - forced.len()) % slots.len()];
                Branch::Generic(f, t)
            }
        })
        .collect()
}

/// Runs the sweep. Trials run in parallel; the summary is assembled in trial
/// order and depends only on the configuration.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepSummary, SweepError> {
    cfg.validate()?;
    let branches = plan(cfg);
    let outcomes: Vec<Outcome> = branches
        .par_iter()
        .enumerate()
        .map(|(i, &b)| run_trial(cfg, b, i))
        .collect();
    let mut summary = SweepSummary {
        trials: cfg.trials,
        passed: 0,
        skipped: 0,
        failures: Vec::new(),
        skipped_trials: Vec::new(),
    };
    for (trial, o) in outcomes.into_iter().enumerate() {
        match o {
            Outcome::Passed => summary.passed += 1,
            Outcome::Skipped(reason) => {
                summary.skipped += 1;
                summary.skipped_trials.push(SkippedTrial { trial, reason });
            }
            Outcome::Failed(spec, reason) => summary.failures.push(TrialFailure {
                trial,
                spec,
                reason,
            }),
        }
    }
    Ok(summary)
}
