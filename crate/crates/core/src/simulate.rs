//! Seeded Monte Carlo estimates of the screening quantities, used as an
//! independent check on the closed forms.
//!
//! # Generator
//!
//! All draws come from ChaCha with 8 rounds (`rand_chacha::ChaCha8Rng`,
//! crate version 0.3), seeded with `SeedableRng::seed_from_u64(seed)`. A
//! uniform variate is the top 53 bits of `next_u64()` scaled by `2^-53`, and
//! a Bernoulli(p) draw is `uniform < p`. Nothing else consumes the stream, so
//! a given configuration produces the same tallies on every platform.
//!
//! Per trial, the true status is drawn first and then the test outcomes in
//! order. Drawing stops at the first outcome that breaks the conditioning
//! pattern.
//!
//! # Partitioned mode
//!
//! [`estimate_posterior_partitioned`] splits the trials into a fixed number
//! of partitions. Partition `i` uses the generator above with its stream set
//! to `i` (`ChaCha8Rng::set_stream(i)`), and the first `trials % partitions`
//! partitions run one extra trial. Its output depends on
//! `(config, partitions)` only, never on the thread count, but differs from
//! the sequential result.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use crate::bayes::PosteriorKind;
use crate::error::{Error, Result};
use crate::real::Real;
use crate::testmodel::{check_probability, DiagnosticTest};

/// Fewest conditioning hits for which the standard error is considered reliable.
pub const MIN_RELIABLE_HITS: u64 = 100;

/// A seeded Monte Carlo experiment on repeated testing.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialConfig<T> {
    pub test: DiagnosticTest<T>,
    pub prevalence: T,
    pub repetitions: u32,
    pub trials: u64,
    pub seed: u64,
}

impl<T: Real> TrialConfig<T> {
    pub fn new(
        test: DiagnosticTest<T>,
        prevalence: T,
        repetitions: u32,
        trials: u64,
        seed: u64,
    ) -> Result<Self> {
        if repetitions == 0 {
            return Err(Error::ZeroRepetitions);
        }
        if trials == 0 {
            return Err(Error::ZeroSize("trials"));
        }
        Ok(Self {
            test,
            prevalence: check_probability("prevalence", prevalence)?,
            repetitions,
            trials,
            seed,
        })
    }
}

/// Outcome counts from testing every simulated individual once.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ScreenTally {
    pub true_positives: u64,
    pub false_positives: u64,
    pub true_negatives: u64,
    pub false_negatives: u64,
}

impl ScreenTally {
    pub fn total(&self) -> u64 {
        self.true_positives + self.false_positives + self.true_negatives + self.false_negatives
    }

    pub fn infected(&self) -> u64 {
        self.true_positives + self.false_negatives
    }

    pub fn healthy(&self) -> u64 {
        self.false_positives + self.true_negatives
    }
}

/// Empirical posterior among trials matching the conditioning pattern.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PosteriorEstimate {
    pub estimate: f64,
    /// Binomial standard error `sqrt(p (1 - p) / hits)`.
    pub standard_error: f64,
    pub conditioning_hits: u64,
    /// Set when fewer than [`MIN_RELIABLE_HITS`] trials matched.
    pub low_hits: bool,
}

impl PosteriorEstimate {
    fn from_counts(infected_hits: u64, hits: u64) -> Result<Self> {
        if hits == 0 {
            return Err(Error::NoConditioningHits);
        }
        let n = hits as f64;
        let estimate = infected_hits as f64 / n;
        Ok(Self {
            estimate,
            standard_error: (estimate * (1.0 - estimate) / n).sqrt(),
            conditioning_hits: hits,
            low_hits: hits < MIN_RELIABLE_HITS,
        })
    }

    /// `|estimate - target|` measured in standard errors. Infinite when the
    /// standard error is zero and the values differ.
    pub fn z_score(&self, target: f64) -> f64 {
        let diff = (self.estimate - target).abs();
        if diff == 0.0 {
            0.0
        } else {
            diff / self.standard_error
        }
    }
}

struct Draws {
    rng: ChaCha8Rng,
}

impl Draws {
    fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng }
    }

    fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform() < p
    }
}

#[derive(Clone, Copy)]
struct Rates {
    prevalence: f64,
    positive_if_infected: f64,
    positive_if_healthy: f64,
}

impl Rates {
    fn of<T: Real>(test: &DiagnosticTest<T>, prevalence: T) -> Self {
        Self {
            prevalence: prevalence.as_f64(),
            positive_if_infected: test.sensitivity().as_f64(),
            positive_if_healthy: test.false_positive_rate().as_f64(),
        }
    }
}

/// Tests a simulated population once and tallies the four outcomes.
pub fn simulate_cohort_screen<T: Real>(
    population: u64,
    prevalence: T,
    test: &DiagnosticTest<T>,
    seed: u64,
) -> Result<ScreenTally> {
    if population == 0 {
        return Err(Error::ZeroSize("population"));
    }
    let rates = Rates::of(test, check_probability("prevalence", prevalence)?);
    let mut draws = Draws::new(seed);
    let mut tally = ScreenTally::default();
    for _ in 0..population {
        let infected = draws.bernoulli(rates.prevalence);
        if infected {
            if draws.bernoulli(rates.positive_if_infected) {
                tally.true_positives += 1;
            } else {
                tally.false_negatives += 1;
            }
        } else if draws.bernoulli(rates.positive_if_healthy) {
            tally.false_positives += 1;
        } else {
            tally.true_negatives += 1;
        }
    }
    Ok(tally)
}

/// Runs `trials` individuals; returns (hits that were infected, hits).
fn run_trials(
    draws: &mut Draws,
    rates: Rates,
    k: u32,
    kind: PosteriorKind,
    trials: u64,
) -> (u64, u64) {
    let mut infected_hits = 0;
    let mut hits = 0;
    for _ in 0..trials {
        let infected = draws.bernoulli(rates.prevalence);
        let p_positive = if infected {
            rates.positive_if_infected
        } else {
            rates.positive_if_healthy
        };
        let matched = match kind {
            PosteriorKind::AllNegative => (0..k).all(|_| !draws.bernoulli(p_positive)),
            PosteriorKind::FirstPositive => {
                (0..k - 1).all(|_| !draws.bernoulli(p_positive)) && draws.bernoulli(p_positive)
            }
        };
        if matched {
            hits += 1;
            infected_hits += u64::from(infected);
        }
    }
    (infected_hits, hits)
}

/// Canonical single-stream estimate of the chosen posterior.
pub fn estimate_posterior<T: Real>(
    config: &TrialConfig<T>,
    kind: PosteriorKind,
) -> Result<PosteriorEstimate> {
    let rates = Rates::of(&config.test, config.prevalence);
    let mut draws = Draws::new(config.seed);
    let (infected_hits, hits) =
        run_trials(&mut draws, rates, config.repetitions, kind, config.trials);
    PosteriorEstimate::from_counts(infected_hits, hits)
}

/// Fraction infected among trials with `k - 1` negatives then a positive.
pub fn estimate_posterior_first_positive<T: Real>(
    config: &TrialConfig<T>,
) -> Result<PosteriorEstimate> {
    estimate_posterior(config, PosteriorKind::FirstPositive)
}

/// Fraction infected among trials with `k` consecutive negatives.
pub fn estimate_posterior_all_negative<T: Real>(
    config: &TrialConfig<T>,
) -> Result<PosteriorEstimate> {
    estimate_posterior(config, PosteriorKind::AllNegative)
}

/// Partitioned estimate; see the module docs for its determinism contract.
pub fn estimate_posterior_partitioned<T: Real>(
    config: &TrialConfig<T>,
    kind: PosteriorKind,
    partitions: u64,
) -> Result<PosteriorEstimate> {
    if partitions == 0 {
        return Err(Error::ZeroSize("partitions"));
    }
    let rates = Rates::of(&config.test, config.prevalence);
    let base = config.trials / partitions;
    let extra = config.trials % partitions;
    let (infected_hits, hits) = (0..partitions)
        .into_par_iter()
        .map(|i| {
            let n = base + u64::from(i < extra);
            let mut draws = Draws::with_stream(config.seed, i);
            run_trials(&mut draws, rates, config.repetitions, kind, n)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    PosteriorEstimate::from_counts(infected_hits, hits)
}
