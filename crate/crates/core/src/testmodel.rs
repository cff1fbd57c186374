//! Diagnostic tests, population snapshots and the expected false counts that
//! result from applying a test once to everybody in a population.

use num_traits::Float;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::real::Real;

/// A diagnostic test characterized by its sensitivity and specificity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticTest<T> {
    label: String,
    sensitivity: T,
    specificity: T,
}

/// Names accepted by [`DiagnosticTest::preset`].
pub const PRESET_NAMES: [&str; 2] = ["hutchison", "biomedomics"];

pub(crate) fn check_probability<T: Real>(name: &'static str, value: T) -> Result<T> {
    if value >= T::zero() && value <= T::one() {
        Ok(value)
    } else {
        Err(Error::InvalidProbability {
            name,
            value: value.to_f64().unwrap_or(f64::NAN),
        })
    }
}

impl<T: Real> DiagnosticTest<T> {
    pub fn new(label: impl Into<String>, sensitivity: T, specificity: T) -> Result<Self> {
        Ok(Self {
            label: label.into(),
            sensitivity: check_probability("sensitivity", sensitivity)?,
            specificity: check_probability("specificity", specificity)?,
        })
    }

    /// Sensitivity 60%, specificity 90%.
    pub fn hutchison() -> Self {
        Self {
            label: "hutchison".into(),
            sensitivity: T::lit(0.60),
            specificity: T::lit(0.90),
        }
    }

    /// IgM/IgG rapid test: sensitivity 88.66%, specificity 90.63%.
    pub fn biomedomics() -> Self {
        Self {
            label: "biomedomics".into(),
            sensitivity: T::lit(0.8866),
            specificity: T::lit(0.9063),
        }
    }

    /// Looks up a built-in test by (case-insensitive) name.
    pub fn preset(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "hutchison" => Ok(Self::hutchison()),
            "biomedomics" => Ok(Self::biomedomics()),
            _ => Err(Error::UnknownPreset(name.to_string())),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn sensitivity(&self) -> T {
        self.sensitivity
    }

    pub fn specificity(&self) -> T {
        self.specificity
    }

    pub fn false_negative_rate(&self) -> T {
        T::one() - self.sensitivity
    }

    pub fn false_positive_rate(&self) -> T {
        T::one() - self.specificity
    }

    /// Factor by which each negative result divides the odds of infection:
    /// `specificity / (1 - sensitivity)`.
    pub fn likelihood_ratio(&self) -> LikelihoodRatio<T> {
        let fnr = self.false_negative_rate();
        if fnr > T::zero() {
            LikelihoodRatio::Finite(self.specificity / fnr)
        } else if self.specificity > T::zero() {
            LikelihoodRatio::Infinite
        } else {
            LikelihoodRatio::Undefined
        }
    }

    /// True iff `specificity > 1 - sensitivity`, i.e. every additional negative
    /// result lowers the chance of a missed carrier. The boundary is excluded.
    pub fn is_informative(&self) -> bool {
        self.specificity > self.false_negative_rate()
    }
}

/// Per-negative likelihood ratio of a test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LikelihoodRatio<T> {
    Finite(T),
    /// Sensitivity is 1 and specificity positive: a negative rules infection out.
    Infinite,
    /// Sensitivity 1 with specificity 0 gives 0/0.
    Undefined,
}

impl<T: Real> LikelihoodRatio<T> {
    pub fn value(self) -> Option<T> {
        match self {
            Self::Finite(v) => Some(v),
            Self::Infinite => Some(T::infinity()),
            Self::Undefined => None,
        }
    }

    /// Natural log of the ratio, `None` when undefined.
    pub(crate) fn ln(self) -> Option<T> {
        self.value().map(Float::ln)
    }
}

/// One day's population snapshot. Counts are real-valued expectations.
///
/// Only the infected and healthy counts are stored so that
/// `infected + healthy == total` holds exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CohortState<T> {
    day: u32,
    infected: T,
    healthy: T,
}

fn check_count<T: Real>(name: &'static str, value: T) -> Result<T> {
    if value.is_finite() && value >= T::zero() {
        Ok(value)
    } else {
        Err(Error::InvalidCount {
            name,
            value: value.to_f64().unwrap_or(f64::NAN),
        })
    }
}

impl<T: Real> CohortState<T> {
    pub fn from_counts(day: u32, infected: T, healthy: T) -> Result<Self> {
        Ok(Self {
            day,
            infected: check_count("infected", infected)?,
            healthy: check_count("healthy", healthy)?,
        })
    }

    /// Builds a state from the population size and the number infected.
    pub fn from_total(day: u32, total: T, infected: T) -> Result<Self> {
        let total = check_count("total", total)?;
        let infected = check_count("infected", infected)?;
        if infected > total {
            return Err(Error::InfectedExceedsTotal {
                infected: infected.as_f64(),
                total: total.as_f64(),
            });
        }
        Self::from_counts(day, infected, total - infected)
    }

    /// Builds a state with `total * prevalence` infected.
    pub fn from_prevalence(day: u32, total: T, prevalence: T) -> Result<Self> {
        let total = check_count("total", total)?;
        let prevalence = check_probability("prevalence", prevalence)?;
        let infected = total * prevalence;
        Self::from_counts(day, infected, total - infected)
    }

    pub fn day(&self) -> u32 {
        self.day
    }

    pub fn total(&self) -> T {
        self.infected + self.healthy
    }

    pub fn infected(&self) -> T {
        self.infected
    }

    pub fn healthy(&self) -> T {
        self.healthy
    }

    /// `infected / total`, or `None` for an empty population.
    pub fn prevalence(&self) -> Option<T> {
        let total = self.total();
        (total > T::zero()).then(|| self.infected / total)
    }
}

fn require_population<T: Real>(state: &CohortState<T>) -> Result<()> {
    if state.total() > T::zero() {
        Ok(())
    } else {
        Err(Error::EmptyPopulation)
    }
}

/// Expected false positives when everybody is tested once:
/// `healthy * (1 - specificity)`.
pub fn expected_false_positives<T: Real>(
    state: &CohortState<T>,
    test: &DiagnosticTest<T>,
) -> Result<T> {
    require_population(state)?;
    Ok(state.healthy * test.false_positive_rate())
}

/// Expected false negatives when everybody is tested once:
/// `infected * (1 - sensitivity)`.
pub fn expected_false_negatives<T: Real>(
    state: &CohortState<T>,
    test: &DiagnosticTest<T>,
) -> Result<T> {
    require_population(state)?;
    Ok(state.infected * test.false_negative_rate())
}
