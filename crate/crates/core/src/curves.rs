//! Dense evaluation grids for plotting false counts and posteriors against
//! test accuracy and prevalence.

use serde::Serialize;

use crate::bayes::{PosteriorKind, RepeatPlan};
use crate::error::Result;
use crate::real::Real;
use crate::testmodel::{
    check_probability, expected_false_negatives, expected_false_positives, CohortState,
    DiagnosticTest,
};

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace<T: Real>(lo: T, hi: T, n: usize) -> Vec<T> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / T::from_usize(n - 1).expect("grid size fits");
            (0..n)
                .map(|i| {
                    if i == n - 1 {
                        hi
                    } else {
                        lo + step * T::from_usize(i).expect("grid size fits")
                    }
                })
                .collect()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CountPoint<T> {
    pub prevalence: T,
    /// Sensitivity for false-negative curves, specificity for false-positive ones.
    pub accuracy: T,
    pub count: T,
}

fn count_curve<T: Real>(
    population: T,
    prevalences: &[T],
    accuracies: &[T],
    count: impl Fn(&CohortState<T>, T) -> Result<T>,
) -> Result<Vec<CountPoint<T>>> {
    let mut out = Vec::with_capacity(prevalences.len() * accuracies.len());
    for &prevalence in prevalences {
        let state = CohortState::from_prevalence(0, population, prevalence)?;
        for &accuracy in accuracies {
            out.push(CountPoint {
                prevalence,
                accuracy,
                count: count(&state, check_probability("accuracy", accuracy)?)?,
            });
        }
    }
    Ok(out)
}

/// Expected false negatives versus sensitivity, one curve per prevalence.
pub fn false_negative_curve<T: Real>(
    population: T,
    prevalences: &[T],
    sensitivities: &[T],
) -> Result<Vec<CountPoint<T>>> {
    count_curve(population, prevalences, sensitivities, |state, sen| {
        expected_false_negatives(state, &DiagnosticTest::new("sweep", sen, T::one())?)
    })
}

/// Expected false positives versus specificity, one curve per prevalence.
pub fn false_positive_curve<T: Real>(
    population: T,
    prevalences: &[T],
    specificities: &[T],
) -> Result<Vec<CountPoint<T>>> {
    count_curve(population, prevalences, specificities, |state, spe| {
        expected_false_positives(state, &DiagnosticTest::new("sweep", T::one(), spe)?)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurfacePoint<T> {
    pub sensitivity: T,
    pub specificity: T,
    pub probability: Option<T>,
}

/// Posterior over a sensitivity x specificity grid at fixed prevalence and `k`.
/// Rows are ordered by sensitivity, then specificity, as given.
pub fn posterior_surface<T: Real>(
    prevalence: T,
    k: u32,
    kind: PosteriorKind,
    sensitivities: &[T],
    specificities: &[T],
) -> Result<Vec<SurfacePoint<T>>> {
    let mut out = Vec::with_capacity(sensitivities.len() * specificities.len());
    for &sensitivity in sensitivities {
        for &specificity in specificities {
            let test = DiagnosticTest::new("sweep", sensitivity, specificity)?;
            let plan = RepeatPlan::new(test, prevalence, k)?;
            out.push(SurfacePoint {
                sensitivity,
                specificity,
                probability: plan.posterior(kind).ok(),
            });
        }
    }
    Ok(out)
}
