//! Posterior probability of infection after repeated, independent applications
//! of the same test, and the minimal number of consecutive negatives needed
//! before discharging a patient.
//!
//! Both posteriors are written as `1 / (1 + exp(L))` where `L` is the log-odds
//! *against* infection given the observed results:
//!
//! ```text
//! all negative:          L = k     ln(spe / (1 - sen)) + ln((1 - P) / P)
//! first positive at k:   L = (k-1) ln(spe / (1 - sen)) + ln((1 - spe) / sen) + ln((1 - P) / P)
//! ```
//!
//! Every factor is kept as a logarithm so large `k` never overflows, and a
//! branch of the mixture with probability exactly zero is detected before any
//! `inf - inf` can appear.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::real::Real;
use crate::testmodel::{check_probability, DiagnosticTest};

/// Default miss-probability tolerance for discharge decisions.
pub const DEFAULT_TOLERANCE: f64 = 0.05;

/// Default upper bound on repetitions searched by the discharge solver.
pub const DEFAULT_CAP: u32 = 100;

/// Which conditioning pattern a posterior refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PosteriorKind {
    /// `k - 1` negatives followed by a positive on the k-th test.
    FirstPositive,
    /// `k` consecutive negatives.
    AllNegative,
}

impl PosteriorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::FirstPositive => "first-positive",
            Self::AllNegative => "all-negative",
        }
    }
}

impl fmt::Display for PosteriorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PosteriorKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "first-positive" => Ok(Self::FirstPositive),
            "all-negative" => Ok(Self::AllNegative),
            other => Err(format!(
                "unknown posterior kind `{other}` (expected first-positive or all-negative)"
            )),
        }
    }
}

/// A repeated-testing question.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepeatPlan<T> {
    test: DiagnosticTest<T>,
    prevalence: T,
    repetitions: u32,
    tolerance: T,
}

pub(crate) fn check_tolerance<T: Real>(tolerance: T) -> Result<T> {
    if tolerance > T::zero() && tolerance < T::one() {
        Ok(tolerance)
    } else {
        Err(Error::InvalidTolerance(
            tolerance.to_f64().unwrap_or(f64::NAN),
        ))
    }
}

impl<T: Real> RepeatPlan<T> {
    pub fn new(test: DiagnosticTest<T>, prevalence: T, repetitions: u32) -> Result<Self> {
        if repetitions == 0 {
            return Err(Error::ZeroRepetitions);
        }
        Ok(Self {
            test,
            prevalence: check_probability("prevalence", prevalence)?,
            repetitions,
            tolerance: T::lit(DEFAULT_TOLERANCE),
        })
    }

    pub fn with_tolerance(mut self, tolerance: T) -> Result<Self> {
        self.tolerance = check_tolerance(tolerance)?;
        Ok(self)
    }

    pub fn test(&self) -> &DiagnosticTest<T> {
        &self.test
    }

    pub fn prevalence(&self) -> T {
        self.prevalence
    }

    pub fn repetitions(&self) -> u32 {
        self.repetitions
    }

    pub fn tolerance(&self) -> T {
        self.tolerance
    }

    pub fn posterior(&self, kind: PosteriorKind) -> Result<T> {
        match kind {
            PosteriorKind::FirstPositive => posterior_first_positive_at(self),
            PosteriorKind::AllNegative => posterior_all_negative(self),
        }
    }
}

/// `ln(base^n)` given `ln(base)`, with `0^0 = 1`.
fn ln_pow<T: Real>(ln_base: T, n: u32) -> T {
    if n == 0 {
        T::zero()
    } else {
        T::from_u32(n).expect("u32 fits") * ln_base
    }
}

/// Posterior of the diseased branch given the log-weights of both branches.
fn resolve_branches<T: Real>(ln_diseased: T, ln_healthy: T) -> Result<T> {
    let diseased_empty = ln_diseased == T::neg_infinity();
    let healthy_empty = ln_healthy == T::neg_infinity();
    match (diseased_empty, healthy_empty) {
        (true, true) => Err(Error::ConditioningImpossible),
        (true, false) => Ok(T::zero()),
        (false, true) => Ok(T::one()),
        (false, false) => Ok(T::one() / (T::one() + (ln_healthy - ln_diseased).exp())),
    }
}

struct LogRates<T> {
    sen: T,
    fnr: T,
    spe: T,
    fpr: T,
}

impl<T: Real> LogRates<T> {
    fn of(test: &DiagnosticTest<T>) -> Self {
        let sen = test.sensitivity();
        let spe = test.specificity();
        Self {
            sen: sen.ln(),
            fnr: (-sen).ln_1p(),
            spe: spe.ln(),
            fpr: (-spe).ln_1p(),
        }
    }
}

fn first_positive<T: Real>(test: &DiagnosticTest<T>, prevalence: T, k: u32) -> Result<T> {
    if prevalence == T::zero() {
        return Ok(T::zero());
    }
    if prevalence == T::one() {
        return Ok(T::one());
    }
    let r = LogRates::of(test);
    let ln_diseased = ln_pow(r.fnr, k - 1) + r.sen + prevalence.ln();
    let ln_healthy = ln_pow(r.spe, k - 1) + r.fpr + (-prevalence).ln_1p();
    resolve_branches(ln_diseased, ln_healthy)
}

fn all_negative<T: Real>(test: &DiagnosticTest<T>, prevalence: T, k: u32) -> Result<T> {
    if prevalence == T::zero() {
        return Ok(T::zero());
    }
    let r = LogRates::of(test);
    let ln_diseased = ln_pow(r.fnr, k) + prevalence.ln();
    let ln_healthy = ln_pow(r.spe, k) + (-prevalence).ln_1p();
    resolve_branches(ln_diseased, ln_healthy)
}

/// Probability of infection given that the first `k - 1` results were
/// negative and the k-th was positive.
///
/// Prevalence 0 and 1 return their limits 0 and 1. Fails with
/// [`Error::ConditioningImpossible`] when neither branch can produce the
/// observed pattern (for example sensitivity 0 together with specificity 1).
pub fn posterior_first_positive_at<T: Real>(plan: &RepeatPlan<T>) -> Result<T> {
    first_positive(&plan.test, plan.prevalence, plan.repetitions)
}

/// Probability that a subject with `k` consecutive negative results is in
/// fact infected (a missed carrier).
pub fn posterior_all_negative<T: Real>(plan: &RepeatPlan<T>) -> Result<T> {
    all_negative(&plan.test, plan.prevalence, plan.repetitions)
}

/// Number of consecutive negatives a discharge rule requires.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RequiredNegatives {
    Finite(u32),
    /// The tolerance cannot be met within the solver cap, or ever for a test
    /// that is not informative.
    Unreachable,
}

impl RequiredNegatives {
    pub fn finite(self) -> Option<u32> {
        match self {
            Self::Finite(k) => Some(k),
            Self::Unreachable => None,
        }
    }
}

impl fmt::Display for RequiredNegatives {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(k) => write!(f, "{k}"),
            Self::Unreachable => f.write_str("unreachable"),
        }
    }
}

impl Serialize for RequiredNegatives {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Finite(k) => serializer.serialize_u32(*k),
            Self::Unreachable => serializer.serialize_str("unreachable"),
        }
    }
}

/// Discharge rule for one prevalence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DischargeRow<T> {
    pub prevalence: T,
    pub required_negatives: RequiredNegatives,
    /// Miss probability at the required `k`. For an unreachable row this is
    /// the value at the last `k` examined (1 for a non-informative test, the
    /// cap otherwise).
    pub achieved_miss_probability: T,
}

/// Smallest `k >= 1` whose all-negative posterior is at or below `tolerance`.
///
/// The closed-form bound `k >= ln((1 - tol)/tol * P/(1 - P)) / ln(spe/(1 - sen))`
/// seeds the search; the result is then certified by direct evaluation at
/// `k` (meets tolerance) and `k - 1` (does not).
pub fn min_negatives_to_discharge<T: Real>(
    test: &DiagnosticTest<T>,
    prevalence: T,
    tolerance: T,
    cap: u32,
) -> Result<DischargeRow<T>> {
    let prevalence = check_probability("prevalence", prevalence)?;
    let tolerance = check_tolerance(tolerance)?;
    if cap == 0 {
        return Err(Error::ZeroCap);
    }
    if prevalence == T::one() && test.sensitivity() < T::one() {
        return Err(Error::UnreachableAtAnyK);
    }
    let miss = |k: u32| all_negative(test, prevalence, k);
    let row = |required, achieved| DischargeRow {
        prevalence,
        required_negatives: required,
        achieved_miss_probability: achieved,
    };

    let at_one = miss(1)?;
    if at_one <= tolerance {
        return Ok(row(RequiredNegatives::Finite(1), at_one));
    }
    if !test.is_informative() {
        return Ok(row(RequiredNegatives::Unreachable, at_one));
    }

    // Informative with sensitivity < 1 here, so the log ratio is finite and positive.
    let ln_ratio = test
        .likelihood_ratio()
        .ln()
        .expect("informative test has a defined ratio");
    let target =
        ((-tolerance).ln_1p() - tolerance.ln()) + (prevalence.ln() - (-prevalence).ln_1p());
    let guess = (target / ln_ratio).ceil().to_f64().unwrap_or(f64::INFINITY);
    let mut k = guess.clamp(1.0, f64::from(cap) + 1.0) as u32;

    while k > 1 && miss(k - 1)? <= tolerance {
        k -= 1;
    }
    while k <= cap && miss(k)? > tolerance {
        k += 1;
    }
    if k > cap {
        return Ok(row(RequiredNegatives::Unreachable, miss(cap)?));
    }
    Ok(row(RequiredNegatives::Finite(k), miss(k)?))
}

/// Largest prevalence at which `k` consecutive negatives keep the miss
/// probability at or below `tolerance`: `R / (1 + R)` with
/// `R = (spe/(1 - sen))^k * tol/(1 - tol)`.
pub fn max_prevalence_for_k<T: Real>(test: &DiagnosticTest<T>, k: u32, tolerance: T) -> Result<T> {
    if k == 0 {
        return Err(Error::ZeroRepetitions);
    }
    let tolerance = check_tolerance(tolerance)?;
    if !test.is_informative() {
        return Err(Error::NotInformative);
    }
    let ln_ratio = test
        .likelihood_ratio()
        .ln()
        .expect("informative test has a defined ratio");
    if ln_ratio == T::infinity() {
        return Ok(T::one());
    }
    let ln_r = ln_pow(ln_ratio, k) + tolerance.ln() - (-tolerance).ln_1p();
    Ok(T::one() / (T::one() + (-ln_r).exp()))
}

/// One discharge row per prevalence. Rows that cannot meet the tolerance are
/// reported as unreachable rather than failing the table.
pub fn discharge_table<T: Real>(
    test: &DiagnosticTest<T>,
    prevalences: &[T],
    tolerance: T,
    cap: u32,
) -> Result<Vec<DischargeRow<T>>> {
    if prevalences.is_empty() {
        return Err(Error::EmptyPrevalences);
    }
    if let Some(&bad) = prevalences
        .iter()
        .find(|&&p| !(p >= T::zero() && p < T::one()))
    {
        return Err(Error::PrevalenceOutOfRange(bad.as_f64()));
    }
    prevalences
        .par_iter()
        .map(|&p| min_negatives_to_discharge(test, p, tolerance, cap))
        .collect()
}

/// One evaluated point of a posterior curve. `probability` is `None` where
/// the conditioning pattern is impossible.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint<T> {
    pub k: u32,
    pub prevalence: T,
    pub probability: Option<T>,
}

/// Evaluates the chosen posterior on the grid `k_values x prevalence_grid`.
/// Rows are ordered by `k`, then prevalence, both ascending.
pub fn posterior_curve<T: Real>(
    test: &DiagnosticTest<T>,
    prevalence_grid: &[T],
    k_values: &[u32],
    kind: PosteriorKind,
) -> Result<Vec<CurvePoint<T>>> {
    for &p in prevalence_grid {
        check_probability("prevalence", p)?;
    }
    if k_values.contains(&0) {
        return Err(Error::ZeroRepetitions);
    }
    let mut grid = prevalence_grid.to_vec();
    grid.sort_by(|a, b| a.partial_cmp(b).expect("validated probabilities"));
    let mut ks = k_values.to_vec();
    ks.sort_unstable();

    let points = ks
        .iter()
        .flat_map(|&k| grid.iter().map(move |&p| (k, p)))
        .map(|(k, prevalence)| {
            let value = match kind {
                PosteriorKind::FirstPositive => first_positive(test, prevalence, k),
                PosteriorKind::AllNegative => all_negative(test, prevalence, k),
            };
            CurvePoint {
                k,
                prevalence,
                probability: value.ok(),
            }
        })
        .collect();
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute force over every outcome sequence of length `k`: sums the joint
    /// probability of sequences matching the pattern under each true status.
    fn enumerate(sen: f64, spe: f64, prevalence: f64, k: u32, kind: PosteriorKind) -> f64 {
        let mut matching = [0.0_f64; 2];
        for (status, total) in matching.iter_mut().enumerate() {
            let p_pos = if status == 1 { sen } else { 1.0 - spe };
            let prior = if status == 1 {
                prevalence
            } else {
                1.0 - prevalence
            };
            for outcomes in 0u32..(1 << k) {
                let positive = |i: u32| outcomes & (1 << i) != 0;
                let hit = match kind {
                    PosteriorKind::AllNegative => outcomes == 0,
                    PosteriorKind::FirstPositive => {
                        (0..k - 1).all(|i| !positive(i)) && positive(k - 1)
                    }
                };
                if hit {
                    let prob: f64 = (0..k)
                        .map(|i| if positive(i) { p_pos } else { 1.0 - p_pos })
                        .product();
                    *total += prior * prob;
                }
            }
        }
        matching[1] / (matching[0] + matching[1])
    }

    fn hutchison() -> DiagnosticTest<f64> {
        DiagnosticTest::hutchison()
    }

    fn biomedomics() -> DiagnosticTest<f64> {
        DiagnosticTest::biomedomics()
    }

    fn plan(test: DiagnosticTest<f64>, p: f64, k: u32) -> RepeatPlan<f64> {
        RepeatPlan::new(test, p, k).unwrap()
    }

    fn assert_rel(actual: f64, expected: f64, tol: f64) {
        let err = (actual - expected).abs() / expected.abs();
        assert!(
            err <= tol,
            "actual {actual}, expected {expected}, rel err {err}"
        );
    }

    #[test]
    fn oracle_reproduces_frozen_values() {
        // Reference values computed independently of this crate and frozen.
        assert_rel(
            enumerate(0.8866, 0.9063, 0.5, 1, PosteriorKind::FirstPositive),
            0.904_417_015_199_428_6,
            1e-13,
        );
        assert_rel(
            enumerate(0.6, 0.9, 0.2, 2, PosteriorKind::AllNegative),
            0.047_058_823_529_411_77,
            1e-13,
        );
        assert_rel(
            enumerate(0.6, 0.9, 0.5, 3, PosteriorKind::AllNegative),
            0.080_706_179_066_834_8,
            1e-13,
        );
    }

    #[test]
    fn first_positive_examples() {
        assert_eq!(
            posterior_first_positive_at(&plan(hutchison(), 1.0, 3)).unwrap(),
            1.0
        );

        let k1 = posterior_first_positive_at(&plan(biomedomics(), 0.5, 1)).unwrap();
        assert_rel(k1, 0.904_417_015_199_428_6, 1e-12);
        assert_rel(
            k1,
            enumerate(0.8866, 0.9063, 0.5, 1, PosteriorKind::FirstPositive),
            1e-12,
        );

        let k6 = posterior_first_positive_at(&plan(biomedomics(), 0.5, 6)).unwrap();
        assert_rel(
            k6,
            enumerate(0.8866, 0.9063, 0.5, 6, PosteriorKind::FirstPositive),
            1e-12,
        );
        assert_rel(k6, 2.901_132_044_261_529e-4, 1e-9);

        let low = posterior_first_positive_at(&plan(hutchison(), 0.1, 3)).unwrap();
        assert_rel(low, 0.116_363_636_363_636_4, 1e-12);
    }

    #[test]
    fn all_negative_examples() {
        let a = posterior_all_negative(&plan(hutchison(), 0.2, 2)).unwrap();
        assert_rel(a, 1.0 / (1.0 + 2.25_f64.powi(2) * 4.0), 1e-12);
        assert_rel(a, 0.047_058_823_529_411_77, 1e-12);

        for k in [1, 5, 200] {
            assert_eq!(
                posterior_all_negative(&plan(biomedomics(), 0.0, k)).unwrap(),
                0.0
            );
        }

        let b = posterior_all_negative(&plan(hutchison(), 0.5, 3)).unwrap();
        assert_rel(b, 1.0 / (1.0 + 11.390625), 1e-12);
        assert!(b > DEFAULT_TOLERANCE);
    }

    #[test]
    fn large_k_stays_finite() {
        let p = plan(hutchison(), 0.5, 1000);
        let miss = posterior_all_negative(&p).unwrap();
        assert!((0.0..1e-300).contains(&miss), "{miss}");
        let fp = posterior_first_positive_at(&p).unwrap();
        assert!(fp.is_finite() && fp >= 0.0);

        // Non-informative test: the odds swing the other way and must reach 1, not NaN.
        let bad = DiagnosticTest::new("bad", 0.3, 0.3).unwrap();
        let miss = posterior_all_negative(&plan(bad, 0.5, 1000)).unwrap();
        assert_eq!(miss, 1.0);
    }

    #[test]
    fn degenerate_tests_resolve_to_limits() {
        let perfect_sens = DiagnosticTest::new("s1", 1.0, 0.7).unwrap();
        assert_eq!(
            posterior_all_negative(&plan(perfect_sens.clone(), 0.9, 1)).unwrap(),
            0.0
        );

        let zero_spec = DiagnosticTest::new("z", 0.6, 0.0).unwrap();
        assert_eq!(
            posterior_all_negative(&plan(zero_spec, 0.3, 2)).unwrap(),
            1.0
        );

        let useless = DiagnosticTest::new("u", 1.0, 0.0).unwrap();
        assert!(matches!(
            posterior_all_negative(&plan(useless, 0.3, 2)),
            Err(Error::ConditioningImpossible)
        ));

        let blind = DiagnosticTest::new("blind", 0.0, 1.0).unwrap();
        assert!(matches!(
            posterior_first_positive_at(&plan(blind, 0.4, 1)),
            Err(Error::ConditioningImpossible)
        ));

        // k = 1 with sensitivity 1: (1 - sen)^0 is 1, not 0^0 = NaN.
        let v = posterior_first_positive_at(&plan(perfect_sens, 0.5, 1)).unwrap();
        assert_rel(v, 1.0 / (1.0 + 0.3), 1e-12);
    }

    #[test]
    fn plan_validation() {
        assert!(matches!(
            RepeatPlan::new(hutchison(), 0.5, 0),
            Err(Error::ZeroRepetitions)
        ));
        assert!(RepeatPlan::new(hutchison(), 1.5, 1).is_err());
        let p = plan(hutchison(), 0.5, 2);
        assert_eq!(p.tolerance(), 0.05);
        assert!(p.clone().with_tolerance(0.0).is_err());
        assert!(p.clone().with_tolerance(1.0).is_err());
        assert_eq!(p.with_tolerance(0.01).unwrap().tolerance(), 0.01);
    }

    #[test]
    fn discharge_examples() {
        let k = |p| {
            min_negatives_to_discharge(&hutchison(), p, 0.05, DEFAULT_CAP)
                .unwrap()
                .required_negatives
        };
        assert_eq!(k(0.20), RequiredNegatives::Finite(2));
        assert_eq!(k(0.40), RequiredNegatives::Finite(4));
        assert_eq!(k(0.50), RequiredNegatives::Finite(4));
        assert_eq!(k(0.70), RequiredNegatives::Finite(5));
        assert_eq!(k(0.80), RequiredNegatives::Finite(6));
        assert_eq!(k(0.0), RequiredNegatives::Finite(1));

        let row = min_negatives_to_discharge(&hutchison(), 0.4, 0.05, DEFAULT_CAP).unwrap();
        assert_rel(
            row.achieved_miss_probability,
            0.025_352_810_101_510_276,
            1e-12,
        );
        let at_three = posterior_all_negative(&plan(hutchison(), 0.4, 3)).unwrap();
        assert_rel(at_three, 0.055_291_576_673_866_104, 1e-12);
    }

    #[test]
    fn discharge_edge_cases() {
        assert!(matches!(
            min_negatives_to_discharge(&hutchison(), 1.0, 0.05, DEFAULT_CAP),
            Err(Error::UnreachableAtAnyK)
        ));
        let coin = DiagnosticTest::new("coin", 0.5, 0.5).unwrap();
        let row = min_negatives_to_discharge(&coin, 0.5, 0.05, DEFAULT_CAP).unwrap();
        assert_eq!(row.required_negatives, RequiredNegatives::Unreachable);
        assert_rel(row.achieved_miss_probability, 0.5, 1e-12);

        // Non-informative but already under tolerance at k = 1.
        let row = min_negatives_to_discharge(&coin, 0.01, 0.05, DEFAULT_CAP).unwrap();
        assert_eq!(row.required_negatives, RequiredNegatives::Finite(1));

        let row = min_negatives_to_discharge(&hutchison(), 0.999_999, 1e-6, 3).unwrap();
        assert_eq!(row.required_negatives, RequiredNegatives::Unreachable);
        assert!(matches!(
            min_negatives_to_discharge(&hutchison(), 0.5, 0.05, 0),
            Err(Error::ZeroCap)
        ));
    }

    #[test]
    fn max_prevalence_examples() {
        let two = max_prevalence_for_k(&hutchison(), 2, 0.05).unwrap();
        assert_rel(two, 0.210_389_610_389_610_4, 1e-12);
        let miss = posterior_all_negative(&plan(hutchison(), two, 2)).unwrap();
        assert!((miss - 0.05).abs() <= 1e-12);

        let three = max_prevalence_for_k(&hutchison(), 3, 0.05).unwrap();
        assert_rel(three, 0.374_807_197_943_444_75, 1e-12);

        let mut last = 0.0;
        for k in 1..=20 {
            let p = max_prevalence_for_k(&biomedomics(), k, 0.05).unwrap();
            assert!(p > last || p == 1.0);
            last = p;
        }
        let coin = DiagnosticTest::new("coin", 0.5, 0.5).unwrap();
        assert!(matches!(
            max_prevalence_for_k(&coin, 3, 0.05),
            Err(Error::NotInformative)
        ));
    }

    #[test]
    fn discharge_table_examples() {
        let rows = discharge_table(&hutchison(), &[0.2, 0.5, 0.7, 0.8], 0.05, DEFAULT_CAP).unwrap();
        let ks: Vec<_> = rows
            .iter()
            .map(|r| r.required_negatives.finite().unwrap())
            .collect();
        assert_eq!(ks, [2, 4, 5, 6]);

        let perfect = DiagnosticTest::new("perfect", 1.0, 1.0).unwrap();
        let rows = discharge_table(&perfect, &[0.0, 0.3, 0.99], 0.05, DEFAULT_CAP).unwrap();
        assert!(rows
            .iter()
            .all(|r| r.required_negatives == RequiredNegatives::Finite(1)));

        let rows = discharge_table(&biomedomics(), &[0.5], 0.05, DEFAULT_CAP).unwrap();
        assert_eq!(rows[0].required_negatives, RequiredNegatives::Finite(2));
        assert_rel(
            rows[0].achieved_miss_probability,
            0.015_414_714_663_689_091,
            1e-12,
        );

        assert!(matches!(
            discharge_table(&hutchison(), &[], 0.05, DEFAULT_CAP),
            Err(Error::EmptyPrevalences)
        ));
        assert!(matches!(
            discharge_table(&hutchison(), &[0.2, 1.0], 0.05, DEFAULT_CAP),
            Err(Error::PrevalenceOutOfRange(_))
        ));
    }

    #[test]
    fn curve_examples() {
        let ends = posterior_curve(
            &biomedomics(),
            &[1.0, 0.0],
            &[1],
            PosteriorKind::AllNegative,
        )
        .unwrap();
        assert_eq!(ends[0].prevalence, 0.0);
        assert_eq!(ends[0].probability, Some(0.0));
        assert_eq!(ends[1].probability, Some(1.0));

        let high =
            posterior_curve(&hutchison(), &[0.85], &[3], PosteriorKind::AllNegative).unwrap();
        assert_rel(
            high[0].probability.unwrap(),
            1.0 / (1.0 + 11.390625 * (0.15 / 0.85)),
            1e-12,
        );
        assert_rel(high[0].probability.unwrap(), 0.332_213_740_458_015_2, 1e-12);

        let fp =
            posterior_curve(&biomedomics(), &[0.6], &[4], PosteriorKind::FirstPositive).unwrap();
        assert_rel(fp[0].probability.unwrap(), 0.027_051_567_877_401_945, 1e-12);

        let grid = posterior_curve(
            &hutchison(),
            &[0.5, 0.1],
            &[3, 1, 2],
            PosteriorKind::FirstPositive,
        )
        .unwrap();
        let order: Vec<_> = grid.iter().map(|p| (p.k, p.prevalence)).collect();
        assert_eq!(
            order,
            [(1, 0.1), (1, 0.5), (2, 0.1), (2, 0.5), (3, 0.1), (3, 0.5)]
        );

        let blind = DiagnosticTest::new("blind", 0.0, 1.0).unwrap();
        let gaps = posterior_curve(&blind, &[0.5], &[1], PosteriorKind::FirstPositive).unwrap();
        assert_eq!(gaps[0].probability, None);
    }

    #[test]
    fn kind_parses() {
        assert_eq!(
            "all-negative".parse::<PosteriorKind>().unwrap(),
            PosteriorKind::AllNegative
        );
        assert_eq!(PosteriorKind::FirstPositive.to_string(), "first-positive");
        assert!("sometimes".parse::<PosteriorKind>().is_err());
    }
}
