//! Consequences of imperfect diagnostic testing.
//!
//! * [`testmodel`]: tests, population snapshots, expected false counts.
//! * [`bayes`]: posteriors after repeated testing and discharge rules.
//! * [`simulate`]: seeded Monte Carlo estimates of the same quantities.
//! * [`cohort`]: confirmed-case series and daily testing-policy evaluation.
//! * [`curves`]: plotting grids.
//!
//! Numeric code is generic over [`Real`] (`f32` or `f64`); the aliases below
//! fix the scalar to `f64`.

pub mod bayes;
pub mod cohort;
pub mod curves;
pub mod error;
pub mod format;
pub mod real;
pub mod simulate;
pub mod testmodel;

pub use bayes::{
    discharge_table, max_prevalence_for_k, min_negatives_to_discharge, posterior_all_negative,
    posterior_curve, posterior_first_positive_at, CurvePoint, DischargeRow, PosteriorKind,
    RepeatPlan, RequiredNegatives, DEFAULT_CAP, DEFAULT_TOLERANCE,
};
pub use cohort::{
    builtin_diamond_princess, diamond_princess, emit_report, evaluate_testing_policy, evolve,
    load_series, missed_carrier_check, read_series, CohortSeries, CountingMode, DailyRecord,
    MissedCarrierCheck, PolicyEvaluation, PolicyRow, ReportFormat, TerminalAllocation,
};
pub use error::{Error, Result};
pub use real::Real;
pub use simulate::{
    estimate_posterior, estimate_posterior_all_negative, estimate_posterior_first_positive,
    estimate_posterior_partitioned, simulate_cohort_screen, PosteriorEstimate, ScreenTally,
    TrialConfig,
};
pub use testmodel::{
    expected_false_negatives, expected_false_positives, CohortState, DiagnosticTest,
    LikelihoodRatio,
};

pub type Test = DiagnosticTest<f64>;
pub type State = CohortState<f64>;
pub type Plan = RepeatPlan<f64>;
pub type Discharge = DischargeRow<f64>;
pub type Evaluation = PolicyEvaluation<f64>;
pub type Trial = TrialConfig<f64>;

pub type Test32 = DiagnosticTest<f32>;
pub type State32 = CohortState<f32>;
pub type Plan32 = RepeatPlan<f32>;
