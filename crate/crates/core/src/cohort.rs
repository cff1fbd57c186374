//! Day-indexed confirmed-case series, their evolution into population
//! snapshots, and the evaluation of a test-everyone-daily policy.
//!
//! Two readings of a confirmed-case series are supported:
//!
//! * [`CountingMode::DailyConfirmed`]: the infected count on day `t` is the
//!   number confirmed that day.
//! * [`CountingMode::CumulativeOnboard`]: the infected count on day `t` is the
//!   number confirmed up to and including `t`, taken as a proxy for carriers
//!   still present.
//!
//! In both modes confirmed cases leave the population on their confirmation
//! day, so `N(t) = N(0) - confirmed through t` and the healthy count is
//! `N(t) - N_s(t)`.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::format::format_sig;
use crate::real::Real;
use crate::testmodel::{
    expected_false_negatives, expected_false_positives, CohortState, DiagnosticTest,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DailyRecord {
    pub day: u32,
    pub new_confirmed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountingMode {
    DailyConfirmed,
    CumulativeOnboard,
}

impl CountingMode {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::DailyConfirmed => "daily-confirmed",
            Self::CumulativeOnboard => "cumulative-onboard",
        }
    }
}

impl fmt::Display for CountingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CountingMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "daily" | "daily-confirmed" => Ok(Self::DailyConfirmed),
            "cumulative" | "cumulative-onboard" => Ok(Self::CumulativeOnboard),
            other => Err(format!(
                "unknown counting mode `{other}` (expected daily or cumulative)"
            )),
        }
    }
}

/// How the 84 cases reported for days 33-44 of the built-in series are spread.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum TerminalAllocation {
    /// All 84 on day 44.
    #[default]
    TerminalBatch,
    /// 7 per day on days 33-44.
    Uniform,
}

impl FromStr for TerminalAllocation {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "terminal" => Ok(Self::TerminalBatch),
            "uniform" => Ok(Self::Uniform),
            other => Err(format!(
                "unknown allocation `{other}` (expected terminal or uniform)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CohortSeries {
    name: String,
    initial_population: u64,
    records: Vec<DailyRecord>,
    counting_mode: CountingMode,
}

/// Index of the offending record and a description.
type RecordFault = (usize, String);

fn validate(
    initial_population: u64,
    records: &[DailyRecord],
    mode: CountingMode,
) -> std::result::Result<(), RecordFault> {
    if initial_population == 0 {
        return Err((0, "initial population must be positive".into()));
    }
    let mut cumulative: u64 = 0;
    let mut previous_day: Option<u32> = None;
    for (i, r) in records.iter().enumerate() {
        if previous_day.is_some_and(|d| r.day <= d) {
            return Err((i, "days not strictly increasing".into()));
        }
        previous_day = Some(r.day);
        cumulative = cumulative.saturating_add(r.new_confirmed);
        if cumulative > initial_population {
            return Err((
                i,
                format!(
                    "cumulative confirmed {cumulative} exceeds initial population \
                     {initial_population} at day {}",
                    r.day
                ),
            ));
        }
        let remaining = initial_population - cumulative;
        let infected = match mode {
            CountingMode::DailyConfirmed => r.new_confirmed,
            CountingMode::CumulativeOnboard => cumulative,
        };
        if infected > remaining {
            return Err((
                i,
                format!(
                    "{infected} counted carriers exceed the {remaining} remaining \
                     in {mode} mode at day {}",
                    r.day
                ),
            ));
        }
    }
    Ok(())
}

impl CohortSeries {
    pub fn new(
        name: impl Into<String>,
        initial_population: u64,
        records: Vec<DailyRecord>,
        counting_mode: CountingMode,
    ) -> Result<Self> {
        validate(initial_population, &records, counting_mode)
            .map_err(|(_, message)| Error::InvalidSeries(message))?;
        Ok(Self {
            name: name.into(),
            initial_population,
            records,
            counting_mode,
        })
    }

    /// Reinterprets the series under another counting mode.
    pub fn with_mode(self, mode: CountingMode) -> Result<Self> {
        Self::new(self.name, self.initial_population, self.records, mode)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn initial_population(&self) -> u64 {
        self.initial_population
    }

    pub fn records(&self) -> &[DailyRecord] {
        &self.records
    }

    pub fn counting_mode(&self) -> CountingMode {
        self.counting_mode
    }

    pub fn total_confirmed(&self) -> u64 {
        self.records.iter().map(|r| r.new_confirmed).sum()
    }

    /// Serializes in the text format read by [`load_series`].
    pub fn to_text(&self) -> String {
        let mut out = format!("initial_population={}\n", self.initial_population);
        for r in &self.records {
            out.push_str(&format!("{},{}\n", r.day, r.new_confirmed));
        }
        out
    }
}

/// Confirmed cases aboard the Diamond Princess, day 0 being January 19, 2020.
///
/// Days 1-16 report no cases. The source reports a single figure of 84 for
/// days 33-44, placed according to `allocation`.
pub fn diamond_princess(allocation: TerminalAllocation) -> CohortSeries {
    const REPORTED: [(u32, u64); 16] = [
        (17, 10),
        (18, 10),
        (19, 41),
        (20, 3),
        (21, 0),
        (22, 6),
        (23, 65),
        (24, 39),
        (25, 0),
        (26, 47),
        (27, 0),
        (28, 134),
        (29, 0),
        (30, 99),
        (31, 88),
        (32, 79),
    ];
    let mut records: Vec<DailyRecord> = (1..=16)
        .map(|day| DailyRecord {
            day,
            new_confirmed: 0,
        })
        .collect();
    records.extend(
        REPORTED
            .iter()
            .map(|&(day, new_confirmed)| DailyRecord { day, new_confirmed }),
    );
    records.extend((33..=44).map(|day| DailyRecord {
        day,
        new_confirmed: match allocation {
            TerminalAllocation::TerminalBatch => u64::from(day == 44) * 84,
            TerminalAllocation::Uniform => 7,
        },
    }));
    CohortSeries::new(
        "diamond-princess",
        3711,
        records,
        CountingMode::DailyConfirmed,
    )
    .expect("embedded series is valid")
}

/// The built-in series with the terminal-batch allocation.
pub fn builtin_diamond_princess() -> CohortSeries {
    diamond_princess(TerminalAllocation::TerminalBatch)
}

/// Parses a series from text: an `initial_population=<int>` header line
/// followed by `day,new_confirmed` rows. Blank lines are ignored.
pub fn load_series(name: &str, text: &str, mode: CountingMode) -> Result<CohortSeries> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_line, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing `initial_population=<int>` header".into(),
    })?;
    let initial_population = header
        .strip_prefix("initial_population=")
        .ok_or_else(|| Error::Parse {
            line: header_line,
            message: format!("expected `initial_population=<int>`, found `{header}`"),
        })?
        .trim()
        .parse::<u64>()
        .map_err(|e| Error::Parse {
            line: header_line,
            message: format!("initial population: {e}"),
        })?;

    let mut records = Vec::new();
    let mut line_numbers = Vec::new();
    for (line, row) in lines {
        let parse_err = |message: String| Error::Parse { line, message };
        let (day, count) = row
            .split_once(',')
            .ok_or_else(|| parse_err(format!("expected `day,new_confirmed`, found `{row}`")))?;
        let day = day
            .trim()
            .parse::<u32>()
            .map_err(|e| parse_err(format!("day `{}`: {e}", day.trim())))?;
        let new_confirmed = count
            .trim()
            .parse::<u64>()
            .map_err(|e| parse_err(format!("new_confirmed `{}`: {e}", count.trim())))?;
        records.push(DailyRecord { day, new_confirmed });
        line_numbers.push(line);
    }

    validate(initial_population, &records, mode).map_err(|(i, message)| Error::Parse {
        line: line_numbers.get(i).copied().unwrap_or(header_line),
        message,
    })?;
    Ok(CohortSeries {
        name: name.to_string(),
        initial_population,
        records,
        counting_mode: mode,
    })
}

/// Reads and parses a series file.
pub fn read_series(path: &Path, name: &str, mode: CountingMode) -> Result<CohortSeries> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    load_series(name, &text, mode)
}

/// One population snapshot per record, under the series' counting mode.
pub fn evolve<T: Real>(series: &CohortSeries) -> Vec<CohortState<T>> {
    let n0 = series.initial_population;
    let mut cumulative = 0u64;
    series
        .records
        .iter()
        .map(|r| {
            cumulative += r.new_confirmed;
            let remaining = n0 - cumulative;
            let infected = match series.counting_mode {
                CountingMode::DailyConfirmed => r.new_confirmed,
                CountingMode::CumulativeOnboard => cumulative,
            };
            let count = |n: u64| T::from_u64(n).expect("count representable");
            CohortState::from_counts(r.day, count(infected), count(remaining - infected))
                .expect("validated series yields nonnegative counts")
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolicyRow<T> {
    pub day: u32,
    pub population: T,
    pub infected: T,
    pub prevalence: T,
    pub false_positives: T,
    pub false_negatives: T,
}

/// Expected missed carriers under both counting modes, set against a
/// published estimate that neither mode reproduces.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MissedCarrierCheck {
    pub reference_day: u32,
    pub published_missed: f64,
    /// Daily-confirmed mode on the reference day.
    pub daily_at_reference_day: f64,
    /// Cumulative-onboard mode on the reference day.
    pub cumulative_at_reference_day: f64,
    pub final_day: u32,
    /// Cumulative-onboard mode on the last day of the series.
    pub cumulative_at_final_day: f64,
    pub matches_published: bool,
}

/// Published estimate of missed carriers on day 30 for the built-in series.
pub const PUBLISHED_MISSED_DAY: u32 = 30;
pub const PUBLISHED_MISSED_CARRIERS: f64 = 300.0;

/// Computes expected false negatives on `reference_day` and on the final day
/// under both counting modes. `matches_published` is true only if one of them
/// lies within 0.5 of `published_missed`.
pub fn missed_carrier_check<T: Real>(
    series: &CohortSeries,
    test: &DiagnosticTest<T>,
    reference_day: u32,
    published_missed: f64,
) -> Result<MissedCarrierCheck> {
    let fn_on = |mode: CountingMode, day: Option<u32>| -> Result<f64> {
        let states = evolve::<T>(&series.clone().with_mode(mode)?);
        let state = match day {
            Some(d) => states.iter().find(|s| s.day() == d),
            None => states.last(),
        }
        .ok_or(Error::StartDayOutOfRange {
            start: reference_day,
            first: series.records.first().map_or(0, |r| r.day),
            last: series.records.last().map_or(0, |r| r.day),
        })?;
        Ok(expected_false_negatives(state, test)?.as_f64())
    };
    let daily = fn_on(CountingMode::DailyConfirmed, Some(reference_day))?;
    let cumulative = fn_on(CountingMode::CumulativeOnboard, Some(reference_day))?;
    let cumulative_final = fn_on(CountingMode::CumulativeOnboard, None)?;
    let matches_published = [daily, cumulative, cumulative_final]
        .iter()
        .any(|v| (v - published_missed).abs() <= 0.5);
    Ok(MissedCarrierCheck {
        reference_day,
        published_missed,
        daily_at_reference_day: daily,
        cumulative_at_reference_day: cumulative,
        final_day: series.records.last().map_or(0, |r| r.day),
        cumulative_at_final_day: cumulative_final,
        matches_published,
    })
}

/// Daily expected false counts from testing everybody once per day.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolicyEvaluation<T> {
    pub series_name: String,
    pub counting_mode: CountingMode,
    pub test: DiagnosticTest<T>,
    pub start_day: u32,
    pub rows: Vec<PolicyRow<T>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub missed_carrier_check: Option<MissedCarrierCheck>,
}

impl<T> PolicyEvaluation<T> {
    pub fn with_missed_carrier_check(mut self, check: MissedCarrierCheck) -> Self {
        self.missed_carrier_check = Some(check);
        self
    }
}

/// Applies the test to every evolved state from `start_day` onward.
pub fn evaluate_testing_policy<T: Real>(
    series: &CohortSeries,
    test: &DiagnosticTest<T>,
    start_day: u32,
) -> Result<PolicyEvaluation<T>> {
    let (first, last) = match (series.records.first(), series.records.last()) {
        (Some(f), Some(l)) => (f.day, l.day),
        _ => return Err(Error::InvalidSeries("series has no records".into())),
    };
    if start_day < first || start_day > last {
        return Err(Error::StartDayOutOfRange {
            start: start_day,
            first,
            last,
        });
    }
    let rows = evolve::<T>(series)
        .into_iter()
        .filter(|s| s.day() >= start_day)
        .map(|s| {
            Ok(PolicyRow {
                day: s.day(),
                population: s.total(),
                infected: s.infected(),
                prevalence: s.prevalence().ok_or(Error::EmptyPopulation)?,
                false_positives: expected_false_positives(&s, test)?,
                false_negatives: expected_false_negatives(&s, test)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PolicyEvaluation {
        series_name: series.name.clone(),
        counting_mode: series.counting_mode,
        test: test.clone(),
        start_day,
        rows,
        missed_carrier_check: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    /// `<name>.prevalence.csv`, `<name>.fp_pop.csv`, `<name>.fn.csv`.
    DelimitedTable,
    /// `<name>.report.json`.
    StructuredDocument,
    Both,
}

/// Significant digits used in emitted tables.
pub const TABLE_DIGITS: usize = 6;

fn write_file(path: PathBuf, contents: &str) -> Result<PathBuf> {
    fs::write(&path, contents).map_err(|source| Error::Io {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}

fn table<T: Real>(header: &str, rows: &[PolicyRow<T>], cols: &[fn(&PolicyRow<T>) -> T]) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row.day.to_string());
        for col in cols {
            out.push(',');
            out.push_str(&format_sig(col(row).as_f64(), TABLE_DIGITS));
        }
        out.push('\n');
    }
    out
}

/// Renders the three series tables as `(file suffix, contents)`.
pub fn render_tables<T: Real>(evaluation: &PolicyEvaluation<T>) -> [(&'static str, String); 3] {
    let rows = &evaluation.rows;
    [
        (
            "prevalence.csv",
            table("day,prevalence", rows, &[|r| r.prevalence]),
        ),
        (
            "fp_pop.csv",
            table(
                "day,population,false_positives",
                rows,
                &[|r| r.population, |r| r.false_positives],
            ),
        ),
        (
            "fn.csv",
            table("day,false_negatives", rows, &[|r| r.false_negatives]),
        ),
    ]
}

/// Writes the evaluation under `dir`, creating it if needed. Returns the
/// written paths. Output is byte-stable for identical inputs.
pub fn emit_report<T: Real>(
    evaluation: &PolicyEvaluation<T>,
    format: ReportFormat,
    dir: &Path,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let stem = &evaluation.series_name;
    let mut written = Vec::new();
    if matches!(format, ReportFormat::DelimitedTable | ReportFormat::Both) {
        for (suffix, contents) in render_tables(evaluation) {
            written.push(write_file(dir.join(format!("{stem}.{suffix}")), &contents)?);
        }
    }
    if matches!(
        format,
        ReportFormat::StructuredDocument | ReportFormat::Both
    ) {
        let mut json = serde_json::to_string_pretty(evaluation).expect("evaluation serializes");
        json.push('\n');
        written.push(write_file(dir.join(format!("{stem}.report.json")), &json)?);
    }
    Ok(written)
}
