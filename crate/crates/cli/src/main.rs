mod args;

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::{json, Value};

use args::*;
use screening::bayes::max_prevalence_for_k;
use screening::cohort::{
    emit_report, missed_carrier_check, PUBLISHED_MISSED_CARRIERS, PUBLISHED_MISSED_DAY,
};
use screening::curves::{false_negative_curve, false_positive_curve, linspace, posterior_surface};
use screening::format::format_sig;
use screening::simulate::{estimate_posterior, estimate_posterior_partitioned};
use screening::{
    diamond_princess, discharge_table, evaluate_testing_policy, expected_false_negatives,
    expected_false_positives, posterior_curve, read_series, simulate_cohort_screen, CountingMode,
    Error, Plan, PosteriorKind, ReportFormat, RequiredNegatives, State, TerminalAllocation, Test,
    Trial,
};

const HUMAN_DIGITS: usize = 6;

fn sig(x: f64) -> String {
    format_sig(x, HUMAN_DIGITS)
}

enum Failure {
    Validation(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io { .. } => Failure::Io(e.to_string()),
            other => Failure::Validation(other.to_string()),
        }
    }
}

type CmdResult = Result<String, Failure>;

fn resolve_test(args: &TestArgs) -> Result<Test, Failure> {
    match (args.sensitivity, args.specificity) {
        (Some(sen), Some(spe)) => Ok(Test::new("custom", sen, spe)?),
        _ => Ok(Test::preset(&args.preset)?),
    }
}

fn test_json(t: &Test) -> Value {
    json!({
        "label": t.label(),
        "sensitivity": t.sensitivity(),
        "specificity": t.specificity(),
    })
}

fn test_line(t: &Test) -> String {
    format!(
        "test {} (sensitivity {}, specificity {})",
        t.label(),
        sig(t.sensitivity()),
        sig(t.specificity())
    )
}

fn render(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json value serializes");
    s.push('\n');
    s
}

fn eval(a: &EvalArgs, machine: bool) -> CmdResult {
    let test = resolve_test(&a.test)?;
    let state = match (a.infected, a.prevalence) {
        (Some(n), _) => State::from_total(0, a.population, n)?,
        (None, Some(p)) => State::from_prevalence(0, a.population, p)?,
        (None, None) => unreachable!("clap requires one of --infected/--prevalence"),
    };
    let fp = expected_false_positives(&state, &test)?;
    let fne = expected_false_negatives(&state, &test)?;
    if machine {
        return Ok(render(&json!({
            "test": test_json(&test),
            "population": state.total(),
            "infected": state.infected(),
            "healthy": state.healthy(),
            "prevalence": state.prevalence(),
            "false_positives": fp,
            "false_negatives": fne,
        })));
    }
    Ok(format!(
        "{}\npopulation={} infected={} healthy={}\nfp={} fn={}\n",
        test_line(&test),
        sig(state.total()),
        sig(state.infected()),
        sig(state.healthy()),
        sig(fp),
        sig(fne)
    ))
}

fn repeat(a: &RepeatArgs, machine: bool) -> CmdResult {
    let test = resolve_test(&a.test)?;
    let kind = PosteriorKind::from(a.kind);
    let plan = Plan::new(test.clone(), a.prevalence, a.k)?.with_tolerance(a.tolerance)?;
    let posterior = plan.posterior(kind)?;
    let meets = (kind == PosteriorKind::AllNegative).then_some(posterior <= a.tolerance);
    if machine {
        return Ok(render(&json!({
            "test": test_json(&test),
            "prevalence": a.prevalence,
            "k": a.k,
            "kind": kind.as_str(),
            "posterior": posterior,
            "tolerance": a.tolerance,
            "meets_tolerance": meets,
        })));
    }
    let mut out = format!(
        "{}\nprevalence={} k={} kind={}\nposterior={}\n",
        test_line(&test),
        sig(a.prevalence),
        a.k,
        kind,
        sig(posterior)
    );
    if let Some(m) = meets {
        let verdict = if m { "meets" } else { "exceeds" };
        writeln!(out, "{verdict} tolerance {}", sig(a.tolerance)).unwrap();
    }
    Ok(out)
}

fn discharge(a: &DischargeArgs, machine: bool) -> CmdResult {
    let test = resolve_test(&a.test)?;
    let rows = discharge_table(&test, &a.prevalence, a.tolerance, a.cap)?;
    let largest_k = rows
        .iter()
        .filter_map(|r| r.required_negatives.finite())
        .max()
        .unwrap_or(0);
    let crossovers: Vec<(u32, f64)> = if test.is_informative() {
        (1..=largest_k)
            .map(|k| Ok((k, max_prevalence_for_k(&test, k, a.tolerance)?)))
            .collect::<Result<_, Error>>()?
    } else {
        Vec::new()
    };
    if machine {
        return Ok(render(&json!({
            "test": test_json(&test),
            "tolerance": a.tolerance,
            "cap": a.cap,
            "rows": rows,
            "crossovers": crossovers
                .iter()
                .map(|(k, p)| json!({"k": k, "max_prevalence": p}))
                .collect::<Vec<_>>(),
        })));
    }
    let mut out = format!("{}\ntolerance={}\n", test_line(&test), sig(a.tolerance));
    out.push_str("prevalence  k            miss_probability\n");
    for r in &rows {
        let k = match r.required_negatives {
            RequiredNegatives::Finite(k) => k.to_string(),
            RequiredNegatives::Unreachable => format!("unreachable (cap {})", a.cap),
        };
        writeln!(
            out,
            "{:<11} {:<12} {}",
            sig(r.prevalence),
            k,
            sig(r.achieved_miss_probability)
        )
        .unwrap();
    }
    if !crossovers.is_empty() {
        out.push_str("largest prevalence cleared by k negatives:\n");
        for (k, p) in &crossovers {
            writeln!(out, "k={k} max_prevalence={}", sig(*p)).unwrap();
        }
    }
    Ok(out)
}

fn cohort(a: &CohortArgs, machine: bool) -> CmdResult {
    let test = resolve_test(&a.test)?;
    let mode = match a.mode {
        ModeArg::Daily => CountingMode::DailyConfirmed,
        ModeArg::Cumulative => CountingMode::CumulativeOnboard,
    };
    let (series, builtin) = match (&a.builtin, &a.input) {
        (Some(Builtin::DiamondPrincess), _) => {
            let allocation = match a.allocation {
                AllocationArg::Terminal => TerminalAllocation::TerminalBatch,
                AllocationArg::Uniform => TerminalAllocation::Uniform,
            };
            (diamond_princess(allocation).with_mode(mode)?, true)
        }
        (None, Some(path)) => {
            let stem = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "series".into());
            (read_series(path, &stem, mode)?, false)
        }
        (None, None) => unreachable!("clap requires --builtin or --input"),
    };
    let series = match &a.name {
        Some(name) => screening::CohortSeries::new(
            name.clone(),
            series.initial_population(),
            series.records().to_vec(),
            mode,
        )?,
        None => series,
    };

    let mut evaluation = evaluate_testing_policy(&series, &test, a.start_day)?;
    if builtin {
        let check = missed_carrier_check(
            &series,
            &test,
            PUBLISHED_MISSED_DAY,
            PUBLISHED_MISSED_CARRIERS,
        )?;
        evaluation = evaluation.with_missed_carrier_check(check);
    }

    let written = match &a.out {
        Some(dir) => {
            let format = match a.format {
                FormatArg::Table => ReportFormat::DelimitedTable,
                FormatArg::Json => ReportFormat::StructuredDocument,
                FormatArg::Both => ReportFormat::Both,
            };
            emit_report(&evaluation, format, dir)?
        }
        None => Vec::new(),
    };

    if machine {
        let mut value = serde_json::to_value(&evaluation).expect("evaluation serializes");
        value["written"] = json!(written.iter().map(|p| file_name(p)).collect::<Vec<_>>());
        return Ok(render(&value));
    }

    let mut out = format!(
        "series {} ({}), N(0)={}, {}, start day {}\n",
        evaluation.series_name,
        evaluation.counting_mode,
        series.initial_population(),
        test_line(&test),
        evaluation.start_day
    );
    out.push_str("day  population  infected  prevalence  false_positives  false_negatives\n");
    for r in &evaluation.rows {
        writeln!(
            out,
            "{:<4} {:<11} {:<9} {:<11} {:<16} {}",
            r.day,
            sig(r.population),
            sig(r.infected),
            sig(r.prevalence),
            sig(r.false_positives),
            sig(r.false_negatives)
        )
        .unwrap();
    }
    if let Some(c) = &evaluation.missed_carrier_check {
        writeln!(
            out,
            "missed carriers on day {}: published {}; daily-confirmed {}; cumulative-onboard {}; \
             cumulative-onboard on day {} {}; {}",
            c.reference_day,
            sig(c.published_missed),
            sig(c.daily_at_reference_day),
            sig(c.cumulative_at_reference_day),
            c.final_day,
            sig(c.cumulative_at_final_day),
            if c.matches_published {
                "a counting mode reproduces the published figure"
            } else {
                "no counting mode reproduces the published figure"
            }
        )
        .unwrap();
    }
    for p in &written {
        writeln!(out, "wrote {}", p.display()).unwrap();
    }
    Ok(out)
}

fn file_name(p: &Path) -> String {
    p.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn simulate(a: &SimulateArgs, machine: bool) -> CmdResult {
    let test = resolve_test(&a.test)?;
    let kind = match a.kind {
        SimKind::Screen => return screen(a, &test, machine),
        SimKind::FirstPositive => PosteriorKind::FirstPositive,
        SimKind::AllNegative => PosteriorKind::AllNegative,
    };
    let config = Trial::new(test.clone(), a.prevalence, a.k, a.trials, a.seed)?;
    let estimate = match a.partitions {
        Some(parts) => estimate_posterior_partitioned(&config, kind, parts)?,
        None => estimate_posterior(&config, kind)?,
    };
    let analytic = Plan::new(test.clone(), a.prevalence, a.k)?
        .posterior(kind)
        .ok();
    if machine {
        return Ok(render(&json!({
            "test": test_json(&test),
            "kind": kind.as_str(),
            "prevalence": a.prevalence,
            "k": a.k,
            "trials": a.trials,
            "seed": a.seed,
            "partitions": a.partitions,
            "estimate": estimate,
            "analytic": analytic,
            "z_score": analytic.map(|v| estimate.z_score(v)),
        })));
    }
    let mut out = format!(
        "{}\nkind={} prevalence={} k={} trials={} seed={}{}\n",
        test_line(&test),
        kind,
        sig(a.prevalence),
        a.k,
        a.trials,
        a.seed,
        a.partitions
            .map(|p| format!(" partitions={p}"))
            .unwrap_or_default()
    );
    writeln!(
        out,
        "estimate={} standard_error={} conditioning_hits={}",
        sig(estimate.estimate),
        sig(estimate.standard_error),
        estimate.conditioning_hits
    )
    .unwrap();
    if let Some(v) = analytic {
        writeln!(out, "analytic={} z={}", sig(v), sig(estimate.z_score(v))).unwrap();
    }
    if estimate.low_hits {
        out.push_str("warning: fewer than 100 conditioning hits; standard error unreliable\n");
    }
    Ok(out)
}

fn screen(a: &SimulateArgs, test: &Test, machine: bool) -> CmdResult {
    let tally = simulate_cohort_screen(a.population, a.prevalence, test, a.seed)?;
    let state = State::from_prevalence(0, a.population as f64, a.prevalence)?;
    let expected_fp = expected_false_positives(&state, test)?;
    let expected_fn = expected_false_negatives(&state, test)?;
    if machine {
        return Ok(render(&json!({
            "test": test_json(test),
            "kind": "screen",
            "population": a.population,
            "prevalence": a.prevalence,
            "seed": a.seed,
            "tally": tally,
            "expected_false_positives": expected_fp,
            "expected_false_negatives": expected_fn,
        })));
    }
    Ok(format!(
        "{}\npopulation={} prevalence={} seed={}\n\
         true_positives={} false_positives={} true_negatives={} false_negatives={}\n\
         expected fp={} fn={}\n",
        test_line(test),
        a.population,
        sig(a.prevalence),
        a.seed,
        tally.true_positives,
        tally.false_positives,
        tally.true_negatives,
        tally.false_negatives,
        sig(expected_fp),
        sig(expected_fn)
    ))
}

const FIGURE_PREVALENCES: [f64; 5] = [0.01, 0.05, 0.1, 0.25, 0.5];
const SURFACE_PREVALENCES: [f64; 3] = [0.1, 0.25, 0.85];
const SURFACE_KS: [u32; 2] = [1, 3];

fn opt(p: Option<f64>) -> String {
    p.map(|v| v.to_string()).unwrap_or_default()
}

fn curves(a: &CurvesArgs, machine: bool) -> CmdResult {
    let test = resolve_test(&a.test)?;
    let grid = linspace(0.0, 1.0, a.points);
    let mut csv = String::new();
    let mut rows: Vec<Value> = Vec::new();
    match a.figure {
        1 | 2 => {
            let (column, points) = if a.figure == 1 {
                (
                    "sensitivity",
                    false_negative_curve(a.population, &FIGURE_PREVALENCES, &grid)?,
                )
            } else {
                (
                    "specificity",
                    false_positive_curve(a.population, &FIGURE_PREVALENCES, &grid)?,
                )
            };
            let count = if a.figure == 1 {
                "false_negatives"
            } else {
                "false_positives"
            };
            writeln!(csv, "prevalence,{column},{count}").unwrap();
            for p in points {
                writeln!(csv, "{},{},{}", p.prevalence, p.accuracy, p.count).unwrap();
                rows.push(json!({"prevalence": p.prevalence, column: p.accuracy, count: p.count}));
            }
        }
        3 | 5 => {
            let kind = if a.figure == 3 {
                PosteriorKind::FirstPositive
            } else {
                PosteriorKind::AllNegative
            };
            csv.push_str("prevalence,k,sensitivity,specificity,probability\n");
            for prevalence in SURFACE_PREVALENCES {
                for k in SURFACE_KS {
                    for p in posterior_surface(prevalence, k, kind, &grid, &grid)? {
                        writeln!(
                            csv,
                            "{prevalence},{k},{},{},{}",
                            p.sensitivity,
                            p.specificity,
                            opt(p.probability)
                        )
                        .unwrap();
                        rows.push(json!({
                            "prevalence": prevalence, "k": k,
                            "sensitivity": p.sensitivity, "specificity": p.specificity,
                            "probability": p.probability,
                        }));
                    }
                }
            }
        }
        _ => {
            let kind = if a.figure == 4 {
                PosteriorKind::FirstPositive
            } else {
                PosteriorKind::AllNegative
            };
            csv.push_str("k,prevalence,probability\n");
            for p in posterior_curve(&test, &grid, &[1, 2, 3, 4, 5, 6], kind)? {
                writeln!(csv, "{},{},{}", p.k, p.prevalence, opt(p.probability)).unwrap();
                rows.push(
                    json!({"k": p.k, "prevalence": p.prevalence, "probability": p.probability}),
                );
            }
        }
    }
    let body = if machine {
        render(&json!({
            "figure": a.figure,
            "test": test_json(&test),
            "population": a.population,
            "rows": rows,
        }))
    } else {
        csv
    };
    match &a.out {
        Some(path) => {
            fs::write(path, &body).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            Ok(format!("wrote {}\n", path.display()))
        }
        None => Ok(body),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let machine = cli.json;
    let result = match &cli.command {
        Command::Eval(a) => eval(a, machine),
        Command::Repeat(a) => repeat(a, machine),
        Command::Discharge(a) => discharge(a, machine),
        Command::Cohort(a) => cohort(a, machine),
        Command::Simulate(a) => simulate(a, machine),
        Command::Curves(a) => curves(a, machine),
    };
    match result {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
