//! One PASS/FAIL line per acceptance criterion. Run with
//! `cargo test --test acceptance -- --nocapture` to see the report.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use prefeval::data_io::{generate_synthetic, load_dataset, oracle_pir_row, DatasetPaths, SynthSpec};
use prefeval::metrics::{self, ApDivisor, IdealPool, JudgedList};
use prefeval::model::Verdict;
use prefeval::pir::{self, mean_relevance, pir, pir_sweep, ApNorm, Metric, MetricConfig, RatingSource, ScoredPair};
use prefeval::scales::{grade_to_unit, DiscountFunction, RelevanceScale};
use prefeval::{EvaluationDataset, ValidationOptions};

const MAP_TOLERANCE: f64 = 0.0005;
const DCG_TOLERANCE: f64 = 0.005;
const WORKED_EXAMPLE_BUDGET: Duration = Duration::from_secs(1);
const ORACLE_BUDGET: Duration = Duration::from_secs(60);
const END_TO_END_BUDGET: Duration = Duration::from_secs(10);
const ORACLE_DATASETS: u64 = 100;
const PROPERTY_CASES: u32 = 256;
const DOMINANCE_SEEDS: [u64; 3] = [2024, 7, 99];

struct Outcome {
    id: &'static str,
    name: &'static str,
    pass: bool,
    detail: String,
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn load(name: &str, max_cutoff: usize) -> EvaluationDataset {
    let opts = ValidationOptions::new(Default::default(), max_cutoff);
    load_dataset(&DatasetPaths::in_dir(fixture(name)), opts).expect("fixture loads").0
}

/// Variant lists of every query, as mean six-point relevance.
fn judged_lists(ds: &EvaluationDataset) -> Vec<(String, JudgedList, JudgedList)> {
    ds.list_pairs()
        .iter()
        .map(|pair| {
            let rel = |id: &String| mean_relevance(ds, &pair.query_id, id, RelevanceScale::SixPoint).unwrap();
            (
                pair.query_id.clone(),
                JudgedList::new(pair.variant_a.iter().map(rel).collect()).unwrap(),
                JudgedList::new(pair.variant_b.iter().map(rel).collect()).unwrap(),
            )
        })
        .collect()
}

fn within_budget(start: Instant, budget: Duration, pass: bool, detail: String) -> (bool, String) {
    let elapsed = start.elapsed();
    (pass && elapsed < budget, format!("{detail} [{:.3}s, budget {}s]", elapsed.as_secs_f64(), budget.as_secs()))
}

fn map_worked_example() -> (bool, String) {
    let start = Instant::now();
    let ds = load("binary_map", 5);
    let rank = DiscountFunction::Rank;
    let per_query: Vec<f64> = judged_lists(&ds)
        .iter()
        .map(|(_, a, _)| {
            let relevant = a.values().iter().filter(|&&v| v > 0.0).count();
            metrics::average_precision(a, 5, &rank, ApDivisor::KnownRelevant(relevant)).unwrap()
        })
        .collect();
    let mean = metrics::mean_over_queries(&per_query).unwrap();
    let expected = [0.9167, 0.4778];
    let pass = per_query.len() == 2
        && per_query.iter().zip(expected).all(|(x, e)| (x - e).abs() <= MAP_TOLERANCE)
        && (mean - 0.6972).abs() <= MAP_TOLERANCE;
    within_budget(
        start,
        WORKED_EXAMPLE_BUDGET,
        pass,
        format!("AP {:.4} / {:.4}, MAP {mean:.4} (±{MAP_TOLERANCE})", per_query[0], per_query[1]),
    )
}

fn dcg_worked_example() -> (bool, String) {
    let start = Instant::now();
    let ds = load("binary_dcg", 5);
    let lists = judged_lists(&ds);
    let log2 = DiscountFunction::Log2;
    let first = metrics::dcg_prefixes(&lists[0].1, 5, &log2).unwrap();
    let second = metrics::dcg_prefixes(&lists[1].1, 5, &log2).unwrap();
    let exact = first == [1.0, 2.0, 2.0, 2.5, 2.5];
    let close = second
        .iter()
        .zip([0.0, 1.0, 1.63, 2.13, 2.13])
        .all(|(x, e)| (x - e).abs() <= DCG_TOLERANCE);
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.3}")).collect::<Vec<_>>().join(", ");
    within_budget(
        start,
        WORKED_EXAMPLE_BUDGET,
        exact && close && second.len() == 5,
        format!("[{}] exact, [{}] (±{DCG_TOLERANCE})", fmt(&first), fmt(&second)),
    )
}

fn pir_worked_example() -> (bool, String) {
    let start = Instant::now();
    let ds = load("five_queries", 10);
    let config = MetricConfig::new(Metric::Precision, DiscountFunction::None);
    let thresholds = [0.0, 0.15, 0.35];
    let grid = pir_sweep(&ds, std::slice::from_ref(&config), &thresholds, &[10]).unwrap();
    let got: Vec<f64> = grid.cells().iter().map(|c| c.pir).collect();
    within_budget(
        start,
        WORKED_EXAMPLE_BUDGET,
        got == [0.75, 0.875, 0.625],
        format!("PIR at t = 0 / 0.15 / 0.35: {got:?} (exact)"),
    )
}

/// Every metric under every discount and both rating sources, every metric
/// under each relevance scale, plus the non-default AP divisor, ESL target
/// and reciprocal-rank relevance threshold.
fn oracle_family() -> Vec<MetricConfig> {
    let mut family = Vec::new();
    for metric in Metric::ALL {
        for discount in DiscountFunction::catalog() {
            for source in [RatingSource::SameUser, RatingSource::OtherUsers] {
                family.push(MetricConfig::new(metric, discount.clone()).with_rating_source(source));
            }
        }
        for scale in RelevanceScale::ALL.into_iter().skip(1) {
            family.push(MetricConfig::new(metric, DiscountFunction::Log2).with_scale(scale));
        }
    }
    for discount in DiscountFunction::catalog() {
        family.push(MetricConfig::new(Metric::Map, discount.clone()).with_ap_norm(ApNorm::KnownRelevant));
        family.push(MetricConfig::new(Metric::Esl, discount.clone()).with_esl_n(2.5));
        family.push(MetricConfig::new(Metric::Mrr, discount.clone()).with_relevant_above(0.5));
    }
    family
}

fn oracle_equivalence() -> (bool, String) {
    let start = Instant::now();
    let family = oracle_family();
    let thresholds = pir::default_thresholds();
    let cutoffs = pir::default_cutoffs();
    let spec = SynthSpec {
        queries: 6,
        raters: 3,
        preferences: 12,
        judges_per_query: 2,
        pool_size: 13,
        ..SynthSpec::default()
    };
    let mut cells = 0usize;
    let mut mismatches = Vec::new();
    for seed in 0..ORACLE_DATASETS {
        let ds = generate_synthetic(&spec, seed).unwrap();
        let grid = pir_sweep(&ds, &family, &thresholds, &cutoffs).unwrap();
        for (ci, config) in family.iter().enumerate() {
            for &cutoff in &cutoffs {
                let engine: Vec<f64> = grid.row(ci, cutoff).unwrap().iter().map(|c| c.pir).collect();
                let oracle = oracle_pir_row(&ds, config, &thresholds, cutoff).unwrap();
                cells += engine.len();
                if engine != oracle {
                    mismatches.push(format!("seed {seed} {} @{cutoff}", config.label()));
                }
            }
        }
    }
    within_budget(
        start,
        ORACLE_BUDGET,
        mismatches.is_empty() && cells > 0,
        format!(
            "{ORACLE_DATASETS} datasets x {} configs x {} cut-offs x {} thresholds = {cells} cells, {} mismatching rows{}",
            family.len(),
            cutoffs.len(),
            thresholds.len(),
            mismatches.len(),
            mismatches.first().map(|m| format!(", first: {m}")).unwrap_or_default()
        ),
    )
}

fn verdict() -> impl Strategy<Value = Verdict> {
    prop_oneof![Just(Verdict::A), Just(Verdict::B), Just(Verdict::Equal)]
}

fn scored_pairs() -> impl Strategy<Value = Vec<ScoredPair>> {
    prop::collection::vec((0u32..=100, 0u32..=100, verdict()), 0..40).prop_map(|v| {
        v.into_iter()
            .enumerate()
            .map(|(i, (a, b, verdict))| ScoredPair {
                query_id: format!("q{i}"),
                rater_id: "u".into(),
                score_a: a as f64 / 100.0,
                score_b: b as f64 / 100.0,
                verdict,
            })
            .collect()
    })
}

fn unit_list(min: usize, max: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec((0u8..=5).prop_map(|g| g as f64 / 5.0), min..=max)
}

fn non_increasing(f: &DiscountFunction) -> bool {
    let w = f.weights(pir::MAX_CUTOFF).unwrap();
    w.windows(2).all(|p| p[1] <= p[0])
}

fn check<S: Strategy>(
    strategy: S,
    test: impl Fn(S::Value) -> std::result::Result<(), TestCaseError>,
) -> std::result::Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases: PROPERTY_CASES,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn property_suites() -> (bool, String) {
    let suites: Vec<(&str, std::result::Result<(), String>)> = vec![
        (
            "swap symmetry",
            check((scored_pairs(), 0.0..0.5f64), |(pairs, t)| {
                let swapped: Vec<ScoredPair> = pairs
                    .iter()
                    .map(|p| ScoredPair {
                        score_a: p.score_b,
                        score_b: p.score_a,
                        verdict: p.verdict.flipped(),
                        ..p.clone()
                    })
                    .collect();
                prop_assert_eq!(pir(&pairs, t).counts, pir(&swapped, t).counts);
                Ok(())
            }),
        ),
        (
            "sign/offset invariance",
            check(
                (scored_pairs(), 0.1..10.0f64, prop::collection::vec(-5.0..5.0f64, 40)),
                |(pairs, lambda, offsets)| {
                    let base = pir(&pairs, 0.0).pir;
                    let scaled: Vec<ScoredPair> = pairs
                        .iter()
                        .map(|p| ScoredPair { score_a: p.score_a * lambda, score_b: p.score_b * lambda, ..p.clone() })
                        .collect();
                    let shifted: Vec<ScoredPair> = pairs
                        .iter()
                        .zip(&offsets)
                        .map(|(p, o)| ScoredPair { score_a: p.score_a + o, score_b: p.score_b + o, ..p.clone() })
                        .collect();
                    prop_assert_eq!(pir(&scaled, 0.0).pir, base);
                    prop_assert_eq!(pir(&shifted, 0.0).pir, base);
                    Ok(())
                },
            ),
        ),
        (
            "threshold monotonicity",
            check((scored_pairs(), 0.0..0.3f64, 0.0..0.3f64), |(pairs, x, y)| {
                let (lo, hi) = (pir(&pairs, x.min(y)).counts, pir(&pairs, x.max(y)).counts);
                prop_assert!(hi.correct_pref <= lo.correct_pref);
                prop_assert!(hi.reversed_pref <= lo.reversed_pref);
                Ok(())
            }),
        ),
        (
            "PIR quantization",
            check((scored_pairs(), 0.0..0.3f64), |(pairs, t)| {
                let cell = pir(&pairs, t);
                // denominator: queries with a stated preference
                let queries = cell.counts.preferring() as f64;
                if queries > 0.0 {
                    let k = (cell.pir - 0.5) * 2.0 * queries;
                    prop_assert!((k - k.round()).abs() < 1e-9, "PIR {} with {} queries", cell.pir, queries);
                }
                Ok(())
            }),
        ),
        (
            "NDCG bounds and perfect order",
            check(
                (unit_list(1, 12), unit_list(0, 6), 1usize..=10, prop::sample::select(DiscountFunction::catalog())),
                |(pool, extra, c, f)| {
                    let ideal_pool = IdealPool::new([pool.clone(), extra].concat()).unwrap();
                    let c = c.min(pool.len());
                    let list = JudgedList::new(pool).unwrap();
                    // a relevance-sorted ideal is only an upper bound when weights never rise
                    if let Ok(x) = metrics::ndcg(&list, &ideal_pool, c, &f) {
                        prop_assert!(x >= 0.0 && (x <= 1.0 + 1e-12 || !non_increasing(&f)));
                    }
                    let perfect = JudgedList::new(ideal_pool.values().to_vec()).unwrap();
                    if let Ok(x) = metrics::ndcg(&perfect, &ideal_pool, c, &f) {
                        prop_assert_eq!(x, 1.0);
                    }
                    Ok(())
                },
            ),
        ),
        (
            "ESL endpoints",
            check(
                (unit_list(0, 9), 1usize..=10, prop::sample::select(DiscountFunction::catalog())),
                |(tail, zeros, f)| {
                    let best = JudgedList::new([vec![1.0], tail].concat()).unwrap();
                    prop_assert_eq!(metrics::esl(&best, 1, &f, 1.0).unwrap(), 1.0);
                    let none = JudgedList::new(vec![0.0; zeros]).unwrap();
                    prop_assert_eq!(metrics::esl(&none, zeros, &f, 1.0).unwrap(), 0.0);
                    let half = JudgedList::new(vec![0.5, 0.5]).unwrap();
                    prop_assert_eq!(metrics::esl(&half, 2, &DiscountFunction::None, 1.0).unwrap(), 0.5);
                    Ok(())
                },
            ),
        ),
        (
            "MRR discount-choice invariance",
            check((unit_list(10, 10), unit_list(10, 10), 1usize..=10), |(a, b, c)| {
                let (a, b) = (JudgedList::new(a).unwrap(), JudgedList::new(b).unwrap());
                let sign = |f: DiscountFunction| {
                    let d = metrics::reciprocal_rank(&a, c, &f, 0.0).unwrap()
                        - metrics::reciprocal_rank(&b, c, &f, 0.0).unwrap();
                    pir::pref(d, 0.0)
                };
                let s = sign(DiscountFunction::Rank);
                prop_assert_eq!(s, sign(DiscountFunction::Root));
                prop_assert_eq!(s, sign(DiscountFunction::Square));
                Ok(())
            }),
        ),
        (
            "ERR(RANK) monotone per grade",
            check(
                (prop::collection::vec(1u8..=6, 1..=10), 0usize..10),
                |(grades, i)| {
                    let i = i % grades.len();
                    let rel = |g: u8| grade_to_unit(g.into()).unwrap();
                    let mut list: Vec<f64> = grades.iter().map(|&g| rel(g)).collect();
                    let mut prev = f64::NEG_INFINITY;
                    // sweep the grade at position i from worst to best
                    for g in (1..=6).rev() {
                        list[i] = rel(g);
                        let score = metrics::err(&JudgedList::new(list.clone()).unwrap(), list.len(), &DiscountFunction::Rank)
                            .unwrap();
                        prop_assert!(score >= prev - 1e-12);
                        prev = score;
                    }
                    Ok(())
                },
            ),
        ),
    ];
    let failed: Vec<String> = suites
        .iter()
        .filter_map(|(name, r)| r.as_ref().err().map(|e| format!("{name}: {e}")))
        .collect();
    let names: Vec<&str> = suites.iter().map(|s| s.0).collect();
    let detail = if failed.is_empty() {
        format!("{} suites x {PROPERTY_CASES} cases ({})", suites.len(), names.join(", "))
    } else {
        failed.join("; ")
    };
    (failed.is_empty(), detail)
}

/// Reciprocal rank cannot separate ranks 1 and 2 under discounts that are
/// flat there, and nearly every list has a result with relevance > 0 in its
/// first two ranks, so those scores are constant and PIR stays at 0.5.
fn flat_headed_rr(config: &MetricConfig) -> bool {
    config.metric == Metric::Mrr && matches!(config.discount.weight(2), Ok(w) if w == 1.0)
}

fn dominance_smoke() -> (bool, String) {
    let configs: Vec<MetricConfig> = Metric::ALL
        .into_iter()
        .flat_map(|m| DiscountFunction::catalog().into_iter().map(move |d| MetricConfig::new(m, d)))
        .collect();
    let (checked, skipped): (Vec<_>, Vec<_>) = configs.into_iter().partition(|c| !flat_headed_rr(c));
    let cutoffs = pir::default_cutoffs();
    let mut worst = (f64::INFINITY, String::new());
    for seed in DOMINANCE_SEEDS {
        let ds = generate_synthetic(&SynthSpec::default(), seed).unwrap();
        let grid = pir_sweep(&ds, &checked, &pir::default_thresholds(), &cutoffs).unwrap();
        for (ci, config) in checked.iter().enumerate() {
            for &c in &cutoffs {
                let best = grid.best_threshold(ci, c).map_or(0.5, |b| b.1);
                if best < worst.0 {
                    worst = (best, format!("{} @{c}, seed {seed}", config.label()));
                }
            }
        }
    }
    let skipped: Vec<String> = skipped.iter().map(MetricConfig::label).collect();
    (
        worst.0 > 0.5,
        format!(
            "headline figures of the original user study rest on unpublished data and are not reproduced; \
             smoke check on {} seeds x {} configs x {} cut-offs, lowest best-threshold PIR {:.4} ({}); \
             not checked (constant scores): {}",
            DOMINANCE_SEEDS.len(),
            checked.len(),
            cutoffs.len(),
            worst.0,
            worst.1,
            skipped.join(", ")
        ),
    )
}

fn end_to_end() -> (bool, String) {
    let tmp = tempfile::tempdir().unwrap();
    let data = tmp.path().join("data");
    let out = tmp.path().join("out");
    let cli = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_prefeval"))
            .args(args)
            .output()
            .expect("binary runs")
    };
    let start = Instant::now();
    let steps = [
        cli(&["synth", "--queries", "50", "--raters", "5", "--seed", "7", "--out", data.to_str().unwrap()]),
        cli(&["validate", "--data", data.to_str().unwrap()]),
        cli(&[
            "sweep",
            "--data",
            data.to_str().unwrap(),
            "--metrics",
            "precision,ndcg,map,err,mrr,esl",
            "--out",
            out.to_str().unwrap(),
        ]),
    ];
    let elapsed = start.elapsed();
    if let Some(bad) = steps.iter().find(|o| !o.status.success()) {
        return (false, format!("step failed: {}", String::from_utf8_lossy(&bad.stderr)));
    }
    let read = |f: &str| fs::read_to_string(out.join(f)).unwrap_or_default();
    let grid = read("grid.tsv");
    let rows = grid.lines().skip(1).collect::<Vec<_>>();
    let configs = rows.iter().map(|l| l.split('\t').next().unwrap()).collect::<std::collections::BTreeSet<_>>();
    let complete_grid = !rows.is_empty() && rows.len() == configs.len() * 10 * 31;
    let series_ok = |f: &str| {
        let text = read(f);
        text.lines().count() == 11 && !text.contains("NA")
    };
    let pass = complete_grid && series_ok("best.tsv") && series_ok("zero.tsv") && elapsed < END_TO_END_BUDGET;
    (
        pass,
        format!(
            "{} grid cells over {} configs, best.tsv and zero.tsv with 10 cut-offs [{:.3}s, budget {}s]",
            rows.len(),
            configs.len(),
            elapsed.as_secs_f64(),
            END_TO_END_BUDGET.as_secs()
        ),
    )
}

type Criterion = (&'static str, &'static str, fn() -> (bool, String));

#[test]
fn acceptance() {
    let criteria: [Criterion; 7] = [
        ("1", "MAP worked example", map_worked_example),
        ("2", "DCG worked example", dcg_worked_example),
        ("3", "PIR worked example", pir_worked_example),
        ("4", "engine/oracle equivalence", oracle_equivalence),
        ("5", "property suites", property_suites),
        ("6", "non-reproducibility + dominance smoke", dominance_smoke),
        ("7", "synth -> validate -> sweep", end_to_end),
    ];
    let outcomes: Vec<Outcome> = criteria
        .iter()
        .map(|&(id, name, f)| {
            let (pass, detail) = f();
            Outcome { id, name, pass, detail }
        })
        .collect();
    for o in &outcomes {
        println!("{} {} {}: {}", if o.pass { "PASS" } else { "FAIL" }, o.id, o.name, o.detail);
    }
    let failed: Vec<&str> = outcomes.iter().filter(|o| !o.pass).map(|o| o.id).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
