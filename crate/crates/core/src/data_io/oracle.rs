//! Brute-force PIR reference used to cross-check the engine in tests.
//!
//! Everything here is re-derived by linear scans over the raw records:
//! relevance lookup, the result pool, the metric dispatch, the preference
//! sign and the aggregation. Only the per-list metric formulas are shared
//! with the engine.

use crate::error::{Error, Result};
use crate::implicit::{Direction, ImplicitOptions};
use crate::metrics::{self, ApDivisor, IdealPool, JudgedList};
use crate::model::{EvaluationDataset, ValidationMode, Variant, Verdict};
use crate::pir::{ApNorm, Metric, MetricConfig, RatingSource};

const TOLERANCE: f64 = 1e-9;

fn relevance(
    ds: &EvaluationDataset,
    query: &str,
    result: &str,
    rater: &str,
    config: &MetricConfig,
) -> Option<f64> {
    let mut sum = 0.0;
    let mut n = 0usize;
    for j in ds.judgments() {
        if j.query_id != query || j.result_id != result {
            continue;
        }
        let own = j.rater_id == rater;
        match config.rating_source {
            RatingSource::SameUser if own => return Some(config.scale.apply(j.grade)),
            RatingSource::OtherUsers if !own => {
                sum += config.scale.apply(j.grade);
                n += 1;
            }
            _ => {}
        }
    }
    if n == 0 {
        None
    } else {
        Some(sum / n as f64)
    }
}

fn metric_value(config: &MetricConfig, cutoff: usize, list: &JudgedList, pool: &IdealPool) -> Result<f64> {
    let f = &config.discount;
    match config.metric {
        Metric::Precision => metrics::precision_at(list, cutoff, f, None),
        Metric::Ndcg => metrics::ndcg(list, pool, cutoff, f),
        Metric::Map => match config.ap_norm {
            ApNorm::KnownRelevant => {
                metrics::average_precision(list, cutoff, f, ApDivisor::KnownRelevant(pool.known_relevant()))
            }
            ApNorm::EvaluatedCount => metrics::average_precision(list, cutoff, f, ApDivisor::EvaluatedCount),
        },
        Metric::Err => metrics::err(list, cutoff, f),
        Metric::Mrr => metrics::reciprocal_rank(list, cutoff, f, config.relevant_above),
        Metric::Esl => metrics::esl(list, cutoff, f, config.esl_n.expect("ESL target")),
    }
}

fn sign(diff: f64, t: f64) -> i8 {
    if diff > t + TOLERANCE {
        1
    } else if -diff > t + TOLERANCE {
        -1
    } else {
        0
    }
}

fn ratio(pairs: &[(f64, f64, Verdict)], t: f64) -> f64 {
    let mut correct = 0i64;
    let mut missed = 0i64;
    let mut reversed = 0i64;
    for &(a, b, verdict) in pairs {
        let user = match verdict {
            Verdict::A => 1,
            Verdict::B => -1,
            Verdict::Equal => continue,
        };
        let m = sign(a - b, t);
        if m == 0 {
            missed += 1;
        } else if m == user {
            correct += 1;
        } else {
            reversed += 1;
        }
    }
    let n = correct + missed + reversed;
    if n == 0 {
        0.5
    } else {
        0.5 + (correct - reversed) as f64 / (2 * n) as f64
    }
}

/// Scores of both variants for every verdict the configuration admits.
fn scored(ds: &EvaluationDataset, config: &MetricConfig, cutoff: usize) -> Result<Vec<(f64, f64, Verdict)>> {
    let mut out = Vec::new();
    for p in ds.preferences() {
        let Some(query) = ds.queries().iter().find(|q| q.id == p.query_id) else {
            return Err(Error::UnknownQuery(p.query_id.clone()));
        };
        if !config.includes(query.query_type) {
            continue;
        }
        let Some(pair) = ds.list_pairs().iter().find(|l| l.query_id == p.query_id) else {
            return Err(Error::UnknownQuery(p.query_id.clone()));
        };

        let mut pool_ids: Vec<&String> = Vec::new();
        for id in pair.variant_a.iter().chain(&pair.variant_b) {
            if !pool_ids.contains(&id) {
                pool_ids.push(id);
            }
        }
        let pool_values: Vec<f64> = pool_ids
            .iter()
            .map(|id| relevance(ds, &p.query_id, id, &p.rater_id, config).unwrap_or(0.0))
            .collect();
        let pool = IdealPool::new(pool_values)?;

        let mut lists = Vec::new();
        for v in [Variant::A, Variant::B] {
            let ids = pair.list(v);
            if ids.len() < cutoff {
                return Err(Error::CutoffTooLarge { cutoff, len: ids.len() });
            }
            let mut values = Vec::new();
            for id in &ids[..cutoff] {
                match relevance(ds, &p.query_id, id, &p.rater_id, config) {
                    Some(x) => values.push(x),
                    None if ds.mode() == ValidationMode::Lenient => values.push(0.0),
                    None => return Err(Error::MissingJudgment(format!("{}/{id}", p.query_id))),
                }
            }
            lists.push(JudgedList::new(values)?);
        }

        let a = metric_value(config, cutoff, &lists[0], &pool);
        let b = metric_value(config, cutoff, &lists[1], &pool);
        match (a, b) {
            (Ok(a), Ok(b)) => out.push((a, b, p.verdict)),
            (Err(e), _) | (_, Err(e)) if e.is_exclusion() => {}
            (Err(e), _) | (_, Err(e)) => return Err(e),
        }
    }
    Ok(out)
}

/// PIR of one configuration at threshold `t` and `cutoff`.
pub fn oracle_pir(ds: &EvaluationDataset, config: &MetricConfig, t: f64, cutoff: usize) -> Result<f64> {
    Ok(ratio(&scored(ds, config, cutoff)?, t))
}

/// [`oracle_pir`] over several thresholds, scoring the lists only once.
pub fn oracle_pir_row(
    ds: &EvaluationDataset,
    config: &MetricConfig,
    thresholds: &[f64],
    cutoff: usize,
) -> Result<Vec<f64>> {
    let pairs = scored(ds, config, cutoff)?;
    Ok(thresholds.iter().map(|&t| ratio(&pairs, t)).collect())
}

/// Session-measure PIR computed by rescanning the session log per verdict.
pub fn oracle_implicit_pir(ds: &EvaluationDataset, opts: &ImplicitOptions, t: f64) -> f64 {
    let mean = |query: &str, variant: Variant| -> Option<f64> {
        let mut sum = 0.0;
        let mut n = 0usize;
        for s in ds.sessions() {
            if s.query_id != query || s.variant != variant {
                continue;
            }
            let duration = (s.end_ts - s.start_ts) as f64;
            if opts.band.is_some_and(|(lo, hi)| duration < lo || duration > hi) {
                continue;
            }
            if let Some(v) = opts.measure.of(s) {
                sum += v;
                n += 1;
            }
        }
        (n > 0).then(|| sum / n as f64)
    };
    let mut pairs = Vec::new();
    for p in ds.preferences() {
        if let (Some(a), Some(b)) = (mean(&p.query_id, Variant::A), mean(&p.query_id, Variant::B)) {
            let (a, b) = match opts.direction {
                Direction::HigherBetter => (a, b),
                Direction::LowerBetter => (-a, -b),
            };
            pairs.push((a, b, p.verdict));
        }
    }
    ratio(&pairs, t)
}
