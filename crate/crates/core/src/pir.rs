//! Preference Identification Ratio (PIR): how often a metric picks the
//! result list a user actually preferred.
//!
//! The unit of analysis is one preference verdict, i.e. a (query, rater)
//! pair. For each pair the configured metric scores both variants; the sign
//! of the score difference, after applying a threshold, is compared with the
//! verdict. Outcomes are counted into five categories and PIR is derived from
//! the counts with a single final division, so results do not depend on the
//! order in which pairs or grid cells are evaluated.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrics::{self, ApDivisor, IdealPool, JudgedList};
use crate::model::{EvaluationDataset, QueryType, RankedListPair, ValidationMode, Verdict};
use crate::scales::{DiscountFunction, RelevanceScale};

/// Score differences within this distance of the threshold count as equal.
/// Absorbs floating-point noise such as 0.8 − 0.6 = 0.20000000000000007.
pub const PREF_TOLERANCE: f64 = 1e-9;

/// Largest cut-off a [`MetricConfig`] accepts.
pub const MAX_CUTOFF: usize = 10;

/// Metric-side preference: 1 if `diff > t`, −1 if `diff < −t`, else 0.
pub fn pref(diff: f64, threshold: f64) -> i8 {
    let t = threshold + PREF_TOLERANCE;
    if diff > t {
        1
    } else if diff < -t {
        -1
    } else {
        0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Precision,
    Ndcg,
    Map,
    Err,
    Mrr,
    Esl,
}

impl Metric {
    pub const ALL: [Metric; 6] = [
        Metric::Precision,
        Metric::Ndcg,
        Metric::Map,
        Metric::Err,
        Metric::Mrr,
        Metric::Esl,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Precision => "precision",
            Metric::Ndcg => "ndcg",
            Metric::Map => "map",
            Metric::Err => "err",
            Metric::Mrr => "mrr",
            Metric::Esl => "esl",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.to_ascii_lowercase();
        match s.as_str() {
            "p" => Ok(Metric::Precision),
            "ap" => Ok(Metric::Map),
            "rr" => Ok(Metric::Mrr),
            _ => Metric::ALL
                .into_iter()
                .find(|m| m.name() == s)
                .ok_or_else(|| Error::InvalidConfig(format!("unknown metric {s:?}"))),
        }
    }
}

/// Whose single-result grades feed the metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RatingSource {
    /// The preference rater's own grades.
    #[default]
    SameUser,
    /// Mean of every other rater's (scaled) grades.
    OtherUsers,
}

impl fmt::Display for RatingSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RatingSource::SameUser => "same-user",
            RatingSource::OtherUsers => "other-users",
        })
    }
}

impl FromStr for RatingSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "same-user" | "same" => Ok(RatingSource::SameUser),
            "other-users" | "other" | "different-users" => Ok(RatingSource::OtherUsers),
            _ => Err(Error::InvalidConfig(format!("unknown rating source {s:?}"))),
        }
    }
}

/// Average precision normalisation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ApNorm {
    /// Divide by the number of relevant results in the query's pool.
    KnownRelevant,
    /// Divide by the cut-off.
    #[default]
    EvaluatedCount,
}

impl FromStr for ApNorm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "known-relevant" | "known" => Ok(ApNorm::KnownRelevant),
            "evaluated-count" | "evaluated" | "cutoff" => Ok(ApNorm::EvaluatedCount),
            _ => Err(Error::InvalidConfig(format!("unknown AP normalisation {s:?}"))),
        }
    }
}

impl fmt::Display for ApNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ApNorm::KnownRelevant => "known-relevant",
            ApNorm::EvaluatedCount => "evaluated-count",
        })
    }
}

/// One point in the metric parameter space.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricConfig {
    pub metric: Metric,
    pub discount: DiscountFunction,
    pub scale: RelevanceScale,
    pub cutoff: usize,
    /// Cumulative relevance target; required for ESL only.
    pub esl_n: Option<f64>,
    pub ap_norm: ApNorm,
    pub rating_source: RatingSource,
    /// Restrict evaluation to these query types.
    pub query_filter: Option<BTreeSet<QueryType>>,
    /// MRR counts a result as relevant when its relevance exceeds this.
    pub relevant_above: f64,
}

impl MetricConfig {
    /// Six-point scale, cut-off 10, same-user ratings. ESL defaults to a
    /// relevance target of 1.
    pub fn new(metric: Metric, discount: DiscountFunction) -> Self {
        MetricConfig {
            metric,
            discount,
            scale: RelevanceScale::SixPoint,
            cutoff: MAX_CUTOFF,
            esl_n: (metric == Metric::Esl).then_some(1.0),
            ap_norm: ApNorm::default(),
            rating_source: RatingSource::default(),
            query_filter: None,
            relevant_above: 0.0,
        }
    }

    pub fn with_cutoff(mut self, cutoff: usize) -> Self {
        self.cutoff = cutoff;
        self
    }

    pub fn with_scale(mut self, scale: RelevanceScale) -> Self {
        self.scale = scale;
        self
    }

    pub fn with_esl_n(mut self, n: f64) -> Self {
        self.esl_n = Some(n);
        self
    }

    pub fn with_ap_norm(mut self, norm: ApNorm) -> Self {
        self.ap_norm = norm;
        self
    }

    pub fn with_rating_source(mut self, source: RatingSource) -> Self {
        self.rating_source = source;
        self
    }

    pub fn with_query_filter(mut self, types: impl IntoIterator<Item = QueryType>) -> Self {
        self.query_filter = Some(types.into_iter().collect());
        self
    }

    pub fn with_relevant_above(mut self, t: f64) -> Self {
        self.relevant_above = t;
        self
    }

    pub fn check(&self) -> Result<()> {
        if !(1..=MAX_CUTOFF).contains(&self.cutoff) {
            return Err(Error::InvalidConfig(format!(
                "cut-off {} outside 1..={MAX_CUTOFF}",
                self.cutoff
            )));
        }
        match (self.metric, self.esl_n) {
            (Metric::Esl, None) => Err(Error::InvalidConfig("ESL needs a relevance target n".into())),
            (Metric::Esl, Some(n)) if !(n > 0.0) => {
                Err(Error::InvalidConfig(format!("ESL target must be positive, got {n}")))
            }
            (m, Some(_)) if m != Metric::Esl => {
                Err(Error::InvalidConfig(format!("{m} takes no ESL target")))
            }
            _ => Ok(()),
        }
    }

    pub fn includes(&self, query_type: QueryType) -> bool {
        self.query_filter
            .as_ref()
            .is_none_or(|set| set.contains(&query_type))
    }

    /// Scores one list against the query's pool.
    pub fn score(&self, list: &JudgedList, pool: &IdealPool) -> Result<f64> {
        let c = self.cutoff;
        let f = &self.discount;
        match self.metric {
            Metric::Precision => metrics::precision_at(list, c, f, None),
            Metric::Ndcg => metrics::ndcg(list, pool, c, f),
            Metric::Map => {
                let divisor = match self.ap_norm {
                    ApNorm::KnownRelevant => ApDivisor::KnownRelevant(pool.known_relevant()),
                    ApNorm::EvaluatedCount => ApDivisor::EvaluatedCount,
                };
                metrics::average_precision(list, c, f, divisor)
            }
            Metric::Err => metrics::err(list, c, f),
            Metric::Mrr => metrics::reciprocal_rank(list, c, f, self.relevant_above),
            Metric::Esl => metrics::esl(list, c, f, self.esl_n.unwrap_or(1.0)),
        }
    }

    /// Identifies the configuration, cut-off excluded.
    pub fn label(&self) -> String {
        let mut s = format!(
            "{}/{}/{}/{}",
            self.metric, self.discount, self.scale, self.rating_source
        );
        match self.metric {
            Metric::Esl => s.push_str(&format!("/n={}", self.esl_n.unwrap_or(1.0))),
            Metric::Map => s.push_str(&format!("/{}", self.ap_norm)),
            Metric::Mrr if self.relevant_above != 0.0 => {
                s.push_str(&format!("/rel>{}", self.relevant_above))
            }
            _ => {}
        }
        if let Some(types) = &self.query_filter {
            let names: Vec<&str> = types.iter().map(|t| t.as_str()).collect();
            s.push_str(&format!("/{}", names.join("+")));
        }
        s
    }
}

/// Relevance of one result under a rating source, or `None` when no
/// suitable judgment exists.
pub fn source_relevance(
    ds: &EvaluationDataset,
    query_id: &str,
    result_id: &str,
    rater_id: &str,
    source: RatingSource,
    scale: RelevanceScale,
) -> Option<f64> {
    let mut judgments = ds.judgments_for(query_id, result_id);
    match source {
        RatingSource::SameUser => judgments
            .find(|j| j.rater_id == rater_id)
            .map(|j| scale.apply(j.grade)),
        RatingSource::OtherUsers => {
            let (sum, n) = judgments
                .filter(|j| j.rater_id != rater_id)
                .fold((0.0, 0usize), |(s, n), j| (s + scale.apply(j.grade), n + 1));
            (n > 0).then(|| sum / n as f64)
        }
    }
}

/// Mean scaled grade of one result over every rater who judged it.
pub fn mean_relevance(
    ds: &EvaluationDataset,
    query_id: &str,
    result_id: &str,
    scale: RelevanceScale,
) -> Option<f64> {
    let (sum, n) = ds
        .judgments_for(query_id, result_id)
        .fold((0.0, 0usize), |(s, n), j| (s + scale.apply(j.grade), n + 1));
    (n > 0).then(|| sum / n as f64)
}

struct PairInputs {
    a: JudgedList,
    b: JudgedList,
    pool: IdealPool,
}

fn pair_inputs(
    ds: &EvaluationDataset,
    config: &MetricConfig,
    pair: &RankedListPair,
    rater_id: &str,
) -> Result<PairInputs> {
    let lookup = |id: &str| {
        source_relevance(ds, &pair.query_id, id, rater_id, config.rating_source, config.scale)
    };
    let listed = |ids: &[String]| -> Result<JudgedList> {
        if ids.len() < config.cutoff {
            return Err(Error::CutoffTooLarge {
                cutoff: config.cutoff,
                len: ids.len(),
            });
        }
        let values = ids[..config.cutoff]
            .iter()
            .map(|id| match lookup(id) {
                Some(v) => Ok(v),
                None if ds.mode() == ValidationMode::Lenient => Ok(0.0),
                None => Err(Error::MissingJudgment(format!(
                    "no {} judgment of result {id:?} for query {:?} (rater {rater_id:?})",
                    config.rating_source, pair.query_id
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        JudgedList::new(values)
    };
    let a = listed(&pair.variant_a)?;
    let b = listed(&pair.variant_b)?;
    // Results nobody (suitable) judged enter the pool as non-relevant.
    let pool = IdealPool::new(
        pair.pooled_results()
            .into_iter()
            .map(|id| lookup(id).unwrap_or(0.0))
            .collect(),
    )?;
    Ok(PairInputs { a, b, pool })
}

/// Scores both variants of `query_id` for one preference rater. `Ok(None)`
/// means the metric excludes the query (zero ideal DCG, zero AP divisor).
pub fn score_pair(
    ds: &EvaluationDataset,
    config: &MetricConfig,
    query_id: &str,
    rater_id: &str,
) -> Result<Option<(f64, f64)>> {
    config.check()?;
    let pair = ds
        .list_pair(query_id)
        .ok_or_else(|| Error::UnknownQuery(query_id.to_owned()))?;
    let inputs = pair_inputs(ds, config, pair, rater_id)?;
    let scored = config
        .score(&inputs.a, &inputs.pool)
        .and_then(|a| Ok((a, config.score(&inputs.b, &inputs.pool)?)));
    match scored {
        Ok(s) => Ok(Some(s)),
        Err(e) if e.is_exclusion() => Ok(None),
        Err(e) => Err(e),
    }
}

/// Metric scores for one verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoredPair {
    pub query_id: String,
    pub rater_id: String,
    pub score_a: f64,
    pub score_b: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScoredPairs {
    pub pairs: Vec<ScoredPair>,
    /// Verdicts dropped because the metric could not score their query.
    pub excluded: usize,
}

/// Scores every preference verdict of the dataset under `config`, in record
/// order, honouring the query-type filter.
pub fn score_pairs(ds: &EvaluationDataset, config: &MetricConfig) -> Result<ScoredPairs> {
    config.check()?;
    let mut out = ScoredPairs::default();
    for p in ds.preferences() {
        let query = ds
            .query(&p.query_id)
            .ok_or_else(|| Error::UnknownQuery(p.query_id.clone()))?;
        if !config.includes(query.query_type) {
            continue;
        }
        match score_pair(ds, config, &p.query_id, &p.rater_id)? {
            Some((a, b)) => out.pairs.push(ScoredPair {
                query_id: p.query_id.clone(),
                rater_id: p.rater_id.clone(),
                score_a: a,
                score_b: b,
                verdict: p.verdict,
            }),
            None => out.excluded += 1,
        }
    }
    Ok(out)
}

/// Five-way split of verdict outcomes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct PreferenceCounts {
    /// User prefers a list and the metric picks the same one.
    pub correct_pref: u64,
    /// User sees no difference and neither does the metric.
    pub correct_equal: u64,
    /// User sees no difference but the metric prefers a list.
    pub false_pref: u64,
    /// User prefers a list but the metric sees no difference.
    pub missed_pref: u64,
    /// Metric picks the list the user liked less.
    pub reversed_pref: u64,
}

impl PreferenceCounts {
    pub fn record(&mut self, metric_pref: i8, verdict: Verdict) {
        let user = verdict.sign();
        match (user, metric_pref) {
            (0, 0) => self.correct_equal += 1,
            (0, _) => self.false_pref += 1,
            (_, 0) => self.missed_pref += 1,
            (u, m) if u == m => self.correct_pref += 1,
            _ => self.reversed_pref += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.correct_pref + self.correct_equal + self.false_pref + self.missed_pref + self.reversed_pref
    }

    /// Verdicts stating a preference; the PIR denominator before doubling.
    pub fn preferring(&self) -> u64 {
        self.correct_pref + self.missed_pref + self.reversed_pref
    }

    /// `0.5 + (correct − reversed) / (2·preferring)`, or 0.5 when no verdict
    /// states a preference.
    pub fn pir(&self) -> f64 {
        let n = self.preferring();
        if n == 0 {
            return 0.5;
        }
        let k = self.correct_pref as i64 - self.reversed_pref as i64;
        0.5 + k as f64 / (2 * n) as f64
    }

    /// Category shares over all verdicts in the order correct preference,
    /// correct equality, false preference, missed preference, reversed
    /// preference. All zero when nothing was evaluated.
    pub fn shares(&self) -> [f64; 5] {
        let total = self.total();
        let parts = [
            self.correct_pref,
            self.correct_equal,
            self.false_pref,
            self.missed_pref,
            self.reversed_pref,
        ];
        if total == 0 {
            return [0.0; 5];
        }
        parts.map(|c| c as f64 / total as f64)
    }
}

pub const CATEGORY_NAMES: [&str; 5] = [
    "correct_pref",
    "correct_equal",
    "false_pref",
    "missed_pref",
    "reversed_pref",
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PirCell {
    pub threshold: f64,
    pub pir: f64,
    pub counts: PreferenceCounts,
    /// Verdicts the metric could not score.
    pub excluded: usize,
}

impl PirCell {
    /// No verdict stated a preference, so PIR fell back to 0.5.
    pub fn empty_denominator(&self) -> bool {
        self.counts.preferring() == 0
    }
}

/// Counts outcomes of scored verdicts at threshold `t`.
pub fn pir(pairs: &[ScoredPair], threshold: f64) -> PirCell {
    let mut counts = PreferenceCounts::default();
    for p in pairs {
        counts.record(pref(p.score_a - p.score_b, threshold), p.verdict);
    }
    PirCell {
        threshold,
        pir: counts.pir(),
        counts,
        excluded: 0,
    }
}

/// PIR with the threshold fixed at zero (a lower bound on the
/// best-threshold value).
pub fn pir_zero_threshold(pairs: &[ScoredPair]) -> PirCell {
    pir(pairs, 0.0)
}

pub fn check_thresholds(thresholds: &[f64]) -> Result<()> {
    match thresholds.first() {
        None => return Err(Error::InvalidConfig("threshold grid is empty".into())),
        Some(&t) if !(t >= 0.0) => {
            return Err(Error::InvalidConfig(format!("threshold {t} is negative")))
        }
        _ => {}
    }
    if thresholds.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidConfig(
            "threshold grid must be strictly increasing".into(),
        ));
    }
    Ok(())
}

/// `start, start+step, …, ≤ stop`, each rounded to 1e-10 so that steps like
/// 0.01 land on the decimal grid.
pub fn threshold_range(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(stop >= start) || !(start >= 0.0) {
        return Err(Error::InvalidConfig(format!(
            "bad threshold range {start}:{stop}:{step}"
        )));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n)
        .map(|i| ((start + i as f64 * step) * 1e10).round() / 1e10)
        .collect())
}

/// The default explicit-metric threshold grid, 0.00 to 0.30 in 0.01 steps.
pub fn default_thresholds() -> Vec<f64> {
    threshold_range(0.0, 0.30, 0.01).expect("static range")
}

pub fn default_cutoffs() -> Vec<usize> {
    (1..=MAX_CUTOFF).collect()
}

/// Highest PIR in a threshold row; ties go to the smallest threshold.
pub fn best_in_row(row: &[PirCell]) -> Option<(f64, f64)> {
    let mut best: Option<&PirCell> = None;
    for cell in row {
        if best.is_none_or(|b| cell.pir > b.pir) {
            best = Some(cell);
        }
    }
    best.map(|c| (c.threshold, c.pir))
}

/// PIR cells over configurations × cut-offs × thresholds.
#[derive(Debug, Clone, PartialEq)]
pub struct PirGrid {
    pub configs: Vec<MetricConfig>,
    pub cutoffs: Vec<usize>,
    pub thresholds: Vec<f64>,
    cells: Vec<PirCell>,
}

impl PirGrid {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[PirCell] {
        &self.cells
    }

    fn cutoff_index(&self, cutoff: usize) -> Option<usize> {
        self.cutoffs.iter().position(|&c| c == cutoff)
    }

    /// All threshold cells for one configuration and cut-off.
    pub fn row(&self, config: usize, cutoff: usize) -> Option<&[PirCell]> {
        let k = self.cutoff_index(cutoff)?;
        if config >= self.configs.len() {
            return None;
        }
        let nt = self.thresholds.len();
        let start = (config * self.cutoffs.len() + k) * nt;
        Some(&self.cells[start..start + nt])
    }

    pub fn cell(&self, config: usize, cutoff: usize, threshold_index: usize) -> Option<&PirCell> {
        self.row(config, cutoff)?.get(threshold_index)
    }

    /// `(t*, pir*)` for one row.
    pub fn best_threshold(&self, config: usize, cutoff: usize) -> Option<(f64, f64)> {
        best_in_row(self.row(config, cutoff)?)
    }

    /// PIR at t = 0, if the grid contains that threshold.
    pub fn zero_threshold(&self, config: usize, cutoff: usize) -> Option<f64> {
        let ti = self.thresholds.iter().position(|&t| t == 0.0)?;
        self.cell(config, cutoff, ti).map(|c| c.pir)
    }

    pub fn has_empty_denominator(&self) -> bool {
        self.cells.iter().any(PirCell::empty_denominator)
    }
}

/// Evaluates every (configuration, cut-off, threshold) cell. Each
/// configuration's own cut-off is replaced by the entries of `cutoffs`.
/// Work is spread over the current rayon pool; the result is identical for
/// any degree of parallelism.
pub fn pir_sweep(
    ds: &EvaluationDataset,
    configs: &[MetricConfig],
    thresholds: &[f64],
    cutoffs: &[usize],
) -> Result<PirGrid> {
    check_thresholds(thresholds)?;
    if cutoffs.is_empty() {
        return Err(Error::InvalidConfig("no cut-offs given".into()));
    }
    let tasks: Vec<(usize, usize)> = (0..configs.len())
        .flat_map(|ci| cutoffs.iter().map(move |&c| (ci, c)))
        .collect();
    let rows = tasks
        .par_iter()
        .map(|&(ci, cutoff)| {
            let config = configs[ci].clone().with_cutoff(cutoff);
            let scored = score_pairs(ds, &config)?;
            Ok(thresholds
                .iter()
                .map(|&t| PirCell {
                    excluded: scored.excluded,
                    ..pir(&scored.pairs, t)
                })
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PirGrid {
        configs: configs.to_vec(),
        cutoffs: cutoffs.to_vec(),
        thresholds: thresholds.to_vec(),
        cells: rows.into_iter().flatten().collect(),
    })
}

/// Five-category outcome counts for one configuration at one threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Breakdown {
    pub threshold: f64,
    pub counts: PreferenceCounts,
    pub excluded: usize,
}

impl Breakdown {
    pub fn shares(&self) -> [f64; 5] {
        self.counts.shares()
    }

    pub fn pir(&self) -> f64 {
        self.counts.pir()
    }
}

pub fn detailed_breakdown(
    ds: &EvaluationDataset,
    config: &MetricConfig,
    threshold: f64,
    cutoff: usize,
) -> Result<Breakdown> {
    Ok(threshold_evolution(ds, config, &[threshold], cutoff)?.remove(0))
}

/// Breakdowns along a threshold grid.
pub fn threshold_evolution(
    ds: &EvaluationDataset,
    config: &MetricConfig,
    thresholds: &[f64],
    cutoff: usize,
) -> Result<Vec<Breakdown>> {
    check_thresholds(thresholds)?;
    let config = config.clone().with_cutoff(cutoff);
    let scored = score_pairs(ds, &config)?;
    Ok(thresholds
        .iter()
        .map(|&t| Breakdown {
            threshold: t,
            counts: pir(&scored.pairs, t).counts,
            excluded: scored.excluded,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scored(a: f64, b: f64, v: Verdict) -> ScoredPair {
        ScoredPair {
            query_id: String::new(),
            rater_id: String::new(),
            score_a: a,
            score_b: b,
            verdict: v,
        }
    }

    /// Precision pairs of the five-query PIR walk-through; q2 has no preference.
    fn walkthrough() -> Vec<ScoredPair> {
        vec![
            scored(0.4, 0.7, Verdict::B),
            scored(0.5, 0.4, Verdict::Equal),
            scored(0.5, 0.4, Verdict::B),
            scored(0.8, 0.4, Verdict::A),
            scored(0.6, 0.4, Verdict::A),
        ]
    }

    #[test]
    fn pref_examples() {
        assert_eq!(pref(-0.3, 0.15), -1);
        assert_eq!(pref(0.1, 0.15), 0);
        assert_eq!(pref(0.2, 0.35), 0);
        assert_eq!(pref(0.4, 0.35), 1);
        assert_eq!(pref(0.0, 0.0), 0);
        assert_eq!(pref(1e-6, 0.0), 1);
        // rounding noise on a difference equal to the threshold
        assert_eq!(pref(0.8 - 0.6, 0.2), 0);
    }

    #[test]
    fn walkthrough_pir_values() {
        let pairs = walkthrough();
        assert_eq!(pir(&pairs, 0.0).pir, 0.75);
        assert_eq!(pir(&pairs, 0.15).pir, 0.875);
        assert_eq!(pir(&pairs, 0.35).pir, 0.625);
        assert_eq!(pir(&pairs, 1.0).pir, 0.5);
        assert_eq!(pir_zero_threshold(&pairs).pir, 0.75);
    }

    #[test]
    fn walkthrough_breakdown_at_zero() {
        // q2 (no preference, diff 0.1) counts as a false preference
        let c = pir(&walkthrough(), 0.0).counts;
        assert_eq!(
            (c.correct_pref, c.correct_equal, c.false_pref, c.missed_pref, c.reversed_pref),
            (3, 0, 1, 0, 1)
        );
        assert_eq!(c.shares().iter().sum::<f64>(), 1.0);
    }

    #[test]
    fn high_threshold_leaves_only_equal_and_missed() {
        let c = pir(&walkthrough(), 0.5).counts;
        assert_eq!(c.correct_equal, 1);
        assert_eq!(c.missed_pref, 4);
        assert_eq!(c.correct_pref + c.false_pref + c.reversed_pref, 0);
    }

    #[test]
    fn all_equal_verdicts() {
        let pairs = vec![scored(0.3, 0.3, Verdict::Equal); 4];
        let cell = pir(&pairs, 0.0);
        assert!(cell.empty_denominator());
        assert_eq!(cell.pir, 0.5);
        assert_eq!(cell.counts.shares()[0..2], [0.0, 1.0]);
        assert!(pir(&[], 0.0).empty_denominator());
    }

    #[test]
    fn best_threshold_tie_breaks_low() {
        let row = |v: &[(f64, f64)]| -> Vec<PirCell> {
            v.iter()
                .map(|&(t, p)| PirCell {
                    threshold: t,
                    pir: p,
                    counts: PreferenceCounts::default(),
                    excluded: 0,
                })
                .collect()
        };
        assert_eq!(best_in_row(&row(&[(0.0, 0.75), (0.15, 0.875), (0.35, 0.625)])), Some((0.15, 0.875)));
        assert_eq!(best_in_row(&row(&[(0.0, 0.6), (0.1, 0.6), (0.2, 0.6)])), Some((0.0, 0.6)));
        assert_eq!(best_in_row(&row(&[(0.0, 0.8), (0.01, 0.8), (0.02, 0.7)])), Some((0.0, 0.8)));
        assert_eq!(best_in_row(&[]), None);
    }

    #[test]
    fn threshold_grids() {
        let g = default_thresholds();
        assert_eq!(g.len(), 31);
        assert_eq!(g[30], 0.3);
        assert_eq!(g[7], 0.07);
        assert!(check_thresholds(&g).is_ok());
        assert!(check_thresholds(&[]).is_err());
        assert!(check_thresholds(&[0.0, 0.0]).is_err());
        assert!(check_thresholds(&[-0.1, 0.0]).is_err());
        assert_eq!(threshold_range(0.0, 120.0, 5.0).unwrap().len(), 25);
    }

    #[test]
    fn config_checks() {
        assert!(MetricConfig::new(Metric::Esl, DiscountFunction::None).check().is_ok());
        let mut c = MetricConfig::new(Metric::Esl, DiscountFunction::None);
        c.esl_n = None;
        assert!(c.check().is_err());
        assert!(MetricConfig::new(Metric::Ndcg, DiscountFunction::Log2).with_esl_n(1.0).check().is_err());
        assert!(MetricConfig::new(Metric::Ndcg, DiscountFunction::Log2).with_cutoff(11).check().is_err());
        assert!(MetricConfig::new(Metric::Ndcg, DiscountFunction::Log2).with_cutoff(0).check().is_err());
        assert_eq!("MAP".parse::<Metric>().unwrap(), Metric::Map);
        assert_eq!(
            MetricConfig::new(Metric::Map, DiscountFunction::Rank).label(),
            "map/rank/six-point/same-user/evaluated-count"
        );
    }
}
