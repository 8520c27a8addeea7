//! Session-log measures and their use as PIR inputs, plus descriptive
//! statistics over sessions and judgments.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{EvaluationDataset, QueryType, Session, Variant};
use crate::pir::{check_thresholds, pir, threshold_range, PirCell, ScoredPair};

/// Rank assigned to sessions without clicks (one past the 20 shown results).
pub const NO_CLICK_RANK: f64 = 21.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Endpoint {
    /// Session end timestamp.
    #[default]
    ExplicitEnd,
    /// Timestamp of the last click; click-free sessions have no duration.
    LastClick,
}

impl FromStr for Endpoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "explicit-end" | "end" => Ok(Endpoint::ExplicitEnd),
            "last-click" => Ok(Endpoint::LastClick),
            _ => Err(Error::InvalidConfig(format!("unknown endpoint {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    Duration(Endpoint),
    ClickCount,
    MeanClickRank,
    FirstClickRank,
}

impl Measure {
    pub fn name(self) -> &'static str {
        match self {
            Measure::Duration(_) => "duration",
            Measure::ClickCount => "clicks",
            Measure::MeanClickRank => "mean-click-rank",
            Measure::FirstClickRank => "first-click-rank",
        }
    }

    /// Threshold grid in the measure's own unit.
    pub fn default_thresholds(self) -> Vec<f64> {
        let (stop, step) = match self {
            Measure::Duration(_) => (120.0, 5.0),
            Measure::ClickCount => (10.0, 1.0),
            Measure::MeanClickRank | Measure::FirstClickRank => (20.0, 1.0),
        };
        threshold_range(0.0, stop, step).expect("static range")
    }

    /// Value for one session, `None` when the session is excluded.
    pub fn of(self, s: &Session) -> Option<f64> {
        match self {
            Measure::Duration(e) => session_duration(s, e),
            Measure::ClickCount => Some(click_count(s) as f64),
            Measure::MeanClickRank => Some(mean_click_rank(s)),
            Measure::FirstClickRank => Some(first_click_rank(s)),
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = Error;

    /// Duration parses with the explicit-end endpoint.
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "duration" => Ok(Measure::Duration(Endpoint::ExplicitEnd)),
            "clicks" | "click-count" => Ok(Measure::ClickCount),
            "mean-click-rank" | "mean-rank" => Ok(Measure::MeanClickRank),
            "first-click-rank" | "first-rank" => Ok(Measure::FirstClickRank),
            _ => Err(Error::InvalidConfig(format!("unknown measure {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Direction {
    #[default]
    LowerBetter,
    HigherBetter,
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "lower-better" | "lower" => Ok(Direction::LowerBetter),
            "higher-better" | "higher" => Ok(Direction::HigherBetter),
            _ => Err(Error::InvalidConfig(format!("unknown direction {s:?}"))),
        }
    }
}

/// Seconds from start to the chosen endpoint.
pub fn session_duration(s: &Session, endpoint: Endpoint) -> Option<f64> {
    let end = match endpoint {
        Endpoint::ExplicitEnd => s.end_ts,
        Endpoint::LastClick => s.clicks.iter().map(|c| c.ts).max()?,
    };
    Some((end - s.start_ts) as f64)
}

/// Click events, repeats included.
pub fn click_count(s: &Session) -> usize {
    s.clicks.len()
}

pub fn mean_click_rank(s: &Session) -> f64 {
    if s.clicks.is_empty() {
        return NO_CLICK_RANK;
    }
    s.clicks.iter().map(|c| c.rank as f64).sum::<f64>() / s.clicks.len() as f64
}

/// Rank of the earliest click by timestamp (not the top-most clicked rank).
pub fn first_click_rank(s: &Session) -> f64 {
    s.clicks
        .iter()
        .min_by_key(|c| c.ts)
        .map_or(NO_CLICK_RANK, |c| c.rank as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ImplicitOptions {
    pub measure: Measure,
    pub direction: Direction,
    /// Keep only sessions whose explicit duration lies in `[min, max]` seconds.
    pub band: Option<(f64, f64)>,
}

impl Default for Measure {
    fn default() -> Self {
        Measure::Duration(Endpoint::ExplicitEnd)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ImplicitScores {
    pub pairs: Vec<ScoredPair>,
    /// Queries with preferences but without usable sessions for both variants.
    pub excluded_queries: usize,
    /// Verdicts on those queries.
    pub excluded_verdicts: usize,
}

/// Per-(query, variant) means of the measure across all raters' sessions,
/// oriented so that higher is better, paired with every preference verdict
/// on the query.
pub fn implicit_scores(ds: &EvaluationDataset, opts: &ImplicitOptions) -> ImplicitScores {
    let mut sums: BTreeMap<(&str, Variant), (f64, usize)> = BTreeMap::new();
    for s in ds.sessions() {
        if let Some((lo, hi)) = opts.band {
            let d = (s.end_ts - s.start_ts) as f64;
            if d < lo || d > hi {
                continue;
            }
        }
        if let Some(v) = opts.measure.of(s) {
            let e = sums.entry((s.query_id.as_str(), s.variant)).or_default();
            e.0 += v;
            e.1 += 1;
        }
    }
    let mean = |q: &str, v: Variant| sums.get(&(q, v)).map(|&(s, n)| s / n as f64);
    let sign = match opts.direction {
        Direction::LowerBetter => -1.0,
        Direction::HigherBetter => 1.0,
    };

    let mut out = ImplicitScores::default();
    let mut excluded = BTreeSet::new();
    for p in ds.preferences() {
        match (mean(&p.query_id, Variant::A), mean(&p.query_id, Variant::B)) {
            (Some(a), Some(b)) => out.pairs.push(ScoredPair {
                query_id: p.query_id.clone(),
                rater_id: p.rater_id.clone(),
                score_a: sign * a,
                score_b: sign * b,
                verdict: p.verdict,
            }),
            _ => {
                excluded.insert(p.query_id.as_str());
                out.excluded_verdicts += 1;
            }
        }
    }
    out.excluded_queries = excluded.len();
    out
}

/// One PIR cell per threshold (in measure units).
pub fn implicit_pir(
    ds: &EvaluationDataset,
    opts: &ImplicitOptions,
    thresholds: &[f64],
) -> Result<Vec<PirCell>> {
    check_thresholds(thresholds)?;
    let scores = implicit_scores(ds, opts);
    Ok(thresholds
        .iter()
        .map(|&t| PirCell {
            excluded: scores.excluded_verdicts,
            ..pir(&scores.pairs, t)
        })
        .collect())
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VariantStats {
    pub sessions: usize,
    /// `None` without sessions.
    pub zero_click_share: Option<f64>,
    /// Clicks per session → number of sessions.
    pub clicks_per_session: BTreeMap<usize, usize>,
    /// Rank → clicks.
    pub rank_clicks: BTreeMap<u32, usize>,
    /// Rank → mean over queries of the per-query mean unit relevance.
    pub rank_relevance: BTreeMap<usize, f64>,
    /// Rank → judgment counts for grades 1..=6.
    pub rank_grades: BTreeMap<usize, [usize; 6]>,
    /// Share of satisfied sessions among those with a satisfaction answer.
    pub mean_satisfaction: Option<f64>,
    pub satisfaction_answers: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QueryTypeStats {
    pub query_type: QueryType,
    pub count: usize,
    /// Mean query length in whitespace-separated words.
    pub mean_words: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DescriptiveStats {
    pub a: VariantStats,
    pub b: VariantStats,
    pub query_types: Vec<QueryTypeStats>,
}

impl DescriptiveStats {
    pub fn variant(&self, v: Variant) -> &VariantStats {
        match v {
            Variant::A => &self.a,
            Variant::B => &self.b,
        }
    }
}

fn variant_stats(ds: &EvaluationDataset, variant: Variant) -> VariantStats {
    let mut st = VariantStats::default();
    let mut zero = 0;
    let mut satisfied = 0;
    for s in ds.sessions().iter().filter(|s| s.variant == variant) {
        st.sessions += 1;
        if s.clicks.is_empty() {
            zero += 1;
        }
        *st.clicks_per_session.entry(s.clicks.len()).or_default() += 1;
        for c in &s.clicks {
            *st.rank_clicks.entry(c.rank).or_default() += 1;
        }
        if let Some(sat) = s.satisfied {
            st.satisfaction_answers += 1;
            satisfied += sat as usize;
        }
    }
    if st.sessions > 0 {
        st.zero_click_share = Some(zero as f64 / st.sessions as f64);
    }
    if st.satisfaction_answers > 0 {
        st.mean_satisfaction = Some(satisfied as f64 / st.satisfaction_answers as f64);
    }

    let mut per_rank: BTreeMap<usize, (f64, usize)> = BTreeMap::new();
    for pair in ds.list_pairs() {
        for (i, result) in pair.list(variant).iter().enumerate() {
            let rank = i + 1;
            let mut sum = 0.0;
            let mut n = 0;
            for j in ds.judgments_for(&pair.query_id, result) {
                sum += j.grade.unit();
                n += 1;
                st.rank_grades.entry(rank).or_default()[j.grade.value() as usize - 1] += 1;
            }
            if n > 0 {
                let e = per_rank.entry(rank).or_default();
                e.0 += sum / n as f64;
                e.1 += 1;
            }
        }
    }
    st.rank_relevance = per_rank
        .into_iter()
        .map(|(r, (s, n))| (r, s / n as f64))
        .collect();
    st
}

pub fn descriptive_stats(ds: &EvaluationDataset) -> DescriptiveStats {
    let query_types = QueryType::ALL
        .into_iter()
        .filter_map(|t| {
            let words: Vec<usize> = ds
                .queries()
                .iter()
                .filter(|q| q.query_type == t)
                .map(|q| q.text.split_whitespace().count())
                .collect();
            (!words.is_empty()).then(|| QueryTypeStats {
                query_type: t,
                count: words.len(),
                mean_words: words.iter().sum::<usize>() as f64 / words.len() as f64,
            })
        })
        .collect();
    DescriptiveStats {
        a: variant_stats(ds, Variant::A),
        b: variant_stats(ds, Variant::B),
        query_types,
    }
}
