//! Seeded synthetic datasets.
//!
//! Randomness comes from `ChaCha8Rng::seed_from_u64(seed)`; the same spec
//! and seed always give the same dataset.
//!
//! Per query, a pool of results gets latent grades whose counts follow the
//! grade distribution exactly (largest-remainder rounding). Variant A ranks
//! the pool by latent grade plus uniform noise, so it is better than
//! variant B, a uniform shuffle, on average. Each judge's grade is the latent
//! grade, moved one step up or down with probability `judge_noise`.

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{
    Click, EvaluationDataset, Grade, GradedJudgment, Language, PreferenceJudgment, Query, QueryType,
    RankedListPair, Session, Variant, Verdict,
};

/// How a rater's verdict follows from their own grades.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PreferenceModel {
    /// Compares the mean unit relevance of each variant's top ten plus
    /// uniform noise in `[-noise, noise]`; differences within `margin` give
    /// EQUAL.
    MeanRelevance { margin: f64, noise: f64 },
}

impl Default for PreferenceModel {
    fn default() -> Self {
        PreferenceModel::MeanRelevance {
            margin: 0.05,
            noise: 0.1,
        }
    }
}

/// Cascade browsing: the user scans ranks in order, clicks a result with
/// probability `attractiveness · relevance`, and after each result goes on
/// with probability `continue_prob` (`continue_after_click` after a click).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClickModel {
    pub attractiveness: f64,
    pub continue_prob: f64,
    pub continue_after_click: f64,
    /// Seconds spent looking at one snippet.
    pub scan_seconds: i64,
    /// Seconds spent on a clicked page, drawn from `1..=dwell_seconds`.
    pub dwell_seconds: i64,
}

impl Default for ClickModel {
    fn default() -> Self {
        ClickModel {
            attractiveness: 0.9,
            continue_prob: 0.85,
            continue_after_click: 0.5,
            scan_seconds: 3,
            dwell_seconds: 40,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    pub queries: usize,
    pub raters: usize,
    /// Total preference verdicts, spread as evenly as possible over queries.
    pub preferences: usize,
    /// Raters grading each query's pool; the query's preference raters
    /// always grade it too.
    pub judges_per_query: usize,
    pub list_length: usize,
    /// Distinct results per query; both lists draw from this pool.
    pub pool_size: usize,
    /// Relative frequency of grades 1..=6.
    pub grade_weights: [f64; 6],
    /// Width of the uniform noise added to latent grades when ranking A.
    pub ranking_noise: f64,
    /// Probability that a judge's grade is one step off the latent grade.
    pub judge_noise: f64,
    pub preference_model: PreferenceModel,
    /// Sessions for each preference rater and variant; none when `None`.
    pub click_model: Option<ClickModel>,
    /// Relative frequency of informational, transactional, navigational,
    /// factual and meta queries.
    pub query_type_weights: [f64; 5],
}

impl Default for SynthSpec {
    fn default() -> Self {
        SynthSpec {
            queries: 50,
            raters: 5,
            preferences: 150,
            judges_per_query: 3,
            list_length: 10,
            pool_size: 15,
            grade_weights: [0.15, 0.15, 0.2, 0.2, 0.15, 0.15],
            ranking_noise: 2.0,
            judge_noise: 0.2,
            preference_model: PreferenceModel::default(),
            click_model: Some(ClickModel::default()),
            query_type_weights: [31.0, 6.0, 2.0, 2.0, 1.0],
        }
    }
}

impl SynthSpec {
    pub fn check(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InfeasibleSpec(m));
        if self.queries == 0 {
            return bad("zero queries".into());
        }
        if self.raters == 0 {
            return bad("zero raters".into());
        }
        if self.list_length == 0 || self.pool_size < self.list_length {
            return bad(format!(
                "pool of {} results cannot fill lists of {}",
                self.pool_size, self.list_length
            ));
        }
        let per_query = self.preferences.div_ceil(self.queries);
        if per_query > self.raters {
            return bad(format!(
                "{per_query} preferences per query need as many raters, only {} exist",
                self.raters
            ));
        }
        if self.judges_per_query > self.raters {
            return bad(format!(
                "{} judges per query exceed {} raters",
                self.judges_per_query, self.raters
            ));
        }
        if self.judges_per_query == 0 && self.preferences == 0 {
            return bad("no rater judges any query".into());
        }
        let weights_ok = |w: &[f64]| w.iter().all(|&x| x >= 0.0 && x.is_finite()) && w.iter().sum::<f64>() > 0.0;
        if !weights_ok(&self.grade_weights) || !weights_ok(&self.query_type_weights) {
            return bad("weights must be non-negative with a positive sum".into());
        }
        if !(0.0..=1.0).contains(&self.judge_noise) || !(self.ranking_noise >= 0.0) {
            return bad("noise parameters out of range".into());
        }
        Ok(())
    }
}

/// Splits `n` items over categories in proportion to `weights`, rounding by
/// largest remainder (ties to the lower category).
pub fn apportion(n: usize, weights: &[f64]) -> Vec<usize> {
    let total: f64 = weights.iter().sum();
    let quotas: Vec<f64> = weights.iter().map(|w| w / total * n as f64).collect();
    let mut counts: Vec<usize> = quotas.iter().map(|q| q.floor() as usize).collect();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&i, &j| {
        let (ri, rj) = (quotas[i] - quotas[i].floor(), quotas[j] - quotas[j].floor());
        rj.total_cmp(&ri).then(i.cmp(&j))
    });
    let short = n - counts.iter().sum::<usize>();
    for &i in order.iter().take(short) {
        counts[i] += 1;
    }
    counts
}

const WORDS: [&str; 24] = [
    "weather", "berlin", "cheap", "flights", "python", "recipe", "history", "train", "schedule",
    "symptoms", "download", "hotel", "review", "price", "map", "lyrics", "football", "results",
    "university", "login", "definition", "tax", "form", "news",
];

fn rater_id(i: usize) -> String {
    format!("u{:02}", i + 1)
}

fn cascade(
    rng: &mut ChaCha8Rng,
    model: &ClickModel,
    relevance: &[f64],
    start: i64,
) -> (Vec<Click>, i64) {
    let mut t = start;
    let mut clicks = Vec::new();
    for (i, &rel) in relevance.iter().enumerate() {
        t += model.scan_seconds;
        let clicked = rng.gen_bool((model.attractiveness * rel).clamp(0.0, 1.0));
        if clicked {
            clicks.push(Click {
                rank: i as u32 + 1,
                ts: t,
            });
            t += rng.gen_range(1..=model.dwell_seconds.max(1));
        }
        let go_on = if clicked {
            model.continue_after_click
        } else {
            model.continue_prob
        };
        if !rng.gen_bool(go_on.clamp(0.0, 1.0)) {
            break;
        }
    }
    (clicks, t + rng.gen_range(0..=5))
}

pub fn generate_synthetic(spec: &SynthSpec, seed: u64) -> Result<EvaluationDataset> {
    spec.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let type_dist = WeightedIndex::new(spec.query_type_weights).expect("checked weights");
    let grade_counts = apportion(spec.pool_size, &spec.grade_weights);
    let pref_counts = apportion(spec.preferences, &vec![1.0; spec.queries]);

    let mut queries = Vec::new();
    let mut judgments = Vec::new();
    let mut lists = Vec::new();
    let mut preferences = Vec::new();
    let mut sessions = Vec::new();
    let mut clock: i64 = 1_300_000_000;

    for (qi, &n_prefs) in pref_counts.iter().enumerate() {
        let qid = format!("q{:03}", qi + 1);
        let words = rng.gen_range(1..=4);
        let text: Vec<&str> = (0..words).map(|_| *WORDS.choose(&mut rng).unwrap()).collect();
        queries.push(Query {
            id: qid.clone(),
            query_type: QueryType::ALL[type_dist.sample(&mut rng)],
            language: if rng.gen_bool(0.5) { Language::En } else { Language::De },
            text: text.join(" "),
            info_need: format!("synthetic information need {}", qi + 1),
        });

        let mut latent: Vec<u8> = grade_counts
            .iter()
            .enumerate()
            .flat_map(|(g, &n)| std::iter::repeat_n(g as u8 + 1, n))
            .collect();
        latent.shuffle(&mut rng);
        let results: Vec<String> = (0..spec.pool_size).map(|d| format!("{qid}-d{:02}", d + 1)).collect();

        let mut keyed: Vec<(f64, usize)> = (0..spec.pool_size)
            .map(|d| (latent[d] as f64 + rng.gen::<f64>() * spec.ranking_noise, d))
            .collect();
        keyed.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
        let a: Vec<usize> = keyed.iter().take(spec.list_length).map(|k| k.1).collect();
        let mut b: Vec<usize> = (0..spec.pool_size).collect();
        b.shuffle(&mut rng);
        b.truncate(spec.list_length);
        lists.push(RankedListPair {
            query_id: qid.clone(),
            variant_a: a.iter().map(|&d| results[d].clone()).collect(),
            variant_b: b.iter().map(|&d| results[d].clone()).collect(),
        });

        // Preference raters start at the query's "originator" and wrap around.
        let n_judges = spec.judges_per_query.max(n_prefs);
        let judges: Vec<usize> = (0..n_judges).map(|k| (qi + k) % spec.raters).collect();
        let mut grades = vec![vec![0u8; spec.pool_size]; n_judges];
        for (k, &r) in judges.iter().enumerate() {
            for d in 0..spec.pool_size {
                let mut g = latent[d] as i64;
                if rng.gen_bool(spec.judge_noise) {
                    g += if rng.gen_bool(0.5) { 1 } else { -1 };
                }
                let g = g.clamp(1, 6);
                grades[k][d] = g as u8;
                judgments.push(GradedJudgment {
                    query_id: qid.clone(),
                    result_id: results[d].clone(),
                    rater_id: rater_id(r),
                    grade: Grade::new(g)?,
                    snippet_relevant: None,
                });
            }
        }

        for (k, own) in grades.iter().enumerate().take(n_prefs) {
            let unit = |d: usize| (6.0 - own[d] as f64) / 5.0;
            let top_mean = |ids: &[usize]| {
                let top = &ids[..ids.len().min(10)];
                top.iter().map(|&d| unit(d)).sum::<f64>() / top.len() as f64
            };
            let verdict = match spec.preference_model {
                PreferenceModel::MeanRelevance { margin, noise } => {
                    let jitter = if noise > 0.0 { rng.gen_range(-noise..=noise) } else { 0.0 };
                    let diff = top_mean(&a) - top_mean(&b) + jitter;
                    if diff > margin {
                        Verdict::A
                    } else if diff < -margin {
                        Verdict::B
                    } else {
                        Verdict::Equal
                    }
                }
            };
            let rater = rater_id(judges[k]);
            preferences.push(PreferenceJudgment {
                query_id: qid.clone(),
                rater_id: rater.clone(),
                verdict,
            });

            if let Some(model) = &spec.click_model {
                let order = if (qi + k) % 2 == 0 {
                    [Variant::A, Variant::B]
                } else {
                    [Variant::B, Variant::A]
                };
                for v in order {
                    let ids = if v == Variant::A { &a } else { &b };
                    let rel: Vec<f64> = ids.iter().map(|&d| unit(d)).collect();
                    let start = clock;
                    let (clicks, end) = cascade(&mut rng, model, &rel, start);
                    let satisfied = if clicks.is_empty() {
                        rng.gen_bool(0.2)
                    } else {
                        let best = clicks.iter().map(|c| rel[c.rank as usize - 1]).fold(0.0, f64::max);
                        rng.gen_bool((0.2 + 0.7 * best).clamp(0.0, 1.0))
                    };
                    sessions.push(Session {
                        query_id: qid.clone(),
                        rater_id: rater.clone(),
                        variant: v,
                        start_ts: start,
                        end_ts: end,
                        clicks,
                        satisfied: Some(satisfied),
                    });
                    clock = end + rng.gen_range(10..=120);
                }
            }
        }
    }
    Ok(EvaluationDataset::new(queries, judgments, lists, preferences, sessions))
}
