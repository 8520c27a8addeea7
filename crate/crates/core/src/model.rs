//! Dataset schema: queries, graded judgments, result-list pairs, preference
//! verdicts and interaction sessions, plus the validation rules tying them
//! together.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Six-point relevance grade, 1 (best imaginable result) to 6 (no value).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "u8")]
pub struct Grade(u8);

impl Grade {
    pub const BEST: Grade = Grade(1);
    pub const WORST: Grade = Grade(6);

    pub fn new(value: i64) -> Result<Self> {
        if (1..=6).contains(&value) {
            Ok(Grade(value as u8))
        } else {
            Err(Error::InvalidGrade(value))
        }
    }

    pub fn value(self) -> u8 {
        self.0
    }

    /// Linear map onto unit relevance: 1 → 1.0, 2 → 0.8, …, 6 → 0.0.
    pub fn unit(self) -> f64 {
        f64::from(6 - self.0) / 5.0
    }

    pub fn all() -> impl Iterator<Item = Grade> {
        (1..=6).map(Grade)
    }
}

impl TryFrom<i64> for Grade {
    type Error = Error;

    fn try_from(value: i64) -> Result<Self> {
        Grade::new(value)
    }
}

impl From<Grade> for u8 {
    fn from(g: Grade) -> u8 {
        g.0
    }
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Language {
    #[serde(rename = "DE")]
    De,
    #[serde(rename = "EN")]
    En,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QueryType {
    Informational,
    Transactional,
    Navigational,
    Factual,
    Meta,
}

impl QueryType {
    pub const ALL: [QueryType; 5] = [
        QueryType::Informational,
        QueryType::Transactional,
        QueryType::Navigational,
        QueryType::Factual,
        QueryType::Meta,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            QueryType::Informational => "informational",
            QueryType::Transactional => "transactional",
            QueryType::Navigational => "navigational",
            QueryType::Factual => "factual",
            QueryType::Meta => "meta",
        }
    }
}

impl fmt::Display for QueryType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for QueryType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        QueryType::ALL
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidConfig(format!("unknown query type {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Query {
    pub id: String,
    #[serde(rename = "type")]
    pub query_type: QueryType,
    pub language: Language,
    pub text: String,
    pub info_need: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedJudgment {
    pub query_id: String,
    pub result_id: String,
    pub rater_id: String,
    pub grade: Grade,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snippet_relevant: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variant {
    A,
    B,
}

impl Variant {
    pub fn other(self) -> Variant {
        match self {
            Variant::A => Variant::B,
            Variant::B => Variant::A,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::A => "A",
            Variant::B => "B",
        })
    }
}

/// The two competing rankings shown for one query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankedListPair {
    pub query_id: String,
    pub variant_a: Vec<String>,
    pub variant_b: Vec<String>,
}

impl RankedListPair {
    pub fn list(&self, variant: Variant) -> &[String] {
        match variant {
            Variant::A => &self.variant_a,
            Variant::B => &self.variant_b,
        }
    }

    /// Distinct result ids over both variants, A's order first.
    pub fn pooled_results(&self) -> Vec<&str> {
        let mut seen = HashSet::new();
        self.variant_a
            .iter()
            .chain(&self.variant_b)
            .map(String::as_str)
            .filter(|id| seen.insert(*id))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    A,
    B,
    #[serde(rename = "EQUAL")]
    Equal,
}

impl Verdict {
    /// +1 when A is preferred, −1 when B is, 0 for no preference.
    pub fn sign(self) -> i8 {
        match self {
            Verdict::A => 1,
            Verdict::B => -1,
            Verdict::Equal => 0,
        }
    }

    pub fn flipped(self) -> Verdict {
        match self {
            Verdict::A => Verdict::B,
            Verdict::B => Verdict::A,
            Verdict::Equal => Verdict::Equal,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreferenceJudgment {
    pub query_id: String,
    pub rater_id: String,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Click {
    pub rank: u32,
    pub ts: i64,
}

/// One rater's interaction with a single result list. Timestamps are
/// integer seconds since the epoch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Session {
    pub query_id: String,
    pub rater_id: String,
    pub variant: Variant,
    pub start_ts: i64,
    pub end_ts: i64,
    pub clicks: Vec<Click>,
    pub satisfied: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValidationMode {
    /// Every violation, including missing judgments, is fatal.
    #[default]
    Strict,
    /// Missing judgments are reported as warnings and later read as grade 6.
    Lenient,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidationOptions {
    pub mode: ValidationMode,
    /// Deepest rank any downstream metric will read.
    pub max_cutoff: usize,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        ValidationOptions {
            mode: ValidationMode::Strict,
            max_cutoff: 10,
        }
    }
}

impl ValidationOptions {
    pub fn new(mode: ValidationMode, max_cutoff: usize) -> Self {
        ValidationOptions { mode, max_cutoff }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    DuplicateQuery,
    DuplicateJudgment,
    DuplicateListPair,
    DuplicateResult,
    DuplicatePreference,
    DuplicateSession,
    DanglingReference,
    ListTooShort,
    TimestampOrder,
    ClickOutsideSession,
    RankViolation,
    MissingJudgment,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {}", self.kind, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub mode: ValidationMode,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    fn is_fatal(&self, v: &Violation) -> bool {
        self.mode == ValidationMode::Strict || v.kind != ViolationKind::MissingJudgment
    }

    pub fn errors(&self) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(|v| self.is_fatal(v))
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(|v| !self.is_fatal(v))
    }

    pub fn passes(&self) -> bool {
        self.errors().next().is_none()
    }

    pub fn count(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }
}

/// A complete evaluation dataset. Immutable once built; lookups go through
/// indexes created at construction time.
#[derive(Debug, Clone)]
pub struct EvaluationDataset {
    queries: Vec<Query>,
    judgments: Vec<GradedJudgment>,
    list_pairs: Vec<RankedListPair>,
    preferences: Vec<PreferenceJudgment>,
    sessions: Vec<Session>,
    mode: ValidationMode,
    query_index: HashMap<String, usize>,
    list_index: HashMap<String, usize>,
    /// query → result → judgment indices, in record order.
    judgment_index: HashMap<String, HashMap<String, Vec<usize>>>,
}

impl PartialEq for EvaluationDataset {
    fn eq(&self, other: &Self) -> bool {
        self.queries == other.queries
            && self.judgments == other.judgments
            && self.list_pairs == other.list_pairs
            && self.preferences == other.preferences
            && self.sessions == other.sessions
    }
}

impl EvaluationDataset {
    pub fn new(
        queries: Vec<Query>,
        judgments: Vec<GradedJudgment>,
        list_pairs: Vec<RankedListPair>,
        preferences: Vec<PreferenceJudgment>,
        sessions: Vec<Session>,
    ) -> Self {
        let mut query_index = HashMap::new();
        for (i, q) in queries.iter().enumerate() {
            query_index.entry(q.id.clone()).or_insert(i);
        }
        let mut list_index = HashMap::new();
        for (i, l) in list_pairs.iter().enumerate() {
            list_index.entry(l.query_id.clone()).or_insert(i);
        }
        let mut judgment_index: HashMap<String, HashMap<String, Vec<usize>>> = HashMap::new();
        for (i, j) in judgments.iter().enumerate() {
            judgment_index
                .entry(j.query_id.clone())
                .or_default()
                .entry(j.result_id.clone())
                .or_default()
                .push(i);
        }
        EvaluationDataset {
            queries,
            judgments,
            list_pairs,
            preferences,
            sessions,
            mode: ValidationMode::Strict,
            query_index,
            list_index,
            judgment_index,
        }
    }

    /// Sets how downstream scoring treats missing judgments.
    pub fn with_mode(mut self, mode: ValidationMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn mode(&self) -> ValidationMode {
        self.mode
    }

    pub fn queries(&self) -> &[Query] {
        &self.queries
    }

    pub fn judgments(&self) -> &[GradedJudgment] {
        &self.judgments
    }

    pub fn list_pairs(&self) -> &[RankedListPair] {
        &self.list_pairs
    }

    pub fn preferences(&self) -> &[PreferenceJudgment] {
        &self.preferences
    }

    pub fn sessions(&self) -> &[Session] {
        &self.sessions
    }

    pub fn query(&self, id: &str) -> Option<&Query> {
        self.query_index.get(id).map(|&i| &self.queries[i])
    }

    pub fn list_pair(&self, query_id: &str) -> Option<&RankedListPair> {
        self.list_index.get(query_id).map(|&i| &self.list_pairs[i])
    }

    /// All judgments of one result for one query, in record order.
    pub fn judgments_for<'a>(
        &'a self,
        query_id: &str,
        result_id: &str,
    ) -> impl Iterator<Item = &'a GradedJudgment> + 'a {
        self.judgment_index
            .get(query_id)
            .and_then(|by_result| by_result.get(result_id))
            .into_iter()
            .flatten()
            .map(move |&i| &self.judgments[i])
    }

    /// Exchanges variants A and B everywhere and flips every A/B verdict.
    pub fn swapped_variants(&self) -> EvaluationDataset {
        let list_pairs = self
            .list_pairs
            .iter()
            .map(|l| RankedListPair {
                query_id: l.query_id.clone(),
                variant_a: l.variant_b.clone(),
                variant_b: l.variant_a.clone(),
            })
            .collect();
        let preferences = self
            .preferences
            .iter()
            .map(|p| PreferenceJudgment {
                verdict: p.verdict.flipped(),
                ..p.clone()
            })
            .collect();
        let sessions = self
            .sessions
            .iter()
            .map(|s| Session {
                variant: s.variant.other(),
                ..s.clone()
            })
            .collect();
        EvaluationDataset::new(
            self.queries.clone(),
            self.judgments.clone(),
            list_pairs,
            preferences,
            sessions,
        )
        .with_mode(self.mode)
    }

    /// Checks every schema invariant. Read-only; repeated calls give the same
    /// report. Fails when the report holds an error for the chosen mode.
    pub fn validate(&self, opts: ValidationOptions) -> Result<ValidationReport> {
        let report = ValidationReport {
            mode: opts.mode,
            violations: self.collect_violations(opts.max_cutoff),
        };
        if report.passes() {
            Ok(report)
        } else {
            Err(Error::Validation(report))
        }
    }

    fn collect_violations(&self, max_cutoff: usize) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut push = |kind, message: String| out.push(Violation { kind, message });

        let mut seen = HashSet::new();
        for q in &self.queries {
            if !seen.insert(q.id.as_str()) {
                push(ViolationKind::DuplicateQuery, format!("query {:?} defined twice", q.id));
            }
        }

        let mut seen = HashSet::new();
        for j in &self.judgments {
            if self.query(&j.query_id).is_none() {
                push(
                    ViolationKind::DanglingReference,
                    format!("judgment references unknown query {:?}", j.query_id),
                );
            }
            if !seen.insert((&j.query_id, &j.result_id, &j.rater_id)) {
                push(
                    ViolationKind::DuplicateJudgment,
                    format!(
                        "rater {:?} judged result {:?} of query {:?} more than once",
                        j.rater_id, j.result_id, j.query_id
                    ),
                );
            }
        }

        let mut seen = HashSet::new();
        for l in &self.list_pairs {
            if self.query(&l.query_id).is_none() {
                push(
                    ViolationKind::DanglingReference,
                    format!("list pair references unknown query {:?}", l.query_id),
                );
            }
            if !seen.insert(&l.query_id) {
                push(
                    ViolationKind::DuplicateListPair,
                    format!("query {:?} has more than one list pair", l.query_id),
                );
            }
            for variant in [Variant::A, Variant::B] {
                let list = l.list(variant);
                let mut ids = HashSet::new();
                for id in list {
                    if !ids.insert(id) {
                        push(
                            ViolationKind::DuplicateResult,
                            format!(
                                "result {id:?} appears twice in variant {variant} of query {:?}",
                                l.query_id
                            ),
                        );
                    }
                }
                if list.len() < max_cutoff {
                    push(
                        ViolationKind::ListTooShort,
                        format!(
                            "variant {variant} of query {:?} has {} results, cut-off {max_cutoff} needs more",
                            l.query_id,
                            list.len()
                        ),
                    );
                }
                for (i, id) in list.iter().take(max_cutoff).enumerate() {
                    if self.judgments_for(&l.query_id, id).next().is_none() {
                        push(
                            ViolationKind::MissingJudgment,
                            format!(
                                "result {id:?} at rank {} of variant {variant} for query {:?} is unjudged",
                                i + 1,
                                l.query_id
                            ),
                        );
                    }
                }
            }
        }

        let mut seen = HashSet::new();
        for p in &self.preferences {
            if self.query(&p.query_id).is_none() {
                push(
                    ViolationKind::DanglingReference,
                    format!("preference references unknown query {:?}", p.query_id),
                );
            }
            if !seen.insert((&p.query_id, &p.rater_id)) {
                push(
                    ViolationKind::DuplicatePreference,
                    format!(
                        "rater {:?} gave more than one verdict for query {:?}",
                        p.rater_id, p.query_id
                    ),
                );
            }
            let Some(pair) = self.list_pair(&p.query_id) else {
                push(
                    ViolationKind::DanglingReference,
                    format!("preference for query {:?} which has no list pair", p.query_id),
                );
                continue;
            };
            // Same-user scoring reads the preference rater's own grades.
            let mut missing = Vec::new();
            for id in pair.pooled_results() {
                let in_reach = pair.variant_a.iter().take(max_cutoff).any(|r| r == id)
                    || pair.variant_b.iter().take(max_cutoff).any(|r| r == id);
                if in_reach
                    && !self
                        .judgments_for(&p.query_id, id)
                        .any(|j| j.rater_id == p.rater_id)
                {
                    missing.push(id);
                }
            }
            if !missing.is_empty() {
                push(
                    ViolationKind::MissingJudgment,
                    format!(
                        "preference rater {:?} has not judged {} listed result(s) of query {:?}: {}",
                        p.rater_id,
                        missing.len(),
                        p.query_id,
                        missing.join(", ")
                    ),
                );
            }
        }

        let mut seen = HashSet::new();
        for s in &self.sessions {
            let key = format!("({}, {}, {})", s.query_id, s.rater_id, s.variant);
            if self.query(&s.query_id).is_none() {
                push(
                    ViolationKind::DanglingReference,
                    format!("session {key} references unknown query"),
                );
            }
            if !seen.insert((&s.query_id, &s.rater_id, s.variant)) {
                push(ViolationKind::DuplicateSession, format!("session {key} recorded twice"));
            }
            if s.start_ts > s.end_ts {
                push(
                    ViolationKind::TimestampOrder,
                    format!("session {key} ends ({}) before it starts ({})", s.end_ts, s.start_ts),
                );
            }
            for c in &s.clicks {
                if c.rank < 1 {
                    push(
                        ViolationKind::RankViolation,
                        format!("session {key} has a click at rank {}", c.rank),
                    );
                }
                if c.ts < s.start_ts || c.ts > s.end_ts {
                    push(
                        ViolationKind::ClickOutsideSession,
                        format!(
                            "session {key} has a click at {} outside [{}, {}]",
                            c.ts, s.start_ts, s.end_ts
                        ),
                    );
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn query(id: &str) -> Query {
        Query {
            id: id.into(),
            query_type: QueryType::Informational,
            language: Language::En,
            text: "rust borrow checker".into(),
            info_need: "understand lifetimes".into(),
        }
    }

    fn judge(q: &str, r: &str, rater: &str, g: i64) -> GradedJudgment {
        GradedJudgment {
            query_id: q.into(),
            result_id: r.into(),
            rater_id: rater.into(),
            grade: Grade::new(g).unwrap(),
            snippet_relevant: None,
        }
    }

    fn ids(q: &str, n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("{q}-d{i}")).collect()
    }

    /// Two queries, three results per variant, one rater judging all.
    fn two_query_dataset() -> EvaluationDataset {
        let mut judgments = Vec::new();
        let mut pairs = Vec::new();
        let mut prefs = Vec::new();
        for q in ["q1", "q2"] {
            let a = ids(q, 3);
            let mut b = a.clone();
            b.reverse();
            for (i, r) in a.iter().enumerate() {
                judgments.push(judge(q, r, "u1", i as i64 + 1));
            }
            pairs.push(RankedListPair {
                query_id: q.into(),
                variant_a: a,
                variant_b: b,
            });
            prefs.push(PreferenceJudgment {
                query_id: q.into(),
                rater_id: "u1".into(),
                verdict: Verdict::A,
            });
        }
        let sessions = vec![Session {
            query_id: "q1".into(),
            rater_id: "u2".into(),
            variant: Variant::A,
            start_ts: 100,
            end_ts: 152,
            clicks: vec![Click { rank: 1, ts: 110 }, Click { rank: 2, ts: 130 }],
            satisfied: Some(true),
        }];
        EvaluationDataset::new(vec![query("q1"), query("q2")], judgments, pairs, prefs, sessions)
    }

    const OPTS: ValidationOptions = ValidationOptions {
        mode: ValidationMode::Strict,
        max_cutoff: 3,
    };

    #[test]
    fn grade_bounds() {
        assert!(Grade::new(0).is_err());
        assert!(Grade::new(7).is_err());
        assert_eq!(Grade::new(4).unwrap().unit(), 0.4);
        assert_eq!(Grade::BEST.unit(), 1.0);
        assert_eq!(Grade::WORST.unit(), 0.0);
    }

    #[test]
    fn well_formed_dataset_has_empty_report() {
        let ds = two_query_dataset();
        let report = ds.validate(OPTS).unwrap();
        assert!(report.is_clean(), "{:?}", report.violations);
    }

    #[test]
    fn click_at_rank_zero_is_a_rank_violation() {
        let ds = two_query_dataset();
        let mut sessions = ds.sessions().to_vec();
        sessions[0].clicks[0].rank = 0;
        let ds = EvaluationDataset::new(
            ds.queries().to_vec(),
            ds.judgments().to_vec(),
            ds.list_pairs().to_vec(),
            ds.preferences().to_vec(),
            sessions,
        );
        match ds.validate(OPTS) {
            Err(Error::Validation(r)) => {
                assert_eq!(r.count(ViolationKind::RankViolation), 1);
                assert_eq!(r.violations.len(), 1);
            }
            other => panic!("expected rank violation, got {other:?}"),
        }
    }

    fn with_unjudged_rank3() -> EvaluationDataset {
        let ds = two_query_dataset();
        // Drop the judgment of q1's rank-3 result in variant A.
        let judgments = ds
            .judgments()
            .iter()
            .filter(|j| !(j.query_id == "q1" && j.result_id == "q1-d3"))
            .cloned()
            .collect();
        EvaluationDataset::new(
            ds.queries().to_vec(),
            judgments,
            ds.list_pairs().to_vec(),
            ds.preferences().to_vec(),
            ds.sessions().to_vec(),
        )
    }

    #[test]
    fn unjudged_result_fails_strict_mode() {
        // q1-d3 sits at rank 3 of A and rank 1 of B: two list-level misses
        // plus one same-user coverage miss for rater u1.
        let ds = with_unjudged_rank3();
        let Err(Error::Validation(report)) = ds.validate(OPTS) else {
            panic!("strict validation should fail");
        };
        assert_eq!(report.count(ViolationKind::MissingJudgment), 3);
        assert!(report.violations[0].message.contains("rank 3"));
        assert_eq!(report.errors().count(), 3);
    }

    #[test]
    fn unjudged_result_is_a_warning_in_lenient_mode() {
        let ds = with_unjudged_rank3();
        let report = ds
            .validate(ValidationOptions::new(ValidationMode::Lenient, 3))
            .unwrap();
        assert_eq!(report.warnings().count(), 3);
        assert!(report.passes());
    }

    #[test]
    fn validation_is_idempotent() {
        let ds = with_unjudged_rank3();
        let opts = ValidationOptions::new(ValidationMode::Lenient, 3);
        assert_eq!(ds.validate(opts).unwrap(), ds.validate(opts).unwrap());
    }

    #[test]
    fn detects_duplicates_and_dangling_refs() {
        let ds = two_query_dataset();
        let mut judgments = ds.judgments().to_vec();
        judgments.push(judgments[0].clone());
        judgments.push(judge("q9", "x", "u1", 2));
        let mut prefs = ds.preferences().to_vec();
        prefs.push(prefs[0].clone());
        let mut sessions = ds.sessions().to_vec();
        sessions[0].end_ts = 50;
        let ds = EvaluationDataset::new(
            ds.queries().to_vec(),
            judgments,
            ds.list_pairs().to_vec(),
            prefs,
            sessions,
        );
        let Err(Error::Validation(r)) = ds.validate(OPTS) else {
            panic!()
        };
        assert_eq!(r.count(ViolationKind::DuplicateJudgment), 1);
        assert_eq!(r.count(ViolationKind::DanglingReference), 1);
        assert_eq!(r.count(ViolationKind::DuplicatePreference), 1);
        assert_eq!(r.count(ViolationKind::TimestampOrder), 1);
        // both clicks now lie after the session end
        assert_eq!(r.count(ViolationKind::ClickOutsideSession), 2);
    }

    #[test]
    fn short_lists_are_flagged_against_the_cutoff() {
        let ds = two_query_dataset();
        let Err(Error::Validation(r)) = ds.validate(ValidationOptions::default()) else {
            panic!()
        };
        assert_eq!(r.count(ViolationKind::ListTooShort), 4);
    }

    #[test]
    fn swapping_variants_twice_is_identity() {
        let ds = two_query_dataset();
        assert_eq!(ds.swapped_variants().swapped_variants(), ds);
        assert_eq!(ds.swapped_variants().preferences()[0].verdict, Verdict::B);
    }
}
