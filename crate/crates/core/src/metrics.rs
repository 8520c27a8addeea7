//! Explicit result-list metrics over unit relevance values.
//!
//! Every metric reads the first `cutoff` entries of a [`JudgedList`] and
//! weighs rank `r` by a [`DiscountFunction`]. Where a metric classically
//! divides by the rank (MAP, ERR), the division becomes a multiplication by
//! the discount weight, so `Rank` reproduces the textbook definition.

use crate::error::{Error, Result};
use crate::scales::DiscountFunction;

/// Ceiling of the exponential gain used by ERR; unit relevance `rel` maps to
/// the grade `ERR_GRADE_MAX * rel`.
pub const ERR_GRADE_MAX: f64 = 5.0;

/// Slack for "cumulative relevance reached the target" comparisons, which
/// would otherwise miss targets like 0.2 + 0.2 + 0.6 = 1.
const CUMULATIVE_EPS: f64 = 1e-9;

/// Ordered unit relevance values of one ranked list, best rank first.
#[derive(Debug, Clone, PartialEq)]
pub struct JudgedList(Vec<f64>);

impl JudgedList {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(&bad) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::InvalidRelevance(bad));
        }
        Ok(JudgedList(values))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    fn head(&self, cutoff: usize) -> Result<&[f64]> {
        if cutoff > self.0.len() {
            return Err(Error::CutoffTooLarge {
                cutoff,
                len: self.0.len(),
            });
        }
        Ok(&self.0[..cutoff])
    }
}

impl TryFrom<Vec<f64>> for JudgedList {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        JudgedList::new(v)
    }
}

/// All relevance values known for a query, sorted best first. Its head is
/// the ideal ranking used to normalise DCG.
#[derive(Debug, Clone, PartialEq)]
pub struct IdealPool(Vec<f64>);

impl IdealPool {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if let Some(&bad) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::InvalidRelevance(bad));
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(IdealPool(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    /// Number of pooled results with non-zero relevance.
    pub fn known_relevant(&self) -> usize {
        self.0.iter().filter(|&&v| v > 0.0).count()
    }

    fn ideal(&self, cutoff: usize) -> &[f64] {
        &self.0[..cutoff.min(self.0.len())]
    }
}

/// Divisor used by average precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApDivisor {
    /// Number of results known to be relevant for the query.
    KnownRelevant(usize),
    /// The cut-off, i.e. the number of evaluated results.
    EvaluatedCount,
}

fn discounted_sum(values: &[f64], discount: &DiscountFunction) -> Result<f64> {
    values
        .iter()
        .enumerate()
        .map(|(i, &rel)| Ok(rel * discount.weight(i + 1)?))
        .sum()
}

/// Discounted precision: `Σ rel(r)·w(r) / cutoff`. With no discount this is
/// the mean relevance, and for binary input the classical fraction of
/// relevant results. `relevant_above` turns graded input binary first.
pub fn precision_at(
    list: &JudgedList,
    cutoff: usize,
    discount: &DiscountFunction,
    relevant_above: Option<f64>,
) -> Result<f64> {
    if cutoff == 0 {
        return Err(Error::InvalidConfig("precision needs a cut-off ≥ 1".into()));
    }
    let head = list.head(cutoff)?;
    let gains: Vec<f64> = match relevant_above {
        Some(t) => head.iter().map(|&v| if v > t { 1.0 } else { 0.0 }).collect(),
        None => head.to_vec(),
    };
    Ok(discounted_sum(&gains, discount)? / cutoff as f64)
}

/// Undiscounted sum of relevance over the first `cutoff` ranks.
pub fn cumulated_gain(list: &JudgedList, cutoff: usize) -> Result<f64> {
    Ok(list.head(cutoff)?.iter().sum())
}

pub fn dcg(list: &JudgedList, cutoff: usize, discount: &DiscountFunction) -> Result<f64> {
    discounted_sum(list.head(cutoff)?, discount)
}

/// DCG at every prefix 1..=cutoff.
pub fn dcg_prefixes(list: &JudgedList, cutoff: usize, discount: &DiscountFunction) -> Result<Vec<f64>> {
    let head = list.head(cutoff)?;
    let mut acc = 0.0;
    head.iter()
        .enumerate()
        .map(|(i, &rel)| {
            acc += rel * discount.weight(i + 1)?;
            Ok(acc)
        })
        .collect()
}

/// DCG divided by the DCG of the pool's best `cutoff` values. An all-zero
/// ideal yields [`Error::ZeroIdeal`], which callers treat as "drop the query".
pub fn ndcg(
    list: &JudgedList,
    pool: &IdealPool,
    cutoff: usize,
    discount: &DiscountFunction,
) -> Result<f64> {
    let actual = dcg(list, cutoff, discount)?;
    let ideal = discounted_sum(pool.ideal(cutoff), discount)?;
    if ideal <= 0.0 {
        return Err(Error::ZeroIdeal);
    }
    Ok(actual / ideal)
}

/// Generalised average precision:
/// `Σ_r rel(r) · (Σ_{k≤r} rel(k)) · w(r) / divisor`.
///
/// Binary input, `Rank` discount and the known-relevant divisor give the
/// classical AP. Without discount (`w ≡ 1`) scores can exceed 1.
pub fn average_precision(
    list: &JudgedList,
    cutoff: usize,
    discount: &DiscountFunction,
    divisor: ApDivisor,
) -> Result<f64> {
    let head = list.head(cutoff)?;
    let denom = match divisor {
        ApDivisor::KnownRelevant(n) => n,
        ApDivisor::EvaluatedCount => cutoff,
    };
    if denom == 0 {
        return Err(Error::ZeroDivisor);
    }
    let mut cumulative = 0.0;
    let mut total = 0.0;
    for (i, &rel) in head.iter().enumerate() {
        cumulative += rel;
        total += rel * cumulative * discount.weight(i + 1)?;
    }
    Ok(total / denom as f64)
}

/// Stopping probability of a result under the cascade model.
fn satisfaction_probability(rel: f64) -> f64 {
    let grade = ERR_GRADE_MAX * rel;
    (grade.exp2() - 1.0) / ERR_GRADE_MAX.exp2()
}

/// Expected reciprocal rank with a pluggable discount:
/// `Σ_r w(r) · Π_{i<r}(1 − R_i) · R_r`, `R = (2^g − 1) / 2^gmax`.
pub fn err(list: &JudgedList, cutoff: usize, discount: &DiscountFunction) -> Result<f64> {
    let head = list.head(cutoff)?;
    let mut not_yet_satisfied = 1.0;
    let mut total = 0.0;
    for (i, &rel) in head.iter().enumerate() {
        let stop = satisfaction_probability(rel);
        total += discount.weight(i + 1)? * not_yet_satisfied * stop;
        not_yet_satisfied *= 1.0 - stop;
    }
    Ok(total)
}

/// Discount weight at the first rank whose relevance exceeds
/// `relevant_above`; 0 when there is none within the cut-off.
pub fn reciprocal_rank(
    list: &JudgedList,
    cutoff: usize,
    discount: &DiscountFunction,
    relevant_above: f64,
) -> Result<f64> {
    match list.head(cutoff)?.iter().position(|&v| v > relevant_above) {
        Some(i) => discount.weight(i + 1),
        None => Ok(0.0),
    }
}

/// Expected search length normalised to [0, 1] for graded relevance.
///
/// `r_n` is the first rank at which the undiscounted cumulative relevance
/// reaches `target`, or the cut-off when it never does. The score is
/// `1 − (r_n − Σ_{i≤r_n} rel(i)·w(i)) / cutoff`.
pub fn esl(list: &JudgedList, cutoff: usize, discount: &DiscountFunction, target: f64) -> Result<f64> {
    if !(target > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "ESL relevance target must be positive, got {target}"
        )));
    }
    if cutoff == 0 {
        return Err(Error::InvalidConfig("ESL needs a cut-off ≥ 1".into()));
    }
    let head = list.head(cutoff)?;
    let mut cumulative = 0.0;
    let mut stop_rank = cutoff;
    for (i, &rel) in head.iter().enumerate() {
        cumulative += rel;
        if cumulative >= target - CUMULATIVE_EPS {
            stop_rank = i + 1;
            break;
        }
    }
    let found = discounted_sum(&head[..stop_rank], discount)?;
    Ok(1.0 - (stop_rank as f64 - found) / cutoff as f64)
}

/// Arithmetic mean of per-query scores.
pub fn mean_over_queries(scores: &[f64]) -> Result<f64> {
    if scores.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(scores.iter().sum::<f64>() / scores.len() as f64)
}
