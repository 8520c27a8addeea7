//! Relevance scales and rank discount functions.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::model::Grade;

/// Maps a six-point grade onto unit relevance: 1 → 1.0, 2 → 0.8, …, 6 → 0.0.
pub fn grade_to_unit(grade: i64) -> Result<f64> {
    Grade::new(grade).map(Grade::unit)
}

/// How six-point grades are read. The binary and ternary variants are
/// named after the worst grade still counted as (highly) relevant.
#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum RelevanceScale {
    #[default]
    SixPoint,
    /// Binary, only grade 1 relevant.
    R2_1,
    /// Binary, grades 1–3 relevant.
    R2_3,
    /// Binary, anything but grade 6 relevant.
    R2_5,
    /// Ternary: 1 → 1.0, 2–5 → 0.5, 6 → 0.0.
    R3_1,
    /// Ternary in equal intervals: 1–2 → 1.0, 3–4 → 0.5, 5–6 → 0.0.
    R3_2,
}

impl RelevanceScale {
    pub const ALL: [RelevanceScale; 6] = [
        RelevanceScale::SixPoint,
        RelevanceScale::R2_1,
        RelevanceScale::R2_3,
        RelevanceScale::R2_5,
        RelevanceScale::R3_1,
        RelevanceScale::R3_2,
    ];

    pub fn apply(self, grade: Grade) -> f64 {
        let g = grade.value();
        match self {
            RelevanceScale::SixPoint => grade.unit(),
            RelevanceScale::R2_1 => binary(g, 1),
            RelevanceScale::R2_3 => binary(g, 3),
            RelevanceScale::R2_5 => binary(g, 5),
            RelevanceScale::R3_1 => match g {
                1 => 1.0,
                6 => 0.0,
                _ => 0.5,
            },
            RelevanceScale::R3_2 => match g {
                1 | 2 => 1.0,
                3 | 4 => 0.5,
                _ => 0.0,
            },
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            RelevanceScale::SixPoint => "six-point",
            RelevanceScale::R2_1 => "r2_1",
            RelevanceScale::R2_3 => "r2_3",
            RelevanceScale::R2_5 => "r2_5",
            RelevanceScale::R3_1 => "r3_1",
            RelevanceScale::R3_2 => "r3_2",
        }
    }
}

fn binary(grade: u8, worst_relevant: u8) -> f64 {
    if grade <= worst_relevant {
        1.0
    } else {
        0.0
    }
}

/// Converts a raw grade to unit relevance under `scale`.
pub fn conflate(grade: i64, scale: RelevanceScale) -> Result<f64> {
    Grade::new(grade).map(|g| scale.apply(g))
}

impl fmt::Display for RelevanceScale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RelevanceScale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.to_ascii_lowercase().replace('-', "_");
        match norm.as_str() {
            "six" | "six_point" | "6" => Ok(RelevanceScale::SixPoint),
            _ => RelevanceScale::ALL
                .into_iter()
                .find(|k| k.as_str() == norm)
                .ok_or_else(|| Error::InvalidConfig(format!("unknown relevance scale {s:?}"))),
        }
    }
}

/// Rank → weight table for the click-based discount. Weights lie in (0, 1]
/// and the rank-1 weight is 1; the table need not be monotone.
#[derive(Debug, Clone, PartialEq)]
pub struct ClickWeights(Arc<[f64]>);

impl ClickWeights {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidClickTable("table is empty".into()));
        }
        if weights[0] != 1.0 {
            return Err(Error::InvalidClickTable(format!(
                "rank 1 must have weight 1, found {}",
                weights[0]
            )));
        }
        if let Some((i, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(**w > 0.0 && **w <= 1.0))
        {
            return Err(Error::InvalidClickTable(format!(
                "weight {w} for rank {} is outside (0, 1]",
                i + 1
            )));
        }
        Ok(ClickWeights(weights.into()))
    }

    /// Parses a two-column `rank weight` table (whitespace separated, `#`
    /// comments). Ranks must run 1, 2, 3, … without gaps.
    pub fn parse(text: &str) -> Result<Self> {
        let mut weights = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut cols = line.split_whitespace();
            let (Some(rank), Some(weight), None) = (cols.next(), cols.next(), cols.next()) else {
                return Err(Error::InvalidClickTable(format!(
                    "line {}: expected two columns",
                    n + 1
                )));
            };
            let rank: usize = rank.parse().map_err(|_| {
                Error::InvalidClickTable(format!("line {}: bad rank {rank:?}", n + 1))
            })?;
            let weight: f64 = weight.parse().map_err(|_| {
                Error::InvalidClickTable(format!("line {}: bad weight {weight:?}", n + 1))
            })?;
            if rank != weights.len() + 1 {
                return Err(Error::InvalidClickTable(format!(
                    "line {}: expected rank {}, found {rank}",
                    n + 1,
                    weights.len() + 1
                )));
            }
            weights.push(weight);
        }
        ClickWeights::new(weights)
    }

    /// An illustrative ten-rank table shaped like published click-frequency
    /// curves: a steep drop after rank 1 and small rises at ranks 3 and 7.
    /// Not measured data.
    pub fn example() -> Self {
        ClickWeights::new(vec![
            1.0, 0.23, 0.25, 0.09, 0.07, 0.05, 0.06, 0.04, 0.03, 0.03,
        ])
        .expect("example table is valid")
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, rank: usize) -> Option<f64> {
        rank.checked_sub(1).and_then(|i| self.0.get(i).copied())
    }

    pub fn to_text(&self) -> String {
        self.0
            .iter()
            .enumerate()
            .map(|(i, w)| format!("{}\t{w}\n", i + 1))
            .collect()
    }
}

/// Rank discount applied by the metrics. Every variant weighs rank 1 at 1.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum DiscountFunction {
    #[default]
    None,
    Log5,
    Log2,
    Root,
    Rank,
    Square,
    ClickBased(ClickWeights),
}

impl DiscountFunction {
    /// The seven functions, with the example table standing in for click data.
    pub fn catalog() -> Vec<DiscountFunction> {
        vec![
            DiscountFunction::None,
            DiscountFunction::Log5,
            DiscountFunction::Log2,
            DiscountFunction::Root,
            DiscountFunction::Rank,
            DiscountFunction::Square,
            DiscountFunction::ClickBased(ClickWeights::example()),
        ]
    }

    pub fn weight(&self, rank: usize) -> Result<f64> {
        if rank == 0 {
            return Err(Error::InvalidRank);
        }
        let r = rank as f64;
        Ok(match self {
            DiscountFunction::None => 1.0,
            DiscountFunction::Log5 => log_discount(r, 5.0),
            DiscountFunction::Log2 => log_discount(r, 2.0),
            DiscountFunction::Root => 1.0 / r.sqrt(),
            DiscountFunction::Rank => 1.0 / r,
            DiscountFunction::Square => 1.0 / (r * r),
            DiscountFunction::ClickBased(table) => table
                .get(rank)
                .ok_or(Error::RankOutsideClickTable(rank))?,
        })
    }

    /// Weights for ranks 1..=cutoff.
    pub fn weights(&self, cutoff: usize) -> Result<Vec<f64>> {
        (1..=cutoff).map(|r| self.weight(r)).collect()
    }

    pub fn name(&self) -> &'static str {
        match self {
            DiscountFunction::None => "none",
            DiscountFunction::Log5 => "log5",
            DiscountFunction::Log2 => "log2",
            DiscountFunction::Root => "root",
            DiscountFunction::Rank => "rank",
            DiscountFunction::Square => "square",
            DiscountFunction::ClickBased(_) => "click",
        }
    }
}

/// Free function form of [`DiscountFunction::weight`].
pub fn discount_weight(f: &DiscountFunction, rank: usize) -> Result<f64> {
    f.weight(rank)
}

/// Ranks below the base are not discounted; from the base on the weight is
/// 1 / log_b(rank), which equals 1 at rank = b.
fn log_discount(rank: f64, base: f64) -> f64 {
    if rank < base {
        1.0
    } else if base == 2.0 {
        1.0 / rank.log2()
    } else {
        1.0 / rank.log(base)
    }
}

impl fmt::Display for DiscountFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DiscountFunction {
    type Err = Error;

    /// Parses a discount name; `click` yields the example weight table.
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "none" | "no" => DiscountFunction::None,
            "log5" => DiscountFunction::Log5,
            "log2" => DiscountFunction::Log2,
            "root" | "sqrt" => DiscountFunction::Root,
            "rank" => DiscountFunction::Rank,
            "square" => DiscountFunction::Square,
            "click" | "click-based" => DiscountFunction::ClickBased(ClickWeights::example()),
            _ => return Err(Error::InvalidConfig(format!("unknown discount function {s:?}"))),
        })
    }
}
