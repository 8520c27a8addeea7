//! Meta-evaluation of search-quality metrics against user preferences.
//!
//! Explicit metrics (precision, NDCG, MAP, ERR, MRR, ESL) are computed from
//! graded single-result judgments under a choice of discount function and
//! relevance scale. The Preference Identification Ratio (PIR) then measures
//! how often a metric configuration agrees with users' side-by-side
//! preferences between two result lists. Session logs supply implicit
//! measures (duration, clicks, click ranks) that plug into the same PIR
//! machinery.
//!
//! ```
//! use prefeval::pir::{pir, ScoredPair};
//! use prefeval::model::Verdict;
//!
//! let pairs = vec![ScoredPair {
//!     query_id: "q1".into(),
//!     rater_id: "u1".into(),
//!     score_a: 0.8,
//!     score_b: 0.4,
//!     verdict: Verdict::A,
//! }];
//! assert_eq!(pir(&pairs, 0.0).pir, 1.0);
//! ```

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod data_io;
pub mod error;
pub mod implicit;
pub mod metrics;
pub mod model;
pub mod pir;
pub mod report;
pub mod scales;

pub use error::{Error, Result};
pub use model::{EvaluationDataset, ValidationMode, ValidationOptions};
pub use pir::{Metric, MetricConfig, RatingSource};
pub use scales::{DiscountFunction, RelevanceScale};
