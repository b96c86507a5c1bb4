//! Statistics for comparing click-point distributions and usability between
//! study groups.
//!
//! All variances are population variances unless a function says otherwise.
//! Effect sizes are named in every [`TestResult`]: rank-biserial correlation
//! for Mann-Whitney U, the odds ratio for Fisher's exact test and Cohen's d for
//! the pooled t-test.

mod bins;
mod correction;
mod error;
mod fisher;
pub mod heatmap;
mod mwu;
mod result;
pub mod suite;
mod sus;
mod ttest;

pub use bins::{bin_points, BinTable2x2};
pub use correction::bonferroni;
pub use error::{Result, StatsError};
pub use fisher::fisher_exact_2x2;
pub use mwu::{mann_whitney_u, EXACT_MAX_TOTAL};
pub use result::{Alternative, EffectSize, Method, TestResult};
pub use suite::{presentation_hypothesis_suite, SuiteReport, SuiteRow};
pub use sus::{SusResponse, SUS_ITEMS};
pub use ttest::student_t_independent;
