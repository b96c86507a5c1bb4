//! Per-click-point comparison of a primed group against the control group.
//!
//! For each of the five click positions the x-coordinates of the two groups
//! are compared with a Mann-Whitney U test and, after binning into left and
//! right image halves, with Fisher's exact test. Each family of five tests is
//! Bonferroni-adjusted with m = 5.

use std::fmt::Write as _;

use passpoints_core::{ClickPoint, GraphicalPassword, PASSWORD_LEN};
use serde::{Deserialize, Serialize};

use crate::bins::{bin_points, BinTable2x2};
use crate::correction::bonferroni;
use crate::error::{Result, StatsError};
use crate::fisher::fisher_exact_2x2;
use crate::mwu::mann_whitney_u;
use crate::result::{Alternative, TestResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteRow {
    /// Click position, 1-based.
    pub click: usize,
    pub mwu: TestResult,
    pub mwu_adjusted_p: f64,
    /// Rows: treatment, control. Columns: left half, right half.
    pub bins: BinTable2x2,
    pub fisher: TestResult,
    pub fisher_adjusted_p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    /// Direction for the treatment x-coordinates relative to control.
    pub alternative: Alternative,
    pub image_width: u32,
    pub n_treatment: usize,
    pub n_control: usize,
    pub rows: Vec<SuiteRow>,
}

fn column(pws: &[GraphicalPassword], i: usize) -> Vec<ClickPoint> {
    pws.iter().map(|p| p.points[i]).collect()
}

fn xs(points: &[ClickPoint]) -> Vec<f64> {
    points.iter().map(|p| f64::from(p.x)).collect()
}

/// Runs the five-position test battery.
///
/// `alternative` describes the treatment x-coordinates: `Less` expects them
/// further left than control. For the Fisher tests the same expectation
/// means a larger left-bin count in the treatment row, i.e. the `Greater`
/// alternative on the top-left cell.
pub fn presentation_hypothesis_suite(
    control: &[GraphicalPassword],
    treatment: &[GraphicalPassword],
    image_width: u32,
    alternative: Alternative,
) -> Result<SuiteReport> {
    if control.is_empty() {
        return Err(StatsError::EmptySample("control"));
    }
    if treatment.is_empty() {
        return Err(StatsError::EmptySample("treatment"));
    }
    let mut mwu = Vec::with_capacity(PASSWORD_LEN);
    let mut fisher = Vec::with_capacity(PASSWORD_LEN);
    let mut tables = Vec::with_capacity(PASSWORD_LEN);
    for i in 0..PASSWORD_LEN {
        let (t, c) = (column(treatment, i), column(control, i));
        mwu.push(mann_whitney_u(&xs(&t), &xs(&c), alternative)?);
        let table = BinTable2x2::from_rows(bin_points(&t, image_width)?, bin_points(&c, image_width)?);
        fisher.push(fisher_exact_2x2(&table, alternative.flipped()));
        tables.push(table);
    }
    let p_of = |rs: &[TestResult]| rs.iter().map(|r| r.p_value).collect::<Vec<_>>();
    let mwu_adj = bonferroni(&p_of(&mwu), PASSWORD_LEN)?;
    let fisher_adj = bonferroni(&p_of(&fisher), PASSWORD_LEN)?;

    let rows = mwu
        .into_iter()
        .zip(fisher)
        .zip(tables)
        .enumerate()
        .map(|(i, ((mwu, fisher), bins))| SuiteRow {
            click: i + 1,
            mwu,
            mwu_adjusted_p: mwu_adj[i],
            bins,
            fisher,
            fisher_adjusted_p: fisher_adj[i],
        })
        .collect();
    Ok(SuiteReport {
        alternative,
        image_width,
        n_treatment: treatment.len(),
        n_control: control.len(),
        rows,
    })
}

impl SuiteReport {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "treatment n={} vs control n={}, alternative: treatment x {}\n",
            self.n_treatment, self.n_control, self.alternative
        );
        let _ = writeln!(
            out,
            "{:>5} {:>9} {:>10} {:>10} {:>9} {:>13} {:>10} {:>10} {:>9}",
            "click", "U", "p", "p_bonf", "r_rb", "bins(T|C)", "p", "p_bonf", "odds"
        );
        for r in &self.rows {
            let [[tl, tr], [cl, cr]] = r.bins.counts;
            let _ = writeln!(
                out,
                "{:>5} {:>9.1} {:>10.4} {:>10.4} {:>9.3} {:>13} {:>10.4} {:>10.4} {:>9.3}",
                r.click,
                r.mwu.statistic,
                r.mwu.p_value,
                r.mwu_adjusted_p,
                r.mwu.effect_size,
                format!("{tl}/{tr}|{cl}/{cr}"),
                r.fisher.p_value,
                r.fisher_adjusted_p,
                r.fisher.effect_size
            );
        }
        let _ = writeln!(
            out,
            "MWU effect size: rank-biserial r = 1 - 2U/(n1 n2). Fisher effect size: odds ratio \
             (treatment left/right over control left/right). Bins split at x = {}; the midline \
             column counts as right. Bonferroni m = 5 per test family.",
            self.image_width / 2
        );
        out
    }
}
