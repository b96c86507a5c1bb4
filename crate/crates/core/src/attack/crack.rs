use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::alphabet::Alphabet;
use crate::error::Result;
use crate::point::GraphicalPassword;

use super::spec::AttackSpec;

/// Whether the dictionary for `spec` contains a guess that logs in as `pw`.
///
/// Each click-point is covered by exactly one alphabet center, so the only
/// candidate guess is the pointwise snap of the password.
pub fn crack_test(pw: &GraphicalPassword, spec: &AttackSpec, alphabet: &Alphabet) -> Result<bool> {
    spec.validate()?;
    let mut snapped = pw.points;
    for p in &mut snapped {
        *p = alphabet.snap(*p)?;
    }
    Ok(spec.matches_shape(&snapped))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrackEntry {
    pub spec: AttackSpec,
    pub cracked_count: usize,
    pub corpus_size: usize,
    pub cracked_percent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrackReport {
    pub group_label: String,
    pub entries: Vec<CrackEntry>,
}

/// Crack rates for every group present in a corpus, one column per spec.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrackTable {
    pub specs: Vec<AttackSpec>,
    pub reports: Vec<CrackReport>,
}

/// Relabels groups, e.g. folding `LTR` and `RTL` into `Primed`.
///
/// `merges` maps each new label to the labels it absorbs; groups not named
/// keep their label.
pub fn merge_groups(
    corpus: &[(String, GraphicalPassword)],
    merges: &[(&str, &[&str])],
) -> Vec<(String, GraphicalPassword)> {
    corpus
        .iter()
        .map(|(group, pw)| {
            let label = merges
                .iter()
                .find(|(_, members)| members.contains(&group.as_str()))
                .map_or_else(|| group.clone(), |(merged, _)| merged.to_string());
            (label, pw.clone())
        })
        .collect()
}

/// Runs every spec against every password.
///
/// Groups appear in order of first occurrence in `corpus` and columns follow
/// `specs`. A group with no passwords has no report at all.
pub fn crack_table(
    corpus: &[(String, GraphicalPassword)],
    specs: &[AttackSpec],
    alphabet: &Alphabet,
) -> Result<CrackTable> {
    for spec in specs {
        spec.validate()?;
    }
    let verdicts: Vec<Vec<bool>> = corpus
        .par_iter()
        .map(|(_, pw)| specs.iter().map(|s| crack_test(pw, s, alphabet)).collect())
        .collect::<Result<_>>()?;

    let mut reports: Vec<CrackReport> = Vec::new();
    let mut sizes: Vec<usize> = Vec::new();
    for ((group, _), row) in corpus.iter().zip(&verdicts) {
        let slot = match reports.iter().position(|r| &r.group_label == group) {
            Some(i) => i,
            None => {
                reports.push(CrackReport {
                    group_label: group.clone(),
                    entries: specs
                        .iter()
                        .map(|&spec| CrackEntry {
                            spec,
                            cracked_count: 0,
                            corpus_size: 0,
                            cracked_percent: 0.0,
                        })
                        .collect(),
                });
                sizes.push(0);
                reports.len() - 1
            }
        };
        sizes[slot] += 1;
        for (entry, &hit) in reports[slot].entries.iter_mut().zip(row) {
            entry.cracked_count += usize::from(hit);
        }
    }
    for (report, &size) in reports.iter_mut().zip(&sizes) {
        for entry in &mut report.entries {
            entry.corpus_size = size;
            entry.cracked_percent = entry.cracked_count as f64 / size as f64;
        }
    }
    Ok(CrackTable {
        specs: specs.to_vec(),
        reports,
    })
}

impl CrackTable {
    pub fn group(&self, label: &str) -> Option<&CrackReport> {
        self.reports.iter().find(|r| r.group_label == label)
    }

    /// One row per (group, spec).
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("group,attack,tau,lod_base,lod_metric,cracked,total,percent\n");
        for r in &self.reports {
            for e in &r.entries {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{:?},{},{},{:.4}",
                    r.group_label,
                    e.spec.family,
                    e.spec.tau,
                    e.spec.lod_base,
                    e.spec.lod_metric,
                    e.cracked_count,
                    e.corpus_size,
                    100.0 * e.cracked_percent
                );
            }
        }
        out
    }

    /// Aligned table of percentages, groups as rows and attacks as columns.
    pub fn to_text(&self) -> String {
        let labels: Vec<String> = self.specs.iter().map(AttackSpec::label).collect();
        let gw = self
            .reports
            .iter()
            .map(|r| r.group_label.len())
            .chain([5])
            .max()
            .unwrap_or(5);
        let cw = labels.iter().map(String::len).chain([7]).max().unwrap_or(7);

        let mut out = format!("{:<gw$} {:>5}", "Group", "n");
        for l in &labels {
            let _ = write!(out, " {l:>cw$}");
        }
        out.push('\n');
        for r in &self.reports {
            let n = r.entries.first().map_or(0, |e| e.corpus_size);
            let _ = write!(out, "{:<gw$} {n:>5}", r.group_label);
            for e in &r.entries {
                let _ = write!(out, " {:>cw$.2}", 100.0 * e.cracked_percent);
            }
            out.push('\n');
        }
        let lod: Vec<_> = self
            .specs
            .iter()
            .filter(|s| s.family == super::AttackFamily::Lod)
            .map(|s| format!("{}px {:?}", s.lod_base, s.lod_metric))
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        if !lod.is_empty() {
            let _ = writeln!(out, "LOD base distance: {}", lod.join(", "));
        }
        out
    }
}
