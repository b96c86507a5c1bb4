//! Feature extraction, k selection and the multi-run representative election.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SaliencyError};
use crate::features::{extract_features, FeatureVector, FEATURE_NAMES};
use crate::kmeans::{dist2, inertia_curve, kmeans, KMeansFit};
use crate::kneedle::{kneedle_select_k, KneeResult};
use crate::map::SaliencyMap;
use crate::standardize::Standardizer;

/// Largest k for which cluster matching tries every permutation.
const EXHAUSTIVE_MATCH_K: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElectedRepresentative {
    pub cluster: usize,
    pub image_id: String,
    pub votes: usize,
    pub frequency: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Election {
    pub k: usize,
    pub runs: usize,
    pub seed0: u64,
    /// One entry per cluster of the reference run (run 0).
    pub representatives: Vec<ElectedRepresentative>,
    /// Runs whose every cluster elected the modal representative.
    pub unanimous_runs: usize,
    pub reference: KMeansFit,
}

/// Final grouping of images: the reference run's partition with the elected
/// representative of each cluster.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusteringResult {
    pub k: usize,
    pub assignments: BTreeMap<String, usize>,
    pub centroids: Vec<Vec<f64>>,
    pub inertia: f64,
    pub representatives: BTreeMap<usize, String>,
}

/// Member of each cluster closest to its centroid (lowest index on ties).
fn nearest_members(data: &[Vec<f64>], fit: &KMeansFit) -> Vec<Option<usize>> {
    let mut best: Vec<Option<(usize, f64)>> = vec![None; fit.k];
    for (i, (p, &c)) in data.iter().zip(&fit.assignments).enumerate() {
        let d = dist2(p, &fit.centroids[c]);
        if best[c].is_none_or(|(_, bd)| d < bd) {
            best[c] = Some((i, d));
        }
    }
    best.into_iter().map(|b| b.map(|(i, _)| i)).collect()
}

/// `perm[j]` is the cluster of `run` matched to reference cluster `j`,
/// minimizing the summed centroid distances.
fn match_clusters(reference: &[Vec<f64>], run: &[Vec<f64>]) -> Vec<usize> {
    let k = reference.len();
    let cost: Vec<Vec<f64>> = reference
        .iter()
        .map(|r| run.iter().map(|c| dist2(r, c).sqrt()).collect())
        .collect();
    if k <= EXHAUSTIVE_MATCH_K {
        fn search(
            j: usize,
            cost: &[Vec<f64>],
            used: &mut Vec<bool>,
            cur: &mut Vec<usize>,
            acc: f64,
            best: &mut (f64, Vec<usize>),
        ) {
            if acc >= best.0 {
                return;
            }
            if j == cost.len() {
                *best = (acc, cur.clone());
                return;
            }
            for c in 0..cost.len() {
                if !used[c] {
                    used[c] = true;
                    cur.push(c);
                    search(j + 1, cost, used, cur, acc + cost[j][c], best);
                    cur.pop();
                    used[c] = false;
                }
            }
        }
        let mut best = (f64::INFINITY, (0..k).collect());
        search(0, &cost, &mut vec![false; k], &mut Vec::new(), 0.0, &mut best);
        best.1
    } else {
        let mut used = vec![false; k];
        cost.iter()
            .map(|row| {
                let c = (0..k)
                    .filter(|&c| !used[c])
                    .min_by(|&a, &b| row[a].total_cmp(&row[b]))
                    .expect("one unmatched cluster per reference cluster");
                used[c] = true;
                c
            })
            .collect()
    }
}

/// Runs k-means `runs` times with seeds `seed0, seed0 + 1, ...` and elects,
/// for each cluster, the image most often closest to its centroid.
///
/// Clusters are identified across runs by matching their centroids to those
/// of run 0. Vote ties go to the image listed first.
pub fn select_representatives(
    ids: &[String],
    data: &[Vec<f64>],
    k: usize,
    runs: usize,
    seed0: u64,
) -> Result<Election> {
    if runs == 0 {
        return Err(SaliencyError::InvalidInput("runs must be at least 1".into()));
    }
    if ids.len() != data.len() {
        return Err(SaliencyError::InvalidInput(format!(
            "{} ids for {} feature vectors",
            ids.len(),
            data.len()
        )));
    }
    let fits: Vec<KMeansFit> = (0..runs)
        .into_par_iter()
        .map(|r| kmeans(data, k, seed0.wrapping_add(r as u64)))
        .collect::<Result<_>>()?;
    let reference = fits[0].clone();

    let ballots: Vec<Vec<Option<usize>>> = fits
        .iter()
        .map(|fit| {
            let reps = nearest_members(data, fit);
            match_clusters(&reference.centroids, &fit.centroids)
                .into_iter()
                .map(|c| reps[c])
                .collect()
        })
        .collect();

    let mut representatives = Vec::with_capacity(k);
    let mut modal: Vec<Option<usize>> = Vec::with_capacity(k);
    for j in 0..k {
        let mut votes = vec![0usize; data.len()];
        for ballot in &ballots {
            if let Some(i) = ballot[j] {
                votes[i] += 1;
            }
        }
        let winner = (0..data.len())
            .max_by(|&a, &b| votes[a].cmp(&votes[b]).then(b.cmp(&a)))
            .filter(|&i| votes[i] > 0);
        modal.push(winner);
        if let Some(i) = winner {
            representatives.push(ElectedRepresentative {
                cluster: j,
                image_id: ids[i].clone(),
                votes: votes[i],
                frequency: votes[i] as f64 / runs as f64,
            });
        }
    }
    let unanimous_runs = ballots.iter().filter(|b| **b == modal).count();

    Ok(Election {
        k,
        runs,
        seed0,
        representatives,
        unanimous_runs,
        reference,
    })
}

impl Election {
    pub fn result(&self, ids: &[String]) -> ClusteringResult {
        ClusteringResult {
            k: self.k,
            assignments: ids
                .iter()
                .cloned()
                .zip(self.reference.assignments.iter().copied())
                .collect(),
            centroids: self.reference.centroids.clone(),
            inertia: self.reference.inertia,
            representatives: self
                .representatives
                .iter()
                .map(|r| (r.cluster, r.image_id.clone()))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KChoice {
    /// Kneedle over `k = 1..=max_k` (capped at the number of images).
    Auto { max_k: usize },
    Fixed(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterRequest {
    pub k: KChoice,
    pub runs: usize,
    pub seed: u64,
    /// Seeds tried per k when building the inertia curve.
    pub restarts: usize,
}

impl Default for ClusterRequest {
    fn default() -> Self {
        Self {
            k: KChoice::Auto { max_k: 10 },
            runs: 1000,
            seed: 0,
            restarts: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageRow {
    pub image_id: String,
    pub features: FeatureVector,
    pub standardized: Vec<f64>,
    pub cluster: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterReport {
    pub k: usize,
    pub k_selection: Option<KneeResult>,
    pub inertia_curve: Vec<(usize, f64)>,
    pub runs: usize,
    pub seed: u64,
    pub feature_names: Vec<String>,
    pub standardizer: Standardizer,
    pub images: Vec<ImageRow>,
    pub centroids: Vec<Vec<f64>>,
    pub inertia: f64,
    pub representatives: Vec<ElectedRepresentative>,
    pub unanimous_runs: usize,
}

/// Whole pipeline from loaded maps to a report.
pub fn cluster_images(maps: &[(String, SaliencyMap)], req: &ClusterRequest) -> Result<ClusterReport> {
    let ids: Vec<String> = maps.iter().map(|(id, _)| id.clone()).collect();
    let features: Vec<FeatureVector> = maps.par_iter().map(|(_, m)| extract_features(m)).collect();
    let raw: Vec<Vec<f64>> = features.iter().map(|f| f.to_array().to_vec()).collect();
    let (standardizer, data) = Standardizer::fit_transform(&raw)?;

    let (k, k_selection, curve) = match req.k {
        KChoice::Fixed(k) => (k, None, Vec::new()),
        KChoice::Auto { max_k } => {
            let curve = inertia_curve(&data, 1..=max_k.min(data.len()), req.seed, req.restarts)?;
            let knee = kneedle_select_k(&curve)?;
            (knee.k, Some(knee), curve)
        }
    };
    let election = select_representatives(&ids, &data, k, req.runs, req.seed)?;
    let images = ids
        .iter()
        .zip(features)
        .zip(&data)
        .zip(&election.reference.assignments)
        .map(|(((id, f), z), &c)| ImageRow {
            image_id: id.clone(),
            features: f,
            standardized: z.clone(),
            cluster: c,
        })
        .collect();
    Ok(ClusterReport {
        k,
        k_selection,
        inertia_curve: curve,
        runs: req.runs,
        seed: req.seed,
        feature_names: FEATURE_NAMES.iter().map(|s| s.to_string()).collect(),
        standardizer,
        images,
        centroids: election.reference.centroids.clone(),
        inertia: election.reference.inertia,
        representatives: election.representatives,
        unanimous_runs: election.unanimous_runs,
    })
}

impl ClusterReport {
    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer_pretty(out, self)?;
        Ok(())
    }

    /// `image_id` followed by the six raw features.
    pub fn write_feature_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["image_id"];
        header.extend(FEATURE_NAMES);
        w.write_record(&header)?;
        for row in &self.images {
            let mut rec = vec![row.image_id.clone()];
            rec.extend(row.features.to_array().iter().map(|v| v.to_string()));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}
