//! Background-image selection from saliency maps.
//!
//! The pipeline loads 8-bit saliency maps, summarizes each with six
//! features, standardizes them, clusters with k-means++ seeded Lloyd
//! iterations, picks `k` with Kneedle, and elects one representative image
//! per cluster by majority over many independently seeded runs.

mod components;
mod error;
mod features;
pub mod kmeans;
mod kneedle;
mod map;
mod otsu;
mod pipeline;
mod standardize;

pub use components::{connected_components, BinaryGrid, Region};
pub use error::{Result, SaliencyError};
pub use features::{extract_features, FeatureVector, FEATURE_NAMES};
pub use kmeans::{inertia_curve, kmeans, KMeansFit};
pub use kneedle::{kneedle_select_k, KneeResult};
pub use map::{load_map_dir, load_saliency_map, AspectFilter, Rect, SaliencyMap};
pub use otsu::{otsu_threshold, otsu_threshold_from_histogram};
pub use pipeline::{
    cluster_images, select_representatives, ClusterReport, ClusterRequest, ClusteringResult,
    Election, ElectedRepresentative, KChoice,
};
pub use standardize::Standardizer;
