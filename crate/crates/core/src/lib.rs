//! Deterministic centroid seeding and cluster-count estimation for K-Means.
//!
//! The entry points are [`discern_init`], which picks diverse data points as
//! initial centroids and estimates K from how quickly diversity runs out,
//! and [`kmeans_run`], which refines any initialization with Lloyd
//! iterations. [`kestimators`] holds the elbow and silhouette baselines,
//! [`metrics`] the evaluation scores and [`io`] loading and serialization.

pub mod discern;
pub mod error;
pub mod io;
pub mod kestimators;
pub mod kmeans;
pub mod metrics;
pub mod similarity;
pub mod types;

pub use discern::{
    discern_from_similarity, discern_init, discern_init_with, diversity_scan, estimate_k, signed_curvature,
    DiscernMode, DiscernResult, DiversityScan, FiniteDifference, KEstimationCurve, MIN_ESTIMATED_K,
};
pub use error::{Error, Result};
pub use io::{load_dataset, load_labels, load_result, save_result, DatasetSpec, Fixture, Format, Persist};
pub use kestimators::{elbow_scan, knee_detect, silhouette_scan, KneeRule, ScanMethod, ScanResult};
pub use kmeans::{kmeans_run, ClusteringResult, Init, KMeansConfig};
pub use metrics::{adjusted_rand_index, purity, silhouette_score, sse, EvaluationReport, SseKind};
pub use similarity::{build_similarity_matrix, min_similarity_pair, SimilarityMatrix};
pub use types::{CentroidSet, Dataset, LabelVector, MetricKind};
