//! Scholarly knowledge graph toolkit.
//!
//! Builds a typed knowledge graph (researchers, publications, venues) from
//! line-delimited publication records, scores same-kind entity pairs by
//! relatedness, partitions entities into communities, and predicts
//! successful co-authorship relations by homophily. A metric suite scores
//! partition quality and a temporal-holdout harness evaluates predictions
//! against co-authorships that appear after a cutoff year.
//!
//! Typical flow:
//!
//! ```
//! use scholnet::corpus::sample_corpus;
//! use scholnet::ingest::build_graph;
//! use scholnet::kg::EntityKind;
//! use scholnet::partition::{partition_semantic, PartitionerParams};
//! use scholnet::relatedness::{compute_sc, percentile_threshold, PercentileSpec, ScMethod};
//!
//! let (records, manifest) = sample_corpus();
//! let graph = build_graph(&records).unwrap();
//! let sc = compute_sc(
//!     &graph,
//!     EntityKind::Researcher,
//!     &ScMethod::SimR { focus_series: manifest.focus_venues() },
//! )
//! .unwrap();
//! let sc95 = percentile_threshold(&sc, PercentileSpec::new(95).unwrap()).unwrap();
//! let partition = partition_semantic(&sc95, &PartitionerParams::default()).unwrap();
//! assert!(!partition.is_empty());
//! ```

pub mod corpus;
pub mod eval;
pub mod ingest;
pub mod kg;
pub mod metrics;
pub mod partition;
pub mod pipeline;
pub mod predict;
pub mod relatedness;

pub use ingest::{DatasetManifest, PublicationRecord};
pub use kg::{CoAuthorNetwork, EntityId, EntityKind, ScholarlyKnowledgeGraph};
pub use metrics::PartitionQualityReport;
pub use partition::{Community, Partition, PartitionMethod, PartitionerParams};
pub use predict::{Aggregator, PredictedNetwork, PredictedRelation};
pub use relatedness::{PercentileSpec, RelatednessSet, ScMethod};
