//! Partition-quality measures over a (similarity graph, partition) pair:
//! inverted conductance, coverage, rescaled modularity, performance, and
//! inverted normalized total cut. All five are total functions into [0, 1]
//! with the degenerate conventions fixed per operation.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::kg::EntityId;
use crate::partition::Partition;
use crate::relatedness::RelatednessSet;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("partition has no communities")]
    EmptyPartition,
    #[error("partition universe does not match the relatedness set universe")]
    UniverseMismatch,
}

/// How per-community conductance values aggregate into one scalar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConductanceAggregation {
    #[default]
    Mean,
    Max,
}

/// Tunables for the metric suite; the defaults match the reported setup.
#[derive(Debug, Clone, Copy)]
pub struct MetricsOptions {
    pub conductance_agg: ConductanceAggregation,
    /// Pairs with score strictly above this count as relationships in the
    /// performance measure.
    pub relationship_threshold: f64,
}

impl Default for MetricsOptions {
    fn default() -> Self {
        MetricsOptions {
            conductance_agg: ConductanceAggregation::Mean,
            relationship_threshold: 0.0,
        }
    }
}

/// The five measures for one partition at one percentile.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionQualityReport {
    pub method: String,
    pub percentile: u8,
    pub inv_conductance: f64,
    pub coverage: f64,
    pub scaled_modularity: f64,
    pub performance: f64,
    pub inv_norm_total_cut: f64,
}

impl PartitionQualityReport {
    pub fn csv_header() -> &'static str {
        "method,percentile,inv_conductance,coverage,scaled_modularity,performance,inv_norm_total_cut"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.method,
            self.percentile,
            self.inv_conductance,
            self.coverage,
            self.scaled_modularity,
            self.performance,
            self.inv_norm_total_cut
        )
    }
}

// Shared per-partition weight tallies: community volumes, intra sums, cut
// sums, and the global totals.
struct WeightTallies {
    volumes: Vec<f64>,
    intra: Vec<f64>,
    cut: Vec<f64>,
    intra_total: f64,
    inter_total: f64,
    total: f64,
    two_m: f64,
}

fn tally(sc: &RelatednessSet, partition: &Partition) -> Result<WeightTallies, MetricsError> {
    if partition.is_empty() {
        return Err(MetricsError::EmptyPartition);
    }
    if partition.universe() != sc.universe() {
        return Err(MetricsError::UniverseMismatch);
    }
    let membership = partition.membership();
    let n_communities = partition.len();
    let mut volumes = vec![0.0; n_communities];
    let mut intra = vec![0.0; n_communities];
    let mut cut = vec![0.0; n_communities];
    let mut intra_total = 0.0;
    let mut inter_total = 0.0;
    let mut total = 0.0;
    for (a, b, w) in sc.triples() {
        let ca = membership[a];
        let cb = membership[b];
        total += w;
        volumes[ca] += w;
        volumes[cb] += w;
        if ca == cb {
            intra[ca] += w;
            intra_total += w;
        } else {
            cut[ca] += w;
            cut[cb] += w;
            inter_total += w;
        }
    }
    let two_m = volumes.iter().sum();
    Ok(WeightTallies {
        volumes,
        intra,
        cut,
        intra_total,
        inter_total,
        total,
        two_m,
    })
}

/// Inverted conductance. For each community S with 0 < vol(S) < vol(V),
/// phi(S) = cut(S) / min(vol(S), vol(V \ S)); the aggregate over eligible
/// communities (0 when none is eligible) is subtracted from 1.
pub fn conductance(sc: &RelatednessSet, partition: &Partition) -> Result<f64, MetricsError> {
    conductance_with(sc, partition, ConductanceAggregation::Mean)
}

pub fn conductance_with(
    sc: &RelatednessSet,
    partition: &Partition,
    agg: ConductanceAggregation,
) -> Result<f64, MetricsError> {
    let t = tally(sc, partition)?;
    let mut phis = Vec::new();
    for c in 0..partition.len() {
        let vol = t.volumes[c];
        if vol > 0.0 && vol < t.two_m {
            phis.push(t.cut[c] / vol.min(t.two_m - vol));
        }
    }
    let aggregate = if phis.is_empty() {
        0.0
    } else {
        match agg {
            ConductanceAggregation::Mean => phis.iter().sum::<f64>() / phis.len() as f64,
            ConductanceAggregation::Max => phis.iter().copied().fold(0.0, f64::max),
        }
    };
    Ok(1.0 - aggregate)
}

/// Fraction of the total similarity weight that lies inside communities;
/// 1 when the total weight is 0.
pub fn coverage(sc: &RelatednessSet, partition: &Partition) -> Result<f64, MetricsError> {
    let t = tally(sc, partition)?;
    if t.total == 0.0 {
        return Ok(1.0);
    }
    Ok(t.intra_total / t.total)
}

/// Weighted modularity Q = sum_c [ intra_c/m' - (vol_c/2m)^2 ] over ordered
/// pairs (Q = 0 when the graph has no weight), rescaled from [-0.5, 1] to
/// [0, 1] via (Q + 0.5) / 1.5.
pub fn modularity(sc: &RelatednessSet, partition: &Partition) -> Result<f64, MetricsError> {
    let t = tally(sc, partition)?;
    let q = if t.two_m == 0.0 {
        0.0
    } else {
        (0..partition.len())
            .map(|c| 2.0 * t.intra[c] / t.two_m - (t.volumes[c] / t.two_m).powi(2))
            .sum()
    };
    Ok((q + 0.5) / 1.5)
}

/// Fraction of entity pairs classified correctly: intra pairs that are
/// relationships plus inter pairs that are not, over all n(n-1)/2 pairs;
/// 1 when n < 2. A pair is a relationship iff its score exceeds the
/// threshold (default 0).
pub fn performance(sc: &RelatednessSet, partition: &Partition) -> Result<f64, MetricsError> {
    performance_with(sc, partition, 0.0)
}

pub fn performance_with(
    sc: &RelatednessSet,
    partition: &Partition,
    relationship_threshold: f64,
) -> Result<f64, MetricsError> {
    if partition.is_empty() {
        return Err(MetricsError::EmptyPartition);
    }
    if partition.universe() != sc.universe() {
        return Err(MetricsError::UniverseMismatch);
    }
    let n = partition.universe().len();
    if n < 2 {
        return Ok(1.0);
    }
    let membership = partition.membership();
    let mut intra_related = 0usize;
    let mut inter_related = 0usize;
    for (a, b, w) in sc.triples() {
        if w <= relationship_threshold {
            continue;
        }
        if membership[a] == membership[b] {
            intra_related += 1;
        } else {
            inter_related += 1;
        }
    }
    let total_pairs = n * (n - 1) / 2;
    let intra_pairs: usize = partition
        .communities()
        .iter()
        .map(|c| c.members.len() * (c.members.len() - 1) / 2)
        .sum();
    let inter_unrelated = total_pairs - intra_pairs - inter_related;
    Ok((intra_related + inter_unrelated) as f64 / total_pairs as f64)
}

/// Inverted normalized total cut: 1 minus the inter-community share of the
/// total similarity weight (the cut share is 0 when the total is 0).
pub fn total_cut(sc: &RelatednessSet, partition: &Partition) -> Result<f64, MetricsError> {
    let t = tally(sc, partition)?;
    let normalized = if t.total == 0.0 { 0.0 } else { t.inter_total / t.total };
    Ok(1.0 - normalized)
}

/// All five measures on the same inputs, labeled with the partitioning
/// method and percentile they belong to.
pub fn evaluate(
    sc: &RelatednessSet,
    partition: &Partition,
    method: &str,
    percentile: u8,
) -> Result<PartitionQualityReport, MetricsError> {
    evaluate_with(sc, partition, method, percentile, MetricsOptions::default())
}

pub fn evaluate_with(
    sc: &RelatednessSet,
    partition: &Partition,
    method: &str,
    percentile: u8,
    options: MetricsOptions,
) -> Result<PartitionQualityReport, MetricsError> {
    Ok(PartitionQualityReport {
        method: method.to_string(),
        percentile,
        inv_conductance: conductance_with(sc, partition, options.conductance_agg)?,
        coverage: coverage(sc, partition)?,
        scaled_modularity: modularity(sc, partition)?,
        performance: performance_with(sc, partition, options.relationship_threshold)?,
        inv_norm_total_cut: total_cut(sc, partition)?,
    })
}

/// Group a flat membership listing into a partition over `sc`'s universe.
/// Entities absent from the listing become singletons.
pub fn partition_from_membership(
    sc: &RelatednessSet,
    membership: &BTreeMap<EntityId, usize>,
) -> Partition {
    let mut groups: BTreeMap<usize, std::collections::BTreeSet<EntityId>> = BTreeMap::new();
    let mut next_fresh = membership.values().copied().max().map_or(0, |m| m + 1);
    for entity in sc.universe() {
        match membership.get(entity) {
            Some(&c) => {
                groups.entry(c).or_default().insert(entity.clone());
            }
            None => {
                groups.entry(next_fresh).or_default().insert(entity.clone());
                next_fresh += 1;
            }
        }
    }
    Partition::from_groups(groups.into_values().collect())
}
