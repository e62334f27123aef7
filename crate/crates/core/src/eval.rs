//! Evaluation harness: temporal holdout against future co-authorships,
//! ranking metrics with an analytic random baseline, a seeded
//! planted-community generator, and adjusted Rand scoring of partition
//! recovery.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::ingest::{build_graph, IngestError, PublicationRecord};
use crate::kg::{ordered_pair, EntityId, EntityKind, ScholarlyKnowledgeGraph};
use crate::partition::Partition;
use crate::predict::PredictedNetwork;
use crate::relatedness::RelatednessSet;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("degenerate split: no records {0} cutoff year {1}")]
    DegenerateSplit(&'static str, i32),
    #[error("no predictions to rank")]
    NoPredictions,
    #[error("k must be at least 1")]
    InvalidK,
    #[error("invalid planted spec: {0}")]
    InvalidSpec(String),
    #[error("partitions cover different universes")]
    UniverseMismatch,
    #[error(transparent)]
    Ingest(#[from] IngestError),
}

/// Train graph up to the cutoff year plus the co-author pairs that first
/// appear strictly after it.
#[derive(Debug)]
pub struct HoldoutSplit {
    pub cutoff_year: i32,
    pub train_graph: ScholarlyKnowledgeGraph,
    pub future_edges: BTreeSet<(EntityId, EntityId)>,
}

/// Split records at a cutoff year. Publications dated at or before the
/// cutoff form the train graph; co-author pairs of later publications that
/// were not already co-authors in the train graph become the future edge
/// set.
pub fn temporal_split(
    records: &[PublicationRecord],
    cutoff_year: i32,
) -> Result<HoldoutSplit, EvalError> {
    let (train, future): (Vec<_>, Vec<_>) =
        records.iter().cloned().partition(|r| r.year <= cutoff_year);
    if train.is_empty() {
        return Err(EvalError::DegenerateSplit("at or before", cutoff_year));
    }
    if future.is_empty() {
        return Err(EvalError::DegenerateSplit("after", cutoff_year));
    }
    let train_graph = build_graph(&train)?;
    let observed = train_graph.derive_co_author_network();
    let mut future_edges = BTreeSet::new();
    for record in &future {
        let mut authors: Vec<EntityId> = record
            .authors
            .iter()
            .map(|a| EntityId::new(a.id.clone()))
            .collect();
        authors.sort();
        authors.dedup();
        for i in 0..authors.len() {
            for j in (i + 1)..authors.len() {
                let pair = ordered_pair(&authors[i], &authors[j]);
                if !observed.contains_edge(&pair.0, &pair.1) {
                    future_edges.insert(pair);
                }
            }
        }
    }
    Ok(HoldoutSplit {
        cutoff_year,
        train_graph,
        future_edges,
    })
}

/// Precision/recall of the top-k predictions against the future edges,
/// next to the expected precision of uniform random candidate pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct RankingReport {
    pub k: usize,
    pub precision_at_k: f64,
    pub recall_at_k: f64,
    pub random_baseline: f64,
}

impl RankingReport {
    pub fn csv_header() -> &'static str {
        "k,precision_at_k,recall_at_k,random_baseline"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{}",
            self.k, self.precision_at_k, self.recall_at_k, self.random_baseline
        )
    }
}

/// Rank the predictions against a holdout split. The candidate universe of
/// the baseline is every non-observed researcher pair of the train graph.
pub fn rank_eval(
    predictions: &PredictedNetwork,
    split: &HoldoutSplit,
    k: usize,
) -> Result<RankingReport, EvalError> {
    if k == 0 {
        return Err(EvalError::InvalidK);
    }
    if predictions.is_empty() {
        return Err(EvalError::NoPredictions);
    }
    let hits = predictions
        .top_pairs(k)
        .into_iter()
        .filter(|pair| split.future_edges.contains(pair))
        .count();
    let observed = split.train_graph.derive_co_author_network();
    let n = observed.researchers().len();
    let candidate_pairs = n * n.saturating_sub(1) / 2 - observed.edge_count();
    let random_baseline = if candidate_pairs == 0 {
        0.0
    } else {
        split.future_edges.len() as f64 / candidate_pairs as f64
    };
    let recall = if split.future_edges.is_empty() {
        0.0
    } else {
        hits as f64 / split.future_edges.len() as f64
    };
    Ok(RankingReport {
        k,
        precision_at_k: hits as f64 / k as f64,
        recall_at_k: recall,
        random_baseline,
    })
}

/// Parameters of the planted-community generator. Separability at desk
/// scale requires the intra range to sit strictly above the inter range.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedSpec {
    pub n_entities: usize,
    pub n_communities: usize,
    pub intra_score_range: (f64, f64),
    pub inter_score_range: (f64, f64),
    pub seed: u64,
}

impl PlantedSpec {
    fn validate(&self) -> Result<(), EvalError> {
        if self.n_communities == 0 {
            return Err(EvalError::InvalidSpec("need at least one community".to_string()));
        }
        if self.n_entities < self.n_communities {
            return Err(EvalError::InvalidSpec(format!(
                "{} entities cannot fill {} communities",
                self.n_entities, self.n_communities
            )));
        }
        for (lo, hi) in [self.intra_score_range, self.inter_score_range] {
            if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
                return Err(EvalError::InvalidSpec(format!(
                    "score range [{lo}, {hi}] is not a subrange of [0, 1]"
                )));
            }
        }
        if self.intra_score_range.0 <= self.inter_score_range.1 {
            return Err(EvalError::InvalidSpec(
                "intra range must sit strictly above the inter range".to_string(),
            ));
        }
        Ok(())
    }
}

/// Deterministically generate a relatedness set with planted communities:
/// entities split evenly (remainders going to the first communities), every
/// intra pair scored uniformly from the intra range and every inter pair
/// from the inter range. Returns the ground-truth partition alongside.
pub fn generate_planted(spec: &PlantedSpec) -> Result<(RelatednessSet, Partition), EvalError> {
    spec.validate()?;
    let width = spec.n_entities.saturating_sub(1).to_string().len().max(1);
    let entities: Vec<EntityId> = (0..spec.n_entities)
        .map(|i| EntityId::new(format!("e{i:0width$}")))
        .collect();
    let base = spec.n_entities / spec.n_communities;
    let remainder = spec.n_entities % spec.n_communities;
    let mut block_of = Vec::with_capacity(spec.n_entities);
    for community in 0..spec.n_communities {
        let size = base + usize::from(community < remainder);
        block_of.extend(std::iter::repeat_n(community, size));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut draw = |range: (f64, f64)| -> f64 {
        if range.0 == range.1 {
            range.0
        } else {
            rng.random_range(range.0..range.1)
        }
    };

    let universe: BTreeSet<EntityId> = entities.iter().cloned().collect();
    let mut sc = RelatednessSet::new(EntityKind::Researcher, universe);
    for i in 0..spec.n_entities {
        for j in (i + 1)..spec.n_entities {
            let score = if block_of[i] == block_of[j] {
                draw(spec.intra_score_range)
            } else {
                draw(spec.inter_score_range)
            };
            sc.insert(entities[i].clone(), entities[j].clone(), score)
                .expect("generated scores are valid");
        }
    }

    let mut groups = vec![BTreeSet::new(); spec.n_communities];
    for (i, &block) in block_of.iter().enumerate() {
        groups[block].insert(entities[i].clone());
    }
    Ok((sc, Partition::from_groups(groups)))
}

/// Standard adjusted Rand index between two partitions of the same
/// universe; 1 for identical partitions, 0 in expectation for independent
/// ones, negative for anti-correlated ones.
pub fn adjusted_rand(found: &Partition, truth: &Partition) -> Result<f64, EvalError> {
    if found.universe() != truth.universe() {
        return Err(EvalError::UniverseMismatch);
    }
    let found_of = found.membership();
    let truth_of = truth.membership();

    let mut contingency: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    let mut found_sizes: BTreeMap<usize, u64> = BTreeMap::new();
    let mut truth_sizes: BTreeMap<usize, u64> = BTreeMap::new();
    for entity in found.universe() {
        let f = found_of[entity];
        let t = truth_of[entity];
        *contingency.entry((f, t)).or_insert(0) += 1;
        *found_sizes.entry(f).or_insert(0) += 1;
        *truth_sizes.entry(t).or_insert(0) += 1;
    }

    fn comb2(x: u64) -> f64 {
        (x as f64) * (x as f64 - 1.0) / 2.0
    }

    let n = found.universe().len() as u64;
    let pairs_total = comb2(n);
    if pairs_total == 0.0 {
        return Ok(1.0);
    }
    let index: f64 = contingency.values().map(|&c| comb2(c)).sum();
    let sum_found: f64 = found_sizes.values().map(|&c| comb2(c)).sum();
    let sum_truth: f64 = truth_sizes.values().map(|&c| comb2(c)).sum();
    let expected = sum_found * sum_truth / pairs_total;
    let max_index = 0.5 * (sum_found + sum_truth);
    let denominator = max_index - expected;
    if denominator == 0.0 {
        // Both partitions are trivially identical (all singletons or one
        // community); agreement is perfect.
        return Ok(1.0);
    }
    Ok((index - expected) / denominator)
}
