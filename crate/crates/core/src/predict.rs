//! Homophily-based prediction of co-author relations: every intra-community
//! researcher pair that is not already observed becomes a candidate
//! relation, weighted by the community's connectivity weight.

use std::fmt;

use thiserror::Error;

use crate::kg::{ordered_pair, CoAuthorNetwork, EntityId};
use crate::partition::{Community, Partition};
use crate::relatedness::RelatednessSet;

#[derive(Debug, Error)]
pub enum PredictError {
    #[error("partition universe does not match the observed researcher universe")]
    UniverseMismatch,
    #[error("min_weight {0} outside [0, 1]")]
    InvalidMinWeight(f64),
}

/// Aggregation function over a community's pairwise scores. `Minimum` and
/// `Product` are the two standard triangular norms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Aggregator {
    #[default]
    Average,
    Minimum,
    Product,
}

impl Aggregator {
    /// Aggregate a non-empty multiset of [0, 1] scores into [0, 1];
    /// the empty multiset maps to 0.
    pub fn apply(&self, scores: &[f64]) -> f64 {
        if scores.is_empty() {
            return 0.0;
        }
        match self {
            Aggregator::Average => scores.iter().sum::<f64>() / scores.len() as f64,
            Aggregator::Minimum => scores.iter().copied().fold(f64::INFINITY, f64::min),
            Aggregator::Product => scores.iter().product(),
        }
    }
}

impl fmt::Display for Aggregator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Aggregator::Average => "average",
            Aggregator::Minimum => "minimum",
            Aggregator::Product => "product",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Aggregator {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "avg" | "average" => Ok(Aggregator::Average),
            "min" | "minimum" => Ok(Aggregator::Minimum),
            "product" | "prod" => Ok(Aggregator::Product),
            other => Err(format!("unknown aggregator: {other}")),
        }
    }
}

/// How the connectivity weight attaches to a predicted pair: from the whole
/// community's score multiset (the default) or from only the scores
/// incident to the pair's endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WeightMode {
    #[default]
    CommunityLevel,
    PairLocal,
}

/// A candidate co-author relation discovered inside one community.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictedRelation {
    pub left: EntityId,
    pub right: EntityId,
    pub weight: f64,
    pub community_id: usize,
}

/// Predicted relations sorted by descending weight, ties by pair order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PredictedNetwork {
    relations: Vec<PredictedRelation>,
}

impl PredictedNetwork {
    pub fn relations(&self) -> &[PredictedRelation] {
        &self.relations
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    /// The first `k` pairs in rank order.
    pub fn top_pairs(&self, k: usize) -> Vec<(EntityId, EntityId)> {
        self.relations
            .iter()
            .take(k)
            .map(|r| (r.left.clone(), r.right.clone()))
            .collect()
    }
}

/// Connectivity weight of a community: the aggregate of all relatedness
/// scores present among its members (0 for an empty multiset, hence 0 for
/// singletons).
pub fn connectivity_weight(
    community: &Community,
    sc: &RelatednessSet,
    aggregator: Aggregator,
) -> f64 {
    let members: Vec<&EntityId> = community.members.iter().collect();
    let mut scores = Vec::new();
    for i in 0..members.len() {
        for j in (i + 1)..members.len() {
            let s = sc.score(members[i], members[j]);
            if s > 0.0 {
                scores.push(s);
            }
        }
    }
    aggregator.apply(&scores)
}

fn pair_local_weight(
    community: &Community,
    sc: &RelatednessSet,
    aggregator: Aggregator,
    left: &EntityId,
    right: &EntityId,
) -> f64 {
    let mut scores = Vec::new();
    for member in &community.members {
        for endpoint in [left, right] {
            if member == endpoint {
                continue;
            }
            let s = sc.score(member, endpoint);
            if s > 0.0 {
                scores.push(s);
            }
        }
    }
    aggregator.apply(&scores)
}

/// Emit one predicted relation per unordered intra-community pair that is
/// not an observed co-author edge, weighted by the community connectivity
/// weight, dropping weights below `min_weight`. Cross-community pairs are
/// never emitted.
pub fn generate_patterns(
    partition: &Partition,
    sc: &RelatednessSet,
    observed: &CoAuthorNetwork,
    aggregator: Aggregator,
    min_weight: f64,
) -> Result<PredictedNetwork, PredictError> {
    generate_patterns_with(
        partition,
        sc,
        observed,
        aggregator,
        min_weight,
        WeightMode::CommunityLevel,
    )
}

pub fn generate_patterns_with(
    partition: &Partition,
    sc: &RelatednessSet,
    observed: &CoAuthorNetwork,
    aggregator: Aggregator,
    min_weight: f64,
    mode: WeightMode,
) -> Result<PredictedNetwork, PredictError> {
    if !(0.0..=1.0).contains(&min_weight) {
        return Err(PredictError::InvalidMinWeight(min_weight));
    }
    if partition.universe() != observed.researchers() {
        return Err(PredictError::UniverseMismatch);
    }
    let mut relations = Vec::new();
    for community in partition.communities() {
        let community_weight = match mode {
            WeightMode::CommunityLevel => Some(connectivity_weight(community, sc, aggregator)),
            WeightMode::PairLocal => None,
        };
        let members: Vec<&EntityId> = community.members.iter().collect();
        for i in 0..members.len() {
            for j in (i + 1)..members.len() {
                let (left, right) = ordered_pair(members[i], members[j]);
                if observed.contains_edge(&left, &right) {
                    continue;
                }
                let weight = match mode {
                    WeightMode::CommunityLevel => community_weight.expect("computed above"),
                    WeightMode::PairLocal => {
                        pair_local_weight(community, sc, aggregator, &left, &right)
                    }
                };
                if weight < min_weight {
                    continue;
                }
                relations.push(PredictedRelation {
                    left,
                    right,
                    weight,
                    community_id: community.id,
                });
            }
        }
    }
    relations.sort_by(|a, b| {
        b.weight
            .total_cmp(&a.weight)
            .then_with(|| (&a.left, &a.right).cmp(&(&b.left, &b.right)))
    });
    Ok(PredictedNetwork { relations })
}
