//! Intra-type relatedness scoring: produces the set of scored same-kind
//! entity pairs, either from co-publication overlap ratios, shared-author
//! Jaccard between venues, bounded path counting, or externally supplied
//! scores, plus nearest-rank percentile thresholding.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::kg::{ordered_pair, EntityId, EntityKind, KgError, ScholarlyKnowledgeGraph};

#[derive(Debug, Error)]
pub enum RelatednessError {
    #[error(transparent)]
    Graph(#[from] KgError),
    #[error("method {method} applies to {expected} entities, got {requested}")]
    MethodKindMismatch {
        method: String,
        expected: EntityKind,
        requested: EntityKind,
    },
    #[error("relatedness set is empty")]
    EmptyRelatednessSet,
    #[error("score {score} for pair ({left}, {right}) is outside [0, 1]")]
    ScoreOutOfRange {
        left: EntityId,
        right: EntityId,
        score: f64,
    },
    #[error("self-pair ({0}, {0}) is not allowed")]
    SelfPair(EntityId),
    #[error("pair ({left}, {right}) scored twice with different values ({first} vs {second})")]
    ConflictingPair {
        left: EntityId,
        right: EntityId,
        first: f64,
        second: f64,
    },
    #[error("path relatedness supports max_len 2 or 4, got {0}")]
    InvalidMaxLen(usize),
    #[error("percentile must be in [1, 99], got {0}")]
    InvalidPercentile(u8),
    #[error("focus venue series must be non-empty")]
    EmptyFocusSeries,
    #[error("kind {0} mixes entity kinds in one relatedness set")]
    MixedKinds(EntityKind),
}

/// Sparse set of scored same-kind pairs. Pairs are stored once under the
/// canonical (smaller id first) ordering; absent pairs score 0 and
/// zero-score pairs are omitted. The universe tracks every entity the set
/// ranges over, including isolated ones, so downstream partitions can cover
/// them with singletons.
#[derive(Debug, Clone, PartialEq)]
pub struct RelatednessSet {
    kind: EntityKind,
    universe: BTreeSet<EntityId>,
    scores: BTreeMap<(EntityId, EntityId), f64>,
    threshold: Option<f64>,
}

impl RelatednessSet {
    pub fn new(kind: EntityKind, universe: BTreeSet<EntityId>) -> Self {
        RelatednessSet {
            kind,
            universe,
            scores: BTreeMap::new(),
            threshold: None,
        }
    }

    /// Insert a scored pair. Scores must be finite and in [0, 1]; zero
    /// scores are dropped; re-inserting the same score is a no-op while a
    /// different score for the same pair is a conflict. Endpoints join the
    /// universe.
    pub fn insert(
        &mut self,
        a: EntityId,
        b: EntityId,
        score: f64,
    ) -> Result<(), RelatednessError> {
        if a == b {
            return Err(RelatednessError::SelfPair(a));
        }
        if !score.is_finite() || !(0.0..=1.0).contains(&score) {
            let (left, right) = ordered_pair(&a, &b);
            return Err(RelatednessError::ScoreOutOfRange { left, right, score });
        }
        let pair = ordered_pair(&a, &b);
        self.universe.insert(a);
        self.universe.insert(b);
        if score == 0.0 {
            return Ok(());
        }
        match self.scores.get(&pair) {
            Some(&existing) if existing == score => Ok(()),
            Some(&existing) => Err(RelatednessError::ConflictingPair {
                left: pair.0,
                right: pair.1,
                first: existing,
                second: score,
            }),
            None => {
                self.scores.insert(pair, score);
                Ok(())
            }
        }
    }

    pub fn kind(&self) -> EntityKind {
        self.kind
    }

    pub fn universe(&self) -> &BTreeSet<EntityId> {
        &self.universe
    }

    /// Add entities (typically isolated ones known only to the caller) to
    /// the universe.
    pub fn extend_universe(&mut self, ids: impl IntoIterator<Item = EntityId>) {
        self.universe.extend(ids);
    }

    /// Cutoff applied by the most recent percentile thresholding, if any.
    pub fn threshold(&self) -> Option<f64> {
        self.threshold
    }

    /// Score of an unordered pair; 0 for absent pairs.
    pub fn score(&self, a: &EntityId, b: &EntityId) -> f64 {
        if a == b {
            return 0.0;
        }
        self.scores.get(&ordered_pair(a, b)).copied().unwrap_or(0.0)
    }

    pub fn triples(&self) -> impl Iterator<Item = (&EntityId, &EntityId, f64)> {
        self.scores.iter().map(|((a, b), &s)| (a, b, s))
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    /// Total incident score per universe entity (weighted degree).
    pub fn weighted_degrees(&self) -> BTreeMap<EntityId, f64> {
        let mut degrees: BTreeMap<EntityId, f64> =
            self.universe.iter().map(|e| (e.clone(), 0.0)).collect();
        for ((a, b), &w) in &self.scores {
            *degrees.get_mut(a).expect("endpoint in universe") += w;
            *degrees.get_mut(b).expect("endpoint in universe") += w;
        }
        degrees
    }
}

/// Scoring method for [`compute_sc`].
#[derive(Debug, Clone)]
pub enum ScMethod {
    /// Shared focus-venue papers over the union of all papers. Researcher
    /// pairs only.
    SimR { focus_series: BTreeSet<EntityId> },
    /// Jaccard similarity of the venues' author sets. Venue pairs only.
    SimC,
    /// Count of distinct simple paths (length <= max_len) over author and
    /// published-in edges, max-normalized.
    Path { max_len: usize },
    /// Externally supplied scored pairs, taken verbatim.
    External { scores: Vec<(EntityId, EntityId, f64)> },
}

impl ScMethod {
    pub fn name(&self) -> &'static str {
        match self {
            ScMethod::SimR { .. } => "simr",
            ScMethod::SimC => "simc",
            ScMethod::Path { .. } => "path",
            ScMethod::External { .. } => "external",
        }
    }
}

/// Ratio of shared focus-series papers to the union of both researchers'
/// complete paper sets. Returns 0 when the union is empty.
pub fn sim_r(
    graph: &ScholarlyKnowledgeGraph,
    r_i: &EntityId,
    r_j: &EntityId,
    focus_series: &BTreeSet<EntityId>,
) -> Result<f64, RelatednessError> {
    let focus_i = graph.papers_of(r_i, Some(focus_series))?;
    let focus_j = graph.papers_of(r_j, Some(focus_series))?;
    let total_i = graph.papers_of(r_i, None)?;
    let total_j = graph.papers_of(r_j, None)?;
    let numerator = focus_i.intersection(&focus_j).count();
    let denominator = total_i.union(&total_j).count();
    if denominator == 0 {
        return Ok(0.0);
    }
    Ok(numerator as f64 / denominator as f64)
}

/// Jaccard similarity of the author sets of two venues. Returns 0 when
/// both sets are empty.
pub fn sim_c(
    graph: &ScholarlyKnowledgeGraph,
    c_i: &EntityId,
    c_j: &EntityId,
) -> Result<f64, RelatednessError> {
    let authors_i = graph.researchers_at(c_i)?;
    let authors_j = graph.researchers_at(c_j)?;
    let union = authors_i.union(&authors_j).count();
    if union == 0 {
        return Ok(0.0);
    }
    let intersection = authors_i.intersection(&authors_j).count();
    Ok(intersection as f64 / union as f64)
}

/// Relatedness by exhaustive simple-path counting between same-kind
/// entities, traversing `author` and `published-in` edges in either
/// direction, normalized by the maximum count. Paths alternate between
/// entity layers, so only even lengths (2 or 4) are meaningful; longer
/// bounds are refused.
pub fn path_relatedness(
    graph: &ScholarlyKnowledgeGraph,
    kind: EntityKind,
    max_len: usize,
) -> Result<RelatednessSet, RelatednessError> {
    if max_len != 2 && max_len != 4 {
        return Err(RelatednessError::InvalidMaxLen(max_len));
    }
    let universe: BTreeSet<EntityId> = graph.entities_of_kind(kind).cloned().collect();
    let mut raw: BTreeMap<(EntityId, EntityId), u64> = BTreeMap::new();
    for start in &universe {
        let mut visited = BTreeSet::from([start.clone()]);
        count_paths(graph, kind, start, start, 0, max_len, &mut visited, &mut raw);
    }
    let mut sc = RelatednessSet::new(kind, universe);
    let max = raw.values().copied().max().unwrap_or(0);
    if max == 0 {
        return Ok(sc);
    }
    for ((a, b), count) in raw {
        sc.insert(a, b, count as f64 / max as f64)?;
    }
    Ok(sc)
}

#[allow(clippy::too_many_arguments)]
fn count_paths(
    graph: &ScholarlyKnowledgeGraph,
    kind: EntityKind,
    start: &EntityId,
    current: &EntityId,
    depth: usize,
    max_len: usize,
    visited: &mut BTreeSet<EntityId>,
    raw: &mut BTreeMap<(EntityId, EntityId), u64>,
) {
    if depth == max_len {
        return;
    }
    for next in neighbors(graph, current) {
        if visited.contains(&next) {
            continue;
        }
        // Count each simple path once, keyed from the smaller endpoint.
        if graph.entity_kind(&next) == Some(kind) && next > *start {
            *raw.entry((start.clone(), next.clone())).or_insert(0) += 1;
        }
        visited.insert(next.clone());
        count_paths(graph, kind, start, &next, depth + 1, max_len, visited, raw);
        visited.remove(&next);
    }
}

fn neighbors(graph: &ScholarlyKnowledgeGraph, entity: &EntityId) -> Vec<EntityId> {
    let mut out = Vec::new();
    match graph.entity_kind(entity) {
        Some(EntityKind::Researcher) => {
            if let Ok(papers) = graph.papers_of(entity, None) {
                out.extend(papers);
            }
        }
        Some(EntityKind::Publication) => {
            if let Some(authors) = graph.authors_of(entity) {
                out.extend(authors.iter().cloned());
            }
            if let Some(venues) = graph.venues_of(entity) {
                out.extend(venues.iter().cloned());
            }
        }
        Some(EntityKind::Venue) => {
            if let Some(pubs) = graph.publications_at(entity) {
                out.extend(pubs.iter().cloned());
            }
        }
        None => {}
    }
    out
}

/// Compute the scored-pair set for all same-kind pairs with positive score.
pub fn compute_sc(
    graph: &ScholarlyKnowledgeGraph,
    kind: EntityKind,
    method: &ScMethod,
) -> Result<RelatednessSet, RelatednessError> {
    match method {
        ScMethod::SimR { focus_series } => {
            if kind != EntityKind::Researcher {
                return Err(RelatednessError::MethodKindMismatch {
                    method: "simr".to_string(),
                    expected: EntityKind::Researcher,
                    requested: kind,
                });
            }
            if focus_series.is_empty() {
                return Err(RelatednessError::EmptyFocusSeries);
            }
            let universe: BTreeSet<EntityId> =
                graph.entities_of_kind(EntityKind::Researcher).cloned().collect();
            let mut sc = RelatednessSet::new(kind, universe);
            // Only pairs sharing a focus-venue paper can score above zero,
            // so candidates come from focus publications' author lists.
            let mut candidates: BTreeSet<(EntityId, EntityId)> = BTreeSet::new();
            for venue in focus_series {
                let Some(pubs) = graph.publications_at(venue) else {
                    continue;
                };
                for publication in pubs {
                    let Some(authors) = graph.authors_of(publication) else {
                        continue;
                    };
                    let authors: Vec<&EntityId> = authors.iter().collect();
                    for i in 0..authors.len() {
                        for j in (i + 1)..authors.len() {
                            candidates.insert(ordered_pair(authors[i], authors[j]));
                        }
                    }
                }
            }
            for (a, b) in candidates {
                let score = sim_r(graph, &a, &b, focus_series)?;
                sc.insert(a, b, score)?;
            }
            Ok(sc)
        }
        ScMethod::SimC => {
            if kind != EntityKind::Venue {
                return Err(RelatednessError::MethodKindMismatch {
                    method: "simc".to_string(),
                    expected: EntityKind::Venue,
                    requested: kind,
                });
            }
            let universe: BTreeSet<EntityId> =
                graph.entities_of_kind(EntityKind::Venue).cloned().collect();
            let mut sc = RelatednessSet::new(kind, universe);
            // Candidate venue pairs share at least one author.
            let mut candidates: BTreeSet<(EntityId, EntityId)> = BTreeSet::new();
            for researcher in graph.entities_of_kind(EntityKind::Researcher) {
                let mut venues: BTreeSet<EntityId> = BTreeSet::new();
                for paper in graph.papers_of(researcher, None)? {
                    if let Some(vs) = graph.venues_of(&paper) {
                        venues.extend(vs.iter().cloned());
                    }
                }
                let venues: Vec<&EntityId> = venues.iter().collect();
                for i in 0..venues.len() {
                    for j in (i + 1)..venues.len() {
                        candidates.insert(ordered_pair(venues[i], venues[j]));
                    }
                }
            }
            for (a, b) in candidates {
                let score = sim_c(graph, &a, &b)?;
                sc.insert(a, b, score)?;
            }
            Ok(sc)
        }
        ScMethod::Path { max_len } => path_relatedness(graph, kind, *max_len),
        ScMethod::External { scores } => {
            let universe: BTreeSet<EntityId> = graph.entities_of_kind(kind).cloned().collect();
            let mut sc = RelatednessSet::new(kind, universe);
            for (a, b, score) in scores {
                // Ids known to the graph must carry the requested kind;
                // ids outside the graph are accepted verbatim.
                for id in [a, b] {
                    if let Some(actual) = graph.entity_kind(id) {
                        if actual != kind {
                            return Err(RelatednessError::MethodKindMismatch {
                                method: "external".to_string(),
                                expected: kind,
                                requested: actual,
                            });
                        }
                    }
                }
                sc.insert(a.clone(), b.clone(), *score)?;
            }
            Ok(sc)
        }
    }
}

/// Percentile in [1, 99]; the cutoff is computed by nearest rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PercentileSpec(u8);

impl PercentileSpec {
    pub fn new(p: u8) -> Result<Self, RelatednessError> {
        if (1..=99).contains(&p) {
            Ok(PercentileSpec(p))
        } else {
            Err(RelatednessError::InvalidPercentile(p))
        }
    }

    pub fn value(&self) -> u8 {
        self.0
    }

    /// Nearest-rank cutoff: the value at rank ceil(p/100 * n) of the
    /// ascending sorted score multiset.
    pub fn cutoff(&self, scores: &[f64]) -> Option<f64> {
        if scores.is_empty() {
            return None;
        }
        let mut sorted = scores.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len();
        let rank = (self.0 as usize * n).div_ceil(100).max(1);
        Some(sorted[rank - 1])
    }
}

/// Retain the triples whose score is at least the nearest-rank percentile
/// cutoff. The universe is preserved; the cutoff is recorded on the result.
pub fn percentile_threshold(
    sc: &RelatednessSet,
    spec: PercentileSpec,
) -> Result<RelatednessSet, RelatednessError> {
    let scores: Vec<f64> = sc.triples().map(|(_, _, s)| s).collect();
    let cutoff = spec.cutoff(&scores).ok_or(RelatednessError::EmptyRelatednessSet)?;
    let mut out = RelatednessSet::new(sc.kind, sc.universe.clone());
    for (a, b, score) in sc.triples() {
        if score >= cutoff {
            out.insert(a.clone(), b.clone(), score)?;
        }
    }
    out.threshold = Some(cutoff);
    Ok(out)
}
