//! Typed scholarly knowledge graph: researchers, publications, and venues
//! connected by a closed vocabulary of labeled edges, plus derivation of the
//! observed co-author network.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// Opaque identifier for a scholarly entity. Two entities are equal iff
/// their ids are equal; ids are unique per graph across all kinds.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EntityId(String);

impl EntityId {
    pub fn new(id: impl Into<String>) -> Self {
        EntityId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for EntityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for EntityId {
    fn from(s: &str) -> Self {
        EntityId(s.to_string())
    }
}

/// Canonical unordered-pair representation: smaller id first.
pub fn ordered_pair(a: &EntityId, b: &EntityId) -> (EntityId, EntityId) {
    if a <= b {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    }
}

/// The closed set of entity kinds this graph models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EntityKind {
    Researcher,
    Publication,
    Venue,
}

impl fmt::Display for EntityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EntityKind::Researcher => "Researcher",
            EntityKind::Publication => "Publication",
            EntityKind::Venue => "Venue",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for EntityKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "researcher" => Ok(EntityKind::Researcher),
            "publication" => Ok(EntityKind::Publication),
            "venue" => Ok(EntityKind::Venue),
            other => Err(format!("unknown entity kind: {other}")),
        }
    }
}

/// Closed property vocabulary. `co-author` and `rdf-type` exist in the
/// vocabulary (they appear in derived networks and the triple export) but
/// are not storable via [`ScholarlyKnowledgeGraph::add_edge`]: co-author
/// edges are derived from shared publications, and rdf-type is fixed when
/// an entity is registered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PropertyLabel {
    Author,
    CoAuthor,
    PublishedIn,
    Year,
    RdfType,
}

impl fmt::Display for PropertyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PropertyLabel::Author => "author",
            PropertyLabel::CoAuthor => "co-author",
            PropertyLabel::PublishedIn => "published-in",
            PropertyLabel::Year => "year",
            PropertyLabel::RdfType => "rdf-type",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for PropertyLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "author" => Ok(PropertyLabel::Author),
            "co-author" => Ok(PropertyLabel::CoAuthor),
            "published-in" => Ok(PropertyLabel::PublishedIn),
            "year" => Ok(PropertyLabel::Year),
            "rdf-type" => Ok(PropertyLabel::RdfType),
            other => Err(format!("unknown property label: {other}")),
        }
    }
}

/// Object position of an edge: an entity reference or an integer literal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeObject {
    Entity(EntityId),
    Year(i32),
}

impl fmt::Display for EdgeObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeObject::Entity(id) => f.write_str(id.as_str()),
            EdgeObject::Year(y) => write!(f, "{y}"),
        }
    }
}

/// A (subject, property, object) triple.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Edge {
    pub subject: EntityId,
    pub property: PropertyLabel,
    pub object: EdgeObject,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum KgError {
    #[error("entity id must be non-empty")]
    EmptyEntityId,
    #[error("entity {id} already registered as {existing}, cannot re-register as {requested}")]
    DuplicateEntity {
        id: EntityId,
        existing: EntityKind,
        requested: EntityKind,
    },
    #[error("unknown entity: {0}")]
    UnknownEntity(EntityId),
    #[error("kind violation: {0}")]
    KindViolation(String),
    #[error("entity {id} is a {actual}, expected {expected}")]
    WrongKind {
        id: EntityId,
        actual: EntityKind,
        expected: EntityKind,
    },
}

/// Typed scholarly knowledge graph. Build phase is single-writer and
/// append-only; afterwards the graph is immutable and safe to share across
/// read-only queries.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScholarlyKnowledgeGraph {
    entities: BTreeMap<EntityId, EntityKind>,
    display_names: BTreeMap<EntityId, String>,
    edges: BTreeSet<Edge>,
    // Adjacency indexes, maintained on insert.
    pubs_by_author: BTreeMap<EntityId, BTreeSet<EntityId>>,
    authors_by_pub: BTreeMap<EntityId, BTreeSet<EntityId>>,
    venues_by_pub: BTreeMap<EntityId, BTreeSet<EntityId>>,
    pubs_by_venue: BTreeMap<EntityId, BTreeSet<EntityId>>,
    year_by_pub: BTreeMap<EntityId, i32>,
}

impl ScholarlyKnowledgeGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Register an entity with its kind and display name. Re-adding an
    /// existing id with the same kind is an idempotent no-op (keeping the
    /// first display name); a different kind is a conflict.
    pub fn add_entity(
        &mut self,
        id: EntityId,
        kind: EntityKind,
        name: &str,
    ) -> Result<(), KgError> {
        if id.as_str().is_empty() {
            return Err(KgError::EmptyEntityId);
        }
        match self.entities.get(&id) {
            Some(&existing) if existing == kind => Ok(()),
            Some(&existing) => Err(KgError::DuplicateEntity {
                id,
                existing,
                requested: kind,
            }),
            None => {
                self.display_names.insert(id.clone(), name.to_string());
                self.entities.insert(id, kind);
                Ok(())
            }
        }
    }

    /// Add a triple. Both endpoints must already be registered and the
    /// property's kind constraints must hold:
    /// `author`: Researcher -> Publication, `published-in`:
    /// Publication -> Venue, `year`: Publication -> integer literal.
    /// Duplicate triples are no-ops.
    pub fn add_edge(
        &mut self,
        subject: &EntityId,
        property: PropertyLabel,
        object: EdgeObject,
    ) -> Result<(), KgError> {
        let subject_kind = *self
            .entities
            .get(subject)
            .ok_or_else(|| KgError::UnknownEntity(subject.clone()))?;
        match (property, &object) {
            (PropertyLabel::Author, EdgeObject::Entity(obj)) => {
                let object_kind = *self
                    .entities
                    .get(obj)
                    .ok_or_else(|| KgError::UnknownEntity(obj.clone()))?;
                if subject_kind != EntityKind::Researcher || object_kind != EntityKind::Publication
                {
                    return Err(KgError::KindViolation(format!(
                        "author edges connect Researcher -> Publication, got {subject_kind} -> {object_kind}"
                    )));
                }
                self.pubs_by_author
                    .entry(subject.clone())
                    .or_default()
                    .insert(obj.clone());
                self.authors_by_pub
                    .entry(obj.clone())
                    .or_default()
                    .insert(subject.clone());
            }
            (PropertyLabel::PublishedIn, EdgeObject::Entity(obj)) => {
                let object_kind = *self
                    .entities
                    .get(obj)
                    .ok_or_else(|| KgError::UnknownEntity(obj.clone()))?;
                if subject_kind != EntityKind::Publication || object_kind != EntityKind::Venue {
                    return Err(KgError::KindViolation(format!(
                        "published-in edges connect Publication -> Venue, got {subject_kind} -> {object_kind}"
                    )));
                }
                self.venues_by_pub
                    .entry(subject.clone())
                    .or_default()
                    .insert(obj.clone());
                self.pubs_by_venue
                    .entry(obj.clone())
                    .or_default()
                    .insert(subject.clone());
            }
            (PropertyLabel::Year, EdgeObject::Year(y)) => {
                if subject_kind != EntityKind::Publication {
                    return Err(KgError::KindViolation(format!(
                        "year literals attach to Publication, got {subject_kind}"
                    )));
                }
                // One year per publication; re-adding the same year is the
                // usual duplicate no-op.
                if let Some(existing) = self.year_by_pub.get(subject) {
                    if existing != y {
                        return Err(KgError::KindViolation(format!(
                            "publication {subject} already dated {existing}, cannot re-date to {y}"
                        )));
                    }
                }
                self.year_by_pub.insert(subject.clone(), *y);
            }
            (PropertyLabel::Author | PropertyLabel::PublishedIn, EdgeObject::Year(_)) => {
                return Err(KgError::KindViolation(format!(
                    "{property} edges require an entity object, not a literal"
                )));
            }
            (PropertyLabel::Year, EdgeObject::Entity(_)) => {
                return Err(KgError::KindViolation(
                    "year edges require an integer literal object".to_string(),
                ));
            }
            (PropertyLabel::CoAuthor, _) => {
                return Err(KgError::KindViolation(
                    "co-author edges are derived from shared publications, not stored".to_string(),
                ));
            }
            (PropertyLabel::RdfType, _) => {
                return Err(KgError::KindViolation(
                    "rdf-type is fixed by add_entity, not stored as an edge".to_string(),
                ));
            }
        }
        self.edges.insert(Edge {
            subject: subject.clone(),
            property,
            object,
        });
        Ok(())
    }

    pub fn entity_kind(&self, id: &EntityId) -> Option<EntityKind> {
        self.entities.get(id).copied()
    }

    pub fn display_name(&self, id: &EntityId) -> Option<&str> {
        self.display_names.get(id).map(String::as_str)
    }

    pub fn entity_count(&self) -> usize {
        self.entities.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn count_of_kind(&self, kind: EntityKind) -> usize {
        self.entities.values().filter(|&&k| k == kind).count()
    }

    pub fn entities_of_kind(&self, kind: EntityKind) -> impl Iterator<Item = &EntityId> {
        self.entities
            .iter()
            .filter(move |(_, &k)| k == kind)
            .map(|(id, _)| id)
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter()
    }

    pub fn contains_entity(&self, id: &EntityId) -> bool {
        self.entities.contains_key(id)
    }

    pub fn authors_of(&self, publication: &EntityId) -> Option<&BTreeSet<EntityId>> {
        self.authors_by_pub.get(publication)
    }

    pub fn venues_of(&self, publication: &EntityId) -> Option<&BTreeSet<EntityId>> {
        self.venues_by_pub.get(publication)
    }

    pub fn publications_at(&self, venue: &EntityId) -> Option<&BTreeSet<EntityId>> {
        self.pubs_by_venue.get(venue)
    }

    pub fn year_of(&self, publication: &EntityId) -> Option<i32> {
        self.year_by_pub.get(publication).copied()
    }

    /// Publications authored by `researcher`, optionally restricted to those
    /// published at a venue in `venue_filter`.
    pub fn papers_of(
        &self,
        researcher: &EntityId,
        venue_filter: Option<&BTreeSet<EntityId>>,
    ) -> Result<BTreeSet<EntityId>, KgError> {
        let kind = self
            .entity_kind(researcher)
            .ok_or_else(|| KgError::UnknownEntity(researcher.clone()))?;
        if kind != EntityKind::Researcher {
            return Err(KgError::WrongKind {
                id: researcher.clone(),
                actual: kind,
                expected: EntityKind::Researcher,
            });
        }
        let all = self
            .pubs_by_author
            .get(researcher)
            .cloned()
            .unwrap_or_default();
        match venue_filter {
            None => Ok(all),
            Some(venues) => Ok(all
                .into_iter()
                .filter(|p| {
                    self.venues_by_pub
                        .get(p)
                        .map(|vs| !vs.is_disjoint(venues))
                        .unwrap_or(false)
                })
                .collect()),
        }
    }

    /// Researchers with at least one publication at `venue`.
    pub fn researchers_at(&self, venue: &EntityId) -> Result<BTreeSet<EntityId>, KgError> {
        let kind = self
            .entity_kind(venue)
            .ok_or_else(|| KgError::UnknownEntity(venue.clone()))?;
        if kind != EntityKind::Venue {
            return Err(KgError::WrongKind {
                id: venue.clone(),
                actual: kind,
                expected: EntityKind::Venue,
            });
        }
        let mut out = BTreeSet::new();
        if let Some(pubs) = self.pubs_by_venue.get(venue) {
            for p in pubs {
                if let Some(authors) = self.authors_by_pub.get(p) {
                    out.extend(authors.iter().cloned());
                }
            }
        }
        Ok(out)
    }

    /// Project the graph onto its researchers: an unordered pair is an edge
    /// iff the two researchers share at least one publication. Each edge is
    /// annotated with the full set of shared publication ids.
    pub fn derive_co_author_network(&self) -> CoAuthorNetwork {
        let researchers: BTreeSet<EntityId> = self
            .entities_of_kind(EntityKind::Researcher)
            .cloned()
            .collect();
        let mut edges: BTreeMap<(EntityId, EntityId), BTreeSet<EntityId>> = BTreeMap::new();
        for (publication, authors) in &self.authors_by_pub {
            let authors: Vec<&EntityId> = authors.iter().collect();
            for i in 0..authors.len() {
                for j in (i + 1)..authors.len() {
                    edges
                        .entry(ordered_pair(authors[i], authors[j]))
                        .or_default()
                        .insert(publication.clone());
                }
            }
        }
        CoAuthorNetwork { researchers, edges }
    }

    /// Render all triples as tab-separated `subject\tproperty\tobject`
    /// lines, sorted lexicographically for reproducible diffs. Entity kinds
    /// are emitted as `rdf-type` triples.
    pub fn export_triples(&self) -> String {
        let mut lines: Vec<String> = Vec::with_capacity(self.entities.len() + self.edges.len());
        for (id, kind) in &self.entities {
            lines.push(format!("{id}\trdf-type\t{kind}"));
        }
        for edge in &self.edges {
            lines.push(format!("{}\t{}\t{}", edge.subject, edge.property, edge.object));
        }
        lines.sort();
        let mut out = lines.join("\n");
        if !out.is_empty() {
            out.push('\n');
        }
        out
    }
}

/// Researcher-only projection of the knowledge graph. Edges are symmetric,
/// irreflexive, and stored once under the canonical pair ordering.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CoAuthorNetwork {
    researchers: BTreeSet<EntityId>,
    edges: BTreeMap<(EntityId, EntityId), BTreeSet<EntityId>>,
}

impl CoAuthorNetwork {
    pub fn researchers(&self) -> &BTreeSet<EntityId> {
        &self.researchers
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_edge(&self, a: &EntityId, b: &EntityId) -> bool {
        self.edges.contains_key(&ordered_pair(a, b))
    }

    pub fn shared_publications(&self, a: &EntityId, b: &EntityId) -> Option<&BTreeSet<EntityId>> {
        self.edges.get(&ordered_pair(a, b))
    }

    pub fn edges(&self) -> impl Iterator<Item = (&(EntityId, EntityId), &BTreeSet<EntityId>)> {
        self.edges.iter()
    }

    pub fn edge_pairs(&self) -> impl Iterator<Item = &(EntityId, EntityId)> {
        self.edges.keys()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(s: &str) -> EntityId {
        EntityId::new(s)
    }

    fn sample_graph() -> ScholarlyKnowledgeGraph {
        // p1 by {a, b}, p2 by {b, c}, p3 by {a, b}; all in venue v1 except p2 in v2.
        let mut g = ScholarlyKnowledgeGraph::new();
        for r in ["r:a", "r:b", "r:c"] {
            g.add_entity(id(r), EntityKind::Researcher, r).unwrap();
        }
        for p in ["p:1", "p:2", "p:3"] {
            g.add_entity(id(p), EntityKind::Publication, p).unwrap();
        }
        g.add_entity(id("v:1"), EntityKind::Venue, "Venue One").unwrap();
        g.add_entity(id("v:2"), EntityKind::Venue, "Venue Two").unwrap();
        for (r, p) in [
            ("r:a", "p:1"),
            ("r:b", "p:1"),
            ("r:b", "p:2"),
            ("r:c", "p:2"),
            ("r:a", "p:3"),
            ("r:b", "p:3"),
        ] {
            g.add_edge(&id(r), PropertyLabel::Author, EdgeObject::Entity(id(p)))
                .unwrap();
        }
        for (p, v) in [("p:1", "v:1"), ("p:2", "v:2"), ("p:3", "v:1")] {
            g.add_edge(&id(p), PropertyLabel::PublishedIn, EdgeObject::Entity(id(v)))
                .unwrap();
        }
        for (p, y) in [("p:1", 2014), ("p:2", 2015), ("p:3", 2016)] {
            g.add_edge(&id(p), PropertyLabel::Year, EdgeObject::Year(y))
                .unwrap();
        }
        g
    }

    #[test]
    fn add_entity_registers_researcher() {
        let mut g = ScholarlyKnowledgeGraph::new();
        g.add_entity(id("r:auer"), EntityKind::Researcher, "S. Auer")
            .unwrap();
        assert_eq!(g.count_of_kind(EntityKind::Researcher), 1);
        assert_eq!(g.entity_count(), 1);
    }

    #[test]
    fn add_entity_same_kind_is_idempotent() {
        let mut g = ScholarlyKnowledgeGraph::new();
        g.add_entity(id("r:auer"), EntityKind::Researcher, "S. Auer")
            .unwrap();
        g.add_entity(id("r:auer"), EntityKind::Researcher, "Soeren Auer")
            .unwrap();
        assert_eq!(g.entity_count(), 1);
        assert_eq!(g.display_name(&id("r:auer")), Some("S. Auer"));
    }

    #[test]
    fn add_entity_conflicting_kind_is_rejected() {
        let mut g = ScholarlyKnowledgeGraph::new();
        g.add_entity(id("p:1"), EntityKind::Publication, "P1").unwrap();
        let err = g.add_entity(id("p:1"), EntityKind::Venue, "P1").unwrap_err();
        assert!(matches!(err, KgError::DuplicateEntity { .. }));
    }

    #[test]
    fn empty_id_rejected() {
        let mut g = ScholarlyKnowledgeGraph::new();
        assert_eq!(
            g.add_entity(id(""), EntityKind::Venue, "x"),
            Err(KgError::EmptyEntityId)
        );
    }

    #[test]
    fn add_edge_valid_and_duplicate() {
        let mut g = ScholarlyKnowledgeGraph::new();
        g.add_entity(id("r:auer"), EntityKind::Researcher, "S. Auer")
            .unwrap();
        g.add_entity(id("p:1"), EntityKind::Publication, "P1").unwrap();
        g.add_edge(&id("r:auer"), PropertyLabel::Author, EdgeObject::Entity(id("p:1")))
            .unwrap();
        assert_eq!(g.edge_count(), 1);
        // Duplicate triple is a no-op.
        g.add_edge(&id("r:auer"), PropertyLabel::Author, EdgeObject::Entity(id("p:1")))
            .unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn add_edge_direction_check() {
        let mut g = ScholarlyKnowledgeGraph::new();
        g.add_entity(id("r:auer"), EntityKind::Researcher, "S. Auer")
            .unwrap();
        g.add_entity(id("p:1"), EntityKind::Publication, "P1").unwrap();
        let err = g
            .add_edge(&id("p:1"), PropertyLabel::Author, EdgeObject::Entity(id("r:auer")))
            .unwrap_err();
        assert!(matches!(err, KgError::KindViolation(_)));
    }

    #[test]
    fn add_edge_unknown_entity() {
        let mut g = ScholarlyKnowledgeGraph::new();
        g.add_entity(id("r:a"), EntityKind::Researcher, "a").unwrap();
        let err = g
            .add_edge(&id("r:a"), PropertyLabel::Author, EdgeObject::Entity(id("p:9")))
            .unwrap_err();
        assert_eq!(err, KgError::UnknownEntity(id("p:9")));
    }

    #[test]
    fn add_edge_literal_constraints() {
        let mut g = ScholarlyKnowledgeGraph::new();
        g.add_entity(id("r:a"), EntityKind::Researcher, "a").unwrap();
        g.add_entity(id("p:1"), EntityKind::Publication, "p").unwrap();
        assert!(matches!(
            g.add_edge(&id("r:a"), PropertyLabel::Author, EdgeObject::Year(2000)),
            Err(KgError::KindViolation(_))
        ));
        assert!(matches!(
            g.add_edge(&id("p:1"), PropertyLabel::Year, EdgeObject::Entity(id("r:a"))),
            Err(KgError::KindViolation(_))
        ));
        assert!(matches!(
            g.add_edge(&id("r:a"), PropertyLabel::Year, EdgeObject::Year(2000)),
            Err(KgError::KindViolation(_))
        ));
    }

    #[test]
    fn conflicting_year_is_rejected() {
        let mut g = ScholarlyKnowledgeGraph::new();
        g.add_entity(id("p:1"), EntityKind::Publication, "p").unwrap();
        g.add_edge(&id("p:1"), PropertyLabel::Year, EdgeObject::Year(2014))
            .unwrap();
        // Same year: idempotent.
        g.add_edge(&id("p:1"), PropertyLabel::Year, EdgeObject::Year(2014))
            .unwrap();
        assert_eq!(g.edge_count(), 1);
        assert!(matches!(
            g.add_edge(&id("p:1"), PropertyLabel::Year, EdgeObject::Year(2015)),
            Err(KgError::KindViolation(_))
        ));
        assert_eq!(g.year_of(&id("p:1")), Some(2014));
    }

    #[test]
    fn derived_properties_are_not_storable() {
        let mut g = ScholarlyKnowledgeGraph::new();
        g.add_entity(id("r:a"), EntityKind::Researcher, "a").unwrap();
        g.add_entity(id("r:b"), EntityKind::Researcher, "b").unwrap();
        assert!(matches!(
            g.add_edge(&id("r:a"), PropertyLabel::CoAuthor, EdgeObject::Entity(id("r:b"))),
            Err(KgError::KindViolation(_))
        ));
        assert!(matches!(
            g.add_edge(&id("r:a"), PropertyLabel::RdfType, EdgeObject::Entity(id("r:b"))),
            Err(KgError::KindViolation(_))
        ));
    }

    #[test]
    fn co_author_network_base_case() {
        let mut g = ScholarlyKnowledgeGraph::new();
        g.add_entity(id("r:a"), EntityKind::Researcher, "a").unwrap();
        g.add_entity(id("r:b"), EntityKind::Researcher, "b").unwrap();
        g.add_entity(id("p:1"), EntityKind::Publication, "p").unwrap();
        g.add_edge(&id("r:a"), PropertyLabel::Author, EdgeObject::Entity(id("p:1")))
            .unwrap();
        g.add_edge(&id("r:b"), PropertyLabel::Author, EdgeObject::Entity(id("p:1")))
            .unwrap();
        let can = g.derive_co_author_network();
        assert_eq!(can.edge_count(), 1);
        assert!(can.contains_edge(&id("r:a"), &id("r:b")));
        assert_eq!(
            can.shared_publications(&id("r:a"), &id("r:b")),
            Some(&BTreeSet::from([id("p:1")]))
        );
    }

    #[test]
    fn co_author_network_requires_shared_publication() {
        let mut g = ScholarlyKnowledgeGraph::new();
        g.add_entity(id("r:a"), EntityKind::Researcher, "a").unwrap();
        g.add_entity(id("r:b"), EntityKind::Researcher, "b").unwrap();
        g.add_entity(id("p:1"), EntityKind::Publication, "p1").unwrap();
        g.add_entity(id("p:2"), EntityKind::Publication, "p2").unwrap();
        g.add_edge(&id("r:a"), PropertyLabel::Author, EdgeObject::Entity(id("p:1")))
            .unwrap();
        g.add_edge(&id("r:b"), PropertyLabel::Author, EdgeObject::Entity(id("p:2")))
            .unwrap();
        let can = g.derive_co_author_network();
        assert_eq!(can.edge_count(), 0);
        assert_eq!(can.researchers().len(), 2);
    }

    #[test]
    fn co_author_network_matches_pairwise_enumeration() {
        // Oracle: enumerate author pairs per publication by hand from the
        // record list, independent of the adjacency indexes.
        let g = sample_graph();
        let can = g.derive_co_author_network();
        let records: &[(&str, &[&str])] = &[
            ("p:1", &["r:a", "r:b"]),
            ("p:2", &["r:b", "r:c"]),
            ("p:3", &["r:a", "r:b"]),
        ];
        let mut expected: BTreeMap<(EntityId, EntityId), BTreeSet<EntityId>> = BTreeMap::new();
        for (p, authors) in records {
            for i in 0..authors.len() {
                for j in (i + 1)..authors.len() {
                    expected
                        .entry(ordered_pair(&id(authors[i]), &id(authors[j])))
                        .or_default()
                        .insert(id(p));
                }
            }
        }
        let actual: BTreeMap<_, _> = can.edges().map(|(k, v)| (k.clone(), v.clone())).collect();
        assert_eq!(actual, expected);
        assert!(!can.contains_edge(&id("r:a"), &id("r:c")));
        assert_eq!(
            can.shared_publications(&id("r:a"), &id("r:b")),
            Some(&BTreeSet::from([id("p:1"), id("p:3")]))
        );
    }

    #[test]
    fn co_author_completeness_per_publication() {
        // Every publication with k >= 2 authors yields all k(k-1)/2 pairs.
        let mut g = ScholarlyKnowledgeGraph::new();
        let authors = ["r:a", "r:b", "r:c", "r:d"];
        g.add_entity(id("p:1"), EntityKind::Publication, "p").unwrap();
        for r in authors {
            g.add_entity(id(r), EntityKind::Researcher, r).unwrap();
            g.add_edge(&id(r), PropertyLabel::Author, EdgeObject::Entity(id("p:1")))
                .unwrap();
        }
        let can = g.derive_co_author_network();
        assert_eq!(can.edge_count(), authors.len() * (authors.len() - 1) / 2);
        for (pair, shared) in can.edges() {
            assert!(pair.0 < pair.1, "canonical ordering violated");
            assert!(!shared.is_empty());
        }
    }

    #[test]
    fn insertion_order_does_not_change_derived_network() {
        let g1 = sample_graph();
        // Same content, different insertion order.
        let mut g2 = ScholarlyKnowledgeGraph::new();
        g2.add_entity(id("v:2"), EntityKind::Venue, "Venue Two").unwrap();
        g2.add_entity(id("v:1"), EntityKind::Venue, "Venue One").unwrap();
        for p in ["p:3", "p:2", "p:1"] {
            g2.add_entity(id(p), EntityKind::Publication, p).unwrap();
        }
        for r in ["r:c", "r:b", "r:a"] {
            g2.add_entity(id(r), EntityKind::Researcher, r).unwrap();
        }
        for (p, y) in [("p:3", 2016), ("p:1", 2014), ("p:2", 2015)] {
            g2.add_edge(&id(p), PropertyLabel::Year, EdgeObject::Year(y)).unwrap();
        }
        for (p, v) in [("p:3", "v:1"), ("p:2", "v:2"), ("p:1", "v:1")] {
            g2.add_edge(&id(p), PropertyLabel::PublishedIn, EdgeObject::Entity(id(v)))
                .unwrap();
        }
        for (r, p) in [
            ("r:b", "p:3"),
            ("r:a", "p:3"),
            ("r:c", "p:2"),
            ("r:b", "p:2"),
            ("r:b", "p:1"),
            ("r:a", "p:1"),
        ] {
            g2.add_edge(&id(r), PropertyLabel::Author, EdgeObject::Entity(id(p)))
                .unwrap();
        }
        assert_eq!(g1, g2);
        assert_eq!(g1.derive_co_author_network(), g2.derive_co_author_network());
        assert_eq!(g1.export_triples(), g2.export_triples());
    }

    #[test]
    fn papers_of_no_papers_is_empty() {
        let mut g = ScholarlyKnowledgeGraph::new();
        g.add_entity(id("r:x"), EntityKind::Researcher, "x").unwrap();
        assert!(g.papers_of(&id("r:x"), None).unwrap().is_empty());
    }

    #[test]
    fn papers_of_filter_identity_and_restriction() {
        let g = sample_graph();
        let all_venues: BTreeSet<EntityId> = [id("v:1"), id("v:2")].into();
        let unfiltered = g.papers_of(&id("r:b"), None).unwrap();
        let all_filter = g.papers_of(&id("r:b"), Some(&all_venues)).unwrap();
        assert_eq!(unfiltered, all_filter);
        assert_eq!(unfiltered.len(), 3);
        // r:b has 3 papers, 2 in the focus venue v:1.
        let focus: BTreeSet<EntityId> = [id("v:1")].into();
        let filtered = g.papers_of(&id("r:b"), Some(&focus)).unwrap();
        assert_eq!(filtered, BTreeSet::from([id("p:1"), id("p:3")]));
    }

    #[test]
    fn papers_of_errors() {
        let g = sample_graph();
        assert!(matches!(
            g.papers_of(&id("r:zz"), None),
            Err(KgError::UnknownEntity(_))
        ));
        assert!(matches!(
            g.papers_of(&id("v:1"), None),
            Err(KgError::WrongKind { .. })
        ));
    }

    #[test]
    fn export_triples_is_sorted_and_complete() {
        let mut g = ScholarlyKnowledgeGraph::new();
        g.add_entity(id("r:a"), EntityKind::Researcher, "a").unwrap();
        g.add_entity(id("p:1"), EntityKind::Publication, "p").unwrap();
        g.add_edge(&id("r:a"), PropertyLabel::Author, EdgeObject::Entity(id("p:1")))
            .unwrap();
        g.add_edge(&id("p:1"), PropertyLabel::Year, EdgeObject::Year(2015))
            .unwrap();
        let out = g.export_triples();
        let expected = "p:1\trdf-type\tPublication\n\
                        p:1\tyear\t2015\n\
                        r:a\tauthor\tp:1\n\
                        r:a\trdf-type\tResearcher\n";
        assert_eq!(out, expected);
    }

    #[test]
    fn empty_graph_exports_empty_string_and_empty_network() {
        let g = ScholarlyKnowledgeGraph::new();
        assert_eq!(g.export_triples(), "");
        let can = g.derive_co_author_network();
        assert_eq!(can.edge_count(), 0);
        assert!(can.researchers().is_empty());
    }
}
