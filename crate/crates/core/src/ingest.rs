//! Ingestion of line-delimited publication records and mapping onto the
//! knowledge graph.
//!
//! Input is UTF-8 text with one JSON object per line carrying the keys
//! `paper_id, title, authors (list of {id, name}), venue_id, venue_name,
//! year`. Bad lines become diagnostics instead of aborting the parse.

use std::collections::BTreeSet;
use std::io::Read;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kg::{EdgeObject, EntityId, EntityKind, KgError, PropertyLabel, ScholarlyKnowledgeGraph};

pub const MIN_YEAR: i32 = 1900;
pub const MAX_YEAR: i32 = 2100;

/// One author slot of a record: dataset author id plus display name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuthorRef {
    pub id: String,
    pub name: String,
}

/// A single publication record as it appears in the input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PublicationRecord {
    pub paper_id: String,
    pub title: String,
    pub authors: Vec<AuthorRef>,
    pub venue_id: String,
    pub venue_name: String,
    pub year: i32,
}

impl PublicationRecord {
    fn validate(&self) -> Result<(), String> {
        if self.paper_id.is_empty() {
            return Err("paper_id must be non-empty".to_string());
        }
        if self.authors.is_empty() {
            return Err("authors must be non-empty".to_string());
        }
        if self.authors.iter().any(|a| a.id.is_empty()) {
            return Err("author ids must be non-empty".to_string());
        }
        if self.venue_id.is_empty() {
            return Err("venue_id must be non-empty".to_string());
        }
        if self.year < MIN_YEAR || self.year > MAX_YEAR {
            return Err(format!(
                "year {} outside [{MIN_YEAR}, {MAX_YEAR}]",
                self.year
            ));
        }
        Ok(())
    }
}

/// Dataset-level declarations. The focus venue series (e.g. all yearly
/// editions of one conference) is declared here, never inferred.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub record_count: u64,
    pub focus_venue_series: BTreeSet<String>,
    #[serde(default)]
    pub source_description: String,
}

impl DatasetManifest {
    pub fn focus_venues(&self) -> BTreeSet<EntityId> {
        self.focus_venue_series
            .iter()
            .map(|v| EntityId::new(v.clone()))
            .collect()
    }
}

/// Per-line parse failure: 1-based line number plus reason.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineDiagnostic {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("input is not valid UTF-8")]
    FatalEncoding,
    #[error("failed to read input: {0}")]
    Io(#[from] std::io::Error),
    #[error("paper {paper_id} appears twice with different field values")]
    ConflictingRecord { paper_id: String },
    #[error("invalid manifest: {0}")]
    InvalidManifest(String),
    #[error(transparent)]
    Graph(#[from] KgError),
}

/// Parse newline-delimited records from a byte stream. Invalid lines are
/// reported as diagnostics and skipped; only non-UTF-8 input is fatal.
pub fn parse_records<R: Read>(
    mut input: R,
) -> Result<(Vec<PublicationRecord>, Vec<LineDiagnostic>), IngestError> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    let text = std::str::from_utf8(&bytes).map_err(|_| IngestError::FatalEncoding)?;
    Ok(parse_records_str(text))
}

/// Parse records from an in-memory string. Blank lines are skipped.
pub fn parse_records_str(text: &str) -> (Vec<PublicationRecord>, Vec<LineDiagnostic>) {
    let mut records = Vec::new();
    let mut diagnostics = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<PublicationRecord>(line) {
            Ok(record) => match record.validate() {
                Ok(()) => records.push(record),
                Err(reason) => diagnostics.push(LineDiagnostic {
                    line: line_no,
                    message: reason,
                }),
            },
            Err(err) => diagnostics.push(LineDiagnostic {
                line: line_no,
                message: err.to_string(),
            }),
        }
    }
    (records, diagnostics)
}

/// Serialize records back to the newline-delimited input format.
pub fn serialize_records(records: &[PublicationRecord]) -> String {
    let mut out = String::new();
    for record in records {
        out.push_str(&serde_json::to_string(record).expect("record serialization cannot fail"));
        out.push('\n');
    }
    out
}

/// Parse a manifest from its JSON representation.
pub fn parse_manifest(text: &str) -> Result<DatasetManifest, IngestError> {
    serde_json::from_str(text).map_err(|e| IngestError::InvalidManifest(e.to_string()))
}

/// Map validated records onto a knowledge graph. Per record: one
/// Publication, one Venue (deduplicated by id), one Researcher per distinct
/// author id, plus `author`, `published-in`, and `year` edges. Exact
/// duplicate records collapse; a paper id appearing with different field
/// values is a conflict. The mapping is independent of record order.
pub fn build_graph(records: &[PublicationRecord]) -> Result<ScholarlyKnowledgeGraph, IngestError> {
    let mut sorted: Vec<&PublicationRecord> = records.iter().collect();
    sorted.sort_by(|a, b| a.paper_id.cmp(&b.paper_id));
    for window in sorted.windows(2) {
        if window[0].paper_id == window[1].paper_id && window[0] != window[1] {
            return Err(IngestError::ConflictingRecord {
                paper_id: window[0].paper_id.clone(),
            });
        }
    }
    sorted.dedup();

    let mut graph = ScholarlyKnowledgeGraph::new();
    for record in sorted {
        let paper = EntityId::new(record.paper_id.clone());
        let venue = EntityId::new(record.venue_id.clone());
        graph.add_entity(paper.clone(), EntityKind::Publication, &record.title)?;
        graph.add_entity(venue.clone(), EntityKind::Venue, &record.venue_name)?;
        // Duplicate author listings on one paper deduplicate silently.
        let mut seen = BTreeSet::new();
        for author in &record.authors {
            let researcher = EntityId::new(author.id.clone());
            if !seen.insert(researcher.clone()) {
                continue;
            }
            graph.add_entity(researcher.clone(), EntityKind::Researcher, &author.name)?;
            graph.add_edge(
                &researcher,
                PropertyLabel::Author,
                EdgeObject::Entity(paper.clone()),
            )?;
        }
        graph.add_edge(
            &paper,
            PropertyLabel::PublishedIn,
            EdgeObject::Entity(venue.clone()),
        )?;
        graph.add_edge(&paper, PropertyLabel::Year, EdgeObject::Year(record.year))?;
    }
    Ok(graph)
}
