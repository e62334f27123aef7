//! Python bindings for the scholnet toolkit.
//!
//! Exposes the knowledge graph, relatedness scoring, partitioning, quality
//! metrics, prediction, and the holdout harness as a `scholnet_py`
//! extension module. See `python/smoke_test.py` for an end-to-end tour.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::str::FromStr;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use scholnet::eval;
use scholnet::ingest;
use scholnet::kg::{EdgeObject, EntityId, EntityKind, PropertyLabel, ScholarlyKnowledgeGraph};
use scholnet::metrics;
use scholnet::partition::{self, PartitionMethod, PartitionerParams};
use scholnet::pipeline::{self, RunConfig};
use scholnet::predict;
use scholnet::relatedness::{self, PercentileSpec, ScMethod};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_kind(kind: &str) -> PyResult<EntityKind> {
    EntityKind::from_str(kind).map_err(err)
}

/// Typed scholarly knowledge graph of researchers, publications, and venues.
#[pyclass]
struct KnowledgeGraph {
    inner: ScholarlyKnowledgeGraph,
}

#[pymethods]
impl KnowledgeGraph {
    #[new]
    fn new() -> Self {
        KnowledgeGraph { inner: ScholarlyKnowledgeGraph::new() }
    }

    /// Build a graph from a newline-delimited records file.
    #[staticmethod]
    fn from_records_file(path: PathBuf) -> PyResult<Self> {
        let records = pipeline::load_valid_records(&path).map_err(err)?;
        let inner = ingest::build_graph(&records).map_err(err)?;
        Ok(KnowledgeGraph { inner })
    }

    /// Build a graph from records text (one JSON object per line).
    #[staticmethod]
    fn from_records_text(text: &str) -> PyResult<Self> {
        let (records, diagnostics) = ingest::parse_records_str(text);
        if records.is_empty() {
            return Err(err(format!("no valid records ({} bad lines)", diagnostics.len())));
        }
        let inner = ingest::build_graph(&records).map_err(err)?;
        Ok(KnowledgeGraph { inner })
    }

    /// Register an entity; kind is "researcher", "publication", or "venue".
    fn add_entity(&mut self, id: &str, kind: &str, name: &str) -> PyResult<()> {
        self.inner
            .add_entity(EntityId::new(id), parse_kind(kind)?, name)
            .map_err(err)
    }

    /// Add an `author` or `published-in` edge between two entities.
    fn add_edge(&mut self, subject: &str, property: &str, object: &str) -> PyResult<()> {
        let property = PropertyLabel::from_str(property).map_err(err)?;
        self.inner
            .add_edge(
                &EntityId::new(subject),
                property,
                EdgeObject::Entity(EntityId::new(object)),
            )
            .map_err(err)
    }

    /// Attach a publication year literal.
    fn add_year(&mut self, publication: &str, year: i32) -> PyResult<()> {
        self.inner
            .add_edge(&EntityId::new(publication), PropertyLabel::Year, EdgeObject::Year(year))
            .map_err(err)
    }

    fn entity_count(&self) -> usize {
        self.inner.entity_count()
    }

    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn count_of_kind(&self, kind: &str) -> PyResult<usize> {
        Ok(self.inner.count_of_kind(parse_kind(kind)?))
    }

    fn entities_of_kind(&self, kind: &str) -> PyResult<Vec<String>> {
        Ok(self
            .inner
            .entities_of_kind(parse_kind(kind)?)
            .map(|e| e.to_string())
            .collect())
    }

    fn display_name(&self, id: &str) -> Option<String> {
        self.inner.display_name(&EntityId::new(id)).map(str::to_string)
    }

    /// Publications of a researcher, optionally restricted to given venues.
    #[pyo3(signature = (researcher, venues=None))]
    fn papers_of(&self, researcher: &str, venues: Option<Vec<String>>) -> PyResult<Vec<String>> {
        let filter: Option<BTreeSet<EntityId>> =
            venues.map(|vs| vs.into_iter().map(EntityId::new).collect());
        let papers = self
            .inner
            .papers_of(&EntityId::new(researcher), filter.as_ref())
            .map_err(err)?;
        Ok(papers.into_iter().map(|p| p.to_string()).collect())
    }

    /// Observed co-author pairs with their shared publication ids.
    fn co_author_edges(&self) -> Vec<(String, String, Vec<String>)> {
        self.inner
            .derive_co_author_network()
            .edges()
            .map(|((a, b), shared)| {
                (
                    a.to_string(),
                    b.to_string(),
                    shared.iter().map(|p| p.to_string()).collect(),
                )
            })
            .collect()
    }

    /// The graph as sorted tab-separated triples.
    fn export_triples(&self) -> String {
        self.inner.export_triples()
    }

    fn __repr__(&self) -> String {
        format!(
            "KnowledgeGraph(researchers={}, publications={}, venues={}, edges={})",
            self.inner.count_of_kind(EntityKind::Researcher),
            self.inner.count_of_kind(EntityKind::Publication),
            self.inner.count_of_kind(EntityKind::Venue),
            self.inner.edge_count(),
        )
    }
}

/// Scored same-kind entity pairs.
#[pyclass]
struct RelatednessSet {
    inner: relatedness::RelatednessSet,
}

#[pymethods]
impl RelatednessSet {
    fn triples(&self) -> Vec<(String, String, f64)> {
        self.inner
            .triples()
            .map(|(a, b, s)| (a.to_string(), b.to_string(), s))
            .collect()
    }

    fn score(&self, a: &str, b: &str) -> f64 {
        self.inner.score(&EntityId::new(a), &EntityId::new(b))
    }

    fn universe(&self) -> Vec<String> {
        self.inner.universe().iter().map(|e| e.to_string()).collect()
    }

    /// Percentile cutoff recorded by thresholding, if any.
    fn threshold(&self) -> Option<f64> {
        self.inner.threshold()
    }

    fn kind(&self) -> String {
        self.inner.kind().to_string()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "RelatednessSet(kind={}, pairs={}, universe={})",
            self.inner.kind(),
            self.inner.len(),
            self.inner.universe().len(),
        )
    }
}

/// Disjoint communities covering an entity universe.
#[pyclass]
struct Partition {
    inner: partition::Partition,
}

#[pymethods]
impl Partition {
    /// Member ids per community, ordered by community id.
    fn communities(&self) -> Vec<Vec<String>> {
        self.inner
            .communities()
            .iter()
            .map(|c| c.members.iter().map(|m| m.to_string()).collect())
            .collect()
    }

    fn community_of(&self, id: &str) -> Option<usize> {
        self.inner.community_of(&EntityId::new(id))
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Partition(communities={}, universe={})",
            self.inner.len(),
            self.inner.universe().len(),
        )
    }
}

/// Score every same-kind pair. Methods: "simr" (needs focus_venues),
/// "simc", "path" (max_len 2 or 4), "external" (list of (left, right,
/// score) tuples).
#[pyfunction]
#[pyo3(signature = (graph, method, kind="researcher", focus_venues=None, max_len=2, external=None))]
fn compute_sc(
    graph: &KnowledgeGraph,
    method: &str,
    kind: &str,
    focus_venues: Option<Vec<String>>,
    max_len: usize,
    external: Option<Vec<(String, String, f64)>>,
) -> PyResult<RelatednessSet> {
    let kind = match method {
        "simr" => EntityKind::Researcher,
        "simc" => EntityKind::Venue,
        _ => parse_kind(kind)?,
    };
    let method = match method {
        "simr" => {
            let focus = focus_venues
                .ok_or_else(|| err("simr requires focus_venues"))?
                .into_iter()
                .map(EntityId::new)
                .collect();
            ScMethod::SimR { focus_series: focus }
        }
        "simc" => ScMethod::SimC,
        "path" => ScMethod::Path { max_len },
        "external" => {
            let scores = external
                .ok_or_else(|| err("external requires a list of (left, right, score)"))?
                .into_iter()
                .map(|(a, b, s)| (EntityId::new(a), EntityId::new(b), s))
                .collect();
            ScMethod::External { scores }
        }
        other => return Err(err(format!("unknown similarity method: {other}"))),
    };
    let inner = relatedness::compute_sc(&graph.inner, kind, &method).map_err(err)?;
    Ok(RelatednessSet { inner })
}

/// Keep the pairs at or above the nearest-rank percentile cutoff.
#[pyfunction]
fn percentile_threshold(sc: &RelatednessSet, percentile: u8) -> PyResult<RelatednessSet> {
    let spec = PercentileSpec::new(percentile).map_err(err)?;
    let inner = relatedness::percentile_threshold(&sc.inner, spec).map_err(err)?;
    Ok(RelatednessSet { inner })
}

/// Greedy score-driven agglomeration. The merge floor defaults to the
/// percentile cutoff recorded on the input.
#[pyfunction]
#[pyo3(signature = (sc, merge_floor=None))]
fn partition_semantic(sc: &RelatednessSet, merge_floor: Option<f64>) -> PyResult<Partition> {
    let params = PartitionerParams {
        method: PartitionMethod::Semantic,
        merge_floor,
        ..PartitionerParams::default()
    };
    let inner = partition::partition_semantic(&sc.inner, &params).map_err(err)?;
    Ok(Partition { inner })
}

/// Balanced k-way min-cut partitioning.
#[pyfunction]
#[pyo3(signature = (sc, k, balance_tolerance=0.1, max_refine_iters=20))]
fn partition_kway(
    sc: &RelatednessSet,
    k: usize,
    balance_tolerance: f64,
    max_refine_iters: usize,
) -> PyResult<Partition> {
    let params = PartitionerParams {
        method: PartitionMethod::Kway,
        k: Some(k),
        balance_tolerance,
        max_refine_iters,
        ..PartitionerParams::default()
    };
    let inner = partition::partition_kway(&sc.inner, &params).map_err(err)?;
    Ok(Partition { inner })
}

/// All five partition-quality measures as a dict.
#[pyfunction]
#[pyo3(signature = (sc, partition, method="unknown", percentile=0))]
fn evaluate<'py>(
    py: Python<'py>,
    sc: &RelatednessSet,
    partition: &Partition,
    method: &str,
    percentile: u8,
) -> PyResult<Bound<'py, PyDict>> {
    let report = metrics::evaluate(&sc.inner, &partition.inner, method, percentile).map_err(err)?;
    let dict = PyDict::new(py);
    dict.set_item("method", &report.method)?;
    dict.set_item("percentile", report.percentile)?;
    dict.set_item("inv_conductance", report.inv_conductance)?;
    dict.set_item("coverage", report.coverage)?;
    dict.set_item("scaled_modularity", report.scaled_modularity)?;
    dict.set_item("performance", report.performance)?;
    dict.set_item("inv_norm_total_cut", report.inv_norm_total_cut)?;
    Ok(dict)
}

/// Predicted co-author relations as (left, right, weight, community_id)
/// tuples sorted by descending weight.
#[pyfunction]
#[pyo3(signature = (graph, partition, sc, aggregator="average", min_weight=0.0))]
fn predict_relations(
    graph: &KnowledgeGraph,
    partition: &Partition,
    sc: &RelatednessSet,
    aggregator: &str,
    min_weight: f64,
) -> PyResult<Vec<(String, String, f64, usize)>> {
    let aggregator = predict::Aggregator::from_str(aggregator).map_err(err)?;
    let observed = graph.inner.derive_co_author_network();
    let network =
        predict::generate_patterns(&partition.inner, &sc.inner, &observed, aggregator, min_weight)
            .map_err(err)?;
    Ok(network
        .relations()
        .iter()
        .map(|r| (r.left.to_string(), r.right.to_string(), r.weight, r.community_id))
        .collect())
}

/// Full temporal-holdout run over a records file; returns the ranking
/// report as a dict.
#[pyfunction]
#[pyo3(signature = (records_path, manifest_path, cutoff=2016, k=10, percentile=95, method="semantic", aggregator="average"))]
#[allow(clippy::too_many_arguments)]
fn run_holdout<'py>(
    py: Python<'py>,
    records_path: PathBuf,
    manifest_path: PathBuf,
    cutoff: i32,
    k: usize,
    percentile: u8,
    method: &str,
    aggregator: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let config = RunConfig {
        records_path,
        manifest_path: Some(manifest_path),
        cutoff_year: cutoff,
        holdout_k: k,
        holdout_percentile: percentile,
        holdout_method: PartitionMethod::from_str(method).map_err(err)?,
        aggregator: predict::Aggregator::from_str(aggregator).map_err(err)?,
        ..RunConfig::default()
    };
    let ranking = pipeline::run_holdout(&config).map_err(err)?;
    let dict = PyDict::new(py);
    dict.set_item("k", ranking.k)?;
    dict.set_item("precision_at_k", ranking.precision_at_k)?;
    dict.set_item("recall_at_k", ranking.recall_at_k)?;
    dict.set_item("random_baseline", ranking.random_baseline)?;
    Ok(dict)
}

/// Seeded planted-community generator; returns (relatedness, ground truth).
#[pyfunction]
#[pyo3(signature = (n_entities, n_communities, intra=(0.7, 0.9), inter=(0.0, 0.2), seed=0))]
fn generate_planted(
    n_entities: usize,
    n_communities: usize,
    intra: (f64, f64),
    inter: (f64, f64),
    seed: u64,
) -> PyResult<(RelatednessSet, Partition)> {
    let spec = eval::PlantedSpec {
        n_entities,
        n_communities,
        intra_score_range: intra,
        inter_score_range: inter,
        seed,
    };
    let (sc, truth) = eval::generate_planted(&spec).map_err(err)?;
    Ok((RelatednessSet { inner: sc }, Partition { inner: truth }))
}

/// Adjusted Rand index between two partitions of the same universe.
#[pyfunction]
fn adjusted_rand(found: &Partition, truth: &Partition) -> PyResult<f64> {
    eval::adjusted_rand(&found.inner, &truth.inner).map_err(err)
}

#[pymodule]
fn scholnet_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<KnowledgeGraph>()?;
    m.add_class::<RelatednessSet>()?;
    m.add_class::<Partition>()?;
    m.add_function(wrap_pyfunction!(compute_sc, m)?)?;
    m.add_function(wrap_pyfunction!(percentile_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(partition_semantic, m)?)?;
    m.add_function(wrap_pyfunction!(partition_kway, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(predict_relations, m)?)?;
    m.add_function(wrap_pyfunction!(run_holdout, m)?)?;
    m.add_function(wrap_pyfunction!(generate_planted, m)?)?;
    m.add_function(wrap_pyfunction!(adjusted_rand, m)?)?;
    Ok(())
}
