//! Pipeline composition: reads records and manifests, chains the library
//! stages, and writes the TSV/CSV artifacts. Identical configuration and
//! inputs produce byte-identical outputs.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::eval::{rank_eval, temporal_split, RankingReport};
use crate::ingest::{
    build_graph, parse_manifest, parse_records_str, DatasetManifest, LineDiagnostic,
    PublicationRecord,
};
use crate::kg::{EntityId, EntityKind, ScholarlyKnowledgeGraph};
use crate::metrics::{evaluate, PartitionQualityReport};
use crate::partition::{run_partitioner, Partition, PartitionMethod, PartitionerParams};
use crate::predict::{generate_patterns, Aggregator, PredictedNetwork};
use crate::relatedness::{
    compute_sc, percentile_threshold, PercentileSpec, RelatednessSet, ScMethod,
};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("bad config: {0}")]
    BadConfig(String),
    #[error("ingest failed: {0}")]
    Ingest(String),
    #[error("{stage} stage failed: {message}")]
    Stage { stage: &'static str, message: String },
}

impl PipelineError {
    pub fn stage(stage: &'static str, err: impl std::fmt::Display) -> Self {
        PipelineError::Stage {
            stage,
            message: err.to_string(),
        }
    }

    /// Process exit code: 2 bad config, 3 ingest failure, 4 pipeline failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            PipelineError::BadConfig(_) => 2,
            PipelineError::Ingest(_) => 3,
            PipelineError::Stage { .. } => 4,
        }
    }
}

/// Everything the batch runners need. Defaults reproduce the standard
/// percentile sweep (both partitioners, percentiles 85/90/95/98).
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub records_path: PathBuf,
    pub manifest_path: Option<PathBuf>,
    pub output_dir: PathBuf,
    pub methods: Vec<PartitionMethod>,
    pub percentiles: Vec<u8>,
    pub aggregator: Aggregator,
    pub min_weight: f64,
    /// Community count for the k-way partitioner.
    pub k: usize,
    pub merge_floor: Option<f64>,
    pub balance_tolerance: f64,
    pub max_refine_iters: usize,
    /// Holdout: train/test cutoff year.
    pub cutoff_year: i32,
    /// Holdout: ranking depth.
    pub holdout_k: usize,
    /// Holdout: percentile and partitioner for the single evaluated cell.
    pub holdout_percentile: u8,
    pub holdout_method: PartitionMethod,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            records_path: PathBuf::new(),
            manifest_path: None,
            output_dir: PathBuf::from("out"),
            methods: vec![PartitionMethod::Semantic, PartitionMethod::Kway],
            percentiles: vec![85, 90, 95, 98],
            aggregator: Aggregator::Average,
            min_weight: 0.0,
            k: 4,
            merge_floor: None,
            balance_tolerance: 0.1,
            max_refine_iters: 20,
            cutoff_year: 2016,
            holdout_k: 10,
            holdout_percentile: 95,
            holdout_method: PartitionMethod::Semantic,
        }
    }
}

impl RunConfig {
    fn validate(&self) -> Result<(), PipelineError> {
        if self.percentiles.is_empty() {
            return Err(PipelineError::BadConfig("no percentiles requested".to_string()));
        }
        for &p in &self.percentiles {
            if !(1..=99).contains(&p) {
                return Err(PipelineError::BadConfig(format!("percentile {p} outside [1, 99]")));
            }
        }
        if self.methods.is_empty() {
            return Err(PipelineError::BadConfig("no partition methods requested".to_string()));
        }
        if !(1..=99).contains(&self.holdout_percentile) {
            return Err(PipelineError::BadConfig(format!(
                "percentile {} outside [1, 99]",
                self.holdout_percentile
            )));
        }
        Ok(())
    }

    fn partitioner_params(&self, method: PartitionMethod) -> PartitionerParams {
        PartitionerParams {
            method,
            k: Some(self.k),
            merge_floor: self.merge_floor,
            seed: 0,
            balance_tolerance: self.balance_tolerance,
            max_refine_iters: self.max_refine_iters,
        }
    }
}

/// Read and parse a records file.
pub fn load_records(
    path: &Path,
) -> Result<(Vec<PublicationRecord>, Vec<LineDiagnostic>), PipelineError> {
    let bytes = fs::read(path)
        .map_err(|e| PipelineError::BadConfig(format!("cannot read records {}: {e}", path.display())))?;
    let text = std::str::from_utf8(&bytes)
        .map_err(|_| PipelineError::Ingest(format!("{}: input is not valid UTF-8", path.display())))?;
    Ok(parse_records_str(text))
}

/// Read and parse a manifest file.
pub fn load_manifest(path: &Path) -> Result<DatasetManifest, PipelineError> {
    let text = fs::read_to_string(path).map_err(|e| {
        PipelineError::BadConfig(format!("cannot read manifest {}: {e}", path.display()))
    })?;
    parse_manifest(&text).map_err(|e| PipelineError::Ingest(e.to_string()))
}

/// Records plus diagnostics, failing when every line was bad.
pub fn load_valid_records(path: &Path) -> Result<Vec<PublicationRecord>, PipelineError> {
    let (records, diagnostics) = load_records(path)?;
    for d in &diagnostics {
        eprintln!("{}:{}: skipped: {}", path.display(), d.line, d.message);
    }
    if records.is_empty() {
        return Err(PipelineError::Ingest(format!(
            "{}: no valid records ({} bad lines)",
            path.display(),
            diagnostics.len()
        )));
    }
    Ok(records)
}

pub fn build_graph_stage(
    records: &[PublicationRecord],
) -> Result<ScholarlyKnowledgeGraph, PipelineError> {
    build_graph(records).map_err(|e| PipelineError::Ingest(e.to_string()))
}

// ---------------------------------------------------------------------------
// File formats
// ---------------------------------------------------------------------------

fn write_atomic(path: &Path, contents: &str) -> Result<(), PipelineError> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)
            .map_err(|e| PipelineError::stage("write", format!("{}: {e}", parent.display())))?;
    }
    fs::write(path, contents)
        .map_err(|e| PipelineError::stage("write", format!("{}: {e}", path.display())))
}

/// `left<TAB>right<TAB>score` lines in canonical pair order.
pub fn sc_to_tsv(sc: &RelatednessSet) -> String {
    let mut out = String::new();
    for (a, b, s) in sc.triples() {
        out.push_str(&format!("{a}\t{b}\t{s}\n"));
    }
    out
}

pub fn write_sc_tsv(sc: &RelatednessSet, path: &Path) -> Result<(), PipelineError> {
    write_atomic(path, &sc_to_tsv(sc))
}

/// Parse a scored-pair TSV (external scores or a previously written
/// `sc.tsv`). The universe is the set of mentioned ids.
pub fn read_sc_tsv(path: &Path, kind: EntityKind) -> Result<RelatednessSet, PipelineError> {
    let text = fs::read_to_string(path)
        .map_err(|e| PipelineError::BadConfig(format!("cannot read scores {}: {e}", path.display())))?;
    let mut sc = RelatednessSet::new(kind, BTreeSet::new());
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(PipelineError::stage(
                "similarity",
                format!("{}:{}: expected left<TAB>right<TAB>score", path.display(), idx + 1),
            ));
        }
        let score: f64 = fields[2].parse().map_err(|e| {
            PipelineError::stage("similarity", format!("{}:{}: bad score: {e}", path.display(), idx + 1))
        })?;
        sc.insert(EntityId::new(fields[0]), EntityId::new(fields[1]), score)
            .map_err(|e| {
                PipelineError::stage("similarity", format!("{}:{}: {e}", path.display(), idx + 1))
            })?;
    }
    Ok(sc)
}

pub fn read_external_scores(
    path: &Path,
) -> Result<Vec<(EntityId, EntityId, f64)>, PipelineError> {
    let text = fs::read_to_string(path)
        .map_err(|e| PipelineError::BadConfig(format!("cannot read scores {}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(PipelineError::stage(
                "similarity",
                format!("{}:{}: expected left<TAB>right<TAB>score", path.display(), idx + 1),
            ));
        }
        let score: f64 = fields[2].parse().map_err(|e| {
            PipelineError::stage("similarity", format!("{}:{}: bad score: {e}", path.display(), idx + 1))
        })?;
        out.push((EntityId::new(fields[0]), EntityId::new(fields[1]), score));
    }
    Ok(out)
}

/// `community_id<TAB>entity_id` lines sorted by community, then entity.
pub fn partition_to_tsv(partition: &Partition) -> String {
    let mut out = String::new();
    for community in partition.communities() {
        for member in &community.members {
            out.push_str(&format!("{}\t{}\n", community.id, member));
        }
    }
    out
}

pub fn write_partition_tsv(partition: &Partition, path: &Path) -> Result<(), PipelineError> {
    write_atomic(path, &partition_to_tsv(partition))
}

pub fn read_partition_tsv(path: &Path) -> Result<Partition, PipelineError> {
    let text = fs::read_to_string(path).map_err(|e| {
        PipelineError::BadConfig(format!("cannot read partition {}: {e}", path.display()))
    })?;
    let mut groups: std::collections::BTreeMap<usize, BTreeSet<EntityId>> = Default::default();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 2 {
            return Err(PipelineError::stage(
                "partition",
                format!("{}:{}: expected community_id<TAB>entity_id", path.display(), idx + 1),
            ));
        }
        let community: usize = fields[0].parse().map_err(|e| {
            PipelineError::stage("partition", format!("{}:{}: bad community id: {e}", path.display(), idx + 1))
        })?;
        if !groups.entry(community).or_default().insert(EntityId::new(fields[1])) {
            return Err(PipelineError::stage(
                "partition",
                format!("{}:{}: duplicate entity", path.display(), idx + 1),
            ));
        }
    }
    Ok(Partition::from_groups(groups.into_values().collect()))
}

/// `left<TAB>right<TAB>weight<TAB>community_id` in rank order.
pub fn predictions_to_tsv(network: &PredictedNetwork) -> String {
    let mut out = String::new();
    for r in network.relations() {
        out.push_str(&format!("{}\t{}\t{}\t{}\n", r.left, r.right, r.weight, r.community_id));
    }
    out
}

pub fn write_predictions_tsv(network: &PredictedNetwork, path: &Path) -> Result<(), PipelineError> {
    write_atomic(path, &predictions_to_tsv(network))
}

pub fn report_csv(reports: &[PartitionQualityReport]) -> String {
    let mut out = String::from(PartitionQualityReport::csv_header());
    out.push('\n');
    for report in reports {
        out.push_str(&report.csv_row());
        out.push('\n');
    }
    out
}

// ---------------------------------------------------------------------------
// Runners
// ---------------------------------------------------------------------------

/// Outcome of one sweep invocation.
#[derive(Debug)]
pub struct SweepSummary {
    pub reports: Vec<PartitionQualityReport>,
    pub report_path: PathBuf,
}

fn focus_series(manifest: &Option<DatasetManifest>) -> Result<BTreeSet<EntityId>, PipelineError> {
    let manifest = manifest.as_ref().ok_or_else(|| {
        PipelineError::BadConfig("this command computes researcher similarity and needs --manifest".into())
    })?;
    let focus = manifest.focus_venues();
    if focus.is_empty() {
        return Err(PipelineError::Ingest(
            "manifest declares an empty focus_venue_series".to_string(),
        ));
    }
    Ok(focus)
}

/// Run every (method, percentile) cell: threshold the researcher similarity
/// set, partition, score the partition, and emit predictions. Each cell
/// writes `sc.tsv`, `partition.tsv`, and `predictions.tsv` under
/// `<out>/<method>_p<P>/`; all quality rows land in `<out>/report.csv`.
pub fn run_sweep(config: &RunConfig) -> Result<SweepSummary, PipelineError> {
    config.validate()?;
    let records = load_valid_records(&config.records_path)?;
    let manifest = config.manifest_path.as_deref().map(load_manifest).transpose()?;
    let graph = build_graph_stage(&records)?;
    let focus = focus_series(&manifest)?;
    let sc_full = compute_sc(&graph, EntityKind::Researcher, &ScMethod::SimR { focus_series: focus })
        .map_err(|e| PipelineError::stage("similarity", e))?;
    let observed = graph.derive_co_author_network();

    let mut reports = Vec::new();
    for &method in &config.methods {
        for &percentile in &config.percentiles {
            let spec = PercentileSpec::new(percentile)
                .map_err(|e| PipelineError::BadConfig(e.to_string()))?;
            let sc_cell = percentile_threshold(&sc_full, spec)
                .map_err(|e| PipelineError::stage("similarity", e))?;
            let partition = run_partitioner(&sc_cell, &config.partitioner_params(method))
                .map_err(|e| PipelineError::stage("partition", e))?;
            let report = evaluate(&sc_cell, &partition, &method.to_string(), percentile)
                .map_err(|e| PipelineError::stage("evaluate", e))?;
            let predictions =
                generate_patterns(&partition, &sc_cell, &observed, config.aggregator, config.min_weight)
                    .map_err(|e| PipelineError::stage("predict", e))?;

            let cell_dir = config.output_dir.join(format!("{method}_p{percentile}"));
            write_sc_tsv(&sc_cell, &cell_dir.join("sc.tsv"))?;
            write_partition_tsv(&partition, &cell_dir.join("partition.tsv"))?;
            write_predictions_tsv(&predictions, &cell_dir.join("predictions.tsv"))?;
            reports.push(report);
        }
    }

    let report_path = config.output_dir.join("report.csv");
    write_atomic(&report_path, &report_csv(&reports))?;
    Ok(SweepSummary { reports, report_path })
}

/// Temporal-holdout evaluation of the full pipeline: train on records up to
/// the cutoff year, predict, and rank the predictions against the co-author
/// pairs that first appear afterwards.
pub fn run_holdout(config: &RunConfig) -> Result<RankingReport, PipelineError> {
    config.validate()?;
    let records = load_valid_records(&config.records_path)?;
    let manifest = config.manifest_path.as_deref().map(load_manifest).transpose()?;
    let focus = focus_series(&manifest)?;
    let split = temporal_split(&records, config.cutoff_year)
        .map_err(|e| PipelineError::stage("holdout", e))?;
    let sc_full = compute_sc(
        &split.train_graph,
        EntityKind::Researcher,
        &ScMethod::SimR { focus_series: focus },
    )
    .map_err(|e| PipelineError::stage("similarity", e))?;
    let spec = PercentileSpec::new(config.holdout_percentile)
        .map_err(|e| PipelineError::BadConfig(e.to_string()))?;
    let sc_cell =
        percentile_threshold(&sc_full, spec).map_err(|e| PipelineError::stage("similarity", e))?;
    let partition = run_partitioner(&sc_cell, &config.partitioner_params(config.holdout_method))
        .map_err(|e| PipelineError::stage("partition", e))?;
    let observed = split.train_graph.derive_co_author_network();
    let predictions =
        generate_patterns(&partition, &sc_cell, &observed, config.aggregator, config.min_weight)
            .map_err(|e| PipelineError::stage("predict", e))?;
    rank_eval(&predictions, &split, config.holdout_k)
        .map_err(|e| PipelineError::stage("holdout", e))
}
