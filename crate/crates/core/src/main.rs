//! Command-line front end. Subcommands mirror the pipeline stages; `sweep`
//! runs the whole percentile experiment in one shot.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use scholnet::eval::RankingReport;
use scholnet::ingest::DatasetManifest;
use scholnet::kg::{EntityKind, ScholarlyKnowledgeGraph};
use scholnet::metrics::evaluate;
use scholnet::partition::{run_partitioner, PartitionMethod, PartitionerParams};
use scholnet::pipeline::{
    self, build_graph_stage, load_manifest, load_valid_records, PipelineError, RunConfig,
};
use scholnet::predict::{generate_patterns, Aggregator};
use scholnet::relatedness::{compute_sc, percentile_threshold, PercentileSpec, ScMethod};

#[derive(Parser)]
#[command(
    name = "scholnet",
    version,
    about = "Scholarly knowledge graph toolkit: ingest publication records, score \
             relatedness, detect communities, and predict co-authorships"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct CommonInputs {
    /// Newline-delimited publication records (JSON per line)
    #[arg(long)]
    records: PathBuf,
    /// Dataset manifest (JSON: record_count, focus_venue_series, ...)
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse records, build the knowledge graph, and report entity counts
    Ingest {
        #[command(flatten)]
        inputs: CommonInputs,
        /// Write the graph as sorted tab-separated triples
        #[arg(long)]
        export_triples: Option<PathBuf>,
    },
    /// Score same-kind entity pairs and write them as a TSV
    Similarity {
        #[command(flatten)]
        inputs: CommonInputs,
        /// simr | simc | path | external
        #[arg(long)]
        method: String,
        /// Optional nearest-rank percentile threshold in [1, 99]
        #[arg(long)]
        percentile: Option<u8>,
        /// Scored-pair file for --method external (left<TAB>right<TAB>score)
        #[arg(long)]
        external_scores: Option<PathBuf>,
        /// Path length bound for --method path (2 or 4)
        #[arg(long, default_value_t = 2)]
        max_len: usize,
        /// Entity kind for path/external scoring
        #[arg(long, default_value = "researcher")]
        kind: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Group entities into communities from a scored-pair TSV
    Partition {
        /// Scored-pair TSV (as written by `similarity`)
        #[arg(long = "in")]
        input: PathBuf,
        /// semantic | kway
        #[arg(long)]
        method: String,
        /// Community count (kway)
        #[arg(long)]
        k: Option<usize>,
        /// Merge floor in [0, 1] (semantic)
        #[arg(long)]
        merge_floor: Option<f64>,
        #[arg(long, default_value_t = 0.1)]
        balance_tolerance: f64,
        #[arg(long, default_value_t = 20)]
        max_refine_iters: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score a partition with the five quality measures
    Evaluate {
        /// Scored-pair TSV the partition was built from
        #[arg(long)]
        sc: PathBuf,
        /// Partition TSV (community_id<TAB>entity_id)
        #[arg(long)]
        partition: PathBuf,
        /// Label recorded in the report's method column
        #[arg(long, default_value = "unknown")]
        method_label: String,
        /// Label recorded in the report's percentile column
        #[arg(long, default_value_t = 0)]
        percentile: u8,
        /// Append the CSV row here (header added when creating); stdout if absent
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit predicted co-author relations from a partition
    Predict {
        #[command(flatten)]
        inputs: CommonInputs,
        #[arg(long)]
        sc: PathBuf,
        #[arg(long)]
        partition: PathBuf,
        /// avg | min | product
        #[arg(long, default_value = "avg")]
        aggregator: String,
        #[arg(long, default_value_t = 0.0)]
        min_weight: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Temporal-holdout evaluation of the full pipeline
    Holdout {
        #[command(flatten)]
        inputs: CommonInputs,
        /// Optional JSON config file; flags win on conflict
        #[arg(long)]
        config: Option<PathBuf>,
        /// Train/test cutoff year (inclusive on the train side)
        #[arg(long)]
        cutoff: Option<i32>,
        /// Ranking depth
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        percentile: Option<u8>,
        /// semantic | kway
        #[arg(long)]
        method: Option<String>,
        #[arg(long)]
        aggregator: Option<String>,
        /// Community count for --method kway
        #[arg(long)]
        kway_k: Option<usize>,
        #[arg(long)]
        merge_floor: Option<f64>,
        /// Write the report row here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every (method, percentile) cell and write all artifacts
    Sweep {
        #[command(flatten)]
        inputs: CommonInputs,
        /// Optional JSON config file; flags win on conflict
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Comma-separated subset of semantic,kway
        #[arg(long, value_delimiter = ',')]
        methods: Option<Vec<String>>,
        /// Comma-separated percentiles in [1, 99]
        #[arg(long, value_delimiter = ',')]
        percentiles: Option<Vec<u8>>,
        #[arg(long)]
        aggregator: Option<String>,
        #[arg(long)]
        min_weight: Option<f64>,
        /// Community count for the kway cells
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        merge_floor: Option<f64>,
        #[arg(long)]
        balance_tolerance: Option<f64>,
        #[arg(long)]
        max_refine_iters: Option<usize>,
    },
}

/// Optional JSON configuration; every field can be overridden by a flag.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    methods: Option<Vec<String>>,
    percentiles: Option<Vec<u8>>,
    aggregator: Option<String>,
    min_weight: Option<f64>,
    k: Option<usize>,
    merge_floor: Option<f64>,
    balance_tolerance: Option<f64>,
    max_refine_iters: Option<usize>,
    cutoff_year: Option<i32>,
    holdout_k: Option<usize>,
    holdout_percentile: Option<u8>,
    holdout_method: Option<String>,
    output_dir: Option<PathBuf>,
}

fn load_file_config(path: Option<&PathBuf>) -> Result<FileConfig, PipelineError> {
    match path {
        None => Ok(FileConfig::default()),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                PipelineError::BadConfig(format!("cannot read config {}: {e}", path.display()))
            })?;
            serde_json::from_str(&text)
                .map_err(|e| PipelineError::BadConfig(format!("{}: {e}", path.display())))
        }
    }
}

fn parse_with<T: FromStr>(value: &str, what: &str) -> Result<T, PipelineError>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| PipelineError::BadConfig(format!("{what}: {e}")))
}

fn parse_methods(methods: &[String]) -> Result<Vec<PartitionMethod>, PipelineError> {
    methods
        .iter()
        .map(|m| parse_with(m, "partition method"))
        .collect()
}

fn load_graph(inputs: &CommonInputs) -> Result<ScholarlyKnowledgeGraph, PipelineError> {
    let records = load_valid_records(&inputs.records)?;
    build_graph_stage(&records)
}

fn manifest_of(inputs: &CommonInputs) -> Result<Option<DatasetManifest>, PipelineError> {
    inputs.manifest.as_deref().map(load_manifest).transpose()
}

fn similarity_method(
    method: &str,
    manifest: &Option<DatasetManifest>,
    external_scores: Option<&PathBuf>,
    max_len: usize,
) -> Result<ScMethod, PipelineError> {
    match method {
        "simr" => {
            let manifest = manifest.as_ref().ok_or_else(|| {
                PipelineError::BadConfig("--method simr requires --manifest".to_string())
            })?;
            Ok(ScMethod::SimR { focus_series: manifest.focus_venues() })
        }
        "simc" => Ok(ScMethod::SimC),
        "path" => Ok(ScMethod::Path { max_len }),
        "external" => {
            let path = external_scores.ok_or_else(|| {
                PipelineError::BadConfig("--method external requires --external-scores".to_string())
            })?;
            Ok(ScMethod::External { scores: pipeline::read_external_scores(path)? })
        }
        other => Err(PipelineError::BadConfig(format!("unknown similarity method: {other}"))),
    }
}

fn print_ranking(report: &RankingReport, out: Option<&PathBuf>) -> Result<(), PipelineError> {
    let text = format!("{}\n{}\n", RankingReport::csv_header(), report.csv_row());
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| PipelineError::stage("write", format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), PipelineError> {
    match cli.command {
        Command::Ingest { inputs, export_triples } => {
            let graph = load_graph(&inputs)?;
            if let Some(manifest) = manifest_of(&inputs)? {
                println!("manifest: {} records declared", manifest.record_count);
            }
            let can = graph.derive_co_author_network();
            println!("entities: {}", graph.entity_count());
            println!("  researchers: {}", graph.count_of_kind(EntityKind::Researcher));
            println!("  publications: {}", graph.count_of_kind(EntityKind::Publication));
            println!("  venues: {}", graph.count_of_kind(EntityKind::Venue));
            println!("edges: {}", graph.edge_count());
            println!("co-author pairs: {}", can.edge_count());
            if let Some(path) = export_triples {
                std::fs::write(&path, graph.export_triples())
                    .map_err(|e| PipelineError::stage("write", format!("{}: {e}", path.display())))?;
                println!("triples written to {}", path.display());
            }
            Ok(())
        }
        Command::Similarity {
            inputs,
            method,
            percentile,
            external_scores,
            max_len,
            kind,
            out,
        } => {
            let graph = load_graph(&inputs)?;
            let manifest = manifest_of(&inputs)?;
            let kind: EntityKind = parse_with(&kind, "entity kind")?;
            let kind = match method.as_str() {
                "simr" => EntityKind::Researcher,
                "simc" => EntityKind::Venue,
                _ => kind,
            };
            let sc_method = similarity_method(&method, &manifest, external_scores.as_ref(), max_len)?;
            let mut sc = compute_sc(&graph, kind, &sc_method)
                .map_err(|e| PipelineError::stage("similarity", e))?;
            if let Some(p) = percentile {
                let spec =
                    PercentileSpec::new(p).map_err(|e| PipelineError::BadConfig(e.to_string()))?;
                sc = percentile_threshold(&sc, spec)
                    .map_err(|e| PipelineError::stage("similarity", e))?;
                if let Some(cutoff) = sc.threshold() {
                    eprintln!("percentile {p} cutoff: {cutoff}");
                }
            }
            pipeline::write_sc_tsv(&sc, &out)?;
            println!("{} scored pairs written to {}", sc.len(), out.display());
            Ok(())
        }
        Command::Partition {
            input,
            method,
            k,
            merge_floor,
            balance_tolerance,
            max_refine_iters,
            out,
        } => {
            let sc = pipeline::read_sc_tsv(&input, EntityKind::Researcher)?;
            let method: PartitionMethod = parse_with(&method, "partition method")?;
            // A scored-pair file carries no percentile cutoff, so the
            // semantic floor cannot default; kway always needs k.
            match method {
                PartitionMethod::Semantic if merge_floor.is_none() => {
                    return Err(PipelineError::BadConfig(
                        "--method semantic requires --merge-floor".to_string(),
                    ))
                }
                PartitionMethod::Kway if k.is_none() => {
                    return Err(PipelineError::BadConfig(
                        "--method kway requires --k".to_string(),
                    ))
                }
                _ => {}
            }
            let params = PartitionerParams {
                method,
                k,
                merge_floor,
                seed: 0,
                balance_tolerance,
                max_refine_iters,
            };
            let partition =
                run_partitioner(&sc, &params).map_err(|e| PipelineError::stage("partition", e))?;
            pipeline::write_partition_tsv(&partition, &out)?;
            println!("{} communities written to {}", partition.len(), out.display());
            Ok(())
        }
        Command::Evaluate { sc, partition, method_label, percentile, out } => {
            let mut sc = pipeline::read_sc_tsv(&sc, EntityKind::Researcher)?;
            let partition = pipeline::read_partition_tsv(&partition)?;
            // A partition file may list isolated entities that carry no
            // scored pair; widen the score universe to match.
            if partition.universe().is_superset(sc.universe()) {
                sc.extend_universe(partition.universe().iter().cloned());
            }
            let report = evaluate(&sc, &partition, &method_label, percentile)
                .map_err(|e| PipelineError::stage("evaluate", e))?;
            match out {
                Some(path) => {
                    let mut text = if path.exists() {
                        std::fs::read_to_string(&path).map_err(|e| {
                            PipelineError::stage("write", format!("{}: {e}", path.display()))
                        })?
                    } else {
                        format!("{}\n", scholnet::PartitionQualityReport::csv_header())
                    };
                    text.push_str(&report.csv_row());
                    text.push('\n');
                    std::fs::write(&path, text).map_err(|e| {
                        PipelineError::stage("write", format!("{}: {e}", path.display()))
                    })?;
                }
                None => {
                    println!("{}", scholnet::PartitionQualityReport::csv_header());
                    println!("{}", report.csv_row());
                }
            }
            Ok(())
        }
        Command::Predict { inputs, sc, partition, aggregator, min_weight, out } => {
            let graph = load_graph(&inputs)?;
            let observed = graph.derive_co_author_network();
            let mut sc = pipeline::read_sc_tsv(&sc, EntityKind::Researcher)?;
            // Researchers without any retained score pair are absent from
            // the partition file; they rejoin as singleton communities.
            let partition = pipeline::read_partition_tsv(&partition)?
                .extended_with_singletons(observed.researchers());
            sc.extend_universe(partition.universe().iter().cloned());
            let aggregator: Aggregator = parse_with(&aggregator, "aggregator")?;
            let network = generate_patterns(&partition, &sc, &observed, aggregator, min_weight)
                .map_err(|e| PipelineError::stage("predict", e))?;
            pipeline::write_predictions_tsv(&network, &out)?;
            println!("{} predicted relations written to {}", network.len(), out.display());
            Ok(())
        }
        Command::Holdout {
            inputs,
            config,
            cutoff,
            k,
            percentile,
            method,
            aggregator,
            kway_k,
            merge_floor,
            out,
        } => {
            let file = load_file_config(config.as_ref())?;
            let defaults = RunConfig::default();
            let holdout_method = match method.or(file.holdout_method) {
                Some(m) => parse_with(&m, "partition method")?,
                None => defaults.holdout_method,
            };
            let aggregator = match aggregator.or(file.aggregator) {
                Some(a) => parse_with(&a, "aggregator")?,
                None => defaults.aggregator,
            };
            let config = RunConfig {
                records_path: inputs.records.clone(),
                manifest_path: inputs.manifest.clone(),
                cutoff_year: cutoff.or(file.cutoff_year).unwrap_or(defaults.cutoff_year),
                holdout_k: k.or(file.holdout_k).unwrap_or(defaults.holdout_k),
                holdout_percentile: percentile
                    .or(file.holdout_percentile)
                    .unwrap_or(defaults.holdout_percentile),
                holdout_method,
                aggregator,
                k: kway_k.or(file.k).unwrap_or(defaults.k),
                merge_floor: merge_floor.or(file.merge_floor),
                min_weight: file.min_weight.unwrap_or(defaults.min_weight),
                balance_tolerance: file.balance_tolerance.unwrap_or(defaults.balance_tolerance),
                max_refine_iters: file.max_refine_iters.unwrap_or(defaults.max_refine_iters),
                ..defaults
            };
            let report = pipeline::run_holdout(&config)?;
            print_ranking(&report, out.as_ref())
        }
        Command::Sweep {
            inputs,
            config,
            out_dir,
            methods,
            percentiles,
            aggregator,
            min_weight,
            k,
            merge_floor,
            balance_tolerance,
            max_refine_iters,
        } => {
            let file = load_file_config(config.as_ref())?;
            let defaults = RunConfig::default();
            let methods = match methods.or(file.methods) {
                Some(m) => parse_methods(&m)?,
                None => defaults.methods.clone(),
            };
            let aggregator = match aggregator.or(file.aggregator) {
                Some(a) => parse_with(&a, "aggregator")?,
                None => defaults.aggregator,
            };
            let config = RunConfig {
                records_path: inputs.records.clone(),
                manifest_path: inputs.manifest.clone(),
                output_dir: out_dir.or(file.output_dir).unwrap_or(defaults.output_dir.clone()),
                methods,
                percentiles: percentiles.or(file.percentiles).unwrap_or(defaults.percentiles.clone()),
                aggregator,
                min_weight: min_weight.or(file.min_weight).unwrap_or(defaults.min_weight),
                k: k.or(file.k).unwrap_or(defaults.k),
                merge_floor: merge_floor.or(file.merge_floor),
                balance_tolerance: balance_tolerance
                    .or(file.balance_tolerance)
                    .unwrap_or(defaults.balance_tolerance),
                max_refine_iters: max_refine_iters
                    .or(file.max_refine_iters)
                    .unwrap_or(defaults.max_refine_iters),
                ..defaults
            };
            let summary = pipeline::run_sweep(&config)?;
            println!(
                "{} report rows written to {}",
                summary.reports.len(),
                summary.report_path.display()
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
