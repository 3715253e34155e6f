//! Command-line driver: load or generate a graph, run one survey, emit the
//! snapshot CSV and a flat key=value stats file.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, ValueEnum};

use trisurvey::analyses::{
    survey_closure_times, survey_count, survey_degree_triples, survey_label_triples,
    survey_max_edge_label,
};
use trisurvey::comm::CommConfig;
use trisurvey::graph::{build_dodgr, ingest_path, rmat_edges, CleanGraph, IngestOptions, RmatConfig};
use trisurvey::survey::SurveyStats;
use trisurvey::{Algorithm, DistGraph, Engine, Error, MetaValue, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SurveyKind {
    Count,
    MaxEdgeLabel,
    ClosureTimes,
    LabelTriples,
    DegreeTriples,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DedupMode {
    /// Keep the first-seen metadata of a duplicated edge.
    First,
    /// Keep the minimum numeric metadata (earliest timestamp).
    MinMeta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Generator {
    Rmat,
}

/// Triangle surveys over metadata-decorated graphs on simulated ranks.
#[derive(Debug, Parser)]
#[command(name = "trisurvey", version, about)]
struct Args {
    /// Edge-list file: `u v [edge_meta]` per line, `#` comments.
    #[arg(long, conflicts_with = "generate", required_unless_present = "generate")]
    input: Option<PathBuf>,

    /// Vertex metadata file: `v meta` per line.
    #[arg(long)]
    vertex_meta: Option<PathBuf>,

    /// Number of simulated ranks.
    #[arg(long, default_value_t = 4)]
    ranks: usize,

    /// Survey algorithm: push | push-pull.
    #[arg(long, default_value = "push")]
    algorithm: String,

    /// Survey to run; omit to only print graph stats.
    #[arg(long, value_enum)]
    survey: Option<SurveyKind>,

    /// Send-buffer flush threshold in bytes.
    #[arg(long, default_value_t = trisurvey::comm::DEFAULT_FLUSH_THRESHOLD)]
    flush_threshold: usize,

    /// Counting-set write-back cache capacity (keys per rank).
    #[arg(long, default_value_t = trisurvey::containers::DEFAULT_CACHE_CAPACITY)]
    cache_capacity: usize,

    /// Duplicate-edge policy.
    #[arg(long, value_enum, default_value_t = DedupMode::First)]
    dedup: DedupMode,

    /// Snapshot CSV destination; stdout when omitted. Closure-times also
    /// writes the marginal histogram to `<output>.marginal`.
    #[arg(long)]
    output: Option<PathBuf>,

    /// Stats key=value destination; stdout when omitted.
    #[arg(long)]
    stats: Option<PathBuf>,

    /// Generate a synthetic graph instead of reading one.
    #[arg(long, value_enum)]
    generate: Option<Generator>,

    /// Generator scale: 2^scale vertices.
    #[arg(long, default_value_t = 10)]
    scale: u32,

    /// Generator edges per vertex.
    #[arg(long, default_value_t = 16)]
    edge_factor: u64,

    /// Generator seed.
    #[arg(long, default_value_t = 1)]
    seed: u64,

    /// Apply the vertex-label distinctness guard to closure-times.
    #[arg(long)]
    strict_guard: bool,
}

fn main() {
    if let Err(e) = run(Args::parse()) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}

fn load(args: &Args) -> Result<CleanGraph> {
    let opts = IngestOptions {
        dedup_keep_min_meta: args.dedup == DedupMode::MinMeta,
        drop_self_loops: true,
    };
    match (&args.generate, &args.input) {
        (Some(Generator::Rmat), _) => {
            let cfg = RmatConfig {
                edge_factor: args.edge_factor,
                ..RmatConfig::new(args.scale, args.seed)
            };
            let raw = rmat_edges(&cfg)
                .into_iter()
                .map(|(u, v)| (u, v, MetaValue::None))
                .collect();
            CleanGraph::from_raw(raw, Default::default(), opts)
        }
        (None, Some(path)) => ingest_path(path, args.vertex_meta.as_deref(), opts),
        (None, None) => Err(Error::Config("either --input or --generate is required".into())),
    }
}

fn emit(path: &Option<PathBuf>, contents: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, contents).map_err(Error::from),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn graph_stats(out: &mut String, graph: &DistGraph) {
    let _ = writeln!(out, "vertices={}", graph.vertex_count());
    // directed edge count after symmetrizing: twice the undirected edges
    let _ = writeln!(out, "directed_edges={}", 2 * graph.undirected_edges);
    let _ = writeln!(out, "max_degree={}", graph.max_degree());
    let _ = writeln!(out, "max_out_degree={}", graph.max_out_degree());
    let _ = writeln!(out, "wedges={}", graph.wedge_count());
}

fn survey_stats_lines(out: &mut String, stats: &SurveyStats, ranks: usize, wall: f64) {
    let _ = writeln!(out, "triangles={}", stats.triangles_found);
    let _ = writeln!(out, "wedge_checks={}", stats.wedge_checks_issued);
    let _ = writeln!(out, "pulls={}", stats.pulls_performed);
    for (phase, s) in [
        ("dry_run", &stats.dry_run),
        ("push", &stats.push),
        ("pull", &stats.pull),
    ] {
        let _ = writeln!(out, "{phase}_messages={}", s.messages_sent);
        let _ = writeln!(out, "{phase}_bytes={}", s.payload_bytes_sent);
    }
    let total = stats.total_comm();
    let _ = writeln!(out, "total_messages={}", total.messages_sent);
    let _ = writeln!(out, "total_bytes={}", total.payload_bytes_sent);
    let _ = writeln!(out, "wall_seconds={wall:.6}");
    let rate = stats.wedge_checks_issued as f64 / (ranks as f64 * wall.max(1e-9));
    let _ = writeln!(out, "wedge_rate_per_rank_second={rate:.1}");
}

fn run(args: Args) -> Result<()> {
    let algorithm: Algorithm = args.algorithm.parse()?;
    let clean = load(&args)?;
    let mut engine = Engine::new(
        CommConfig::new(args.ranks).flush_threshold(args.flush_threshold),
    )?;
    let graph = build_dodgr(&mut engine, &clean)?;

    let mut stats_text = String::new();
    graph_stats(&mut stats_text, &graph);

    let Some(survey) = args.survey else {
        // stats-only mode
        return emit(&args.stats, &stats_text);
    };

    let started = Instant::now();
    let (csv, kernel_stats) = match survey {
        SurveyKind::Count => {
            let (count, stats) = survey_count(&mut engine, &graph, algorithm)?;
            (format!("triangles,{count}\n"), stats)
        }
        SurveyKind::MaxEdgeLabel => {
            let out = survey_max_edge_label(&mut engine, &graph, algorithm, args.cache_capacity)?;
            (out.csv(), out.stats)
        }
        SurveyKind::ClosureTimes => {
            let out = survey_closure_times(
                &mut engine,
                &graph,
                algorithm,
                args.cache_capacity,
                args.strict_guard,
            )?;
            if let Some(path) = &args.output {
                let mut marginal_path = path.clone().into_os_string();
                marginal_path.push(".marginal");
                fs::write(marginal_path, out.marginal_csv())?;
            } else {
                print!("{}", out.marginal_csv());
            }
            (out.joint_csv(), out.stats)
        }
        SurveyKind::LabelTriples => {
            let out = survey_label_triples(&mut engine, &graph, algorithm, args.cache_capacity)?;
            (out.csv(), out.stats)
        }
        SurveyKind::DegreeTriples => {
            let out = survey_degree_triples(&mut engine, &graph, algorithm, args.cache_capacity)?;
            (out.csv(), out.stats)
        }
    };
    let wall = started.elapsed().as_secs_f64();

    emit(&args.output, &csv)?;
    survey_stats_lines(&mut stats_text, &kernel_stats, args.ranks, wall);
    emit(&args.stats, &stats_text)
}
