//! Count triangles in a generated graph and print the kernel counters.
//!
//! Usage: cargo run --example triangle_count [scale] [ranks]

use trisurvey::analyses::survey_count;
use trisurvey::comm::CommConfig;
use trisurvey::graph::{build_dodgr, rmat_edges, CleanGraph, IngestOptions, RmatConfig};
use trisurvey::{Algorithm, Engine, MetaValue, Result};

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let scale: u32 = args.next().map(|s| s.parse().unwrap()).unwrap_or(10);
    let ranks: usize = args.next().map(|s| s.parse().unwrap()).unwrap_or(4);

    let raw = rmat_edges(&RmatConfig::new(scale, 7))
        .into_iter()
        .map(|(u, v)| (u, v, MetaValue::None))
        .collect();
    let clean = CleanGraph::from_raw(raw, Default::default(), IngestOptions::default())?;
    println!(
        "graph: {} vertices, {} undirected edges",
        clean.vertex_count(),
        clean.undirected_edge_count()
    );

    let mut engine = Engine::new(CommConfig::new(ranks))?;
    let graph = build_dodgr(&mut engine, &clean)?;
    let (count, stats) = survey_count(&mut engine, &graph, Algorithm::PushOnly)?;

    println!("triangles: {count}");
    println!("wedge checks: {}", stats.wedge_checks_issued);
    println!(
        "traffic: {} messages, {} payload bytes",
        stats.total_comm().messages_sent,
        stats.total_comm().payload_bytes_sent
    );
    Ok(())
}
