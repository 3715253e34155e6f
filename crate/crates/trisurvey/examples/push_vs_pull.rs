//! Compare push-only and push-pull traffic on a hub-dominated graph.
//!
//! 2000 low-degree pivots all point at one hub whose out-adjacency is tiny,
//! so shipping the hub's list to each rank once beats pushing thousands of
//! candidate tails at it.

use trisurvey::analyses::survey_count;
use trisurvey::comm::CommConfig;
use trisurvey::graph::{build_dodgr, CleanGraph, IngestOptions, VertexId};
use trisurvey::{Algorithm, Engine, MetaValue, Result};

fn hub_graph() -> Result<CleanGraph> {
    let mut raw = Vec::new();
    let hub = VertexId(100_000);
    let closers: Vec<VertexId> = (0..4).map(|i| VertexId(200_000 + i)).collect();
    for leaf in 0..2000u64 {
        raw.push((VertexId(leaf), hub, MetaValue::None));
        for c in &closers {
            raw.push((VertexId(leaf), *c, MetaValue::None));
        }
    }
    for c in &closers {
        raw.push((hub, *c, MetaValue::None));
        // padding lifts the closers above the hub in the degree order
        for pad in 0..10u64 {
            raw.push((*c, VertexId(300_000 + c.0 * 100 + pad), MetaValue::None));
        }
    }
    CleanGraph::from_raw(raw, Default::default(), IngestOptions::default())
}

fn main() -> Result<()> {
    let clean = hub_graph()?;
    for algorithm in [Algorithm::PushOnly, Algorithm::PushPull] {
        let mut engine = Engine::new(CommConfig::new(8))?;
        let graph = build_dodgr(&mut engine, &clean)?;
        let (count, stats) = survey_count(&mut engine, &graph, algorithm)?;
        let total = stats.total_comm();
        println!(
            "{algorithm:>9}: {count} triangles, {:>8} bytes, {:>5} messages, {} pulls",
            total.payload_bytes_sent, total.messages_sent, stats.pulls_performed
        );
        println!(
            "           phases: dry-run {} B, push {} B, pull {} B",
            stats.dry_run.payload_bytes_sent,
            stats.push.payload_bytes_sent,
            stats.pull.payload_bytes_sent
        );
    }
    Ok(())
}
