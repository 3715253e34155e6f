//! Generate R-MAT graphs and print the degree/orientation profile that makes
//! the degree order effective: max out-degree stays far below max degree.

use trisurvey::comm::CommConfig;
use trisurvey::graph::{build_dodgr, rmat_edges, CleanGraph, IngestOptions, RmatConfig};
use trisurvey::{Engine, MetaValue, Result};

fn main() -> Result<()> {
    println!("{:>5} {:>9} {:>9} {:>7} {:>9} {:>11}", "scale", "|V|", "|E|", "d_max", "dplus_max", "wedges");
    for scale in [8, 10, 12, 14] {
        let raw = rmat_edges(&RmatConfig::new(scale, 99))
            .into_iter()
            .map(|(u, v)| (u, v, MetaValue::None))
            .collect();
        let clean = CleanGraph::from_raw(raw, Default::default(), IngestOptions::default())?;
        let mut engine = Engine::new(CommConfig::new(4))?;
        let graph = build_dodgr(&mut engine, &clean)?;
        println!(
            "{:>5} {:>9} {:>9} {:>7} {:>9} {:>11}",
            scale,
            graph.vertex_count(),
            clean.undirected_edge_count(),
            graph.max_degree(),
            graph.max_out_degree(),
            graph.wedge_count()
        );
    }
    Ok(())
}
