//! Ingest an edge list (with optional vertex metadata) from disk and print
//! its profile. Falls back to a bundled inline graph when no path is given.
//!
//! Usage: cargo run --example graph_from_file [edges.txt [vertex_meta.txt]]

use std::io::Cursor;
use std::path::Path;

use trisurvey::comm::CommConfig;
use trisurvey::graph::{build_dodgr, ingest_path, ingest_reader, IngestOptions};
use trisurvey::{Engine, Result};

const SAMPLE: &str = "\
# a labeled triangle plus a pendant edge
alice bob 10
bob carol 14
alice carol 26
carol dave 99
";

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let clean = match args.next() {
        Some(edges) => {
            let vmeta = args.next();
            ingest_path(
                Path::new(&edges),
                vmeta.as_deref().map(Path::new),
                IngestOptions::default(),
            )?
        }
        None => ingest_reader(
            Cursor::new(SAMPLE),
            None::<Cursor<&str>>,
            IngestOptions::default(),
        )?,
    };

    println!(
        "{} vertices, {} undirected edges ({} raw lines, {} duplicates collapsed, {} self-loops dropped)",
        clean.vertex_count(),
        clean.undirected_edge_count(),
        clean.stats.lines_read,
        clean.stats.duplicates_collapsed,
        clean.stats.self_loops_dropped
    );
    if let Some(names) = &clean.id_names {
        println!("string ids dictionary-encoded: {names:?}");
    }

    let mut engine = Engine::new(CommConfig::new(2))?;
    let graph = build_dodgr(&mut engine, &clean)?;
    println!(
        "max degree {}, max out-degree {}, {} wedges",
        graph.max_degree(),
        graph.max_out_degree(),
        graph.wedge_count()
    );
    Ok(())
}
