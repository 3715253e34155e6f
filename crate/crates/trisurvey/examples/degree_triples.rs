//! Count log-binned degree triples (d(p), d(q), d(r)) in role order: a
//! metadata-free survey usable on any graph.

use trisurvey::analyses::survey_degree_triples;
use trisurvey::comm::CommConfig;
use trisurvey::containers::DEFAULT_CACHE_CAPACITY;
use trisurvey::graph::{build_dodgr, rmat_edges, CleanGraph, IngestOptions, RmatConfig};
use trisurvey::{Algorithm, Engine, MetaValue, Result};

fn main() -> Result<()> {
    let raw = rmat_edges(&RmatConfig::new(11, 23))
        .into_iter()
        .map(|(u, v)| (u, v, MetaValue::None))
        .collect();
    let clean = CleanGraph::from_raw(raw, Default::default(), IngestOptions::default())?;

    let mut engine = Engine::new(CommConfig::new(4))?;
    let graph = build_dodgr(&mut engine, &clean)?;
    let out = survey_degree_triples(
        &mut engine,
        &graph,
        Algorithm::PushPull,
        DEFAULT_CACHE_CAPACITY,
    )?;

    println!("degree-bin triple histogram (p_bin,q_bin,r_bin,count):");
    print!("{}", out.csv());
    Ok(())
}
