//! Bin wedge-opening and triangle-closing times over a timestamped graph.
//!
//! Edges get pseudo-random integer timestamps; the survey sorts each
//! triangle's three timestamps and histograms (ceil log2 dt_open,
//! ceil log2 dt_close).

use trisurvey::analyses::survey_closure_times;
use trisurvey::comm::CommConfig;
use trisurvey::containers::DEFAULT_CACHE_CAPACITY;
use trisurvey::graph::{build_dodgr, gnp_edges, splitmix64, CleanGraph, IngestOptions};
use trisurvey::{Algorithm, Engine, MetaValue, Result};

fn main() -> Result<()> {
    let raw = gnp_edges(300, 0.05, 3)
        .into_iter()
        .map(|(u, v)| (u, v, MetaValue::None))
        .collect();
    let clean = CleanGraph::from_raw(raw, Default::default(), IngestOptions::default())?
        .with_edge_meta(|u, v| MetaValue::Int((splitmix64(u.0 * 1009 + v.0) % 100_000) as i64));

    let mut engine = Engine::new(CommConfig::new(4))?;
    let graph = build_dodgr(&mut engine, &clean)?;
    let out = survey_closure_times(
        &mut engine,
        &graph,
        Algorithm::PushOnly,
        DEFAULT_CACHE_CAPACITY,
        false,
    )?;

    println!("joint (open_bin, close_bin) histogram:");
    print!("{}", out.joint_csv());
    println!("marginal close-bin histogram:");
    print!("{}", out.marginal_csv());
    Ok(())
}
