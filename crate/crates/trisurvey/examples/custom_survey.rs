//! Write a survey of your own: the kernel hands the callback all six
//! metadata values and three degrees per triangle; anything commutative and
//! associative can be aggregated.
//!
//! This one finds, per rank, the triangle with the widest degree spread.

use std::cell::RefCell;
use std::rc::Rc;

use trisurvey::comm::CommConfig;
use trisurvey::graph::{build_dodgr, rmat_edges, CleanGraph, IngestOptions, RmatConfig};
use trisurvey::survey::run_survey;
use trisurvey::{Algorithm, Engine, MetaValue, Result};

fn main() -> Result<()> {
    let raw = rmat_edges(&RmatConfig::new(10, 31))
        .into_iter()
        .map(|(u, v)| (u, v, MetaValue::None))
        .collect();
    let clean = CleanGraph::from_raw(raw, Default::default(), IngestOptions::default())?;

    let mut engine = Engine::new(CommConfig::new(4))?;
    let graph = build_dodgr(&mut engine, &clean)?;

    // per-rank maximum of r_deg - p_deg (degrees arrive in role order, so
    // r_deg is always the largest of the three)
    let best: Rc<RefCell<Vec<u64>>> = Rc::new(RefCell::new(vec![0; 4]));
    let best2 = best.clone();
    let stats = run_survey(&mut engine, &graph, Algorithm::PushOnly, move |ctx, meta| {
        let spread = meta.r_deg - meta.p_deg;
        let slot = &mut best2.borrow_mut()[ctx.rank().0];
        *slot = (*slot).max(spread);
        Ok(())
    })?;

    println!("triangles: {}", stats.triangles_found);
    for (rank, spread) in best.borrow().iter().enumerate() {
        println!("rank {rank}: widest degree spread {spread}");
    }
    println!(
        "global widest spread: {}",
        best.borrow().iter().max().unwrap()
    );
    Ok(())
}
