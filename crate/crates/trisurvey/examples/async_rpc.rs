//! The comm engine on its own: buffered fire-and-forget sends, handlers that
//! send onward, and the quiescence barrier that drains the cascade.

use std::cell::RefCell;
use std::rc::Rc;

use trisurvey::comm::{CommConfig, RankId};
use trisurvey::wire::from_bytes;
use trisurvey::{Engine, Result};

fn main() -> Result<()> {
    let mut engine = Engine::new(CommConfig::new(4).flush_threshold(1024))?;

    let received: Rc<RefCell<Vec<(usize, u64)>>> = Rc::new(RefCell::new(Vec::new()));
    let sink = received.clone();
    // forward a counter around the ring until it reaches zero
    let h_ring = Rc::new(RefCell::new(None));
    let h_ring2 = h_ring.clone();
    let id = engine.register_handler(move |ctx, _, payload| {
        let hops: u64 = from_bytes(payload)?;
        sink.borrow_mut().push((ctx.rank().0, hops));
        if hops > 0 {
            let next = RankId((ctx.rank().0 + 1) % ctx.num_ranks());
            let handler = h_ring2.borrow().unwrap();
            ctx.async_send(next, handler, &(hops - 1))?;
        }
        Ok(())
    })?;
    *h_ring.borrow_mut() = Some(id);

    engine.for_each_rank(|ctx| {
        if ctx.rank() == RankId(0) {
            ctx.async_send(RankId(1), id, &10u64)?;
        }
        Ok(())
    })?;
    // nothing has been delivered yet; the barrier drains the whole cascade,
    // including the messages handlers spawn while it runs
    engine.barrier()?;

    for (rank, hops) in received.borrow().iter() {
        println!("rank {rank} saw hops={hops}");
    }
    let stats = engine.global_stats();
    println!(
        "{} messages sent, {} delivered, {} flushes",
        stats.messages_sent, stats.messages_delivered, stats.flushes
    );
    Ok(())
}
