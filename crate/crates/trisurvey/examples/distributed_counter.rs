//! The cached counting set: every rank hammers a shared key space, the
//! write-back cache coalesces increments, and the snapshot is exact.

use trisurvey::comm::CommConfig;
use trisurvey::containers::{snapshot_csv_string, CountingSet};
use trisurvey::graph::splitmix64;
use trisurvey::{Engine, Result};

fn main() -> Result<()> {
    let mut engine = Engine::new(CommConfig::new(4))?;
    // a tiny cache forces evictions; counts still come out exact
    let set: CountingSet<String> = CountingSet::new(&mut engine, 8)?;

    engine.for_each_rank(|ctx| {
        let rank = ctx.rank().0 as u64;
        for i in 0..100_000u64 {
            let key = format!("key{}", splitmix64(i * 4 + rank) % 20);
            set.increment(ctx, key)?;
        }
        set.flush(ctx)
    })?;
    engine.barrier()?;

    let snapshot = set.snapshot(&engine)?;
    print!("{}", snapshot_csv_string(&snapshot));
    let total: u64 = snapshot.iter().map(|(_, c)| *c).sum();
    println!("total increments: {total}");
    println!(
        "messages sent for 400k increments: {}",
        engine.global_stats().messages_sent
    );
    Ok(())
}
