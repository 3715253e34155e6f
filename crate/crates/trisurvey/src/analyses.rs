//! Concrete surveys built as callbacks over the survey kernel: global count,
//! max-edge-label histogram, closure-time binning, label triples, and
//! degree triples.
//!
//! Each survey is a pure aggregation into a [`CountingSet`], so snapshots are
//! invariant to rank count and to the push-only / push-pull choice. The
//! per-triangle key functions are exported separately so the sequential
//! oracle can recompute every survey with the same logic.

use std::cell::RefCell;
use std::rc::Rc;

use crate::comm::Engine;
use crate::containers::{snapshot_csv_string, CountingSet};
use crate::error::{Error, Result};
use crate::graph::DistGraph;
use crate::meta::MetaValue;
use crate::survey::{run_survey, Algorithm, SurveyStats, TriangleMeta};

/// Reserved bin for a zero time delta. log2 is undefined there, and real
/// timestamped graphs do contain simultaneous edges.
pub const SIMULTANEOUS_BIN: i64 = i32::MIN as i64;

/// ceil(log2(x)) for x >= 1, exact in integer arithmetic.
pub fn ceil_log2_u64(x: u64) -> i64 {
    debug_assert!(x >= 1);
    (64 - (x - 1).leading_zeros()) as i64
}

fn ceil_log2_f64(x: f64) -> i64 {
    debug_assert!(x > 0.0);
    if x <= 1.0 {
        0
    } else {
        x.log2().ceil() as i64
    }
}

fn labels_pairwise_distinct(meta: &TriangleMeta) -> bool {
    meta.p_meta != meta.q_meta && meta.p_meta != meta.r_meta && meta.q_meta != meta.r_meta
}

/// Key of the max-edge-label survey: the largest of the three edge labels,
/// or `None` when the vertex-label guard rejects the triangle.
pub fn max_edge_label_key(meta: &TriangleMeta) -> Result<Option<MetaValue>> {
    for (label, m) in [
        ("p", &meta.p_meta),
        ("q", &meta.q_meta),
        ("r", &meta.r_meta),
    ] {
        if m.is_none() {
            return Err(Error::Validation(format!(
                "vertex in role {label} has no metadata"
            )));
        }
    }
    for (label, m) in [
        ("pq", &meta.pq_meta),
        ("pr", &meta.pr_meta),
        ("qr", &meta.qr_meta),
    ] {
        if m.is_none() {
            return Err(Error::Validation(format!("edge {label} has no metadata")));
        }
    }
    if !labels_pairwise_distinct(meta) {
        return Ok(None);
    }
    let mut best = meta.pq_meta.clone();
    for m in [&meta.pr_meta, &meta.qr_meta] {
        if *m > best {
            best = m.clone();
        }
    }
    Ok(Some(best))
}

/// Key of the closure-times survey: (open_bin, close_bin) for the sorted
/// timestamps t1 <= t2 <= t3, with dt_open = t2 - t1 and dt_close = t3 - t1.
/// With `strict_guard` the vertex-label distinctness guard is applied and
/// rejected triangles yield `None`; the default counts every triangle.
pub fn closure_time_key(meta: &TriangleMeta, strict_guard: bool) -> Result<Option<(i64, i64)>> {
    if strict_guard && !labels_pairwise_distinct(meta) {
        return Ok(None);
    }
    let ts = [&meta.pq_meta, &meta.pr_meta, &meta.qr_meta];
    if let Some(bad) = ts.iter().find(|m| !m.is_numeric()) {
        return Err(Error::Validation(format!(
            "non-numeric timestamp {bad:?} on a triangle edge"
        )));
    }
    if ts.iter().all(|m| matches!(m, MetaValue::Int(_))) {
        // integer path keeps bins exact for large epoch values
        let mut t: Vec<i64> = ts
            .iter()
            .map(|m| match m {
                MetaValue::Int(i) => *i,
                _ => unreachable!(),
            })
            .collect();
        t.sort_unstable();
        let bin = |delta: i64| {
            if delta == 0 {
                SIMULTANEOUS_BIN
            } else {
                ceil_log2_u64(delta as u64)
            }
        };
        Ok(Some((bin(t[1] - t[0]), bin(t[2] - t[0]))))
    } else {
        let mut t: Vec<f64> = ts.iter().map(|m| m.as_f64().unwrap()).collect();
        t.sort_by(f64::total_cmp);
        let bin = |delta: f64| {
            if delta == 0.0 {
                SIMULTANEOUS_BIN
            } else {
                ceil_log2_f64(delta)
            }
        };
        Ok(Some((bin(t[1] - t[0]), bin(t[2] - t[0]))))
    }
}

/// Key of the label-triples survey: the lexicographically sorted triple of
/// vertex labels, or `None` when the labels are not pairwise distinct.
pub fn label_triple_key(meta: &TriangleMeta) -> Result<Option<(String, String, String)>> {
    let mut labels = Vec::with_capacity(3);
    for (role, m) in [
        ("p", &meta.p_meta),
        ("q", &meta.q_meta),
        ("r", &meta.r_meta),
    ] {
        match m {
            MetaValue::Text(s) => labels.push(s.clone()),
            other => {
                return Err(Error::Validation(format!(
                    "vertex in role {role} has no text label (found {other:?})"
                )))
            }
        }
    }
    if !labels_pairwise_distinct(meta) {
        return Ok(None);
    }
    labels.sort();
    let mut it = labels.into_iter();
    Ok(Some((
        it.next().unwrap(),
        it.next().unwrap(),
        it.next().unwrap(),
    )))
}

/// Key of the degree-triples survey: ceil-log2 degree bins in role order
/// (p, q, r), not sorted; the role order is already canonical.
pub fn degree_triple_key(meta: &TriangleMeta) -> (i64, i64, i64) {
    (
        ceil_log2_u64(meta.p_deg.max(1)),
        ceil_log2_u64(meta.q_deg.max(1)),
        ceil_log2_u64(meta.r_deg.max(1)),
    )
}

fn validate_vertex_meta(
    graph: &DistGraph,
    ok: impl Fn(&MetaValue) -> bool,
    problem: &str,
) -> Result<()> {
    for part in graph.parts.borrow().iter() {
        for (v, rec) in &part.vertices {
            if !ok(&rec.meta) {
                return Err(Error::Validation(format!(
                    "vertex {v} {problem} (found {:?})",
                    rec.meta
                )));
            }
        }
    }
    Ok(())
}

fn validate_edge_meta(
    graph: &DistGraph,
    ok: impl Fn(&MetaValue) -> bool,
    problem: &str,
) -> Result<()> {
    for part in graph.parts.borrow().iter() {
        for (p, rec) in &part.vertices {
            for n in &rec.adj {
                if !ok(&n.edge_meta) {
                    // report with ascending ids, matching the input convention
                    return Err(Error::Validation(format!(
                        "edge ({}, {}) {problem} (found {:?})",
                        (*p).min(n.v),
                        (*p).max(n.v),
                        n.edge_meta
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Snapshot plus the kernel counters of the run that produced it.
#[derive(Debug, Clone)]
pub struct SurveyOutput<K> {
    pub snapshot: Vec<(K, u64)>,
    pub stats: SurveyStats,
}

impl<K: crate::containers::Key> SurveyOutput<K> {
    pub fn csv(&self) -> String {
        snapshot_csv_string(&self.snapshot)
    }
}

/// Global triangle count: per-rank counters reduced with a sum.
pub fn survey_count(
    engine: &mut Engine,
    graph: &DistGraph,
    algorithm: Algorithm,
) -> Result<(u64, SurveyStats)> {
    let counts = Rc::new(RefCell::new(vec![0u64; graph.num_ranks]));
    let counts2 = counts.clone();
    let stats = run_survey(engine, graph, algorithm, move |ctx, _| {
        counts2.borrow_mut()[ctx.rank().0] += 1;
        Ok(())
    })?;
    let locals = counts.borrow().clone();
    let total = engine.all_reduce_sum(&locals)?;
    debug_assert_eq!(total, stats.triangles_found);
    Ok((total, stats))
}

fn run_counting_survey<K, F>(
    engine: &mut Engine,
    graph: &DistGraph,
    algorithm: Algorithm,
    cache_capacity: usize,
    key_fn: F,
) -> Result<SurveyOutput<K>>
where
    K: crate::containers::Key,
    F: Fn(&TriangleMeta) -> Result<Option<K>> + 'static,
{
    let set: CountingSet<K> = CountingSet::new(engine, cache_capacity)?;
    let set2 = set.clone();
    let stats = run_survey(engine, graph, algorithm, move |ctx, meta| {
        if let Some(key) = key_fn(meta)? {
            set2.increment(ctx, key)?;
        }
        Ok(())
    })?;
    engine.for_each_rank(|ctx| set.flush(ctx))?;
    engine.barrier()?;
    Ok(SurveyOutput {
        snapshot: set.snapshot(engine)?,
        stats,
    })
}

/// Histogram of the maximum edge label over triangles whose three vertex
/// labels are pairwise distinct.
pub fn survey_max_edge_label(
    engine: &mut Engine,
    graph: &DistGraph,
    algorithm: Algorithm,
    cache_capacity: usize,
) -> Result<SurveyOutput<MetaValue>> {
    validate_vertex_meta(graph, |m| !m.is_none(), "has no metadata")?;
    validate_edge_meta(graph, |m| !m.is_none(), "has no metadata")?;
    run_counting_survey(engine, graph, algorithm, cache_capacity, |meta| {
        max_edge_label_key(meta)
    })
}

/// Joint and marginal closure-time histograms.
#[derive(Debug, Clone)]
pub struct ClosureTimes {
    /// (open_bin, close_bin) -> count.
    pub joint: Vec<((i64, i64), u64)>,
    /// close_bin -> count, summed out of the joint.
    pub marginal: Vec<(i64, u64)>,
    pub stats: SurveyStats,
}

fn bin_label(bin: i64) -> String {
    if bin == SIMULTANEOUS_BIN {
        "simultaneous".to_string()
    } else {
        bin.to_string()
    }
}

impl ClosureTimes {
    pub fn joint_csv(&self) -> String {
        let mut out = String::from("# open_bin,close_bin,count; bins are ceil(log2(dt)) in input timestamp units\n");
        for ((open, close), count) in &self.joint {
            out.push_str(&format!(
                "{},{},{}\n",
                bin_label(*open),
                bin_label(*close),
                count
            ));
        }
        out
    }

    pub fn marginal_csv(&self) -> String {
        let mut out = String::from("# close_bin,count; bins are ceil(log2(dt)) in input timestamp units\n");
        for (close, count) in &self.marginal {
            out.push_str(&format!("{},{}\n", bin_label(*close), count));
        }
        out
    }
}

/// Wedge-opening and triangle-closing time histogram over edge timestamps.
/// `strict_guard` additionally applies the vertex-label distinctness guard.
pub fn survey_closure_times(
    engine: &mut Engine,
    graph: &DistGraph,
    algorithm: Algorithm,
    cache_capacity: usize,
    strict_guard: bool,
) -> Result<ClosureTimes> {
    validate_edge_meta(graph, MetaValue::is_numeric, "has a non-numeric timestamp")?;
    let out = run_counting_survey(engine, graph, algorithm, cache_capacity, move |meta| {
        closure_time_key(meta, strict_guard)
    })?;
    Ok(ClosureTimes {
        marginal: marginal_close_bins(&out.snapshot),
        joint: out.snapshot,
        stats: out.stats,
    })
}

/// Sum a joint closure-time snapshot down to the close-bin marginal.
pub fn marginal_close_bins(joint: &[((i64, i64), u64)]) -> Vec<(i64, u64)> {
    let mut marginal: std::collections::BTreeMap<i64, u64> = std::collections::BTreeMap::new();
    for ((_, close), count) in joint {
        *marginal.entry(*close).or_insert(0) += count;
    }
    marginal.into_iter().collect()
}

/// Counts of sorted vertex-label triples over triangles with three pairwise
/// distinct labels.
pub fn survey_label_triples(
    engine: &mut Engine,
    graph: &DistGraph,
    algorithm: Algorithm,
    cache_capacity: usize,
) -> Result<SurveyOutput<(String, String, String)>> {
    validate_vertex_meta(
        graph,
        |m| matches!(m, MetaValue::Text(_)),
        "has no text label",
    )?;
    run_counting_survey(engine, graph, algorithm, cache_capacity, |meta| {
        label_triple_key(meta)
    })
}

/// Counts of ceil-log2 degree-bin triples in role order.
pub fn survey_degree_triples(
    engine: &mut Engine,
    graph: &DistGraph,
    algorithm: Algorithm,
    cache_capacity: usize,
) -> Result<SurveyOutput<(i64, i64, i64)>> {
    run_counting_survey(engine, graph, algorithm, cache_capacity, |meta| {
        Ok(Some(degree_triple_key(meta)))
    })
}
