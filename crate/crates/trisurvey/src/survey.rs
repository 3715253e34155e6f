//! The triangle-survey kernel.
//!
//! Every undirected triangle appears exactly once in the DODGr as a path
//! p -> q -> r with a closing edge p -> r, where p precedes q precedes r in
//! the degree order. The survey walks each pivot p, ships the tail of
//! Adj_+(p) past q to the rank owning q, and merge-intersects it with
//! Adj_+(q). The callback fires once per triangle with all six metadata
//! values and the three undirected degrees colocated.
//!
//! Two strategies are implemented: push-only, which always ships the tail,
//! and push-pull, which first runs a dry run of candidate-edge counts and
//! pulls a hub target's adjacency to the requesting rank when that is
//! cheaper than pushing many tails at it.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::rc::Rc;
use std::str::FromStr;

use crate::comm::{CommStats, Ctx, Engine, RankId};
use crate::error::{Error, Result};
use crate::graph::{order_key, AugmentedNeighbor, DistGraph, VertexId};
use crate::meta::MetaValue;
use crate::wire::{from_bytes, Decode, Encode};

/// Survey strategy selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    PushOnly,
    PushPull,
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Algorithm> {
        match s {
            "push" => Ok(Algorithm::PushOnly),
            "push-pull" => Ok(Algorithm::PushPull),
            other => Err(Error::Config(format!(
                "unknown algorithm '{other}' (expected 'push' or 'push-pull')"
            ))),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algorithm::PushOnly => write!(f, "push"),
            Algorithm::PushPull => write!(f, "push-pull"),
        }
    }
}

/// Everything a callback learns about one triangle p, q, r (in degree
/// order): the six metadata values plus the three undirected degrees.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TriangleMeta {
    pub p_meta: MetaValue,
    pub q_meta: MetaValue,
    pub r_meta: MetaValue,
    pub pq_meta: MetaValue,
    pub pr_meta: MetaValue,
    pub qr_meta: MetaValue,
    pub p_deg: u64,
    pub q_deg: u64,
    pub r_deg: u64,
}

/// Batched wedge-check request for one (pivot, target) pair. Candidate
/// vertex metadata is deliberately absent from the wire; the receiving rank
/// already stores it in Adj_+(q).
#[derive(Debug, Clone)]
pub struct PushMessage {
    /// Pivot id, carried so the receiver can look up d(p) and report errors.
    pub p: VertexId,
    pub q: VertexId,
    pub pivot_meta: MetaValue,
    pub pq_meta: MetaValue,
    /// Tail of Adj_+(p) past q, sorted ascending in the degree order.
    pub candidates: Vec<(VertexId, MetaValue)>,
}

impl Encode for PushMessage {
    fn encode(&self, out: &mut Vec<u8>) {
        self.p.encode(out);
        self.q.encode(out);
        self.pivot_meta.encode(out);
        self.pq_meta.encode(out);
        self.candidates.encode(out);
    }
}

impl Decode for PushMessage {
    fn decode(input: &mut &[u8]) -> Result<Self> {
        Ok(PushMessage {
            p: VertexId::decode(input)?,
            q: VertexId::decode(input)?,
            pivot_meta: MetaValue::decode(input)?,
            pq_meta: MetaValue::decode(input)?,
            candidates: Vec::decode(input)?,
        })
    }
}

/// A target's full augmented out-adjacency, shipped once per requesting rank.
#[derive(Debug, Clone)]
pub struct PulledAdjacency {
    pub q: VertexId,
    pub q_meta: MetaValue,
    /// (r, qr_meta, r_meta), sorted ascending in the degree order.
    pub neighbors: Vec<(VertexId, MetaValue, MetaValue)>,
}

impl Encode for PulledAdjacency {
    fn encode(&self, out: &mut Vec<u8>) {
        self.q.encode(out);
        self.q_meta.encode(out);
        self.neighbors.encode(out);
    }
}

impl Decode for PulledAdjacency {
    fn decode(input: &mut &[u8]) -> Result<Self> {
        Ok(PulledAdjacency {
            q: VertexId::decode(input)?,
            q_meta: MetaValue::decode(input)?,
            neighbors: Vec::decode(input)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Push,
    Pull,
}

/// Outcome of one dry-run tally at the target's owner rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PullDecision {
    pub target: VertexId,
    pub source_rank: RankId,
    pub proposed_edges: u64,
    pub verdict: Verdict,
}

/// Counters of one completed survey, including per-phase traffic.
#[derive(Debug, Clone, Default)]
pub struct SurveyStats {
    pub triangles_found: u64,
    pub wedge_checks_issued: u64,
    pub pulls_performed: u64,
    /// Pulls broken down by the requesting rank.
    pub pulls_per_rank: Vec<u64>,
    pub dry_run: CommStats,
    pub push: CommStats,
    pub pull: CommStats,
    /// Every dry-run verdict, for offline replay in tests.
    pub pull_decisions: Vec<PullDecision>,
}

impl SurveyStats {
    /// Traffic summed over all phases.
    pub fn total_comm(&self) -> CommStats {
        let mut total = self.dry_run;
        total.add(&self.push);
        total.add(&self.pull);
        total
    }
}

/// Merge-path intersection of two strictly sorted lists in O(|a|+|b|)
/// comparisons. Returns matched pairs in order.
pub fn merge_intersect<'a, A, B, K, FA, FB>(
    a: &'a [A],
    b: &'a [B],
    key_a: FA,
    key_b: FB,
) -> Vec<(&'a A, &'a B)>
where
    K: Ord,
    FA: Fn(&A) -> K,
    FB: Fn(&B) -> K,
{
    debug_assert!(a.windows(2).all(|w| key_a(&w[0]) < key_a(&w[1])));
    debug_assert!(b.windows(2).all(|w| key_b(&w[0]) < key_b(&w[1])));
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match key_a(&a[i]).cmp(&key_b(&b[j])) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push((&a[i], &b[j]));
                i += 1;
                j += 1;
            }
        }
    }
    out
}

#[derive(Default)]
struct SurveyState {
    triangles: u64,
    wedge_checks: u64,
    pulls_per_rank: Vec<u64>,
    /// Target-side verdicts keyed by (source rank, target). Populated only
    /// under push-pull; a push arriving for a pulled key aborts the survey.
    decisions: HashMap<(usize, VertexId), Verdict>,
    decision_log: Vec<PullDecision>,
    /// Source-side push clearances, filled by dry-run replies.
    push_ok: HashSet<(usize, VertexId)>,
    /// Per requesting rank: target -> local pivots awaiting its pull.
    awaiting_pull: Vec<HashMap<VertexId, Vec<VertexId>>>,
}

type Callback = Rc<dyn Fn(&mut Ctx<'_>, &TriangleMeta) -> Result<()>>;

fn invoke(
    ctx: &mut Ctx<'_>,
    callback: &Callback,
    p: VertexId,
    q: VertexId,
    r: VertexId,
    meta: &TriangleMeta,
) -> Result<()> {
    callback(ctx, meta).map_err(|e| {
        Error::Survey(format!("callback failed on triangle ({p}, {q}, {r}): {e}"))
    })
}

/// Run one triangle survey over the already built DODGr, invoking `callback`
/// exactly once per triangle. The callback's effects must be commutative and
/// associative; invocation order is unspecified and differs between
/// algorithms and rank counts.
pub fn run_survey<F>(
    engine: &mut Engine,
    graph: &DistGraph,
    algorithm: Algorithm,
    callback: F,
) -> Result<SurveyStats>
where
    F: Fn(&mut Ctx<'_>, &TriangleMeta) -> Result<()> + 'static,
{
    if engine.num_ranks() != graph.num_ranks {
        return Err(Error::Config(format!(
            "engine has {} ranks but the graph was partitioned for {}",
            engine.num_ranks(),
            graph.num_ranks
        )));
    }
    if !engine.is_quiescent() {
        return Err(Error::Survey(
            "survey started while messages are in flight".into(),
        ));
    }
    let callback: Callback = Rc::new(callback);
    let num_ranks = graph.num_ranks;
    let state = Rc::new(std::cell::RefCell::new(SurveyState {
        pulls_per_rank: vec![0; num_ranks],
        awaiting_pull: vec![HashMap::new(); num_ranks],
        ..SurveyState::default()
    }));

    let h_push = {
        let parts = graph.parts.clone();
        let degrees = graph.degrees.clone();
        let state = state.clone();
        let callback = callback.clone();
        engine.register_handler(move |ctx, src, payload| {
            let msg: PushMessage = from_bytes(payload)?;
            if state.borrow().decisions.get(&(src.0, msg.q)) == Some(&Verdict::Pull) {
                return Err(Error::Survey(format!(
                    "push message from rank {src} for pulled target {}",
                    msg.q
                )));
            }
            let mut found = Vec::new();
            {
                let parts = parts.borrow();
                let rec = parts[ctx.rank().0].vertices.get(&msg.q).ok_or_else(|| {
                    Error::Survey(format!(
                        "no record for target {} on rank {}",
                        msg.q,
                        ctx.rank()
                    ))
                })?;
                let matches = merge_intersect(
                    &msg.candidates,
                    &rec.adj,
                    |c| order_key(c.0, &degrees),
                    |n| order_key(n.v, &degrees),
                );
                for (cand, nbr) in matches {
                    found.push((
                        nbr.v,
                        TriangleMeta {
                            p_meta: msg.pivot_meta.clone(),
                            q_meta: rec.meta.clone(),
                            r_meta: nbr.vertex_meta.clone(),
                            pq_meta: msg.pq_meta.clone(),
                            pr_meta: cand.1.clone(),
                            qr_meta: nbr.edge_meta.clone(),
                            p_deg: degrees.get(&msg.p).copied().unwrap_or(0),
                            q_deg: degrees.get(&msg.q).copied().unwrap_or(0),
                            r_deg: degrees.get(&nbr.v).copied().unwrap_or(0),
                        },
                    ));
                }
            }
            state.borrow_mut().triangles += found.len() as u64;
            for (r, meta) in &found {
                invoke(ctx, &callback, msg.p, msg.q, *r, meta)?;
            }
            Ok(())
        })?
    };

    match algorithm {
        Algorithm::PushOnly => {
            let before = engine.global_stats();
            drive_push(engine, graph, h_push, &state, false)?;
            engine.barrier()?;
            let push = engine.global_stats().delta_since(&before);
            let state = state.borrow();
            Ok(SurveyStats {
                triangles_found: state.triangles,
                wedge_checks_issued: state.wedge_checks,
                pulls_performed: 0,
                pulls_per_rank: vec![0; num_ranks],
                push,
                ..SurveyStats::default()
            })
        }
        Algorithm::PushPull => {
            run_push_pull(engine, graph, h_push, state, callback)
        }
    }
}

/// Send PushMessages for every local (pivot, target) pair with a nonempty
/// tail. Under `gated`, only pairs the dry run cleared for push are sent;
/// the rest are queued for the pull phase.
fn drive_push(
    engine: &mut Engine,
    graph: &DistGraph,
    h_push: crate::comm::HandlerId,
    state: &Rc<std::cell::RefCell<SurveyState>>,
    gated: bool,
) -> Result<()> {
    let parts = graph.parts.clone();
    engine.for_each_rank(|ctx| {
        let rank = ctx.rank().0;
        let parts = parts.borrow();
        for (p, rec) in &parts[rank].vertices {
            for (i, nbr) in rec.adj.iter().enumerate() {
                let tail = &rec.adj[i + 1..];
                if tail.is_empty() {
                    continue;
                }
                let q = nbr.v;
                if gated && !state.borrow().push_ok.contains(&(rank, q)) {
                    state.borrow_mut().awaiting_pull[rank]
                        .entry(q)
                        .or_default()
                        .push(*p);
                    continue;
                }
                state.borrow_mut().wedge_checks += tail.len() as u64;
                let msg = PushMessage {
                    p: *p,
                    q,
                    pivot_meta: rec.meta.clone(),
                    pq_meta: nbr.edge_meta.clone(),
                    candidates: tail
                        .iter()
                        .map(|n| (n.v, n.edge_meta.clone()))
                        .collect(),
                };
                ctx.async_send(graph.owner(q), h_push, &msg)?;
            }
        }
        Ok(())
    })
}

fn run_push_pull(
    engine: &mut Engine,
    graph: &DistGraph,
    h_push: crate::comm::HandlerId,
    state: Rc<std::cell::RefCell<SurveyState>>,
    callback: Callback,
) -> Result<SurveyStats> {
    // pull_requesters[q] lives on q's owner rank only
    let pull_requesters: Rc<std::cell::RefCell<HashMap<VertexId, Vec<RankId>>>> =
        Rc::new(std::cell::RefCell::new(HashMap::new()));

    let h_push_ok = {
        let state = state.clone();
        engine.register_handler(move |ctx, _, payload| {
            let q: VertexId = from_bytes(payload)?;
            state.borrow_mut().push_ok.insert((ctx.rank().0, q));
            Ok(())
        })?
    };

    let h_dry_run = {
        let parts = graph.parts.clone();
        let state = state.clone();
        let pull_requesters = pull_requesters.clone();
        engine.register_handler(move |ctx, src, payload| {
            let (q, proposed_edges): (VertexId, u64) = from_bytes(payload)?;
            let d_plus = parts.borrow()[ctx.rank().0]
                .vertices
                .get(&q)
                .map(|r| r.adj.len() as u64)
                .unwrap_or(0);
            // strict inequality; ties push to avoid a pull for no gain
            let verdict = if proposed_edges > d_plus {
                Verdict::Pull
            } else {
                Verdict::Push
            };
            let mut state = state.borrow_mut();
            state.decisions.insert((src.0, q), verdict);
            state.decision_log.push(PullDecision {
                target: q,
                source_rank: src,
                proposed_edges,
                verdict,
            });
            drop(state);
            match verdict {
                Verdict::Push => ctx.async_send(src, h_push_ok, &q)?,
                Verdict::Pull => pull_requesters.borrow_mut().entry(q).or_default().push(src),
            }
            Ok(())
        })?
    };

    let h_pulled = {
        let parts = graph.parts.clone();
        let degrees = graph.degrees.clone();
        let state = state.clone();
        let callback = callback.clone();
        engine.register_handler(move |ctx, _, payload| {
            let msg: PulledAdjacency = from_bytes(payload)?;
            let rank = ctx.rank().0;
            let pivots = {
                let mut state = state.borrow_mut();
                state.pulls_per_rank[rank] += 1;
                state.awaiting_pull[rank].remove(&msg.q).unwrap_or_default()
            };
            let mut found = Vec::new();
            let mut wedge_checks = 0u64;
            {
                let parts = parts.borrow();
                for p in &pivots {
                    let rec = parts[rank].vertices.get(p).ok_or_else(|| {
                        Error::Survey(format!("no record for pivot {p} on rank {rank}"))
                    })?;
                    let pos = rec
                        .adj
                        .binary_search_by_key(&order_key(msg.q, &degrees), |n| {
                            order_key(n.v, &degrees)
                        })
                        .map_err(|_| {
                            Error::Survey(format!(
                                "pulled target {} absent from Adj_+({p})",
                                msg.q
                            ))
                        })?;
                    let tail = &rec.adj[pos + 1..];
                    wedge_checks += tail.len() as u64;
                    let matches = merge_intersect(
                        tail,
                        &msg.neighbors,
                        |n: &AugmentedNeighbor| order_key(n.v, &degrees),
                        |&(r, _, _)| order_key(r, &degrees),
                    );
                    for (local, pulled) in matches {
                        found.push((
                            *p,
                            local.v,
                            TriangleMeta {
                                p_meta: rec.meta.clone(),
                                q_meta: msg.q_meta.clone(),
                                r_meta: local.vertex_meta.clone(),
                                pq_meta: rec.adj[pos].edge_meta.clone(),
                                pr_meta: local.edge_meta.clone(),
                                qr_meta: pulled.1.clone(),
                                p_deg: degrees.get(p).copied().unwrap_or(0),
                                q_deg: degrees.get(&msg.q).copied().unwrap_or(0),
                                r_deg: degrees.get(&local.v).copied().unwrap_or(0),
                            },
                        ));
                    }
                }
            }
            {
                let mut state = state.borrow_mut();
                state.wedge_checks += wedge_checks;
                state.triangles += found.len() as u64;
            }
            for (p, r, meta) in &found {
                invoke(ctx, &callback, *p, msg.q, *r, meta)?;
            }
            Ok(())
        })?
    };

    // Phase 1: dry run. One (target, candidate-edge count) message per
    // (source rank, remote-or-local target); no adjacency data moves.
    let before = engine.global_stats();
    {
        let parts = graph.parts.clone();
        engine.for_each_rank(|ctx| {
            let rank = ctx.rank().0;
            let mut tally: HashMap<VertexId, u64> = HashMap::new();
            {
                let parts = parts.borrow();
                for rec in parts[rank].vertices.values() {
                    for (i, nbr) in rec.adj.iter().enumerate() {
                        let tail_len = (rec.adj.len() - 1 - i) as u64;
                        if tail_len > 0 {
                            *tally.entry(nbr.v).or_insert(0) += tail_len;
                        }
                    }
                }
            }
            let mut targets: Vec<_> = tally.into_iter().collect();
            targets.sort_unstable();
            for (q, proposed) in targets {
                ctx.async_send(graph.owner(q), h_dry_run, &(q, proposed))?;
            }
            Ok(())
        })?;
    }
    engine.barrier()?;
    let dry_run = engine.global_stats().delta_since(&before);

    // Phase 2: push the cleared pairs, queue the rest.
    let before = engine.global_stats();
    drive_push(engine, graph, h_push, &state, true)?;
    engine.barrier()?;
    let push = engine.global_stats().delta_since(&before);

    // Phase 3: ship each pulled adjacency once per requesting rank.
    let before = engine.global_stats();
    {
        let parts = graph.parts.clone();
        engine.for_each_rank(|ctx| {
            let rank = ctx.rank().0;
            let parts = parts.borrow();
            let requesters = pull_requesters.borrow();
            let mut targets: Vec<_> = requesters
                .iter()
                .filter(|(q, _)| graph.owner(**q).0 == rank)
                .collect();
            targets.sort_by_key(|(q, _)| **q);
            for (q, ranks) in targets {
                let rec = parts[rank].vertices.get(q).ok_or_else(|| {
                    Error::Survey(format!("no record for pulled target {q} on rank {rank}"))
                })?;
                let msg = PulledAdjacency {
                    q: *q,
                    q_meta: rec.meta.clone(),
                    neighbors: rec
                        .adj
                        .iter()
                        .map(|n| (n.v, n.edge_meta.clone(), n.vertex_meta.clone()))
                        .collect(),
                };
                for dest in ranks {
                    ctx.async_send(*dest, h_pulled, &msg)?;
                }
            }
            Ok(())
        })?;
    }
    engine.barrier()?;
    let pull = engine.global_stats().delta_since(&before);

    let state = state.borrow();
    debug_assert!(state.awaiting_pull.iter().all(|m| m.is_empty()));
    Ok(SurveyStats {
        triangles_found: state.triangles,
        wedge_checks_issued: state.wedge_checks,
        pulls_performed: state.pulls_per_rank.iter().sum(),
        pulls_per_rank: state.pulls_per_rank.clone(),
        dry_run,
        push,
        pull,
        pull_decisions: state.decision_log.clone(),
    })
}
