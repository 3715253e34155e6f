//! Graph ingestion, degree ordering, and distributed DODGr construction.
//!
//! The degree-ordered directed graph (DODGr) orients every undirected edge
//! from its lower endpoint under the degree-then-hash order. Partitions are
//! sharded by a hash of the vertex id; each vertex record carries its
//! metadata and an order-sorted adjacency list augmented with edge metadata,
//! target vertex metadata, and the target's out-degree.

mod gen;
mod ingest;
mod order;

pub use gen::{gnp_edges, rmat_edges, RmatConfig};
pub use ingest::{ingest_path, ingest_reader, CleanGraph, IngestOptions, IngestStats};
pub use order::{degree_order_less, order_key, splitmix64, OrderKey};

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;

use crate::comm::{Engine, RankId};
use crate::error::Result;
use crate::meta::MetaValue;
use crate::wire::{from_bytes, Decode, Encode};

/// Vertex identifier. External string ids are dictionary-encoded to dense
/// integers during ingestion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VertexId(pub u64);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Encode for VertexId {
    fn encode(&self, out: &mut Vec<u8>) {
        self.0.encode(out);
    }
}

impl Decode for VertexId {
    fn decode(input: &mut &[u8]) -> Result<Self> {
        Ok(VertexId(u64::decode(input)?))
    }
}

/// One entry of a metadata-augmented out-adjacency list.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedNeighbor {
    pub v: VertexId,
    pub edge_meta: MetaValue,
    pub vertex_meta: MetaValue,
    /// Out-degree of `v`, stored so pull decisions can be made without an
    /// extra round trip.
    pub v_outdeg: u64,
}

impl Encode for AugmentedNeighbor {
    fn encode(&self, out: &mut Vec<u8>) {
        self.v.encode(out);
        self.edge_meta.encode(out);
        self.vertex_meta.encode(out);
        self.v_outdeg.encode(out);
    }
}

impl Decode for AugmentedNeighbor {
    fn decode(input: &mut &[u8]) -> Result<Self> {
        Ok(AugmentedNeighbor {
            v: VertexId::decode(input)?,
            edge_meta: MetaValue::decode(input)?,
            vertex_meta: MetaValue::decode(input)?,
            v_outdeg: u64::decode(input)?,
        })
    }
}

/// Stored state of one vertex on its owner rank.
#[derive(Debug, Clone, Default)]
pub struct VertexRecord {
    pub meta: MetaValue,
    /// Out-neighbors sorted ascending by the degree order.
    pub adj: Vec<AugmentedNeighbor>,
}

/// One rank's shard of the DODGr.
#[derive(Debug, Clone)]
pub struct DodgrPartition {
    pub rank: RankId,
    pub vertices: BTreeMap<VertexId, VertexRecord>,
}

/// The fully built, partitioned DODGr plus globally known degrees.
/// Partitions are immutable during surveys.
#[derive(Clone)]
pub struct DistGraph {
    pub parts: Rc<RefCell<Vec<DodgrPartition>>>,
    pub degrees: Rc<HashMap<VertexId, u64>>,
    pub num_ranks: usize,
    pub undirected_edges: u64,
}

impl DistGraph {
    /// Owner rank of a vertex: hash of the id mod the rank count.
    pub fn owner(&self, v: VertexId) -> RankId {
        RankId((splitmix64(v.0) % self.num_ranks as u64) as usize)
    }

    pub fn degree(&self, v: VertexId) -> u64 {
        self.degrees.get(&v).copied().unwrap_or(0)
    }

    pub fn vertex_count(&self) -> u64 {
        self.parts
            .borrow()
            .iter()
            .map(|p| p.vertices.len() as u64)
            .sum()
    }

    pub fn max_degree(&self) -> u64 {
        self.degrees.values().copied().max().unwrap_or(0)
    }

    pub fn max_out_degree(&self) -> u64 {
        self.parts
            .borrow()
            .iter()
            .flat_map(|p| p.vertices.values())
            .map(|r| r.adj.len() as u64)
            .max()
            .unwrap_or(0)
    }

    /// Number of wedges in the DODGr: sum over vertices of C(d_+(v), 2).
    pub fn wedge_count(&self) -> u64 {
        self.parts
            .borrow()
            .iter()
            .flat_map(|p| p.vertices.values())
            .map(|r| {
                let d = r.adj.len() as u64;
                d * d.saturating_sub(1) / 2
            })
            .sum()
    }

    /// Sum of out-degrees; equals the undirected edge count.
    pub fn directed_edges_stored(&self) -> u64 {
        self.parts
            .borrow()
            .iter()
            .flat_map(|p| p.vertices.values())
            .map(|r| r.adj.len() as u64)
            .sum()
    }
}

/// Build the partitioned DODGr from a cleaned graph over the engine's ranks.
///
/// Runs as comm-engine rounds: each rank routes a cyclic slice of the vertex
/// and edge tables to the owner ranks, a barrier drains the traffic, then
/// adjacency lists are sorted in place.
pub fn build_dodgr(engine: &mut Engine, clean: &CleanGraph) -> Result<DistGraph> {
    let num_ranks = engine.num_ranks();
    let degrees = Rc::new(clean.degrees.clone());

    // out-degrees are known up front from the orientation
    let mut out_deg: HashMap<VertexId, u64> = HashMap::new();
    for (u, v, _) in &clean.edges {
        let p = if degree_order_less(*u, *v, &degrees) { *u } else { *v };
        *out_deg.entry(p).or_insert(0) += 1;
    }

    let parts = Rc::new(RefCell::new(
        (0..num_ranks)
            .map(|r| DodgrPartition {
                rank: RankId(r),
                vertices: BTreeMap::new(),
            })
            .collect::<Vec<_>>(),
    ));

    let parts_v = parts.clone();
    let h_vertex = engine.register_handler(move |ctx, _, payload| {
        let (v, meta): (VertexId, MetaValue) = from_bytes(payload)?;
        parts_v.borrow_mut()[ctx.rank().0]
            .vertices
            .entry(v)
            .or_default()
            .meta = meta;
        Ok(())
    })?;
    let parts_e = parts.clone();
    let h_edge = engine.register_handler(move |ctx, _, payload| {
        let (p, neighbor): (VertexId, AugmentedNeighbor) = from_bytes(payload)?;
        parts_e.borrow_mut()[ctx.rank().0]
            .vertices
            .entry(p)
            .or_default()
            .adj
            .push(neighbor);
        Ok(())
    })?;

    let graph = DistGraph {
        parts,
        degrees: degrees.clone(),
        num_ranks,
        undirected_edges: clean.undirected_edge_count(),
    };

    let mut vertices: Vec<VertexId> = clean.degrees.keys().copied().collect();
    vertices.sort_unstable();

    engine.for_each_rank(|ctx| {
        let reader = ctx.rank().0;
        for (i, v) in vertices.iter().enumerate() {
            if i % num_ranks == reader {
                ctx.async_send(graph.owner(*v), h_vertex, &(*v, clean.meta_of(*v)))?;
            }
        }
        for (i, (u, v, meta)) in clean.edges.iter().enumerate() {
            if i % num_ranks == reader {
                let (p, q) = if degree_order_less(*u, *v, &degrees) {
                    (*u, *v)
                } else {
                    (*v, *u)
                };
                let neighbor = AugmentedNeighbor {
                    v: q,
                    edge_meta: meta.clone(),
                    vertex_meta: clean.meta_of(q),
                    v_outdeg: out_deg.get(&q).copied().unwrap_or(0),
                };
                ctx.async_send(graph.owner(p), h_edge, &(p, neighbor))?;
            }
        }
        Ok(())
    })?;
    engine.barrier()?;

    {
        let mut parts = graph.parts.borrow_mut();
        for part in parts.iter_mut() {
            for rec in part.vertices.values_mut() {
                rec.adj.sort_by_key(|n| order_key(n.v, &degrees));
            }
        }
    }
    debug_assert_eq!(graph.directed_edges_stored(), graph.undirected_edges);
    Ok(graph)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comm::CommConfig;

    fn build(edges: &[(u64, u64)], num_ranks: usize) -> DistGraph {
        let raw = edges
            .iter()
            .map(|&(u, v)| (VertexId(u), VertexId(v), MetaValue::None))
            .collect();
        let clean = CleanGraph::from_raw(raw, HashMap::new(), IngestOptions::default()).unwrap();
        let mut engine = Engine::new(CommConfig::new(num_ranks)).unwrap();
        build_dodgr(&mut engine, &clean).unwrap()
    }

    /// Flatten all partitions into one sorted directed edge list.
    fn directed_edges(g: &DistGraph) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        for part in g.parts.borrow().iter() {
            for (p, rec) in &part.vertices {
                for n in &rec.adj {
                    out.push((p.0, n.v.0));
                }
            }
        }
        out.sort_unstable();
        out
    }

    #[test]
    fn triangle_orients_three_edges_acyclically() {
        let g = build(&[(1, 2), (2, 3), (1, 3)], 2);
        let edges = directed_edges(&g);
        assert_eq!(edges.len(), 3);
        // strict total order: every directed edge increases in the order,
        // so the orientation cannot contain a cycle
        for (u, v) in &edges {
            assert!(degree_order_less(VertexId(*u), VertexId(*v), &g.degrees));
        }
        assert_eq!(g.directed_edges_stored(), 3);
    }

    #[test]
    fn star_pushes_all_edges_into_center() {
        let g = build(&[(10, 1), (10, 2), (10, 3), (10, 4), (10, 5)], 3);
        let edges = directed_edges(&g);
        assert!(edges.iter().all(|&(_, v)| v == 10));
        // center has out-degree zero
        for part in g.parts.borrow().iter() {
            if let Some(rec) = part.vertices.get(&VertexId(10)) {
                assert!(rec.adj.is_empty());
            }
        }
        assert_eq!(g.max_out_degree(), 1);
        assert_eq!(g.max_degree(), 5);
    }

    #[test]
    fn rank_count_does_not_change_the_directed_graph() {
        let edges: Vec<(u64, u64)> = gnp_edges(40, 0.2, 3)
            .into_iter()
            .map(|(u, v)| (u.0, v.0))
            .collect();
        let baseline = directed_edges(&build(&edges, 1));
        for n in [2, 4, 8] {
            assert_eq!(directed_edges(&build(&edges, n)), baseline);
        }
    }

    #[test]
    fn every_vertex_lands_on_its_owner() {
        let g = build(&[(0, 1), (1, 2), (2, 3)], 4);
        for part in g.parts.borrow().iter() {
            for v in part.vertices.keys() {
                assert_eq!(g.owner(*v), part.rank);
            }
        }
    }

    #[test]
    fn adjacency_lists_are_order_sorted_with_outdegrees() {
        let edges: Vec<(u64, u64)> = gnp_edges(30, 0.3, 9)
            .into_iter()
            .map(|(u, v)| (u.0, v.0))
            .collect();
        let g = build(&edges, 3);
        let mut out_deg: HashMap<VertexId, u64> = HashMap::new();
        for (u, _) in directed_edges(&g) {
            *out_deg.entry(VertexId(u)).or_insert(0) += 1;
        }
        for part in g.parts.borrow().iter() {
            for rec in part.vertices.values() {
                let keys: Vec<OrderKey> =
                    rec.adj.iter().map(|n| order_key(n.v, &g.degrees)).collect();
                assert!(keys.windows(2).all(|w| w[0] < w[1]));
                for n in &rec.adj {
                    assert_eq!(n.v_outdeg, out_deg.get(&n.v).copied().unwrap_or(0));
                }
            }
        }
    }

    #[test]
    fn wedge_count_matches_direct_tally() {
        let edges: Vec<(u64, u64)> = gnp_edges(20, 0.3, 1)
            .into_iter()
            .map(|(u, v)| (u.0, v.0))
            .collect();
        let g = build(&edges, 2);
        let mut out_deg: HashMap<u64, u64> = HashMap::new();
        for (u, _) in directed_edges(&g) {
            *out_deg.entry(u).or_insert(0) += 1;
        }
        let expected: u64 = out_deg.values().map(|d| d * (d - 1) / 2).sum();
        assert_eq!(g.wedge_count(), expected);
    }

    #[test]
    fn degree_ordering_caps_out_degree_on_skewed_graphs() {
        let cfg = RmatConfig::new(14, 21);
        let raw = rmat_edges(&cfg)
            .into_iter()
            .map(|(u, v)| (u, v, MetaValue::None))
            .collect();
        let clean = CleanGraph::from_raw(raw, HashMap::new(), IngestOptions::default()).unwrap();
        let mut engine = Engine::new(CommConfig::new(4)).unwrap();
        let g = build_dodgr(&mut engine, &clean).unwrap();
        assert!(g.max_out_degree() < g.max_degree());
    }
}
