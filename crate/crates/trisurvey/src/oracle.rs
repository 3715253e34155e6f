//! Sequential brute-force reference implementation, independent of the comm
//! engine. Used to cross-check the distributed surveys on small graphs.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::analyses::{
    closure_time_key, degree_triple_key, label_triple_key, marginal_close_bins,
    max_edge_label_key,
};
use crate::error::{Error, Result};
use crate::graph::{degree_order_less, CleanGraph, VertexId};
use crate::meta::MetaValue;
use crate::survey::TriangleMeta;

pub const DEFAULT_VERTEX_CAP: u64 = 10_000;

/// In-memory simple undirected graph with metadata tables.
pub struct OracleGraph {
    adj: BTreeMap<VertexId, BTreeSet<VertexId>>,
    vertex_meta: HashMap<VertexId, MetaValue>,
    edge_meta: HashMap<(VertexId, VertexId), MetaValue>,
    degrees: HashMap<VertexId, u64>,
    vertex_cap: u64,
}

impl OracleGraph {
    pub fn from_clean(clean: &CleanGraph) -> OracleGraph {
        let mut adj: BTreeMap<VertexId, BTreeSet<VertexId>> = BTreeMap::new();
        let mut edge_meta = HashMap::new();
        for (u, v, meta) in &clean.edges {
            adj.entry(*u).or_default().insert(*v);
            adj.entry(*v).or_default().insert(*u);
            edge_meta.insert((*u.min(v), *u.max(v)), meta.clone());
        }
        for v in clean.degrees.keys() {
            adj.entry(*v).or_default();
        }
        OracleGraph {
            adj,
            vertex_meta: clean.vertex_meta.clone(),
            edge_meta,
            degrees: clean.degrees.clone(),
            vertex_cap: DEFAULT_VERTEX_CAP,
        }
    }

    pub fn with_vertex_cap(mut self, cap: u64) -> OracleGraph {
        self.vertex_cap = cap;
        self
    }

    fn meta_of(&self, v: VertexId) -> MetaValue {
        self.vertex_meta.get(&v).cloned().unwrap_or(MetaValue::None)
    }

    fn edge_meta_of(&self, u: VertexId, v: VertexId) -> MetaValue {
        self.edge_meta
            .get(&(u.min(v), u.max(v)))
            .cloned()
            .unwrap_or(MetaValue::None)
    }

    /// Exhaustive duplicate-free enumeration. Each triangle is reported once
    /// with roles assigned by the same degree order the DODGr uses, so
    /// role-ordered keys agree with the distributed survey exactly.
    pub fn triangles(&self) -> Result<Vec<(VertexId, VertexId, VertexId, TriangleMeta)>> {
        let n = self.adj.len() as u64;
        if n > self.vertex_cap {
            return Err(Error::Validation(format!(
                "oracle vertex cap exceeded ({n} > {})",
                self.vertex_cap
            )));
        }
        let mut out = Vec::new();
        for (a, nbrs) in &self.adj {
            for b in nbrs.iter().filter(|b| **b > *a) {
                for c in self.adj[b].iter().filter(|c| **c > *b) {
                    if !nbrs.contains(c) {
                        continue;
                    }
                    let mut roles = [*a, *b, *c];
                    // insertion sort under the degree order; three elements
                    roles.sort_by(|u, v| {
                        if degree_order_less(*u, *v, &self.degrees) {
                            std::cmp::Ordering::Less
                        } else if u == v {
                            std::cmp::Ordering::Equal
                        } else {
                            std::cmp::Ordering::Greater
                        }
                    });
                    let [p, q, r] = roles;
                    out.push((
                        p,
                        q,
                        r,
                        TriangleMeta {
                            p_meta: self.meta_of(p),
                            q_meta: self.meta_of(q),
                            r_meta: self.meta_of(r),
                            pq_meta: self.edge_meta_of(p, q),
                            pr_meta: self.edge_meta_of(p, r),
                            qr_meta: self.edge_meta_of(q, r),
                            p_deg: self.degrees.get(&p).copied().unwrap_or(0),
                            q_deg: self.degrees.get(&q).copied().unwrap_or(0),
                            r_deg: self.degrees.get(&r).copied().unwrap_or(0),
                        },
                    ));
                }
            }
        }
        Ok(out)
    }

    pub fn count(&self) -> Result<u64> {
        Ok(self.triangles()?.len() as u64)
    }

    pub fn max_edge_label(&self) -> Result<Vec<(MetaValue, u64)>> {
        self.tally(max_edge_label_key)
    }

    pub fn closure_times(&self, strict_guard: bool) -> Result<Vec<((i64, i64), u64)>> {
        self.tally(move |m| closure_time_key(m, strict_guard))
    }

    pub fn closure_time_marginal(&self, strict_guard: bool) -> Result<Vec<(i64, u64)>> {
        Ok(marginal_close_bins(&self.closure_times(strict_guard)?))
    }

    pub fn label_triples(&self) -> Result<Vec<((String, String, String), u64)>> {
        self.tally(label_triple_key)
    }

    pub fn degree_triples(&self) -> Result<Vec<((i64, i64, i64), u64)>> {
        self.tally(|m| Ok(Some(degree_triple_key(m))))
    }

    fn tally<K: Ord, F>(&self, key_fn: F) -> Result<Vec<(K, u64)>>
    where
        F: Fn(&TriangleMeta) -> Result<Option<K>>,
    {
        let mut counts: BTreeMap<K, u64> = BTreeMap::new();
        for (_, _, _, meta) in self.triangles()? {
            if let Some(key) = key_fn(&meta)? {
                *counts.entry(key).or_insert(0) += 1;
            }
        }
        Ok(counts.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::IngestOptions;

    fn graph(edges: &[(u64, u64)]) -> OracleGraph {
        let raw = edges
            .iter()
            .map(|&(u, v)| (VertexId(u), VertexId(v), MetaValue::None))
            .collect();
        let clean =
            CleanGraph::from_raw(raw, HashMap::new(), IngestOptions::default()).unwrap();
        OracleGraph::from_clean(&clean)
    }

    #[test]
    fn k3_has_one_triangle() {
        assert_eq!(graph(&[(1, 2), (2, 3), (1, 3)]).count().unwrap(), 1);
    }

    #[test]
    fn c5_has_none() {
        assert_eq!(
            graph(&[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).count().unwrap(),
            0
        );
    }

    #[test]
    fn k5_has_ten() {
        let mut edges = Vec::new();
        for u in 0..5u64 {
            for v in (u + 1)..5 {
                edges.push((u, v));
            }
        }
        assert_eq!(graph(&edges).count().unwrap(), 10);
    }

    #[test]
    fn roles_follow_the_degree_order() {
        let g = graph(&[(1, 2), (2, 3), (1, 3), (3, 4)]);
        for (p, q, r, _) in g.triangles().unwrap() {
            assert!(degree_order_less(p, q, &g.degrees));
            assert!(degree_order_less(q, r, &g.degrees));
        }
    }

    #[test]
    fn input_order_does_not_matter() {
        let forward = graph(&[(1, 2), (2, 3), (1, 3), (2, 4), (3, 4)]);
        let backward = graph(&[(3, 4), (4, 2), (3, 1), (3, 2), (2, 1)]);
        assert_eq!(forward.triangles().unwrap(), backward.triangles().unwrap());
    }

    #[test]
    fn vertex_cap_is_enforced() {
        let edges: Vec<(u64, u64)> = (0..20).map(|i| (i, i + 1)).collect();
        let g = graph(&edges).with_vertex_cap(10);
        assert!(matches!(g.triangles(), Err(Error::Validation(_))));
    }
}
