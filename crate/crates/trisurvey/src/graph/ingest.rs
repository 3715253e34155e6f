//! Edge-list ingestion and cleaning.
//!
//! Input format: UTF-8 text, one edge per line, whitespace separated as
//! `u v [edge_meta]`; lines starting with `#` are skipped. Vertex ids are
//! parsed as unsigned integers when possible, otherwise every id in the file
//! is dictionary-encoded as a string. Metadata parses as integer, else float,
//! else text.

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::error::{Error, Result};
use crate::meta::MetaValue;

use super::VertexId;

#[derive(Debug, Clone, Copy)]
pub struct IngestOptions {
    /// Collapse parallel edges keeping the minimum (earliest) numeric meta
    /// instead of the first-seen edge.
    pub dedup_keep_min_meta: bool,
    pub drop_self_loops: bool,
}

impl Default for IngestOptions {
    fn default() -> Self {
        IngestOptions {
            dedup_keep_min_meta: false,
            drop_self_loops: true,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct IngestStats {
    pub lines_read: u64,
    pub raw_edges: u64,
    pub self_loops_dropped: u64,
    pub duplicates_collapsed: u64,
}

/// A cleaned, symmetrized, simple undirected graph with metadata tables.
/// Edges are stored once with endpoints in ascending id order.
#[derive(Debug, Clone, Default)]
pub struct CleanGraph {
    pub edges: Vec<(VertexId, VertexId, MetaValue)>,
    pub vertex_meta: HashMap<VertexId, MetaValue>,
    pub degrees: HashMap<VertexId, u64>,
    /// Dictionary for string-id inputs: `id_names[v]` is vertex `v`'s name.
    pub id_names: Option<Vec<String>>,
    pub stats: IngestStats,
}

impl CleanGraph {
    /// Clean a raw undirected edge multiset: symmetrize, drop self-loops,
    /// collapse parallel edges per the dedup policy, and compute degrees.
    pub fn from_raw(
        raw: Vec<(VertexId, VertexId, MetaValue)>,
        vertex_meta: HashMap<VertexId, MetaValue>,
        opts: IngestOptions,
    ) -> Result<CleanGraph> {
        let mut stats = IngestStats {
            raw_edges: raw.len() as u64,
            ..IngestStats::default()
        };
        let mut dedup: BTreeMap<(VertexId, VertexId), MetaValue> = BTreeMap::new();
        for (u, v, meta) in raw {
            if u == v {
                if opts.drop_self_loops {
                    stats.self_loops_dropped += 1;
                    continue;
                }
                return Err(Error::Validation(format!(
                    "self-loop at vertex {u} (enable drop_self_loops to discard)"
                )));
            }
            let key = (u.min(v), u.max(v));
            match dedup.get_mut(&key) {
                None => {
                    dedup.insert(key, meta);
                }
                Some(existing) => {
                    stats.duplicates_collapsed += 1;
                    if opts.dedup_keep_min_meta {
                        let old = existing.as_f64().ok_or_else(|| {
                            Error::Validation(format!(
                                "non-numeric metadata on duplicate edge ({}, {}) under min-meta dedup",
                                key.0, key.1
                            ))
                        })?;
                        let new = meta.as_f64().ok_or_else(|| {
                            Error::Validation(format!(
                                "non-numeric metadata on duplicate edge ({}, {}) under min-meta dedup",
                                key.0, key.1
                            ))
                        })?;
                        if new < old {
                            *existing = meta;
                        }
                    }
                    // else: first seen wins
                }
            }
        }
        let mut degrees: HashMap<VertexId, u64> = HashMap::new();
        let mut edges = Vec::with_capacity(dedup.len());
        for ((u, v), meta) in dedup {
            *degrees.entry(u).or_insert(0) += 1;
            *degrees.entry(v).or_insert(0) += 1;
            edges.push((u, v, meta));
        }
        // vertices mentioned only in the metadata table still count as known
        for v in vertex_meta.keys() {
            degrees.entry(*v).or_insert(0);
        }
        Ok(CleanGraph {
            edges,
            vertex_meta,
            degrees,
            id_names: None,
            stats,
        })
    }

    pub fn vertex_count(&self) -> u64 {
        self.degrees.len() as u64
    }

    pub fn undirected_edge_count(&self) -> u64 {
        self.edges.len() as u64
    }

    /// Directed-after-symmetrization edge count (nonzeros of the symmetric
    /// adjacency matrix).
    pub fn directed_edge_count(&self) -> u64 {
        2 * self.undirected_edge_count()
    }

    pub fn max_degree(&self) -> u64 {
        self.degrees.values().copied().max().unwrap_or(0)
    }

    pub fn meta_of(&self, v: VertexId) -> MetaValue {
        self.vertex_meta.get(&v).cloned().unwrap_or(MetaValue::None)
    }

    /// Attach vertex metadata computed from the id (test/generator helper).
    pub fn with_vertex_meta(mut self, f: impl Fn(VertexId) -> MetaValue) -> CleanGraph {
        let ids: Vec<VertexId> = self.degrees.keys().copied().collect();
        for v in ids {
            self.vertex_meta.insert(v, f(v));
        }
        self
    }

    /// Replace all edge metadata with values computed from the endpoints
    /// (test/generator helper).
    pub fn with_edge_meta(mut self, f: impl Fn(VertexId, VertexId) -> MetaValue) -> CleanGraph {
        for (u, v, meta) in &mut self.edges {
            *meta = f(*u, *v);
        }
        self
    }
}

enum IdMode {
    Undecided,
    Numeric,
    Dictionary(HashMap<String, VertexId>, Vec<String>),
}

impl IdMode {
    fn resolve(&mut self, token: &str, line: usize) -> Result<VertexId> {
        loop {
            match self {
                IdMode::Undecided => {
                    *self = if token.parse::<u64>().is_ok() {
                        IdMode::Numeric
                    } else {
                        IdMode::Dictionary(HashMap::new(), Vec::new())
                    };
                }
                IdMode::Numeric => {
                    return token.parse::<u64>().map(VertexId).map_err(|_| Error::Parse {
                        line,
                        msg: format!("invalid vertex id {token:?} in numeric-id input"),
                    });
                }
                IdMode::Dictionary(index, names) => {
                    if let Some(&id) = index.get(token) {
                        return Ok(id);
                    }
                    let id = VertexId(names.len() as u64);
                    index.insert(token.to_string(), id);
                    names.push(token.to_string());
                    return Ok(id);
                }
            }
        }
    }
}

/// Ingest an edge-list file plus an optional vertex-metadata file.
pub fn ingest_path(
    edge_path: &Path,
    vertex_meta_path: Option<&Path>,
    opts: IngestOptions,
) -> Result<CleanGraph> {
    let edges = BufReader::new(File::open(edge_path)?);
    let vmeta = vertex_meta_path
        .map(|p| File::open(p).map(BufReader::new))
        .transpose()?;
    ingest_reader(edges, vmeta, opts)
}

/// Ingest from readers; see the module docs for the line format.
pub fn ingest_reader<R: BufRead, M: BufRead>(
    edges: R,
    vertex_meta: Option<M>,
    opts: IngestOptions,
) -> Result<CleanGraph> {
    let mut mode = IdMode::Undecided;
    let mut raw = Vec::new();
    let mut lines_read = 0u64;

    for (lineno, line) in edges.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line?;
        lines_read += 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let u_tok = tokens.next().expect("nonempty line has a token");
        let v_tok = tokens.next().ok_or_else(|| Error::Parse {
            line: lineno,
            msg: "expected `u v [edge_meta]`".into(),
        })?;
        let u = mode.resolve(u_tok, lineno)?;
        let v = mode.resolve(v_tok, lineno)?;
        let rest = tokens.collect::<Vec<_>>().join(" ");
        let meta = if rest.is_empty() {
            MetaValue::None
        } else {
            MetaValue::parse(&rest)
        };
        raw.push((u, v, meta));
    }

    let mut vmeta_table = HashMap::new();
    if let Some(reader) = vertex_meta {
        for (lineno, line) in reader.lines().enumerate() {
            let lineno = lineno + 1;
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut tokens = trimmed.split_whitespace();
            let v_tok = tokens.next().expect("nonempty line has a token");
            let v = mode.resolve(v_tok, lineno)?;
            let rest = tokens.collect::<Vec<_>>().join(" ");
            if rest.is_empty() {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "expected `v vertex_meta`".into(),
                });
            }
            vmeta_table.insert(v, MetaValue::parse(&rest));
        }
    }

    let mut clean = CleanGraph::from_raw(raw, vmeta_table, opts)?;
    clean.stats.lines_read = lines_read;
    if let IdMode::Dictionary(_, names) = mode {
        clean.id_names = Some(names);
    }
    Ok(clean)
}
