//! Synthetic graph generators for tests and benchmarks.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::VertexId;

/// R-MAT generator parameters. Defaults follow the Graph500 quadrant
/// probabilities (0.57, 0.19, 0.19, 0.05) with edge factor 16.
#[derive(Debug, Clone)]
pub struct RmatConfig {
    pub scale: u32,
    pub edge_factor: u64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub seed: u64,
}

impl RmatConfig {
    pub fn new(scale: u32, seed: u64) -> Self {
        RmatConfig {
            scale,
            edge_factor: 16,
            a: 0.57,
            b: 0.19,
            c: 0.19,
            seed,
        }
    }

    /// Probability of the fourth quadrant.
    pub fn d(&self) -> f64 {
        1.0 - self.a - self.b - self.c
    }
}

/// Sample `edge_factor * 2^scale` raw undirected edges over `2^scale`
/// vertices. Deterministic for a fixed seed; output may contain duplicates
/// and self-loops, which cleaning removes.
pub fn rmat_edges(cfg: &RmatConfig) -> Vec<(VertexId, VertexId)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let samples = cfg.edge_factor << cfg.scale;
    let mut edges = Vec::with_capacity(samples as usize);
    for _ in 0..samples {
        let (mut u, mut v) = (0u64, 0u64);
        for _ in 0..cfg.scale {
            u <<= 1;
            v <<= 1;
            let roll: f64 = rng.gen();
            if roll < cfg.a {
                // top-left: neither bit set
            } else if roll < cfg.a + cfg.b {
                v |= 1;
            } else if roll < cfg.a + cfg.b + cfg.c {
                u |= 1;
            } else {
                u |= 1;
                v |= 1;
            }
        }
        edges.push((VertexId(u), VertexId(v)));
    }
    edges
}

/// Erdős–Rényi G(n, p) edge list, deterministic for a fixed seed.
pub fn gnp_edges(n: u64, p: f64, seed: u64) -> Vec<(VertexId, VertexId)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen_bool(p) {
                edges.push((VertexId(i), VertexId(j)));
            }
        }
    }
    edges
}
