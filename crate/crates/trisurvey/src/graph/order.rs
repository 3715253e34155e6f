//! The degree-then-hash total order on vertices.

use std::collections::HashMap;

use super::VertexId;

/// Seedless 64-bit avalanche mix (splitmix64 finalizer). Used both for the
/// degree-order tie break and for vertex-to-rank placement.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Sort key realizing the order: degree first, hash tie break, raw id as the
/// final fallback so the order is total even under hash collisions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct OrderKey {
    pub degree: u64,
    pub hash: u64,
    pub id: u64,
}

pub fn order_key(v: VertexId, degrees: &HashMap<VertexId, u64>) -> OrderKey {
    OrderKey {
        degree: degrees.get(&v).copied().unwrap_or(0),
        hash: splitmix64(v.0),
        id: v.0,
    }
}

/// True iff `u` precedes `v` in the degree order.
pub fn degree_order_less(u: VertexId, v: VertexId, degrees: &HashMap<VertexId, u64>) -> bool {
    order_key(u, degrees) < order_key(v, degrees)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn degs(pairs: &[(u64, u64)]) -> HashMap<VertexId, u64> {
        pairs.iter().map(|&(v, d)| (VertexId(v), d)).collect()
    }

    #[test]
    fn lower_degree_comes_first() {
        let d = degs(&[(1, 2), (2, 5)]);
        assert!(degree_order_less(VertexId(1), VertexId(2), &d));
        assert!(!degree_order_less(VertexId(2), VertexId(1), &d));
    }

    #[test]
    fn equal_degree_breaks_on_hash() {
        let d = degs(&[(1, 3), (2, 3)]);
        let expected = splitmix64(1) < splitmix64(2);
        assert_eq!(degree_order_less(VertexId(1), VertexId(2), &d), expected);
    }

    proptest! {
        #[test]
        fn antisymmetric_total_order(u in 0u64..1000, v in 0u64..1000, du in 0u64..10, dv in 0u64..10) {
            let d = degs(&[(u, du), (v, dv)]);
            let uv = degree_order_less(VertexId(u), VertexId(v), &d);
            let vu = degree_order_less(VertexId(v), VertexId(u), &d);
            if u == v {
                prop_assert!(!uv && !vu);
            } else {
                prop_assert!(uv ^ vu);
            }
        }
    }
}
