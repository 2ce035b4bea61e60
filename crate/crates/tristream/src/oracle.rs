//! Exact brute-force triangle statistics.
//!
//! For a triangle whose edges arrive as `e1 = uv`, `e2 = uw`, `e3 = vw` (in
//! arrival order, so `u` is the vertex shared by the first two edges), the
//! interference degrees are
//!
//! - `d1`: edges incident to `v` arriving strictly between `e1` and `e3`,
//! - `d2`: edges incident to `w` arriving strictly between `e2` and `e3`,
//!
//! and the triangle's low-interference weight at parameter `k >= 1` is
//! `(1 - 1/k)^(d1 + d2)`, with the convention `0^0 = 1` so the `k = 1`,
//! degree-0 case is counted. Summing the weights gives `T_less_k`; the
//! complement `T - T_less_k` is `T_greater_k`.
//!
//! The oracle may hold the whole graph: it is desk-scale only.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::stream::{EdgeStream, VertexId};

/// A triangle with its edges sorted by arrival and its interference degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct OrderedTriangle {
    /// Vertex shared by the two earliest edges (the "first vertex").
    pub u: VertexId,
    /// Other endpoint of the earliest edge.
    pub v: VertexId,
    /// Other endpoint of the middle edge.
    pub w: VertexId,
    /// Edges incident to `v` strictly between the first and last edge.
    pub d1: u32,
    /// Edges incident to `w` strictly between the middle and last edge.
    pub d2: u32,
}

impl OrderedTriangle {
    /// Total interference degree.
    pub fn degree_sum(&self) -> u32 {
        self.d1 + self.d2
    }

    /// Low-interference weight `(1 - 1/k)^(d1 + d2)`.
    pub fn weight_less(&self, k: f64) -> f64 {
        weight_less(k, self.degree_sum())
    }
}

/// `(1 - 1/k)^degree`, with `0^0 = 1`.
pub fn weight_less(k: f64, degree: u32) -> f64 {
    debug_assert!(k >= 1.0);
    (1.0 - 1.0 / k).powi(degree as i32)
}

/// Exact triangle statistics of a stream at parameter `k`.
#[derive(Debug, Clone, Serialize)]
pub struct TriangleStats {
    #[serde(rename = "T")]
    pub triangles: u64,
    /// Max triangles sharing one edge; 1 when the graph is triangle-free.
    #[serde(rename = "deltaE")]
    pub delta_e: u64,
    /// Max triangles sharing one vertex.
    #[serde(rename = "deltaV")]
    pub delta_v: u64,
    #[serde(rename = "k")]
    pub k: f64,
    #[serde(rename = "T_less_k")]
    pub t_less_k: f64,
    #[serde(rename = "T_greater_k")]
    pub t_greater_k: f64,
    /// Per-triangle low-interference weights.
    #[serde(skip)]
    pub t_less: BTreeMap<OrderedTriangle, f64>,
    /// Low-interference mass grouped by first vertex.
    #[serde(skip)]
    pub per_vertex_t_less: BTreeMap<VertexId, f64>,
}

/// Lists every triangle of the stream's underlying graph with arrival-ordered
/// edges and interference degrees computed by direct counting.
pub fn enumerate_triangles(stream: &EdgeStream) -> Vec<OrderedTriangle> {
    let n = stream.n() as usize;
    let mut adjacency: Vec<HashSet<u32>> = vec![HashSet::new(); n];
    // Arrival times of the edges incident to each vertex, in arrival order.
    let mut incident_times: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut arrival: std::collections::HashMap<(u32, u32), usize> =
        std::collections::HashMap::with_capacity(stream.m());

    for (t, e) in stream.updates() {
        let (u, v) = (e.u().0, e.v().0);
        adjacency[u as usize].insert(v);
        adjacency[v as usize].insert(u);
        incident_times[u as usize].push(t);
        incident_times[v as usize].push(t);
        arrival.insert((u, v), t);
    }

    // Edges incident to `x` with arrival time strictly inside (lo, hi).
    let strictly_between = |x: u32, lo: usize, hi: usize| -> u32 {
        let times = &incident_times[x as usize];
        let a = times.partition_point(|&t| t <= lo);
        let b = times.partition_point(|&t| t < hi);
        (b - a) as u32
    };

    let mut triangles = Vec::new();
    for (t_close, e) in stream.updates() {
        let (a, b) = (e.u().0, e.v().0);
        let (small, large) = if adjacency[a as usize].len() <= adjacency[b as usize].len() {
            (a, b)
        } else {
            (b, a)
        };
        for &c in &adjacency[small as usize] {
            if c == large || !adjacency[large as usize].contains(&c) {
                continue;
            }
            let t_ca = arrival[&key(c, a)];
            let t_cb = arrival[&key(c, b)];
            // Count the triangle once, at its closing edge.
            if t_close < t_ca || t_close < t_cb {
                continue;
            }
            // First vertex is the common neighbor c; order its two edges.
            let (t1, first_other, t2, second_other) = if t_ca < t_cb {
                (t_ca, a, t_cb, b)
            } else {
                (t_cb, b, t_ca, a)
            };
            triangles.push(OrderedTriangle {
                u: VertexId(c),
                v: VertexId(first_other),
                w: VertexId(second_other),
                d1: strictly_between(first_other, t1, t_close),
                d2: strictly_between(second_other, t2, t_close),
            });
        }
    }
    triangles.sort();
    triangles
}

#[inline]
fn key(a: u32, b: u32) -> (u32, u32) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Computes full triangle statistics at parameter `k >= 1`.
pub fn stats(stream: &EdgeStream, k: f64) -> Result<TriangleStats> {
    if !(k >= 1.0) {
        return Err(Error::Param(format!("k must be >= 1, got {k}")));
    }
    let triangles = enumerate_triangles(stream);

    let mut per_edge: std::collections::HashMap<(u32, u32), u64> = std::collections::HashMap::new();
    let mut per_vertex: std::collections::HashMap<u32, u64> = std::collections::HashMap::new();
    let mut t_less = BTreeMap::new();
    let mut per_vertex_t_less: BTreeMap<VertexId, f64> = BTreeMap::new();
    let mut t_less_k = 0.0;

    for tri in &triangles {
        let (u, v, w) = (tri.u.0, tri.v.0, tri.w.0);
        for e in [key(u, v), key(u, w), key(v, w)] {
            *per_edge.entry(e).or_default() += 1;
        }
        for x in [u, v, w] {
            *per_vertex.entry(x).or_default() += 1;
        }
        let weight = tri.weight_less(k);
        t_less_k += weight;
        t_less.insert(*tri, weight);
        *per_vertex_t_less.entry(tri.u).or_default() += weight;
    }

    let count = triangles.len() as u64;
    Ok(TriangleStats {
        triangles: count,
        delta_e: per_edge.values().copied().max().unwrap_or(0).max(1),
        delta_v: per_vertex.values().copied().max().unwrap_or(0),
        k,
        t_less_k,
        t_greater_k: count as f64 - t_less_k,
        t_less,
        per_vertex_t_less,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::Edge;

    fn stream_of(pairs: &[(u32, u32)]) -> EdgeStream {
        let edges = pairs.iter().map(|&(a, b)| Edge::of(a, b)).collect();
        EdgeStream::from_edges(edges, None).unwrap()
    }

    #[test]
    fn triangle_with_no_intervening_edges() {
        let tris = enumerate_triangles(&stream_of(&[(0, 1), (0, 2), (1, 2)]));
        assert_eq!(
            tris,
            vec![OrderedTriangle {
                u: VertexId(0),
                v: VertexId(1),
                w: VertexId(2),
                d1: 0,
                d2: 0,
            }]
        );
    }

    #[test]
    fn intervening_edge_counts_toward_d2() {
        // e1 = 01, e2 = 02, e3 = 12; edge 23 arrives between 02 and 12 and is
        // incident to vertex 2.
        let tris = enumerate_triangles(&stream_of(&[(0, 1), (0, 2), (2, 3), (1, 2)]));
        assert_eq!(
            tris,
            vec![OrderedTriangle {
                u: VertexId(0),
                v: VertexId(1),
                w: VertexId(2),
                d1: 0,
                d2: 1,
            }]
        );
    }

    #[test]
    fn path_has_no_triangles() {
        assert!(enumerate_triangles(&stream_of(&[(0, 1), (1, 2), (2, 3)])).is_empty());
    }

    #[test]
    fn stats_zero_exponent() {
        let s = stats(&stream_of(&[(0, 1), (0, 2), (1, 2)]), 2.0).unwrap();
        assert_eq!(s.triangles, 1);
        assert_eq!(s.t_less_k, 1.0);
        assert_eq!(s.t_greater_k, 0.0);
        assert_eq!(s.delta_e, 1);
        assert_eq!(s.delta_v, 1);
    }

    #[test]
    fn stats_split_half() {
        let s = stats(&stream_of(&[(0, 1), (0, 2), (2, 3), (1, 2)]), 2.0).unwrap();
        assert_eq!(s.triangles, 1);
        assert!((s.t_less_k - 0.5).abs() < 1e-12);
        assert!((s.t_greater_k - 0.5).abs() < 1e-12);
    }

    #[test]
    fn k_below_one_rejected() {
        assert!(stats(&stream_of(&[(0, 1)]), 0.5).is_err());
    }

    #[test]
    fn k_one_counts_only_zero_degree_triangles() {
        // Triangle 0,1,2 has degree 0; adding edge 23 before the close gives
        // the second copy positive degree.
        let s = stats(&stream_of(&[(0, 1), (0, 2), (2, 3), (1, 2)]), 1.0).unwrap();
        assert_eq!(s.t_less_k, 0.0);
        assert_eq!(s.t_greater_k, 1.0);
        let s = stats(&stream_of(&[(0, 1), (0, 2), (1, 2)]), 1.0).unwrap();
        assert_eq!(s.t_less_k, 1.0);
    }

    #[test]
    fn triangle_free_delta_e_is_one() {
        let s = stats(&stream_of(&[(0, 1), (1, 2)]), 2.0).unwrap();
        assert_eq!(s.triangles, 0);
        assert_eq!(s.delta_e, 1);
        assert_eq!(s.delta_v, 0);
    }

    #[test]
    fn shared_edge_counted_in_delta_e() {
        // Triangles {0,1,2} and {0,1,3} share edge 01.
        let s = stats(&stream_of(&[(0, 1), (0, 2), (1, 2), (0, 3), (1, 3)]), 2.0).unwrap();
        assert_eq!(s.triangles, 2);
        assert_eq!(s.delta_e, 2);
        assert_eq!(s.delta_v, 2);
    }

    #[test]
    fn per_vertex_mass_sums_to_total() {
        let s = stats(
            &stream_of(&[(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)]),
            3.0,
        )
        .unwrap();
        let total: f64 = s.per_vertex_t_less.values().sum();
        assert!((total - s.t_less_k).abs() < 1e-12);
        assert_eq!(s.t_less.len() as u64, s.triangles);
    }

    #[test]
    fn closing_edge_degree_bound() {
        // t_greater of a triangle is at most (deg(v) + deg(w)) / k where v, w
        // are the closing edge's endpoints.
        let streams = [
            vec![(0, 1), (0, 2), (2, 3), (1, 2)],
            vec![(0, 1), (0, 2), (1, 3), (2, 3), (1, 2), (0, 3)],
            vec![(4, 1), (0, 1), (0, 2), (1, 2), (0, 4), (2, 4)],
        ];
        for pairs in &streams {
            let stream = stream_of(pairs);
            let mut degree = std::collections::HashMap::new();
            for e in stream.edges() {
                *degree.entry(e.u()).or_insert(0u32) += 1;
                *degree.entry(e.v()).or_insert(0u32) += 1;
            }
            for k in [1.5, 2.0, 4.0, 10.0] {
                for tri in enumerate_triangles(&stream) {
                    let t_greater = 1.0 - tri.weight_less(k);
                    let bound = (degree[&tri.v] + degree[&tri.w]) as f64 / k;
                    assert!(
                        t_greater <= bound + 1e-12,
                        "t_greater {t_greater} exceeds ({} + {})/{k}",
                        degree[&tri.v],
                        degree[&tri.w],
                    );
                }
            }
        }
    }
}
