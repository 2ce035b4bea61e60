//! Constructors for adversarial hard instances and random baselines, each
//! with known ground truth attached as a stream header.
//!
//! The "classical-hard" family is stars (hubs with many spokes) followed by a
//! perfect matching that either closes triangles inside each hub or touches
//! only fresh vertices. The "quantum-hard" family is a fan of wedges through
//! a single center whose closing edges arrive only after a long run of noise
//! edges, making every triangle's interference degree at least `noise`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::oracle;
use crate::seed::{self, LANE_GEN};
use crate::stream::{Edge, EdgeStream, TruthHeader, VertexId};

/// Parameters for one generated instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenSpec {
    ClassicalHard {
        hubs: u32,
        spokes_per_hub: u32,
        tris_per_hub: u32,
        filler_edges: u32,
        planted: bool,
        /// Shuffle arrival order inside each phase (phases stay ordered).
        shuffle_within_phases: bool,
        seed: u64,
    },
    QuantumHard {
        triangles: u32,
        noise: u32,
        seed: u64,
    },
    Random {
        n: u32,
        m: u64,
        seed: u64,
    },
}

pub fn generate(spec: &GenSpec) -> Result<EdgeStream> {
    match *spec {
        GenSpec::ClassicalHard {
            hubs,
            spokes_per_hub,
            tris_per_hub,
            filler_edges,
            planted,
            shuffle_within_phases,
            seed,
        } => classical_hard(
            hubs,
            spokes_per_hub,
            tris_per_hub,
            filler_edges,
            planted,
            shuffle_within_phases,
            seed,
        ),
        GenSpec::QuantumHard {
            triangles,
            noise,
            seed,
        } => quantum_hard(triangles, noise, seed),
        GenSpec::Random { n, m, seed } => random(n, m, seed),
    }
}

/// Stars followed by a disjoint matching. When `planted`, each hub gets
/// `tris_per_hub` matching edges joining two of its spokes (spokes used at
/// most once), so ground truth is `T = hubs * tris_per_hub`, `delta_E = 1`,
/// `delta_V = tris_per_hub`; otherwise all matching edges land on fresh
/// vertices and `T = 0`.
#[allow(clippy::too_many_arguments)]
pub fn classical_hard(
    hubs: u32,
    spokes_per_hub: u32,
    tris_per_hub: u32,
    filler_edges: u32,
    planted: bool,
    shuffle_within_phases: bool,
    seed: u64,
) -> Result<EdgeStream> {
    if hubs < 1 || tris_per_hub < 1 {
        return Err(Error::Param(
            "classical-hard needs hubs >= 1 and tris_per_hub >= 1".into(),
        ));
    }
    if spokes_per_hub < 2 * tris_per_hub {
        return Err(Error::Param(format!(
            "classical-hard needs spokes_per_hub >= 2 * tris_per_hub ({spokes_per_hub} < {})",
            2 * tris_per_hub
        )));
    }
    let hub_vertices = hubs as u64;
    let spoke_vertices = hubs as u64 * spokes_per_hub as u64;
    let matching_fresh = if planted {
        0
    } else {
        2 * hubs as u64 * tris_per_hub as u64
    };
    let total_vertices = hub_vertices + spoke_vertices + matching_fresh + 2 * filler_edges as u64;
    if total_vertices > u32::MAX as u64 {
        return Err(Error::Param("vertex budget exceeds u32".into()));
    }

    let hub = |i: u32| VertexId(i);
    let spoke = |i: u32, j: u32| VertexId(hubs + i * spokes_per_hub + j);
    let mut fresh = hubs + hubs * spokes_per_hub;
    let mut next_fresh = || {
        let v = VertexId(fresh);
        fresh += 1;
        v
    };

    let mut stars = Vec::new();
    for i in 0..hubs {
        for j in 0..spokes_per_hub {
            stars.push(Edge::new(hub(i), spoke(i, j))?);
        }
    }

    let mut matching = Vec::new();
    for i in 0..hubs {
        for r in 0..tris_per_hub {
            let e = if planted {
                Edge::new(spoke(i, 2 * r), spoke(i, 2 * r + 1))?
            } else {
                Edge::new(next_fresh(), next_fresh())?
            };
            matching.push(e);
        }
    }
    for _ in 0..filler_edges {
        matching.push(Edge::new(next_fresh(), next_fresh())?);
    }

    if shuffle_within_phases {
        let mut rng = seed::rng_for(seed, LANE_GEN, 0);
        shuffle(&mut stars, &mut rng);
        shuffle(&mut matching, &mut rng);
    }

    let mut edges = stars;
    edges.extend(matching);
    let triangles = if planted {
        hubs as u64 * tris_per_hub as u64
    } else {
        0
    };
    Ok(EdgeStream::from_edges(edges, None)?.with_truth(TruthHeader {
        triangles,
        delta_e: 1,
        delta_v: if planted { tris_per_hub as u64 } else { 0 },
    }))
}

/// Wedges through a shared center `u`, then `noise` edges incident to `u`,
/// then the closing edges. Every one of the `triangles` triangles has
/// interference degree `triangles + noise - 1`.
pub fn quantum_hard(triangles: u32, noise: u32, seed: u64) -> Result<EdgeStream> {
    let _ = seed; // arrival order is fixed for this family
    if triangles < 1 {
        return Err(Error::Param("quantum-hard needs triangles >= 1".into()));
    }
    let t = triangles as u64;
    if 2 * t + noise as u64 + 1 > u32::MAX as u64 {
        return Err(Error::Param("vertex budget exceeds u32".into()));
    }
    let center = VertexId(0);
    let wedge_mid = |i: u32| VertexId(1 + i);
    let wedge_end = |i: u32| VertexId(1 + triangles + i);
    let noise_vertex = |j: u32| VertexId(1 + 2 * triangles + j);

    let mut edges = Vec::with_capacity(2 * triangles as usize + noise as usize + triangles as usize);
    for i in 0..triangles {
        edges.push(Edge::new(center, wedge_mid(i))?);
        edges.push(Edge::new(wedge_mid(i), wedge_end(i))?);
    }
    for j in 0..noise {
        edges.push(Edge::new(center, noise_vertex(j))?);
    }
    for i in 0..triangles {
        edges.push(Edge::new(center, wedge_end(i))?);
    }
    Ok(EdgeStream::from_edges(edges, None)?.with_truth(TruthHeader {
        triangles: t,
        delta_e: 1,
        delta_v: t,
    }))
}

/// `m` distinct edges sampled uniformly without replacement from the `n`-vertex
/// complete graph, in uniformly random arrival order. Ground truth comes from
/// the oracle.
pub fn random(n: u32, m: u64, seed: u64) -> Result<EdgeStream> {
    if n < 2 {
        return Err(Error::Param("random stream needs n >= 2".into()));
    }
    let max_edges = n as u64 * (n as u64 - 1) / 2;
    if m > max_edges {
        return Err(Error::Param(format!(
            "m={m} exceeds maximum {max_edges} for n={n}"
        )));
    }
    if m == 0 {
        return Err(Error::EmptyStream);
    }
    let mut rng = seed::rng_for(seed, LANE_GEN, 1);
    let mut chosen = std::collections::HashSet::with_capacity(m as usize);
    let mut edges = Vec::with_capacity(m as usize);
    while edges.len() < m as usize {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a == b {
            continue;
        }
        let e = Edge::new(VertexId(a), VertexId(b))?;
        if chosen.insert(e) {
            edges.push(e);
        }
    }
    shuffle(&mut edges, &mut rng);

    let stream = EdgeStream::from_edges(edges, Some(n))?;
    let truth = oracle::stats(&stream, 1.0)?;
    Ok(stream.with_truth(TruthHeader {
        triangles: truth.triangles,
        delta_e: truth.delta_e,
        delta_v: truth.delta_v,
    }))
}

fn shuffle<T>(items: &mut [T], rng: &mut impl Rng) {
    for i in (1..items.len()).rev() {
        items.swap(i, rng.gen_range(0..=i));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    #[test]
    fn classical_hard_planted_ground_truth() {
        let s = classical_hard(2, 4, 2, 0, true, false, 0).unwrap();
        assert_eq!(s.m(), 2 * 4 + 2 * 2);
        let stats = oracle::stats(&s, 2.0).unwrap();
        assert_eq!(stats.triangles, 4);
        assert_eq!(stats.delta_e, 1);
        assert_eq!(stats.delta_v, 2);
        let truth = s.truth().unwrap();
        assert_eq!(truth.triangles, 4);
        assert_eq!(truth.delta_e, 1);
        assert_eq!(truth.delta_v, 2);
    }

    #[test]
    fn classical_hard_unplanted_is_triangle_free() {
        let s = classical_hard(2, 4, 2, 0, false, false, 0).unwrap();
        assert_eq!(oracle::stats(&s, 2.0).unwrap().triangles, 0);
        assert_eq!(s.truth().unwrap().triangles, 0);
    }

    #[test]
    fn classical_hard_infeasible_params() {
        assert!(classical_hard(1, 1, 1, 0, true, false, 0).is_err());
        assert!(classical_hard(0, 4, 1, 0, true, false, 0).is_err());
    }

    #[test]
    fn classical_hard_planted_triangles_have_zero_degree() {
        // Spokes touch nothing between their star edge and their matching
        // edge, so every planted triangle is fully low-interference.
        let s = classical_hard(3, 6, 3, 2, true, false, 0).unwrap();
        for tri in oracle::enumerate_triangles(&s) {
            assert_eq!(tri.degree_sum(), 0);
        }
        let stats = oracle::stats(&s, 7.0).unwrap();
        assert_eq!(stats.t_less_k, 9.0);
        assert_eq!(stats.t_greater_k, 0.0);
    }

    #[test]
    fn quantum_hard_single_triangle() {
        let s = quantum_hard(1, 0, 0).unwrap();
        assert_eq!(
            s.edges(),
            &[Edge::of(0, 1), Edge::of(1, 2), Edge::of(0, 2)]
        );
        let tris = oracle::enumerate_triangles(&s);
        assert_eq!(tris.len(), 1);
        assert_eq!(tris[0].degree_sum(), 0);
    }

    #[test]
    fn quantum_hard_degree_decomposition() {
        // With T=2, noise=3: between edge (w1,u) and the close (u,v1) the
        // edges incident to u are (u,w2) and the three noise edges.
        let s = quantum_hard(2, 3, 0).unwrap();
        let tris = oracle::enumerate_triangles(&s);
        assert_eq!(tris.len(), 2);
        for tri in &tris {
            assert_eq!(tri.degree_sum(), 4);
        }
        let first = tris
            .iter()
            .find(|t| t.v == VertexId(0))
            .expect("triangle through w1");
        assert_eq!((first.d1, first.d2), (4, 0));
    }

    #[test]
    fn quantum_hard_t_less_matches_closed_form() {
        let s = quantum_hard(1, 5, 0).unwrap();
        let stats = oracle::stats(&s, 2.0).unwrap();
        assert!((stats.t_less_k - 0.03125).abs() < 1e-12);
    }

    #[test]
    fn quantum_hard_degree_at_least_noise() {
        for (t, noise) in [(1, 0), (1, 7), (3, 2), (5, 16)] {
            let s = quantum_hard(t, noise, 0).unwrap();
            let tris = oracle::enumerate_triangles(&s);
            assert_eq!(tris.len(), t as usize);
            for tri in tris {
                assert!(tri.degree_sum() >= noise);
            }
        }
    }

    #[test]
    fn random_three_vertices_is_the_triangle() {
        for seed in 0..5 {
            let s = random(3, 3, seed).unwrap();
            assert_eq!(oracle::stats(&s, 1.0).unwrap().triangles, 1);
            assert_eq!(s.truth().unwrap().triangles, 1);
        }
    }

    #[test]
    fn random_parameter_errors() {
        assert!(matches!(random(100, 0, 0), Err(Error::EmptyStream)));
        assert!(random(10, 46, 0).is_err());
        assert!(random(10, 45, 0).is_ok());
    }

    #[test]
    fn generation_is_deterministic() {
        for spec in [
            GenSpec::ClassicalHard {
                hubs: 2,
                spokes_per_hub: 5,
                tris_per_hub: 2,
                filler_edges: 3,
                planted: true,
                shuffle_within_phases: true,
                seed: 42,
            },
            GenSpec::QuantumHard {
                triangles: 4,
                noise: 9,
                seed: 42,
            },
            GenSpec::Random {
                n: 20,
                m: 40,
                seed: 42,
            },
        ] {
            let a = generate(&spec).unwrap();
            let b = generate(&spec).unwrap();
            assert_eq!(a.to_text(), b.to_text());
        }
    }

    #[test]
    fn shuffled_phases_keep_ground_truth() {
        let s = classical_hard(3, 6, 2, 1, true, true, 9).unwrap();
        let stats = oracle::stats(&s, 2.0).unwrap();
        assert_eq!(stats.triangles, 6);
        assert_eq!(stats.delta_e, 1);
        // Star edges still precede all matching edges.
        let stars = 3 * 6;
        for (t, e) in s.updates() {
            let touches_hub = e.u().0 < 3;
            assert_eq!(touches_hub, t <= stars);
        }
    }
}
