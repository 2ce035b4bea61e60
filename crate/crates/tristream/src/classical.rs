//! Sampling estimator for the high-interference triangle count.
//!
//! One pass keeps a small store `S` of directed edges: when edge `uv`
//! arrives, each directed orientation is inserted with probability
//! `1/sqrt(km)` on its tail (via a pairwise-independent hash, so the tail
//! sampling is consistent across a run) times `sqrt(k/m)` (a fresh coin per
//! insertion). Every stored edge carries a counter of the updates incident
//! to its head since insertion. When `uv` closes a wedge `wu, wv` whose two
//! arms are both stored, the accumulator gains
//! `1 - (1 - 1/k)^(D[wu] + D[wv])` - exactly the triangle's
//! high-interference weight, because the counters equal the interference
//! degrees at that moment.
//!
//! Per update the sub-step order is normative: accumulate, then bump
//! counters, then insert. The run returns the accumulator `X` with
//! `E[X] = T_greater_k * sqrt(k) / m^(3/2)`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::seed::{self, RunRng, LANE_CLASSICAL};
use crate::stats;
use crate::stream::{push_stream, DirectedEdge, Edge, EdgeStream, StreamConsumer, VertexId};

/// Modulus for the pairwise-independent hash family (Mersenne prime 2^61-1).
pub const HASH_PRIME: u64 = (1 << 61) - 1;

/// Reduces `x < 2^93` modulo `2^61 - 1`.
#[inline]
fn mod_mersenne61(x: u128) -> u64 {
    const P: u128 = HASH_PRIME as u128;
    let mut r = (x & P) + (x >> 61);
    if r >= P {
        r = (r & P) + (r >> 61);
    }
    if r >= P {
        r -= P;
    }
    r as u64
}

/// Pairwise-independent vertex sampler: `g(v) = 1` iff
/// `(a*v + b) mod P < threshold`, with `threshold = floor(P / sqrt(km))`, so
/// `E[g(v)] = threshold / P` is within `1/P` of the target `1/sqrt(km)`.
#[derive(Debug, Clone, Copy)]
pub struct PairwiseHash {
    a: u64,
    b: u64,
    threshold: u64,
}

impl PairwiseHash {
    /// Draws fresh coefficients targeting selection probability
    /// `1/sqrt(km)`.
    pub fn sample(k: f64, m: usize, rng: &mut impl Rng) -> PairwiseHash {
        let target = 1.0 / (k * m as f64).sqrt();
        PairwiseHash {
            a: rng.gen_range(1..HASH_PRIME),
            b: rng.gen_range(0..HASH_PRIME),
            threshold: (HASH_PRIME as f64 * target).floor() as u64,
        }
    }

    #[inline]
    pub fn selects(&self, v: VertexId) -> bool {
        mod_mersenne61(self.a as u128 * v.0 as u128 + self.b as u128) < self.threshold
    }

    /// Realized per-vertex selection probability `threshold / P`.
    pub fn selection_probability(&self) -> f64 {
        self.threshold as f64 / HASH_PRIME as f64
    }
}

/// How directed edges enter the sample store. `Sampled` is the estimator
/// proper; the rest exist for tests and diagnostics.
#[derive(Debug, Clone)]
pub enum InsertPolicy {
    /// Tail passes the hash, then an independent coin with probability
    /// `sqrt(k/m)` keeps the edge.
    Sampled {
        hash: PairwiseHash,
        keep_probability: f64,
    },
    /// Keep every directed edge (turns `X` into the exact weight sum).
    AlwaysInsert,
    /// Keep nothing.
    NeverInsert,
    /// Keep exactly the listed `(tail, head)` pairs.
    ForceSet(Vec<DirectedEdge>),
}

impl InsertPolicy {
    pub fn sampled(k: f64, m: usize, rng: &mut impl Rng) -> InsertPolicy {
        InsertPolicy::Sampled {
            hash: PairwiseHash::sample(k, m, rng),
            keep_probability: (k / m as f64).sqrt(),
        }
    }

    fn decide(&self, tail: VertexId, head: VertexId, rng: &mut impl Rng) -> bool {
        match self {
            InsertPolicy::Sampled {
                hash,
                keep_probability,
            } => hash.selects(tail) && rng.gen::<f64>() < *keep_probability,
            InsertPolicy::AlwaysInsert => true,
            InsertPolicy::NeverInsert => false,
            InsertPolicy::ForceSet(set) => set
                .iter()
                .any(|d| d.tail == tail && d.head == head),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct StoredEdge {
    tail: VertexId,
    head: VertexId,
    /// Updates incident to `head` since this edge was inserted.
    count: u32,
}

/// Sampled directed edges with their head-degree counters.
#[derive(Debug, Clone, Default)]
pub struct SampleStore {
    entries: Vec<StoredEdge>,
}

impl SampleStore {
    /// Live entries (insertions never get evicted, so this is also the
    /// total insertion count).
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn insert(&mut self, tail: VertexId, head: VertexId) {
        self.entries.push(StoredEdge {
            tail,
            head,
            count: 0,
        });
    }

    fn bump_heads(&mut self, u: VertexId, v: VertexId) {
        for e in &mut self.entries {
            if e.head == u || e.head == v {
                e.count += 1;
            }
        }
    }

    /// Stored wedges closed by edge `uv`: apexes `w` with both `(w, u)` and
    /// `(w, v)` stored, yielding `(w, count_wu, count_wv)`.
    fn closed_wedges(&self, u: VertexId, v: VertexId) -> impl Iterator<Item = (VertexId, u32, u32)> + '_ {
        self.entries
            .iter()
            .filter(move |e| e.head == u)
            .filter_map(move |arm_u| {
                self.entries
                    .iter()
                    .find(|e| e.head == v && e.tail == arm_u.tail)
                    .map(|arm_v| (arm_u.tail, arm_u.count, arm_v.count))
            })
    }
}

/// Space usage of one classical run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpaceStats {
    /// High-water mark of live stored edges.
    pub max_live_edges: usize,
    /// Stored edges at the end of the pass (equals total insertions).
    pub final_live_edges: usize,
}

/// Per-step trace record emitted when tracing is enabled.
#[derive(Debug, Clone, Copy)]
pub struct ClassicalTraceRow {
    pub t: usize,
    pub live: usize,
    pub x: f64,
}

/// One single-pass run of the classical estimator, usable as a fan-out
/// consumer. After the pass, [`ClassicalRun::x`] holds the accumulator.
#[derive(Debug)]
pub struct ClassicalRun {
    complement_fraction: f64, // 1 - 1/k
    policy: InsertPolicy,
    rng: RunRng,
    store: SampleStore,
    x: f64,
    max_live: usize,
    trace: Option<Vec<ClassicalTraceRow>>,
}

impl ClassicalRun {
    /// Standard estimator run; `k` must lie in `[1, m]` so that both
    /// sampling probabilities are valid.
    pub fn new(m: usize, k: f64, mut rng: RunRng) -> Result<ClassicalRun> {
        check_k(k, m)?;
        let policy = InsertPolicy::sampled(k, m, &mut rng);
        Ok(Self::with_policy(m, k, policy, rng))
    }

    /// Run with an explicit insertion policy (tests, diagnostics).
    pub fn with_policy(m: usize, k: f64, policy: InsertPolicy, rng: RunRng) -> ClassicalRun {
        let _ = m;
        ClassicalRun {
            complement_fraction: 1.0 - 1.0 / k,
            policy,
            rng,
            store: SampleStore::default(),
            x: 0.0,
            max_live: 0,
            trace: None,
        }
    }

    pub fn with_trace(mut self) -> ClassicalRun {
        self.trace = Some(Vec::new());
        self
    }

    /// Accumulator value; a sum of per-triangle terms in `[0, 1)`.
    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn space_stats(&self) -> SpaceStats {
        SpaceStats {
            max_live_edges: self.max_live,
            final_live_edges: self.store.len(),
        }
    }

    pub fn store(&self) -> &SampleStore {
        &self.store
    }

    pub fn trace(&self) -> Option<&[ClassicalTraceRow]> {
        self.trace.as_deref()
    }
}

fn check_k(k: f64, m: usize) -> Result<()> {
    if !(1.0..=m as f64).contains(&k) {
        return Err(Error::Param(format!("k must lie in [1, m={m}], got {k}")));
    }
    Ok(())
}

impl StreamConsumer for ClassicalRun {
    fn on_update(&mut self, t: usize, edge: Edge) -> Result<()> {
        let (u, v) = edge.endpoints();

        // 1. Accumulate the weight of every stored wedge this edge closes;
        //    at this moment each arm's counter equals its interference
        //    degree (the closing update itself is not yet counted).
        for (_, count_u, count_v) in self.store.closed_wedges(u, v) {
            self.x += 1.0 - self.complement_fraction.powi((count_u + count_v) as i32);
        }

        // 2. Bump counters of stored edges headed at u or v.
        self.store.bump_heads(u, v);

        // 3. Insert the fresh orientations, counters starting at zero.
        if self.policy.decide(u, v, &mut self.rng) {
            self.store.insert(u, v);
        }
        if self.policy.decide(v, u, &mut self.rng) {
            self.store.insert(v, u);
        }
        self.max_live = self.max_live.max(self.store.len());

        if let Some(trace) = &mut self.trace {
            trace.push(ClassicalTraceRow {
                t,
                live: self.store.len(),
                x: self.x,
            });
        }
        Ok(())
    }
}

/// Runs one classical pass and returns the raw accumulator `X`.
pub fn run_classical(stream: &EdgeStream, k: f64, rng: RunRng) -> Result<f64> {
    let mut run = ClassicalRun::new(stream.m(), k, rng)?;
    push_stream(stream, &mut [&mut run])?;
    Ok(run.x())
}

/// Unbiased estimate of the high-interference triangle count:
/// `m^(3/2) / sqrt(k)` times the mean of `X` over `copies` independent runs,
/// delivered in one fan-out pass.
pub fn estimate_t_greater(stream: &EdgeStream, k: f64, copies: usize, seed: u64) -> Result<f64> {
    if copies == 0 {
        return Err(Error::Param("copies must be >= 1".into()));
    }
    let mut runs = Vec::with_capacity(copies);
    for i in 0..copies {
        runs.push(ClassicalRun::new(
            stream.m(),
            k,
            seed::rng_for(seed, LANE_CLASSICAL, i as u64),
        )?);
    }
    let mut consumers: Vec<&mut dyn StreamConsumer> = runs
        .iter_mut()
        .map(|r| r as &mut dyn StreamConsumer)
        .collect();
    push_stream(stream, &mut consumers)?;
    let xs: Vec<f64> = runs.iter().map(|r| r.x()).collect();
    let scale = (stream.m() as f64).powf(1.5) / k.sqrt();
    Ok(scale * stats::mean(&xs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use rand::SeedableRng;

    fn stream_of(pairs: &[(u32, u32)]) -> EdgeStream {
        let edges = pairs.iter().map(|&(a, b)| Edge::of(a, b)).collect();
        EdgeStream::from_edges(edges, None).unwrap()
    }

    fn forced(pairs: &[(u32, u32)]) -> InsertPolicy {
        InsertPolicy::ForceSet(
            pairs
                .iter()
                .map(|&(t, h)| DirectedEdge::new(VertexId(t), VertexId(h)))
                .collect(),
        )
    }

    fn run_with_policy(stream: &EdgeStream, k: f64, policy: InsertPolicy) -> ClassicalRun {
        let mut run =
            ClassicalRun::with_policy(stream.m(), k, policy, RunRng::seed_from_u64(0));
        push_stream(stream, &mut [&mut run]).unwrap();
        run
    }

    #[test]
    fn zero_degree_triangle_contributes_nothing() {
        let stream = stream_of(&[(0, 1), (0, 2), (1, 2)]);
        let run = run_with_policy(&stream, 2.0, forced(&[(0, 1), (0, 2)]));
        assert_eq!(run.x(), 0.0);
    }

    #[test]
    fn counter_matches_interference_degree() {
        // Edge 23 bumps the counter of stored edge (0, 2) before the close.
        let stream = stream_of(&[(0, 1), (0, 2), (2, 3), (1, 2)]);
        let run = run_with_policy(&stream, 2.0, forced(&[(0, 1), (0, 2)]));
        assert!((run.x() - 0.5).abs() < 1e-12);
        let expected = oracle::stats(&stream, 2.0).unwrap().t_greater_k;
        assert!((run.x() - expected).abs() < 1e-12);
    }

    #[test]
    fn never_insert_keeps_nothing() {
        let stream = stream_of(&[(0, 1), (0, 2), (1, 2)]);
        let run = run_with_policy(&stream, 2.0, InsertPolicy::NeverInsert);
        assert_eq!(run.x(), 0.0);
        assert_eq!(
            run.space_stats(),
            SpaceStats {
                max_live_edges: 0,
                final_live_edges: 0
            }
        );
    }

    #[test]
    fn always_insert_fills_store_and_recovers_exact_weight_sum() {
        // With every edge kept, each triangle is detected at its closing
        // edge with counters equal to the oracle's interference degrees, so
        // X equals T_greater_k exactly.
        let streams = [
            stream_of(&[(0, 1), (0, 2), (2, 3), (1, 2)]),
            crate::generators::quantum_hard(3, 5, 0).unwrap(),
            crate::generators::classical_hard(2, 5, 2, 1, true, false, 0).unwrap(),
            crate::generators::random(12, 30, 5).unwrap(),
            crate::generators::random(8, 24, 9).unwrap(),
        ];
        for stream in &streams {
            for k in [1.0, 2.0, 4.5, stream.m() as f64] {
                let run = run_with_policy(stream, k, InsertPolicy::AlwaysInsert);
                let expected = oracle::stats(stream, k).unwrap().t_greater_k;
                assert!(
                    (run.x() - expected).abs() < 1e-9,
                    "X={} oracle={} (m={}, k={})",
                    run.x(),
                    expected,
                    stream.m(),
                    k
                );
                assert_eq!(run.space_stats().max_live_edges, 2 * stream.m());
            }
        }
    }

    #[test]
    fn x_is_monotone_during_pass() {
        let stream = crate::generators::random(10, 30, 3).unwrap();
        let mut run = ClassicalRun::with_policy(
            stream.m(),
            2.0,
            InsertPolicy::AlwaysInsert,
            RunRng::seed_from_u64(0),
        )
        .with_trace();
        push_stream(&stream, &mut [&mut run]).unwrap();
        let trace = run.trace().unwrap();
        assert_eq!(trace.len(), stream.m());
        for pair in trace.windows(2) {
            assert!(pair[1].x >= pair[0].x);
        }
    }

    #[test]
    fn k_out_of_range_rejected() {
        let stream = stream_of(&[(0, 1), (0, 2), (1, 2)]);
        assert!(run_classical(&stream, 0.5, RunRng::seed_from_u64(0)).is_err());
        assert!(run_classical(&stream, 4.0, RunRng::seed_from_u64(0)).is_err());
        assert!(run_classical(&stream, 3.0, RunRng::seed_from_u64(0)).is_ok());
    }

    #[test]
    fn unbiased_on_split_triangle() {
        // Oracle T_greater = 0.5 on [01, 02, 23, 12] at k = 2.
        let stream = stream_of(&[(0, 1), (0, 2), (2, 3), (1, 2)]);
        let k = 2.0;
        let copies = 60_000;
        let mut xs = Vec::with_capacity(copies);
        for i in 0..copies {
            let x = run_classical(&stream, k, seed::rng_for(21, LANE_CLASSICAL, i as u64)).unwrap();
            xs.push(x);
        }
        let scale = (stream.m() as f64).powf(1.5) / k.sqrt();
        let scaled: Vec<f64> = xs.iter().map(|x| x * scale).collect();
        let mean = stats::mean(&scaled);
        let se = stats::standard_error(&scaled);
        assert!(
            (mean - 0.5).abs() <= 3.0 * se,
            "mean {mean} not within 3 se ({se}) of 0.5"
        );
    }

    #[test]
    fn estimator_mean_scale() {
        let stream = stream_of(&[(0, 1), (0, 2), (2, 3), (1, 2)]);
        let est = estimate_t_greater(&stream, 2.0, 5000, 3).unwrap();
        // Loose sanity band: the unit-level Monte Carlo above pins the mean.
        assert!(est >= 0.0 && est < 4.0, "estimate {est} out of band");
    }

    #[test]
    fn hash_threshold_targets_inverse_sqrt_km() {
        let mut rng = RunRng::seed_from_u64(1);
        for (k, m) in [(1.0, 4), (2.0, 50), (7.5, 1000)] {
            let hash = PairwiseHash::sample(k, m, &mut rng);
            let target = 1.0 / (k * m as f64).sqrt();
            let realized = hash.selection_probability();
            assert!(realized <= target + 1e-15);
            assert!(realized >= target - 1.0 / HASH_PRIME as f64 - 1e-15);
        }
    }

    #[test]
    fn hash_pairs_select_independently() {
        // Empirical P(g(u) = 1 and g(v) = 1) over fresh hash draws should
        // match p^2 within 3 sigma.
        let mut rng = RunRng::seed_from_u64(2);
        let (k, m) = (1.0, 16.0); // p = 1/4
        let p = 1.0 / (k * m as f64).sqrt();
        let trials = 40_000;
        for (u, v) in [(0u32, 1u32), (3, 250), (1000, 1001)] {
            let mut both = 0usize;
            for _ in 0..trials {
                let hash = PairwiseHash::sample(k, m as usize, &mut rng);
                if hash.selects(VertexId(u)) && hash.selects(VertexId(v)) {
                    both += 1;
                }
            }
            let observed = both as f64 / trials as f64;
            let expected = p * p;
            let sigma = (expected * (1.0 - expected) / trials as f64).sqrt();
            assert!(
                (observed - expected).abs() <= 3.0 * sigma,
                "pair ({u},{v}): observed {observed}, expected {expected}"
            );
        }
    }

    #[test]
    fn mersenne_reduction_matches_u128_modulus() {
        let mut rng = RunRng::seed_from_u64(3);
        for _ in 0..10_000 {
            let x: u128 = (rng.gen::<u64>() as u128) << 29 ^ rng.gen::<u64>() as u128;
            assert_eq!(mod_mersenne61(x) as u128, x % HASH_PRIME as u128);
        }
    }
}
