//! Canonical graph-stream data model: edge types, text parsing/serialization,
//! and push-based single-pass delivery to estimator consumers.
//!
//! Streams are simple (no self-loops, no duplicate edges) and insertion-only.
//! `m` is the exact stream length, not an upper bound, so that estimator
//! normalization constants are exact.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

/// Dense vertex identifier, `0 <= id < n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Undirected edge, stored with `u < v` so `Edge::new(a, b) == Edge::new(b, a)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    u: VertexId,
    v: VertexId,
}

impl Edge {
    pub fn new(a: VertexId, b: VertexId) -> Result<Edge> {
        if a == b {
            return Err(Error::SelfLoop { v: a.0, pos: 0 });
        }
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        Ok(Edge { u, v })
    }

    /// Shorthand for tests and generators.
    pub fn of(a: u32, b: u32) -> Edge {
        Edge::new(VertexId(a), VertexId(b)).expect("self-loop")
    }

    #[inline]
    pub fn u(&self) -> VertexId {
        self.u
    }

    #[inline]
    pub fn v(&self) -> VertexId {
        self.v
    }

    #[inline]
    pub fn endpoints(&self) -> (VertexId, VertexId) {
        (self.u, self.v)
    }

    #[inline]
    pub fn is_incident(&self, x: VertexId) -> bool {
        self.u == x || self.v == x
    }

    /// The endpoint that is not `x`. Panics if `x` is not an endpoint.
    pub fn other(&self, x: VertexId) -> VertexId {
        if self.u == x {
            self.v
        } else {
            debug_assert_eq!(self.v, x);
            self.u
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.u, self.v)
    }
}

/// Directed edge; `DirectedEdge::new(u, v) != DirectedEdge::new(v, u)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DirectedEdge {
    pub tail: VertexId,
    pub head: VertexId,
}

impl DirectedEdge {
    pub fn new(tail: VertexId, head: VertexId) -> DirectedEdge {
        debug_assert_ne!(tail, head);
        DirectedEdge { tail, head }
    }

    pub fn reversed(self) -> DirectedEdge {
        DirectedEdge {
            tail: self.head,
            head: self.tail,
        }
    }
}

impl fmt::Display for DirectedEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.tail, self.head)
    }
}

/// Ground-truth values carried in generated stream headers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruthHeader {
    pub triangles: u64,
    pub delta_e: u64,
    pub delta_v: u64,
}

/// Ordered sequence of distinct undirected edges; the single-pass input.
///
/// Arrival index `t` is 1-based. Immutable after construction and safe to
/// share read-only across parallel estimator copies; `passes()` counts how
/// many times the stream has been delivered via [`push_stream`].
#[derive(Debug)]
pub struct EdgeStream {
    edges: Vec<Edge>,
    n: u32,
    truth: Option<TruthHeader>,
    passes: AtomicU64,
}

impl Clone for EdgeStream {
    fn clone(&self) -> Self {
        EdgeStream {
            edges: self.edges.clone(),
            n: self.n,
            truth: self.truth,
            passes: AtomicU64::new(0),
        }
    }
}

impl PartialEq for EdgeStream {
    fn eq(&self, other: &Self) -> bool {
        self.edges == other.edges && self.n == other.n && self.truth == other.truth
    }
}
impl Eq for EdgeStream {}

impl EdgeStream {
    /// Validates distinctness and builds the stream. `declared_n`, when
    /// given, must cover every vertex id; otherwise `n = 1 + max id`.
    pub fn from_edges(edges: Vec<Edge>, declared_n: Option<u32>) -> Result<EdgeStream> {
        if edges.is_empty() {
            return Err(Error::EmptyStream);
        }
        let mut seen = std::collections::HashMap::with_capacity(edges.len());
        let mut max_id = 0u32;
        for (i, e) in edges.iter().enumerate() {
            if let Some(first) = seen.insert(*e, i + 1) {
                return Err(Error::DuplicateEdge {
                    u: e.u.0,
                    v: e.v.0,
                    first,
                    second: i + 1,
                });
            }
            max_id = max_id.max(e.v.0);
        }
        let inferred = max_id + 1;
        let n = match declared_n {
            Some(n) if n < inferred => {
                return Err(Error::Param(format!(
                    "declared n={n} but stream contains vertex id {max_id}"
                )))
            }
            Some(n) => n,
            None => inferred,
        };
        Ok(EdgeStream {
            edges,
            n,
            truth: None,
            passes: AtomicU64::new(0),
        })
    }

    pub fn with_truth(mut self, truth: TruthHeader) -> EdgeStream {
        self.truth = Some(truth);
        self
    }

    /// Number of updates in the stream.
    #[inline]
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Number of vertices.
    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn truth(&self) -> Option<&TruthHeader> {
        self.truth.as_ref()
    }

    /// Updates with their 1-based arrival index.
    pub fn updates(&self) -> impl Iterator<Item = (usize, Edge)> + '_ {
        self.edges.iter().copied().enumerate().map(|(i, e)| (i + 1, e))
    }

    /// How many single-pass deliveries have been made from this stream.
    pub fn passes(&self) -> u64 {
        self.passes.load(Ordering::Relaxed)
    }

    pub(crate) fn record_pass(&self) {
        self.passes.fetch_add(1, Ordering::Relaxed);
    }

    /// Parses the edge-list text format: '#'-comment lines, an optional
    /// "# n=<int> m=<int>" header, an optional "# truth T=.. deltaE=.. deltaV=.."
    /// header, and one "<u> <v>" edge per line.
    pub fn parse(text: &str) -> Result<EdgeStream> {
        let mut declared_n = None;
        let mut declared_m = None;
        let mut truth = None;
        let mut edges = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let lineno = lineno + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some((n, m)) = parse_size_header(comment) {
                    declared_n = Some(n);
                    declared_m = Some(m);
                } else if let Some(t) = parse_truth_header(comment) {
                    truth = Some(t);
                }
                continue;
            }
            let mut tokens = line.split_whitespace();
            let (a, b) = match (tokens.next(), tokens.next(), tokens.next()) {
                (Some(a), Some(b), None) => (a, b),
                _ => {
                    return Err(Error::Parse {
                        line: lineno,
                        reason: format!("expected two integer tokens, got {line:?}"),
                    })
                }
            };
            let a: u32 = a.parse().map_err(|_| Error::Parse {
                line: lineno,
                reason: format!("bad vertex id {a:?}"),
            })?;
            let b: u32 = b.parse().map_err(|_| Error::Parse {
                line: lineno,
                reason: format!("bad vertex id {b:?}"),
            })?;
            if a == b {
                return Err(Error::SelfLoop {
                    v: a,
                    pos: edges.len() + 1,
                });
            }
            edges.push(Edge::new(VertexId(a), VertexId(b)).expect("checked"));
        }
        if let Some(m) = declared_m {
            if m as usize != edges.len() {
                return Err(Error::Param(format!(
                    "header declares m={m} but stream has {} edges",
                    edges.len()
                )));
            }
        }
        let mut stream = EdgeStream::from_edges(edges, declared_n)?;
        stream.truth = truth;
        Ok(stream)
    }

    /// Serializes to the same text format `parse` reads; round-trips exactly.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# n={} m={}\n", self.n, self.m()));
        if let Some(t) = &self.truth {
            out.push_str(&format!(
                "# truth T={} deltaE={} deltaV={}\n",
                t.triangles, t.delta_e, t.delta_v
            ));
        }
        for e in &self.edges {
            out.push_str(&format!("{} {}\n", e.u, e.v));
        }
        out
    }
}

fn parse_size_header(comment: &str) -> Option<(u32, u64)> {
    let mut n = None;
    let mut m = None;
    for token in comment.split_whitespace() {
        if let Some(v) = token.strip_prefix("n=") {
            n = v.parse().ok();
        } else if let Some(v) = token.strip_prefix("m=") {
            m = v.parse().ok();
        }
    }
    Some((n?, m?))
}

fn parse_truth_header(comment: &str) -> Option<TruthHeader> {
    let mut tokens = comment.split_whitespace();
    if tokens.next() != Some("truth") {
        return None;
    }
    let (mut t, mut de, mut dv) = (None, None, None);
    for token in tokens {
        if let Some(v) = token.strip_prefix("T=") {
            t = v.parse().ok();
        } else if let Some(v) = token.strip_prefix("deltaE=") {
            de = v.parse().ok();
        } else if let Some(v) = token.strip_prefix("deltaV=") {
            dv = v.parse().ok();
        }
    }
    Some(TruthHeader {
        triangles: t?,
        delta_e: de?,
        delta_v: dv?,
    })
}

/// An estimator copy (or any other sink) fed by a single pass.
///
/// Each consumer sees every update exactly once, in arrival order; there is
/// no way to request re-delivery.
pub trait StreamConsumer {
    fn on_update(&mut self, t: usize, edge: Edge) -> Result<()>;

    /// Called once after the final update.
    fn finalize(&mut self) {}
}

/// Consumers per delivery shard. Consumer state for one shard stays
/// cache-resident across the whole stream, which matters when an estimate
/// fans out to hundreds of thousands of copies.
const SHARD: usize = 2048;

/// Delivers the stream to every consumer in one pass. Each consumer receives
/// each update exactly once, in arrival order; consumers are independent, so
/// delivery proceeds in fixed-size shards (all updates to one shard, then
/// the next), which no consumer can observe. A consumer error aborts
/// delivery, reporting the consumer's index and the arrival index.
pub fn push_stream(stream: &EdgeStream, consumers: &mut [&mut dyn StreamConsumer]) -> Result<()> {
    stream.record_pass();
    for (shard, chunk) in consumers.chunks_mut(SHARD).enumerate() {
        for (t, edge) in stream.updates() {
            for (offset, consumer) in chunk.iter_mut().enumerate() {
                consumer.on_update(t, edge).map_err(|e| Error::Consumer {
                    index: shard * SHARD + offset,
                    t,
                    source: Box::new(e),
                })?;
            }
        }
    }
    for consumer in consumers.iter_mut() {
        consumer.finalize();
    }
    Ok(())
}

/// Records the updates it sees; used to assert the single-pass contract.
#[derive(Debug, Default)]
pub struct CountingConsumer {
    pub calls: Vec<(usize, Edge)>,
    pub finalized: bool,
}

impl StreamConsumer for CountingConsumer {
    fn on_update(&mut self, t: usize, edge: Edge) -> Result<()> {
        self.calls.push((t, edge));
        Ok(())
    }

    fn finalize(&mut self) {
        self.finalized = true;
    }
}
