//! Space-efficient exact simulation of the quantum single-pass estimator for
//! the low-interference triangle count.
//!
//! The simulated algorithm holds a uniform superposition over `2m` dummy
//! slots; update `t` swaps two dummy slots for the two orientations of the
//! arriving edge, and with probability `1/k` the state is then measured with
//! the projector family of the just-arrived edge `uv`: outcome `+1`/`-1`
//! terminates the run, outcome `0` removes every tracked edge directed toward
//! `u` or `v` (other than the fresh pair) and the pass continues.
//!
//! Because the state stays a uniform superposition over (dummy slots + a set
//! `S` of directed edges), the whole run can be tracked as `(t, S)`, turning
//! a dimension-`O(n^2)` state into an `O(|S|)` structure. Outcome
//! probabilities are exact rationals: with the tracked edges toward `u` or
//! `v` split into apexes seen twice (`W+`) and once (`W-`), and
//! `D = 2m - 2(t-1) + |S_{t-1}|`,
//!
//! ```text
//! p(+1) = (2|W+| + |W-|/2) / D      p(-1) = (|W-|/2) / D
//! ```
//!
//! and the run's return value `b` satisfies `E[b] = T_less_k / (k m)`. All of
//! this is validated against the literal dense simulator in
//! [`crate::statevector`].

use rand::Rng;

use crate::error::{Error, Result};
use crate::seed::{self, RunRng, LANE_QUANTUM};
use crate::stats;
use crate::stream::{push_stream, DirectedEdge, Edge, EdgeStream, StreamConsumer, VertexId};

/// Outcome distribution of one projective measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureDist {
    pub p_plus: f64,
    pub p_minus: f64,
    pub p_zero: f64,
}

impl MeasureDist {
    /// Builds the distribution from wedge counts over the common denominator
    /// `2 * D`; the integer numerators sum to `2 * D` exactly.
    pub fn from_counts(w_plus: usize, w_minus: usize, denominator: u64) -> MeasureDist {
        let twice = 2 * denominator;
        let num_plus = (4 * w_plus + w_minus) as u64;
        let num_minus = w_minus as u64;
        MeasureDist {
            p_plus: num_plus as f64 / twice as f64,
            p_minus: num_minus as f64 / twice as f64,
            p_zero: (twice - num_plus - num_minus) as f64 / twice as f64,
        }
    }
}

/// The per-step measurement schedule: each update is measured independently
/// with probability `1/k`. Bits are drawn lazily and never stored.
#[derive(Debug, Clone, Copy)]
pub struct MeasureSchedule {
    prob: f64,
}

impl MeasureSchedule {
    pub fn new(k: f64) -> Result<MeasureSchedule> {
        if !(k >= 1.0) {
            return Err(Error::Param(format!("k must be >= 1, got {k}")));
        }
        Ok(MeasureSchedule { prob: 1.0 / k })
    }

    #[inline]
    pub fn draw(&self, rng: &mut impl Rng) -> bool {
        rng.gen::<f64>() < self.prob
    }
}

/// Tracked simulator state: the directed-edge set `S` plus the implicit
/// `2(m - t)` remaining dummy slots.
#[derive(Debug, Clone)]
pub struct QSimState {
    m: usize,
    t: usize,
    tracked: Vec<DirectedEdge>,
    terminated: Option<i8>,
}

impl QSimState {
    /// State before any update: `2m` dummy slots, empty `S`.
    pub fn new(m: usize) -> Result<QSimState> {
        if m == 0 {
            return Err(Error::EmptyStream);
        }
        Ok(QSimState {
            m,
            t: 0,
            tracked: Vec::new(),
            terminated: None,
        })
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    /// Updates processed so far.
    #[inline]
    pub fn t(&self) -> usize {
        self.t
    }

    /// `|S_t|`.
    #[inline]
    pub fn tracked_len(&self) -> usize {
        self.tracked.len()
    }

    #[inline]
    pub fn dummy_count(&self) -> usize {
        2 * (self.m - self.t)
    }

    /// Squared norm denominator `2m - 2t + |S_t|` of the uniform state.
    #[inline]
    pub fn denominator(&self) -> u64 {
        (self.dummy_count() + self.tracked.len()) as u64
    }

    pub fn outcome(&self) -> Option<i8> {
        self.terminated
    }

    pub fn is_terminated(&self) -> bool {
        self.terminated.is_some()
    }

    /// Sorted copy of `S_t`, for state-equivalence checks.
    pub fn tracked_edges(&self) -> Vec<DirectedEdge> {
        let mut edges = self.tracked.clone();
        edges.sort();
        edges
    }

    /// Processes update `t`: both orientations of `edge` join `S`, consuming
    /// two dummy slots, so the norm denominator is unchanged.
    pub fn apply_update(&mut self, t: usize, edge: Edge) -> Result<()> {
        debug_assert!(!self.is_terminated(), "update after termination");
        if t != self.t + 1 || t > self.m {
            return Err(Error::Param(format!(
                "update index {t} out of order (processed {})",
                self.t
            )));
        }
        let (u, v) = edge.endpoints();
        if self
            .tracked
            .iter()
            .any(|d| (d.tail == u && d.head == v) || (d.tail == v && d.head == u))
        {
            return Err(Error::Param(format!(
                "update {t}: edge {edge} already tracked (duplicate in stream)"
            )));
        }
        let denominator_before = self.denominator();
        self.tracked.push(DirectedEdge::new(u, v));
        self.tracked.push(DirectedEdge::new(v, u));
        self.t = t;
        debug_assert_eq!(self.denominator(), denominator_before);
        Ok(())
    }

    /// Wedge apexes of the just-applied edge against `S_{t-1}` (the fresh
    /// pair is excluded): `(seen twice, seen exactly once)`.
    fn wedge_counts(&self, edge: Edge) -> (usize, usize) {
        let (u, v) = edge.endpoints();
        let mut w_plus = 0usize;
        let mut toward = 0usize;
        for d in &self.tracked {
            if d.head == u && d.tail != v {
                toward += 1;
                let w = d.tail;
                if self.tracked.iter().any(|x| x.head == v && x.tail == w) {
                    w_plus += 1;
                }
            } else if d.head == v && d.tail != u {
                toward += 1;
            }
        }
        (w_plus, toward - 2 * w_plus)
    }

    /// Measurement distribution for the just-applied edge, with the apex sets
    /// behind it (`W+`: both wedge arms tracked, `W-`: exactly one).
    pub fn measurement(&self, edge: Edge) -> (MeasureDist, Vec<VertexId>, Vec<VertexId>) {
        let (u, v) = edge.endpoints();
        let mut toward_u = Vec::new();
        let mut toward_v = Vec::new();
        for d in &self.tracked {
            if d.head == u && d.tail != v {
                toward_u.push(d.tail);
            } else if d.head == v && d.tail != u {
                toward_v.push(d.tail);
            }
        }
        let mut w_plus = Vec::new();
        let mut w_minus = Vec::new();
        for &w in &toward_u {
            if toward_v.contains(&w) {
                w_plus.push(w);
            } else {
                w_minus.push(w);
            }
        }
        for &w in &toward_v {
            if !toward_u.contains(&w) {
                w_minus.push(w);
            }
        }
        w_plus.sort();
        w_minus.sort();
        let dist = MeasureDist::from_counts(w_plus.len(), w_minus.len(), self.denominator());
        (dist, w_plus, w_minus)
    }

    /// Samples a measurement outcome for the just-applied edge with exact
    /// rational probabilities. `+1`/`-1` terminates the run; `0` removes
    /// every tracked edge directed toward the edge's endpoints except the
    /// fresh pair itself.
    pub fn measure(&mut self, edge: Edge, rng: &mut impl Rng) -> i8 {
        debug_assert!(!self.is_terminated());
        let (u, v) = edge.endpoints();
        debug_assert!(self.tracked.iter().any(|d| d.tail == u && d.head == v));
        let (w_plus, w_minus) = self.wedge_counts(edge);
        let twice = 2 * self.denominator();
        let threshold_plus = (4 * w_plus + w_minus) as u64;
        let threshold_minus = threshold_plus + w_minus as u64;
        let r = rng.gen_range(0..twice);
        let outcome = if r < threshold_plus {
            1
        } else if r < threshold_minus {
            -1
        } else {
            0
        };
        if outcome != 0 {
            self.terminated = Some(outcome);
        } else {
            self.collapse_zero(edge);
        }
        outcome
    }

    /// Applies the zero-outcome set recurrence for the just-applied edge:
    /// everything directed toward its endpoints is dropped, then the fresh
    /// pair is restored.
    pub fn collapse_zero(&mut self, edge: Edge) {
        let (u, v) = edge.endpoints();
        self.tracked.retain(|d| d.head != u && d.head != v);
        self.tracked.push(DirectedEdge::new(u, v));
        self.tracked.push(DirectedEdge::new(v, u));
    }
}

/// Per-step trace record emitted when tracing is enabled.
#[derive(Debug, Clone, Copy)]
pub struct QuantumTraceRow {
    pub t: usize,
    pub measured: bool,
    pub tracked: usize,
    pub outcome: i8,
}

/// One single-pass run of the quantum estimator, usable as a fan-out consumer.
///
/// After the pass, [`QuantumRun::b`] is the run's return value in
/// `{-1, 0, +1}`; a terminated run ignores the rest of the stream.
#[derive(Debug)]
pub struct QuantumRun {
    state: QSimState,
    schedule: MeasureSchedule,
    rng: RunRng,
    trace: Option<Vec<QuantumTraceRow>>,
}

impl QuantumRun {
    pub fn new(m: usize, k: f64, rng: RunRng) -> Result<QuantumRun> {
        Ok(QuantumRun {
            state: QSimState::new(m)?,
            schedule: MeasureSchedule::new(k)?,
            rng,
            trace: None,
        })
    }

    pub fn with_trace(mut self) -> QuantumRun {
        self.trace = Some(Vec::new());
        self
    }

    /// Return value of the run: the terminating outcome, or 0.
    pub fn b(&self) -> i8 {
        self.state.outcome().unwrap_or(0)
    }

    pub fn state(&self) -> &QSimState {
        &self.state
    }

    pub fn trace(&self) -> Option<&[QuantumTraceRow]> {
        self.trace.as_deref()
    }
}

impl StreamConsumer for QuantumRun {
    fn on_update(&mut self, t: usize, edge: Edge) -> Result<()> {
        if self.state.is_terminated() {
            return Ok(());
        }
        self.state.apply_update(t, edge)?;
        let measured = self.schedule.draw(&mut self.rng);
        let mut outcome = 0;
        if measured {
            outcome = self.state.measure(edge, &mut self.rng);
        }
        if let Some(trace) = &mut self.trace {
            trace.push(QuantumTraceRow {
                t,
                measured,
                tracked: self.state.tracked_len(),
                outcome,
            });
        }
        Ok(())
    }
}

/// Runs one quantum pass over the stream and returns `b`.
pub fn run_quantum(stream: &EdgeStream, k: f64, rng: RunRng) -> Result<i8> {
    let mut run = QuantumRun::new(stream.m(), k, rng)?;
    push_stream(stream, &mut [&mut run])?;
    Ok(run.b())
}

/// Unbiased estimate of the low-interference triangle count: `k * m` times
/// the mean of `b` over `copies` independent runs, delivered in one fan-out
/// pass.
pub fn estimate_t_less(stream: &EdgeStream, k: f64, copies: usize, seed: u64) -> Result<f64> {
    if copies == 0 {
        return Err(Error::Param("copies must be >= 1".into()));
    }
    let mut runs = Vec::with_capacity(copies);
    for i in 0..copies {
        runs.push(QuantumRun::new(
            stream.m(),
            k,
            seed::rng_for(seed, LANE_QUANTUM, i as u64),
        )?);
    }
    let mut consumers: Vec<&mut dyn StreamConsumer> = runs
        .iter_mut()
        .map(|r| r as &mut dyn StreamConsumer)
        .collect();
    push_stream(stream, &mut consumers)?;
    let outcomes: Vec<f64> = runs.iter().map(|r| r.b() as f64).collect();
    Ok(k * stream.m() as f64 * stats::mean(&outcomes))
}
