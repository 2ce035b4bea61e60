//! Literal dense-basis reference simulator, used as the correctness oracle
//! for [`crate::qsim`].
//!
//! The state is a real-amplitude vector over the basis `{dummy slot i : i in
//! [1, 2m]} ∪ {directed edge (w, z)}`, stored sparsely (the reachable support
//! never exceeds `2m` labels). Update `t` for edge `uv` (with `u < v`) swaps
//! the amplitudes of dummy `2t-1` with `(u, v)` and dummy `2t` with `(v, u)`.
//! The measurement family of edge `uv` is built from the wedge elements
//! `(|wu> ± |wv>)/sqrt(2)` over apexes `w` distinct from `u` and `v`:
//!
//! ```text
//! O_plus  = 1/2 sum_w (|wu> + |wv>)(<wu| + <wv|)
//! O_minus = 1/2 sum_w (|wu> - |wv>)(<wu| - <wv|)
//! O_zero  = I - sum_w (|wu><wu| + |wv><wv|)
//! ```
//!
//! All arithmetic is real; the dynamics never introduce complex phases.
//! Desk-scale only: `m <= 32`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::qsim::MeasureDist;
use crate::stream::{DirectedEdge, Edge, VertexId};

/// Maximum stream length the reference simulator accepts.
pub const MAX_M: usize = 32;

/// Basis label: a dummy slot or a directed edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Label {
    Dummy(u32),
    Dir(VertexId, VertexId),
}

impl Label {
    pub fn dir(tail: u32, head: u32) -> Label {
        Label::Dir(VertexId(tail), VertexId(head))
    }
}

/// Sparse real-amplitude state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    m: usize,
    amps: BTreeMap<Label, f64>,
}

impl StateVector {
    /// Uniform superposition over the `2m` dummy slots.
    pub fn new(m: usize) -> Result<StateVector> {
        if m == 0 {
            return Err(Error::EmptyStream);
        }
        if m > MAX_M {
            return Err(Error::Param(format!(
                "statevector reference is desk-scale only: m={m} exceeds {MAX_M}"
            )));
        }
        let amp = 1.0 / ((2 * m) as f64).sqrt();
        let amps = (1..=2 * m as u32).map(|i| (Label::Dummy(i), amp)).collect();
        Ok(StateVector { m, amps })
    }

    pub fn amplitude(&self, label: Label) -> f64 {
        self.amps.get(&label).copied().unwrap_or(0.0)
    }

    /// Labels carrying nonzero amplitude.
    pub fn support(&self) -> Vec<Label> {
        self.amps
            .iter()
            .filter(|(_, &a)| a != 0.0)
            .map(|(&l, _)| l)
            .collect()
    }

    /// Directed-edge labels carrying nonzero amplitude, sorted.
    pub fn edge_support(&self) -> Vec<DirectedEdge> {
        self.amps
            .iter()
            .filter_map(|(&l, &a)| match l {
                Label::Dir(tail, head) if a != 0.0 => Some(DirectedEdge::new(tail, head)),
                _ => None,
            })
            .collect()
    }

    pub fn norm_squared(&self) -> f64 {
        self.amps.values().map(|a| a * a).sum()
    }

    fn set(&mut self, label: Label, value: f64) {
        if value == 0.0 {
            self.amps.remove(&label);
        } else {
            self.amps.insert(label, value);
        }
    }

    /// Update unitary for step `t`: swaps dummies `2t-1`, `2t` with the two
    /// orientations of `edge`. An involution; applying it twice restores the
    /// state.
    pub fn apply_update(&mut self, t: usize, edge: Edge) -> Result<()> {
        if t < 1 || t > self.m {
            return Err(Error::Param(format!("update index {t} outside [1, {}]", self.m)));
        }
        let (u, v) = edge.endpoints();
        self.swap(Label::Dummy(2 * t as u32 - 1), Label::Dir(u, v));
        self.swap(Label::Dummy(2 * t as u32), Label::Dir(v, u));
        Ok(())
    }

    fn swap(&mut self, a: Label, b: Label) {
        let va = self.amplitude(a);
        let vb = self.amplitude(b);
        self.set(a, vb);
        self.set(b, va);
    }

    /// Apexes `w` with amplitude on `(w, u)` or `(w, v)`, excluding the
    /// edge's own endpoints.
    fn wedge_apexes(&self, u: VertexId, v: VertexId) -> Vec<VertexId> {
        let mut apexes: Vec<VertexId> = self
            .amps
            .keys()
            .filter_map(|l| match *l {
                Label::Dir(tail, head) if (head == u || head == v) && tail != u && tail != v => {
                    Some(tail)
                }
                _ => None,
            })
            .collect();
        apexes.sort();
        apexes.dedup();
        apexes
    }

    /// Applies the projector for `outcome` literally and returns the
    /// (unnormalized) result.
    fn project(&self, edge: Edge, outcome: i8) -> StateVector {
        let (u, v) = edge.endpoints();
        let mut out = StateVector {
            m: self.m,
            amps: BTreeMap::new(),
        };
        match outcome {
            1 | -1 => {
                let sign = outcome as f64;
                for w in self.wedge_apexes(u, v) {
                    let a = self.amplitude(Label::Dir(w, u));
                    let b = self.amplitude(Label::Dir(w, v));
                    // <(wu ± wv)/sqrt(2), psi> = (a ± b)/sqrt(2); scaled back
                    // onto the wedge element this is (a ± b)/2 per leg.
                    let coefficient = (a + sign * b) / 2.0;
                    out.set(Label::Dir(w, u), coefficient);
                    out.set(Label::Dir(w, v), sign * coefficient);
                }
            }
            0 => {
                out.amps = self.amps.clone();
                for w in self.wedge_apexes(u, v) {
                    out.set(Label::Dir(w, u), 0.0);
                    out.set(Label::Dir(w, v), 0.0);
                }
            }
            other => panic!("invalid outcome {other}"),
        }
        out
    }

    /// Born-rule outcome distribution for measuring by `edge`:
    /// `p_b = ||O_b psi||^2`.
    pub fn measurement(&self, edge: Edge) -> MeasureDist {
        MeasureDist {
            p_plus: self.project(edge, 1).norm_squared(),
            p_minus: self.project(edge, -1).norm_squared(),
            p_zero: self.project(edge, 0).norm_squared(),
        }
    }

    /// Collapses onto the given outcome and renormalizes.
    pub fn collapse(&mut self, edge: Edge, outcome: i8) -> Result<()> {
        let projected = self.project(edge, outcome);
        let norm_squared = projected.norm_squared();
        if norm_squared < 1e-18 {
            return Err(Error::Param(format!(
                "collapse onto zero-probability outcome {outcome} for edge {edge}"
            )));
        }
        let scale = 1.0 / norm_squared.sqrt();
        self.amps = projected
            .amps
            .into_iter()
            .filter(|&(_, a)| a != 0.0)
            .map(|(l, a)| (l, a * scale))
            .collect();
        Ok(())
    }
}
