//! Parameter selection, amplification, and the combined estimate.
//!
//! With advance constant-factor bounds `T_bound` on the triangle count and
//! `deltaE_bound` on the max triangles per edge, the split parameter is
//! `k = T_bound^(2/5) * deltaE_bound^(2/5) / m^(1/5)` (clamped to `[1, m]`).
//! Each group averages `q_copies` quantum runs (scaled by `k * m`) and
//! `c_copies` classical runs (scaled by `m^(3/2) / sqrt(k)`); the per-part
//! estimates are medians over groups, and the final estimate is their sum.
//!
//! Copy counts are sized by Chebyshev for `epsilon * T / 2` precision at
//! per-group failure 1/4: `q_copies = ceil(16 (k m / (eps T))^2)` (per-copy
//! variance at most 1, scaled by `(k m)^2`) and `c_copies = ceil(64 m^(3/2)
//! deltaE / (sqrt(k) T eps^2))` (per-copy variance at most `4 T_greater
//! sqrt(k) deltaE / m^(3/2)`, bounded via `T_greater <= T`). The group count
//! `ceil(24 ln(2/delta))` drives the median failure below `delta` by a
//! Chernoff bound. Everything runs in a single fan-out pass.

use serde::Serialize;

use crate::classical::ClassicalRun;
use crate::error::{Error, Result};
use crate::oracle;
use crate::qsim::QuantumRun;
use crate::seed::{self, LANE_CLASSICAL, LANE_QUANTUM};
use crate::stats;
use crate::stream::{push_stream, EdgeStream, StreamConsumer};

/// Inputs of one estimate.
#[derive(Debug, Clone, Serialize)]
pub struct HybridConfig {
    pub epsilon: f64,
    pub delta: f64,
    /// Advance bound on the triangle count (a constant factor suffices).
    pub t_bound: f64,
    /// Advance bound on the max triangles per edge.
    pub delta_e_bound: f64,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_override: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_copies_override: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_copies_override: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub groups_override: Option<usize>,
}

impl HybridConfig {
    pub fn new(epsilon: f64, delta: f64, t_bound: f64, delta_e_bound: f64, seed: u64) -> HybridConfig {
        HybridConfig {
            epsilon,
            delta,
            t_bound,
            delta_e_bound,
            seed,
            k_override: None,
            q_copies_override: None,
            c_copies_override: None,
            groups_override: None,
        }
    }

    pub fn validate(&self, m: usize) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(Error::Param(format!("epsilon must be in (0, 1], got {}", self.epsilon)));
        }
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return Err(Error::Param(format!("delta must be in (0, 1], got {}", self.delta)));
        }
        if !(self.t_bound > 0.0) {
            return Err(Error::Param(format!("t_bound must be positive, got {}", self.t_bound)));
        }
        if !(self.delta_e_bound >= 1.0) {
            return Err(Error::Param(format!(
                "delta_e_bound must be at least 1, got {}",
                self.delta_e_bound
            )));
        }
        if let Some(k) = self.k_override {
            if !(1.0..=m as f64).contains(&k) {
                return Err(Error::Param(format!("k override must lie in [1, m={m}], got {k}")));
            }
        }
        Ok(())
    }
}

/// Space accounting of one estimate.
#[derive(Debug, Clone, Copy, Serialize, PartialEq, Eq)]
pub struct SpaceReport {
    /// Simultaneously live quantum simulator states (groups x copies).
    pub q_state_count: usize,
    /// Qubits one group's quantum copies would occupy: `q_copies * beta`,
    /// `beta = 2 ceil(log2 n) + 1`.
    pub qubit_equiv: u64,
    /// High-water mark of stored edges over all classical copies.
    pub c_max_live_edges: usize,
}

/// Result of one estimate.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct EstimateReport {
    pub estimate: f64,
    pub q_part: f64,
    pub c_part: f64,
    pub k_used: f64,
    pub q_copies: usize,
    pub c_copies: usize,
    pub groups: usize,
    pub space: SpaceReport,
    pub seed: u64,
}

/// Which estimator family an estimate runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimatorMode {
    /// Brute-force oracle count (no sampling).
    Exact,
    /// Quantum part only: targets the low-interference count.
    Quantum,
    /// Classical part only: targets the high-interference count.
    Classical,
    /// Both parts, summed.
    Hybrid,
}

/// Split parameter `T_bound^(2/5) * deltaE_bound^(2/5) / m^(1/5)`, clamped
/// to `[1, m]`. Real-valued; only copy counts are rounded.
pub fn choose_k(m: usize, t_bound: f64, delta_e_bound: f64) -> f64 {
    let raw = t_bound.powf(0.4) * delta_e_bound.powf(0.4) / (m as f64).powf(0.2);
    raw.clamp(1.0, m as f64)
}

/// Per-group copy counts `(quantum, classical)` for `epsilon * T / 2`
/// precision at per-group failure 1/4.
pub fn copy_counts(m: usize, k: f64, t_bound: f64, delta_e_bound: f64, epsilon: f64) -> (usize, usize) {
    let m = m as f64;
    let quantum = 16.0 * (k * m / (epsilon * t_bound)).powi(2);
    let classical = 64.0 * m.powf(1.5) * delta_e_bound / (k.sqrt() * t_bound * epsilon * epsilon);
    (quantum.ceil() as usize, classical.ceil() as usize)
}

/// Number of amplification groups, `ceil(24 ln(2/delta))`.
pub fn group_count(delta: f64) -> usize {
    (24.0 * (2.0 / delta).ln()).ceil().max(1.0) as usize
}

/// Lower median of the group means.
pub fn median_of_groups(group_means: &[f64]) -> Result<f64> {
    stats::lower_median(group_means)
        .ok_or_else(|| Error::Param("median of empty group list".into()))
}

fn qubit_width(n: u32) -> u64 {
    let ceil_log2 = if n <= 1 {
        0
    } else {
        32 - (n - 1).leading_zeros() as u64
    };
    2 * ceil_log2 + 1
}

/// Runs `groups` x (`q_copies` + `c_copies`) estimator copies in a single
/// fan-out pass and reduces each family to its median-of-group-means.
fn run_fanout(
    stream: &EdgeStream,
    k: f64,
    q_copies: usize,
    c_copies: usize,
    groups: usize,
    seed: u64,
) -> Result<(Option<f64>, Option<f64>, usize)> {
    let m = stream.m();
    let mut quantum_runs = Vec::with_capacity(groups * q_copies);
    for i in 0..groups * q_copies {
        quantum_runs.push(QuantumRun::new(m, k, seed::rng_for(seed, LANE_QUANTUM, i as u64))?);
    }
    let mut classical_runs = Vec::with_capacity(groups * c_copies);
    for i in 0..groups * c_copies {
        classical_runs.push(ClassicalRun::new(m, k, seed::rng_for(seed, LANE_CLASSICAL, i as u64))?);
    }

    let mut consumers: Vec<&mut dyn StreamConsumer> = Vec::with_capacity(
        quantum_runs.len() + classical_runs.len(),
    );
    consumers.extend(quantum_runs.iter_mut().map(|r| r as &mut dyn StreamConsumer));
    consumers.extend(classical_runs.iter_mut().map(|r| r as &mut dyn StreamConsumer));
    push_stream(stream, &mut consumers)?;

    let q_part = if q_copies > 0 {
        let scale = k * m as f64;
        let group_means: Vec<f64> = (0..groups)
            .map(|g| {
                let outcomes: Vec<f64> = quantum_runs[g * q_copies..(g + 1) * q_copies]
                    .iter()
                    .map(|r| r.b() as f64)
                    .collect();
                scale * stats::mean(&outcomes)
            })
            .collect();
        Some(median_of_groups(&group_means)?)
    } else {
        None
    };

    let c_part = if c_copies > 0 {
        let scale = (m as f64).powf(1.5) / k.sqrt();
        let group_means: Vec<f64> = (0..groups)
            .map(|g| {
                let xs: Vec<f64> = classical_runs[g * c_copies..(g + 1) * c_copies]
                    .iter()
                    .map(|r| r.x())
                    .collect();
                scale * stats::mean(&xs)
            })
            .collect();
        Some(median_of_groups(&group_means)?)
    } else {
        None
    };

    let c_max_live = classical_runs
        .iter()
        .map(|r| r.space_stats().max_live_edges)
        .max()
        .unwrap_or(0);
    Ok((q_part, c_part, c_max_live))
}

/// Runs the configured estimator in one pass and reports the estimate with
/// its parameters and space accounting. Identical `(stream, config)` inputs
/// give identical reports.
pub fn estimate_with_mode(
    stream: &EdgeStream,
    mode: EstimatorMode,
    config: &HybridConfig,
) -> Result<EstimateReport> {
    let m = stream.m();
    config.validate(m)?;
    let k = config.k_override.unwrap_or_else(|| choose_k(m, config.t_bound, config.delta_e_bound));
    let (q_default, c_default) = copy_counts(m, k, config.t_bound, config.delta_e_bound, config.epsilon);
    let q_copies = config.q_copies_override.unwrap_or(q_default);
    let c_copies = config.c_copies_override.unwrap_or(c_default);
    let groups = config.groups_override.unwrap_or_else(|| group_count(config.delta));
    if groups == 0 {
        return Err(Error::Param("groups must be >= 1".into()));
    }

    if mode == EstimatorMode::Exact {
        let exact = oracle::stats(stream, k)?;
        return Ok(EstimateReport {
            estimate: exact.triangles as f64,
            q_part: exact.t_less_k,
            c_part: exact.t_greater_k,
            k_used: k,
            q_copies: 0,
            c_copies: 0,
            groups: 0,
            space: SpaceReport {
                q_state_count: 0,
                qubit_equiv: 0,
                c_max_live_edges: 0,
            },
            seed: config.seed,
        });
    }

    let (want_q, want_c) = match mode {
        EstimatorMode::Quantum => (q_copies, 0),
        EstimatorMode::Classical => (0, c_copies),
        EstimatorMode::Hybrid => (q_copies, c_copies),
        EstimatorMode::Exact => unreachable!(),
    };
    if want_q == 0 && want_c == 0 {
        return Err(Error::Param("no estimator copies requested".into()));
    }
    let (q_part, c_part, c_max_live) = run_fanout(stream, k, want_q, want_c, groups, config.seed)?;
    let q_part = q_part.unwrap_or(0.0);
    let c_part = c_part.unwrap_or(0.0);
    Ok(EstimateReport {
        estimate: q_part + c_part,
        q_part,
        c_part,
        k_used: k,
        q_copies: want_q,
        c_copies: want_c,
        groups,
        space: SpaceReport {
            q_state_count: groups * want_q,
            qubit_equiv: want_q as u64 * qubit_width(stream.n()),
            c_max_live_edges: c_max_live,
        },
        seed: config.seed,
    })
}

/// Full hybrid estimate of the triangle count.
pub fn estimate_triangles(stream: &EdgeStream, config: &HybridConfig) -> Result<EstimateReport> {
    estimate_with_mode(stream, EstimatorMode::Hybrid, config)
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
    fn choose_k_power_of_two_case() {
        assert!((choose_k(1024, 1024.0, 1.0) - 4.0).abs() < 1e-9);
    }

    #[test]
    fn choose_k_clamps() {
        assert_eq!(choose_k(100, 1e-6, 1.0), 1.0);
        // T_bound = m, deltaE = m gives m^(3/5) <= m: no clamp.
        let k = choose_k(32, 32.0, 32.0);
        assert!((k - 32f64.powf(0.6)).abs() < 1e-9);
        assert!(k <= 32.0);
    }

    #[test]
    fn copy_counts_match_formulas() {
        // k m = eps T makes the quantum count exactly 16.
        let (q, _) = copy_counts(10, 1.0, 20.0, 1.0, 0.5);
        assert_eq!(q, 16);

        // Doubling epsilon quarters both counts (up to ceiling).
        let (q1, c1) = copy_counts(60, 2.0, 6.0, 1.0, 0.25);
        let (q2, c2) = copy_counts(60, 2.0, 6.0, 1.0, 0.5);
        assert_eq!(q2, ((q1 as f64) / 4.0).ceil() as usize);
        assert!((c1 as f64 / c2 as f64 - 4.0).abs() < 0.01);

        // Reference fixture: m=60, T=6, deltaE=1, eps=0.5, k from choose_k.
        let k = choose_k(60, 6.0, 1.0);
        assert!((k - 1.0).abs() < 1e-12, "k clamps to 1 here");
        let (q, c) = copy_counts(60, k, 6.0, 1.0, 0.5);
        assert_eq!(q, 6400);
        assert_eq!(c, 19830);
    }

    #[test]
    fn median_conventions() {
        assert_eq!(median_of_groups(&[1.0]).unwrap(), 1.0);
        assert_eq!(median_of_groups(&[1.0, 2.0, 100.0]).unwrap(), 2.0);
        assert_eq!(median_of_groups(&[1.0, 2.0, 3.0, 4.0]).unwrap(), 2.0);
        assert!(median_of_groups(&[]).is_err());
    }

    #[test]
    fn group_count_scale() {
        assert_eq!(group_count(1.0 / 3.0), 44);
        assert!(group_count(0.01) > group_count(0.5));
    }

    #[test]
    fn qubit_width_formula() {
        assert_eq!(qubit_width(1), 1);
        assert_eq!(qubit_width(2), 3);
        assert_eq!(qubit_width(3), 5);
        assert_eq!(qubit_width(4), 5);
        assert_eq!(qubit_width(5), 7);
    }

    #[test]
    fn estimate_is_sum_of_parts_and_deterministic() {
        let stream = stream_of(&[(0, 1), (0, 2), (1, 2)]);
        let mut config = HybridConfig::new(0.5, 1.0 / 3.0, 1.0, 1.0, 7);
        config.q_copies_override = Some(200);
        config.c_copies_override = Some(200);
        config.groups_override = Some(9);
        let a = estimate_triangles(&stream, &config).unwrap();
        let b = estimate_triangles(&stream, &config).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.estimate, a.q_part + a.c_part);
        assert_eq!(a.space.q_state_count, 9 * 200);
        assert_eq!(a.space.qubit_equiv, 200 * qubit_width(3));
    }

    #[test]
    fn single_fanout_pass() {
        let stream = stream_of(&[(0, 1), (0, 2), (1, 2)]);
        let mut config = HybridConfig::new(0.5, 1.0 / 3.0, 1.0, 1.0, 7);
        config.q_copies_override = Some(50);
        config.c_copies_override = Some(50);
        config.groups_override = Some(4);
        estimate_triangles(&stream, &config).unwrap();
        assert_eq!(stream.passes(), 1);
    }

    #[test]
    fn parts_converge_to_oracle_split() {
        // On the plain triangle k clamps to 1: the quantum part carries the
        // whole count and the classical accumulator is identically zero.
        let stream = stream_of(&[(0, 1), (0, 2), (1, 2)]);
        let mut config = HybridConfig::new(0.5, 1.0 / 3.0, 1.0, 1.0, 13);
        config.q_copies_override = Some(4000);
        config.c_copies_override = Some(400);
        config.groups_override = Some(9);
        let report = estimate_triangles(&stream, &config).unwrap();
        assert_eq!(report.k_used, 1.0);
        assert_eq!(report.c_part, 0.0);
        assert!(
            (report.q_part - 1.0).abs() < 0.5,
            "q_part {} far from oracle 1",
            report.q_part
        );
        assert_eq!(report.estimate, report.q_part);
    }

    #[test]
    fn exact_mode_reports_oracle_values() {
        let stream = stream_of(&[(0, 1), (0, 2), (2, 3), (1, 2)]);
        let config = HybridConfig::new(0.5, 0.5, 1.0, 1.0, 0);
        let report = estimate_with_mode(&stream, EstimatorMode::Exact, &config).unwrap();
        assert_eq!(report.estimate, 1.0);
        assert_eq!(report.estimate, report.q_part + report.c_part);
        assert_eq!(report.q_copies, 0);
    }

    #[test]
    fn config_validation() {
        let stream = stream_of(&[(0, 1), (0, 2), (1, 2)]);
        for bad in [
            HybridConfig::new(0.0, 0.5, 1.0, 1.0, 0),
            HybridConfig::new(0.5, 1.5, 1.0, 1.0, 0),
            HybridConfig::new(0.5, 0.5, 0.0, 1.0, 0),
            HybridConfig::new(0.5, 0.5, 1.0, 0.5, 0),
        ] {
            assert!(estimate_triangles(&stream, &bad).is_err());
        }
        let mut config = HybridConfig::new(0.5, 0.5, 1.0, 1.0, 0);
        config.k_override = Some(10.0); // above m = 3
        assert!(estimate_triangles(&stream, &config).is_err());
    }
}
