//! Test support: fixed stream corpora and the lockstep walk that checks the
//! tracked simulator against the dense reference at every step.

use crate::generators;
use crate::qsim::QSimState;
use crate::statevector::{Label, StateVector};
use crate::stream::{Edge, EdgeStream};

pub const EQUIVALENCE_TOLERANCE: f64 = 1e-9;

fn stream_of(pairs: &[(u32, u32)]) -> EdgeStream {
    let edges = pairs.iter().map(|&(a, b)| Edge::of(a, b)).collect();
    EdgeStream::from_edges(edges, None).expect("fixed corpus stream")
}

/// Ten fixed streams with `m <= 6`, covering triangle-free, single-triangle,
/// shared-edge, shared-vertex, and hard-instance shapes.
pub fn corpus_m6() -> Vec<(&'static str, EdgeStream)> {
    vec![
        ("triangle", stream_of(&[(0, 1), (0, 2), (1, 2)])),
        ("split-triangle", stream_of(&[(0, 1), (0, 2), (2, 3), (1, 2)])),
        ("path", stream_of(&[(0, 1), (1, 2), (2, 3)])),
        ("star", stream_of(&[(0, 1), (0, 2), (0, 3), (0, 4)])),
        (
            "shared-edge",
            stream_of(&[(0, 1), (0, 2), (1, 2), (0, 3), (1, 3)]),
        ),
        (
            "k4-minus-edge",
            stream_of(&[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]),
        ),
        (
            "quantum-hard",
            generators::quantum_hard(1, 1, 0).expect("fixture"),
        ),
        (
            "classical-hard",
            generators::classical_hard(1, 4, 2, 0, true, false, 0).expect("fixture"),
        ),
        ("cycle", stream_of(&[(0, 1), (1, 2), (2, 3), (0, 3)])),
        (
            "k4",
            stream_of(&[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]),
        ),
    ]
}

/// Runs both simulators through the stream under a fixed measurement
/// pattern (bit `t-1` of `pattern` means update `t` is measured), always
/// following the zero branch. Panics on the first divergence.
///
/// Checks, at every step: the dense state is uniform over exactly the
/// dummy slots `2t+1..=2m` plus the tracked set; and at measured steps the
/// two outcome distributions agree.
pub fn equivalence_walk(stream: &EdgeStream, pattern: u64) {
    let m = stream.m();
    let mut sim = QSimState::new(m).expect("stream is non-empty");
    let mut sv = StateVector::new(m).expect("stream is desk-scale");
    for (t, edge) in stream.updates() {
        sim.apply_update(t, edge).expect("valid stream");
        sv.apply_update(t, edge).expect("valid index");
        if pattern & (1 << (t - 1)) != 0 {
            let (dist, w_plus, w_minus) = sim.measurement(edge);
            let reference = sv.measurement(edge);
            for (name, got, want) in [
                ("p_plus", dist.p_plus, reference.p_plus),
                ("p_minus", dist.p_minus, reference.p_minus),
                ("p_zero", dist.p_zero, reference.p_zero),
            ] {
                assert!(
                    (got - want).abs() < EQUIVALENCE_TOLERANCE,
                    "{name} diverges at t={t} (pattern {pattern:#b}): tracked {got} vs dense {want}"
                );
            }
            // The zero branch always has positive probability (the fresh
            // pair survives every removal), so conditioning on it is sound.
            assert!(dist.p_zero > 0.0);
            let _ = (w_plus, w_minus);
            sim.collapse_zero(edge);
            sv.collapse(edge, 0).expect("p_zero > 0");
        }
        assert_states_match(&sim, &sv, t, pattern);
    }
}

fn assert_states_match(sim: &QSimState, sv: &StateVector, t: usize, pattern: u64) {
    let amplitude = 1.0 / (sim.denominator() as f64).sqrt();
    let mut expected: Vec<Label> = (2 * sim.t() as u32 + 1..=2 * sim.m() as u32)
        .map(Label::Dummy)
        .collect();
    expected.extend(
        sim.tracked_edges()
            .iter()
            .map(|d| Label::Dir(d.tail, d.head)),
    );
    expected.sort();
    let support = sv.support();
    assert_eq!(
        support, expected,
        "support diverges at t={t} (pattern {pattern:#b})"
    );
    for label in &support {
        assert!(
            (sv.amplitude(*label) - amplitude).abs() < EQUIVALENCE_TOLERANCE,
            "amplitude at {label:?} diverges at t={t}: {} vs uniform {amplitude}",
            sv.amplitude(*label)
        );
    }
    assert!((sv.norm_squared() - 1.0).abs() < 1e-9);
}
