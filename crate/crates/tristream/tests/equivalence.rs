//! Lockstep equivalence between the tracked simulator and the dense
//! reference: every fixed stream, every measurement pattern.

use tristream::generators;
use tristream::testkit::{corpus_m6, equivalence_walk};

#[test]
fn corpus_all_patterns() {
    for (name, stream) in corpus_m6() {
        assert!(stream.m() <= 6, "{name} exceeds the corpus bound");
        for pattern in 0..(1u64 << stream.m()) {
            equivalence_walk(&stream, pattern);
        }
    }
}

#[test]
fn larger_streams_all_patterns() {
    // Same walk at m = 8, where measurement interleavings get denser.
    let streams = [
        generators::quantum_hard(2, 2, 0).unwrap(),
        generators::random(6, 8, 3).unwrap(),
        generators::random(5, 8, 17).unwrap(),
    ];
    for stream in &streams {
        assert_eq!(stream.m(), 8);
        for pattern in 0..(1u64 << 8) {
            equivalence_walk(stream, pattern);
        }
    }
}

#[test]
fn dense_random_streams_sampled_patterns() {
    // Heavier overlap: K5-ish densities at m = 10, random pattern subset.
    for seed in 0..4 {
        let stream = generators::random(5, 10, seed).unwrap();
        for pattern in (0..1u64 << 10).step_by(7) {
            equivalence_walk(&stream, pattern);
        }
    }
}
