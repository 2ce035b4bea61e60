//! Microbenchmark: single quantum/classical runs without fan-out dispatch.

use std::time::Instant;

use tristream::classical::ClassicalRun;
use tristream::generators;
use tristream::qsim::QuantumRun;
use tristream::seed::{self, LANE_CLASSICAL, LANE_QUANTUM};
use tristream::stream::StreamConsumer;

fn main() {
    let stream = generators::quantum_hard(6, 48, 0).unwrap();
    let m = stream.m();
    let k = 1.0;
    let runs = 340_736usize;

    // Direct calls, one run at a time (no dyn dispatch, no fan-out).
    let t0 = Instant::now();
    let mut alive = 0usize;
    for i in 0..runs {
        let mut run = QuantumRun::new(m, k, seed::rng_for(1, LANE_QUANTUM, i as u64)).unwrap();
        for (t, e) in stream.updates() {
            run.on_update(t, e).unwrap();
        }
        if run.b() == 0 {
            alive += 1;
        }
    }
    let quantum = t0.elapsed();
    println!(
        "quantum direct: {:?} total, {:.1} ns/update ({} zero outcomes)",
        quantum,
        quantum.as_nanos() as f64 / (runs * m) as f64,
        alive
    );

    let runs_c = 1_006_632usize;
    let t1 = Instant::now();
    let mut total_x = 0.0;
    for i in 0..runs_c {
        let mut run = ClassicalRun::new(m, k, seed::rng_for(1, LANE_CLASSICAL, i as u64)).unwrap();
        for (t, e) in stream.updates() {
            run.on_update(t, e).unwrap();
        }
        total_x += run.x();
    }
    let classical = t1.elapsed();
    println!(
        "classical direct: {:?} total, {:.1} ns/update (sum X = {total_x})",
        classical,
        classical.as_nanos() as f64 / (runs_c * m) as f64,
    );
}
