//! Quick timing breakdown for one hybrid trial on the interference fan.

use std::time::Instant;

use tristream::classical::ClassicalRun;
use tristream::generators;
use tristream::qsim::QuantumRun;
use tristream::seed::{self, LANE_CLASSICAL, LANE_QUANTUM};
use tristream::stream::{push_stream, StreamConsumer};

fn main() {
    let stream = generators::quantum_hard(6, 48, 0).unwrap();
    let m = stream.m();
    let k = 1.0;
    let groups = 44;
    let q_copies = 7744;
    let c_copies = 22878;

    let t0 = Instant::now();
    let mut quantum: Vec<QuantumRun> = (0..groups * q_copies)
        .map(|i| QuantumRun::new(m, k, seed::rng_for(1, LANE_QUANTUM, i as u64)).unwrap())
        .collect();
    let t1 = Instant::now();
    let mut classical: Vec<ClassicalRun> = (0..groups * c_copies)
        .map(|i| ClassicalRun::new(m, k, seed::rng_for(1, LANE_CLASSICAL, i as u64)).unwrap())
        .collect();
    let t2 = Instant::now();

    {
        let mut consumers: Vec<&mut dyn StreamConsumer> = Vec::new();
        consumers.extend(quantum.iter_mut().map(|r| r as &mut dyn StreamConsumer));
        push_stream(&stream, &mut consumers).unwrap();
    }
    let t3 = Instant::now();
    {
        let mut consumers: Vec<&mut dyn StreamConsumer> = Vec::new();
        consumers.extend(classical.iter_mut().map(|r| r as &mut dyn StreamConsumer));
        push_stream(&stream, &mut consumers).unwrap();
    }
    let t4 = Instant::now();

    let alive = quantum.iter().filter(|r| !r.state().is_terminated()).count();
    let live_edges: usize = classical.iter().map(|r| r.store().len()).sum();
    println!("build quantum ({}): {:?}", quantum.len(), t1 - t0);
    println!("build classical ({}): {:?}", classical.len(), t2 - t1);
    println!("quantum fanout ({} updates): {:?}", m, t3 - t2);
    println!("classical fanout: {:?}", t4 - t3);
    println!("alive quantum at end: {alive}");
    println!("total stored classical edges: {live_edges}");
    let t5 = Instant::now();
    drop(quantum);
    drop(classical);
    println!("drop: {:?}", t5.elapsed());
}
