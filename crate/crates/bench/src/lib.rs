//! Benchmark fixtures.

use std::fmt::Write;

use rmcs_core::{parse_stream, parse_system, InputStream, KbConfig, ReactiveMcs};

/// A chain of `n` storage contexts where each copies its predecessor, fed by
/// one input, with a toggling next rule on the last context.
pub fn chain(n: usize, tau: usize) -> (ReactiveMcs, KbConfig, InputStream) {
    let mut s = String::from("input s { x }\n");
    for i in 0..n {
        let _ = writeln!(s, "context c{i} storage {{ vocabulary {{ a; b }} kb {{ }} policy {{ generic. }} }}");
    }
    let _ = writeln!(s, "rules c0 {{ feed: add(a) <- s::x. }}");
    for i in 1..n {
        let _ = writeln!(s, "rules c{i} {{ copy{i}: add(a) <- c{}:a. alt{i}: add(b) <- not c{}:a. }}", i - 1, i - 1);
    }
    let last = n - 1;
    let _ = writeln!(s, "rules c{last} {{ flip: next(add(b)) <- c{last}:a. unflip: next(rm(b)) <- c{last}:b. }}");
    let (m, cfg) = parse_system(&s).expect("chain parses");
    let mut st = format!("horizon {tau}\n");
    for t in (1..=tau).step_by(2) {
        let _ = writeln!(st, "{t} s x");
    }
    let stream = parse_stream(&st, &m).expect("chain stream parses");
    (m, cfg, stream)
}

/// `n` contexts on a cycle of negations: 2 equilibria per even cycle.
pub fn negative_cycle(n: usize) -> (ReactiveMcs, KbConfig, InputStream) {
    let mut s = String::new();
    for i in 0..n {
        let _ = writeln!(s, "context c{i} storage {{ vocabulary {{ a }} kb {{ }} policy {{ generic. }} }}");
    }
    for i in 0..n {
        let _ = writeln!(s, "rules c{i} {{ r{i}: add(a) <- not c{}:a. }}", (i + 1) % n);
    }
    let (m, cfg) = parse_system(&s).expect("cycle parses");
    let stream = parse_stream("horizon 1\n", &m).expect("empty stream");
    (m, cfg, stream)
}
