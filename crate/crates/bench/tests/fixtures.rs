use rmcs_bench::{chain, negative_cycle};
use rmcs_core::{enumerate_equilibria, run_stream, Selector};

#[test]
fn chain_has_a_unique_stream() {
    let (m, cfg, st) = chain(5, 4);
    let run = run_stream(&m, &cfg, &st, Selector::All(2)).unwrap();
    assert_eq!(run.streams.len(), 1);
    assert!(run.exhaustive);
}

#[test]
fn negative_cycles_alternate() {
    assert_eq!(
        enumerate_equilibria(&negative_cycle(4).0, &negative_cycle(4).1, negative_cycle(4).2.at(1)).unwrap().len(),
        2
    );
    assert!(enumerate_equilibria(&negative_cycle(3).0, &negative_cycle(3).1, negative_cycle(3).2.at(1))
        .unwrap()
        .is_empty());
}
