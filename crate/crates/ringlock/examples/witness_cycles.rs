//! Finite witnesses: simple cycles and the walks that keep them alive.
//!
//! The fixed-point refinement says LIVELOCK without ever exhibiting an
//! infinite run. The cycle-chain decider earns the same verdict the
//! hard way: enumerate the simple cycles of the "enables" graph, prune
//! the ones whose demands nobody left can serve, and keep a surviving
//! cycle as a tangible certificate. Its enabling walks — chains of
//! transitions where each one hands the next its trigger value — are the
//! rungs an actual execution climbs.
//!
//! ```bash
//! cargo run -p ringlock --example witness_cycles
//! ```

use ringlock::decide::{decide_symmetric, Decision};
use ringlock::graph::PseudolivelockGraph;
use ringlock::protocols::{generate, Topology};
use ringlock::transition::TransitionSet;
use ringlock::witness::{enumerate_simple_cycles, naive_decide};

fn symmetric_table(name: &str) -> TransitionSet {
    let spec = generate(name, 3).expect("roster family");
    match spec.topology {
        Topology::Symmetric(t) => t,
        Topology::Ring11 { .. } => unreachable!("symmetric family"),
    }
}

fn main() {
    // Step 1: the raw cycle inventory. Edges follow "u can fire after t"
    // (u's trigger value is what t just wrote), so a simple cycle is a
    // finite loop of transitions each enabling the next.
    let t = symmetric_table("agreement");
    let g = PseudolivelockGraph::build(&t);
    let cycles = enumerate_simple_cycles(&g, t.len());
    println!("== agreement (m=3): the cycle inventory");
    println!("   {} transitions, {} graph edges, {} simple cycles", t.len(), g.edge_count(), cycles.len());
    for cycle in cycles.iter().take(4) {
        println!("     {cycle}");
    }
    if cycles.len() > 4 {
        println!("     ... and {} more", cycles.len() - 4);
    }
    println!();

    // Step 2: the full decider. A cycle survives only if, inside the
    // union of all survivors, every edge's demand — "someone must write
    // the value that triggers the next hop" — is actually met. Surviving
    // cycles chain into each other, which is exactly what an infinite
    // run does.
    let outcome = naive_decide(&t, t.len());
    println!("== pruning to survivors");
    println!("   candidates: {}   survivors: {}   decision: {}", outcome.candidates, outcome.survivors, outcome.decision);
    let witness = outcome.witness.as_ref().expect("agreement livelocks");
    println!("   witness cycle (length {}): {witness}", witness.len());
    println!("   enabling walks: {} in total, first few:", outcome.walks_total);
    for walk in outcome.walks.iter().take(3) {
        println!("     {walk}");
    }
    assert_eq!(outcome.decision, Decision::Livelock);

    // Two containment facts make the certificate trustworthy: the cycle
    // never needs more transitions than the table has, and its support
    // sits inside the kernel the refinement computed independently.
    let kernel = decide_symmetric(&t).kernel;
    assert!(witness.len() <= t.len());
    assert!(witness.transitions().iter().all(|t| kernel.contains(t)));
    for walk in &outcome.walks {
        assert_eq!(walk.len(), witness.len());
        assert!(walk.closes());
    }
    println!("   every walk closes back on its starting transition");
    println!();

    // Step 3: pruning can kill everything. Sum-not-2 has cycles in its
    // graph, but each one demands a write no survivor provides; the
    // survivor set collapses and the decision is FREE — matching the
    // refinement, reached by a completely different road.
    let t = symmetric_table("sum-not-2-det");
    let g = PseudolivelockGraph::build(&t);
    let outcome = naive_decide(&t, t.len());
    println!("== sum-not-2 (m=3): cycles that cannot feed themselves");
    println!("   graph edges: {}   candidates: {}   survivors: {}", g.edge_count(), outcome.candidates, outcome.survivors);
    println!("   decision: {}", outcome.decision);
    assert_eq!(outcome.decision, Decision::Free);
    assert!(outcome.witness.is_none());
    assert_eq!(outcome.survivors, 0);

    println!();
    println!("same verdicts as the refinement, but with receipts: a loop you");
    println!("can point at, and the walks that keep it fed.");
}
