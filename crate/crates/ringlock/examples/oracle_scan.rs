//! Exhaustive ground truth, one ring size at a time.
//!
//! The oracle builds the full global state space of a concrete ring of
//! `K` processes (`m^K` states), finds its strongly connected
//! components, and asks whether some component keeps *every* position
//! firing. That is the definition of livelock made executable — slow,
//! bounded, and completely independent of the refinement. Its job is to
//! keep the fast decider honest and to answer the one question the
//! refinement never asks: *which* ring sizes actually loop.
//!
//! ```bash
//! cargo run -p ringlock --example oracle_scan
//! ```

use ringlock::decide::decide_symmetric;
use ringlock::oracle::{oracle_livelock, oracle_scan, OracleError, DEFAULT_NODE_BUDGET};
use ringlock::protocols::{generate, Topology};

fn main() {
    // Increment-on-match is a parameterized LIVELOCK: the refinement
    // keeps all three transitions. But the scan shows something the
    // kernel cannot: rings of 2 and 3 are individually free, and the
    // smallest ring that actually circulates has four processes.
    let spec = generate("coloring-det", 3).expect("roster family");
    let Topology::Symmetric(t) = &spec.topology else {
        panic!("symmetric family");
    };
    println!("== increment on match (m=3)");
    println!("   refinement decision: {}", decide_symmetric(t).decision);

    let scan = oracle_scan(&spec.topology, 2..=7, DEFAULT_NODE_BUDGET).expect("in budget");
    for &(k, livelock) in &scan.per_k {
        let verdict = if livelock { "LIVELOCK" } else { "free" };
        println!("   K={k}: {verdict} ({} states)", 3u64.pow(k));
    }
    println!("   smallest circulating ring: K={:?}", scan.min_livelock_k);
    assert_eq!(scan.min_livelock_k, Some(4));
    assert_eq!(
        scan.per_k,
        vec![(2, false), (3, false), (4, true), (5, true), (6, true), (7, true)]
    );
    println!();

    // The witness component at K=4 is a real loop of global states. In
    // (0,0,1,2), position 1 matches its predecessor (both 0) and
    // increments, giving (0,1,1,2); chase such moves around the ring and
    // the pattern of matches never dies out. The component's states and
    // the positions that fire inside it come back with the result.
    let result = oracle_livelock(&spec.topology, 4, DEFAULT_NODE_BUDGET).expect("in budget");
    println!("== the K=4 witness component");
    println!("   {} global states, first few:", result.witness_scc.len());
    for state in result.witness_scc.iter().take(6) {
        println!("     {state}");
    }
    println!("   positions firing inside it: {:?}", result.fired_positions);
    assert!(result.livelock);
    assert_eq!(result.fired_positions, vec![0, 1, 2, 3]);
    println!();

    // A FREE verdict means free at every size; the scan can only sample
    // that claim, but every sample must come back quiet.
    let spec = generate("sum-not-2-det", 3).expect("roster family");
    println!("== sum-not-2 (m=3)");
    let scan = oracle_scan(&spec.topology, 2..=6, DEFAULT_NODE_BUDGET).expect("in budget");
    println!("   oracle: {:?}", scan.per_k);
    assert!(scan.per_k.iter().all(|&(_, livelock)| !livelock));
    assert_eq!(scan.min_livelock_k, None);
    println!();

    // The state space is m^K: the budget is what stands between a scan
    // and a very long afternoon. Overrunning it is an error, not a
    // silent "free" — a partial search proves nothing.
    println!("== budgets");
    let err = oracle_scan(&spec.topology, 2..=12, 1_000).expect_err("12 is too deep");
    match &err {
        OracleError::BudgetExceeded { k, budget, .. } => {
            println!("   K={k} blew the {budget}-node budget: {err}");
        }
        other => panic!("unexpected error: {other}"),
    }
    println!();
    println!("the oracle is quadratic-ish in m^K — fine at desk scale, absurd");
    println!("beyond it; that is exactly why the parameterized decider exists.");
}
