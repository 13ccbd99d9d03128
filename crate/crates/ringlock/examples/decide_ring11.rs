//! Rings with one distinguished process: two coupled refinements.
//!
//! A 1-1 ring runs one table at position 0 and a different table
//! everywhere else. Neither table can be judged alone — position 0 is fed
//! by an ordinary process and feeds one, so the decider alternates:
//! refine the ordinary table under the shadows position 0 can produce,
//! refine position 0's candidates under the shadows the ordinary kernel
//! can produce, repeat until both sides stabilize. Livelock needs *both*
//! fixed points nonempty.
//!
//! ```bash
//! cargo run -p ringlock --example decide_ring11
//! ```

use ringlock::decide::{decide_ring11, Decision};
use ringlock::oracle::{oracle_scan, DEFAULT_NODE_BUDGET};
use ringlock::protocols::{generate, Topology};
use ringlock::transition::validate_protocol;

fn main() {
    // Dijkstra's token ring over Z_3: position 0 increments when it
    // matches its predecessor (it "injects" a fresh value); everyone
    // else copies any value that differs. The moving mismatch is the
    // token, and it circulates on every ring size.
    let spec = generate("dijkstra", 3).expect("roster family");
    let Topology::Ring11 { p0, others } = &spec.topology else {
        panic!("dijkstra is a 1-1 ring family");
    };

    println!("== dijkstra token ring (m=3)");
    let row = |t: &ringlock::transition::TransitionSet| {
        t.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" ")
    };
    println!("   position 0:      {}", row(p0));
    println!("   other positions: {}", row(others));

    let verdict = decide_ring11(p0, others).expect("same domain on both tables");
    println!("   decision: {}", verdict.decision);
    println!("   kernel at position 0:      {}", row(&verdict.kernel_p0));
    println!("   kernel at other positions: {}", row(&verdict.kernel_other));
    let sizes: Vec<String> = verdict.p0_iterates.iter().map(|s| s.len().to_string()).collect();
    println!("   position-0 candidates per round: {}", sizes.join(" -> "));
    if let Some(shadows) = &verdict.shadows {
        println!("   interface shadows into position 0:  {}", shadows.before_p0);
        println!("   interface shadows out of position 0: {}", shadows.after_p0);
        println!("   interface shadows between others:    {}", shadows.between_others);
    }
    assert_eq!(verdict.decision, Decision::Livelock);
    assert_eq!(verdict.kernel_p0.len(), 3);
    assert_eq!(verdict.kernel_other.len(), 3);

    // The oracle agrees at every concrete size it can reach: with one
    // injector and copying followers, even the two-process ring loops.
    let scan = oracle_scan(&spec.topology, 2..=5, DEFAULT_NODE_BUDGET).expect("tiny rings");
    println!("   oracle: {:?}", scan.per_k);
    assert!(scan.per_k.iter().all(|&(_, livelock)| livelock));
    println!();

    // Now cripple the injector: drop its reset transition (2,2,0). Its
    // own value can climb 0 -> 1 -> 2 and is then stuck — position 0
    // cannot fire infinitely often, so no ring size livelocks, however
    // lively the copying followers look on their own.
    println!("== dijkstra with the injector's reset removed");
    let crippled_p0 = validate_protocol(3, &[(0, 0, 1), (1, 1, 2)]).expect("valid table");
    println!("   position 0:      {}", row(&crippled_p0));
    println!("   other positions: {}", row(others));

    let verdict = decide_ring11(&crippled_p0, others).expect("same domain on both tables");
    println!("   decision: {}", verdict.decision);
    assert_eq!(verdict.decision, Decision::Free);
    assert!(verdict.kernel_p0.is_empty());

    let crippled = Topology::Ring11 {
        p0: crippled_p0,
        others: others.clone(),
    };
    let scan = oracle_scan(&crippled, 2..=5, DEFAULT_NODE_BUDGET).expect("tiny rings");
    println!("   oracle: {:?}", scan.per_k);
    assert!(scan.per_k.iter().all(|&(_, livelock)| !livelock));

    println!();
    println!("one table can look self-sustaining in isolation; the alternating");
    println!("refinement only believes cycles both sides of the interface support.");
}
