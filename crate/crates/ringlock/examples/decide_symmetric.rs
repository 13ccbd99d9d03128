//! The refinement iteration, step by step, on four small protocols.
//!
//! A symmetric protocol is one transition table shared by every process
//! on the ring. The decider never picks a ring size: it refines the table
//! itself — keep the transitions that lie on cycles of the "enables"
//! graph, keep the transitions whose own/written values some surviving
//! neighbor pair can actually feed — until nothing more falls away. A
//! nonempty fixed point (the kernel) means some ring size livelocks; an
//! empty one means every ring size is livelock-free.
//!
//! ```bash
//! cargo run -p ringlock --example decide_symmetric
//! ```

use ringlock::decide::{decide_symmetric, Decision, Verdict};
use ringlock::protocols::{generate, Topology};
use ringlock::transition::{validate_protocol, TransitionSet};

fn show(title: &str, t: &TransitionSet) -> Verdict {
    println!("== {title}");
    let row: Vec<String> = t.iter().map(|t| t.to_string()).collect();
    println!("   table ({} transitions over Z_{}): {}", t.len(), t.m(), row.join(" "));

    let verdict = decide_symmetric(t);
    for (i, size) in verdict.trace.sizes().iter().enumerate() {
        if i == 0 {
            println!("   iterate 0: {size} transitions");
        } else {
            let removed = &verdict.trace.removed[i - 1];
            let gone: Vec<String> = removed.iter().map(|t| t.to_string()).collect();
            let note = if gone.is_empty() {
                "nothing removed — fixed point".to_string()
            } else {
                format!("removed {}", gone.join(" "))
            };
            println!("   iterate {i}: {size} transitions ({note})");
        }
    }
    println!("   decision: {}", verdict.decision);
    println!();
    verdict
}

fn symmetric_table(name: &str) -> TransitionSet {
    let spec = generate(name, 3).expect("roster family");
    match spec.topology {
        Topology::Symmetric(t) => t,
        Topology::Ring11 { .. } => unreachable!("symmetric family"),
    }
}

fn main() {
    // 1. Increment-on-match: fire when your value equals your
    //    predecessor's, bump it by one. Every transition sustains the
    //    others, so the kernel is the whole table.
    let coloring = symmetric_table("coloring-det");
    let verdict = show("increment on match (graph coloring, deterministic)", &coloring);
    assert_eq!(verdict.decision, Decision::Livelock);
    assert_eq!(verdict.kernel.len(), 3);

    // 2. Sum-not-2: fire when your value plus your predecessor's is 2.
    //    Each firing destroys the condition it needed and no surviving
    //    neighbor pair restores it — the iterates shrink to empty.
    let sum = symmetric_table("sum-not-2-det");
    let verdict = show("sum-not-2 (deterministic)", &sum);
    assert_eq!(verdict.decision, Decision::Free);
    assert!(verdict.kernel.is_empty());
    assert!(verdict.trace.emptied_at.is_some());

    // 3. Agreement: copy your predecessor whenever you disagree. Any
    //    disagreement chases itself around the ring forever, and the
    //    kernel says so: all m*(m-1) transitions survive.
    let agreement = symmetric_table("agreement");
    let verdict = show("agreement (copy your predecessor)", &agreement);
    assert_eq!(verdict.decision, Decision::Livelock);
    assert_eq!(verdict.kernel.len(), 6);

    // 4. A table where the refinement genuinely cascades. (1,0,2) is a
    //    freeloader: it sits on an enables-cycle with (2,2,0), but no
    //    neighbor pair can show the shadow (own=0, written=2), so the
    //    first pass drops it. (0,2,1) was legitimate *only because* the
    //    freeloader's in-edge supplied the shadow (2,1) — with the
    //    freeloader gone, the second pass drops it too, and the
    //    increment core remains.
    let cascade = validate_protocol(
        3,
        &[(0, 0, 1), (1, 1, 2), (2, 2, 0), (1, 0, 2), (0, 2, 1)],
    )
    .expect("self-disabling table");
    let verdict = show("increment on match plus a freeloader and its dependent", &cascade);
    assert_eq!(verdict.decision, Decision::Livelock);
    assert_eq!(verdict.kernel, coloring.clone());
    assert_eq!(verdict.trace.sizes(), vec![5, 4, 3]);
    assert_eq!(verdict.trace.applications(), 2);

    println!("kernel transitions are exactly the ones that can repeat forever;");
    println!("an empty kernel rules livelock out for every ring size at once.");
}
