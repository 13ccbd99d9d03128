//! Wrap-around arithmetic on the kernel's propagation structure.
//!
//! A livelock kernel carries two relations. `H` says "u can fire right
//! after t at the next position". `E` says "t_k's write is what lets the
//! step from t_i to t_j happen one position downstream" — activity
//! propagating *against* the ring's read direction. On a ring of `K`
//! processes the two must close up consistently: following `H` around
//! all `K` positions has to land you where chasing `E` the other way
//! says you should be. The search below enumerates which wrap-around
//! counts `(a, K)` are arithmetically compatible with the kernel; it
//! narrows the field, and the oracle then picks the true minimum.
//!
//! ```bash
//! cargo run -p ringlock --example circulation_pairs
//! ```

use ringlock::circulation::{
    circulation_search, default_a_max, equivariant, witness_total_core, witness_totality,
    PropagationRelation, DEFAULT_K_MAX, MIN_K_NOTE,
};
use ringlock::decide::decide_symmetric;
use ringlock::graph::PseudolivelockGraph;
use ringlock::operators::phi;
use ringlock::oracle::{oracle_scan, DEFAULT_NODE_BUDGET};
use ringlock::protocols::{generate, Topology};
use ringlock::transition::validate_protocol;

fn main() {
    // The increment kernel: three transitions chasing each other.
    let spec = generate("coloring-det", 3).expect("roster family");
    let Topology::Symmetric(t) = &spec.topology else {
        panic!("symmetric family");
    };
    let kernel = decide_symmetric(t).kernel;
    let h = PseudolivelockGraph::build(&kernel).relation();
    let e = PropagationRelation::for_kernel(&kernel);

    println!("== increment on match (m=3): the two relations");
    println!("   H (enables, next position):\n{}", indent(&h.to_string()));
    println!("   E (write-witnessing, against the ring):\n{}", indent(&e.matrix().to_string()));
    for (from, to) in e.arcs() {
        println!("   E arc: {from} -> {to}");
    }

    // On this kernel the relations commute exactly — H then E equals E
    // then H — which is what lets powers of H stand in for "go around
    // the ring once".
    assert!(equivariant(&h, e.matrix()));
    assert!(witness_totality(&kernel).is_empty());
    println!("   H.E == E.H on this kernel: every edge's demand is served from inside");
    println!();

    // The wrap-around search: for a <= a_max wraps and K <= k_max
    // positions, is H^K consistent with wrapping the written values a
    // times? Compatible pairs survive; impossible ones are arithmetic
    // contradictions, so their K can be ruled out without touching a
    // single global state.
    let report = circulation_search(&h, e.matrix(), default_a_max(kernel.len()), DEFAULT_K_MAX)
        .expect("kernel is nonempty");
    println!("== compatible (a, K) pairs for a <= {}, K <= {}", report.a_max, report.k_max);
    let rendered: Vec<String> = report.pairs.iter().map(|(a, k)| format!("({a}, {k})")).collect();
    println!("   {}", rendered.join(" "));
    if let Some((start, period)) = report.h_period {
        println!("   H powers repeat from exponent {start} with period {period}");
    }
    println!("   note: {MIN_K_NOTE}");

    // The oracle confirms: of the compatible sizes, the smallest that
    // genuinely circulates is K=4 — and 4 is indeed among the pairs.
    let scan = oracle_scan(&spec.topology, 2..=6, DEFAULT_NODE_BUDGET).expect("in budget");
    println!("   oracle minimum: K={:?}", scan.min_livelock_k);
    assert_eq!(scan.min_livelock_k, Some(4));
    assert!(report.pairs.iter().any(|&(_, k)| k == 4));
    println!();

    // A subtlety worth meeting on purpose: a refinement fixed point can
    // contain a transition that only *witnesses other members' edges*
    // while nobody serves its own. This set is Phi-fixed, yet (1,0,2)
    // needs a predecessor value 1 that no member ever writes.
    let odd = validate_protocol(3, &[(0, 2, 0), (1, 0, 2), (2, 0, 2)]).expect("valid table");
    println!("== a fixed point that is not witness-total");
    assert_eq!(phi(&odd), odd);
    let h_odd = PseudolivelockGraph::build(&odd).relation();
    let e_odd = PropagationRelation::for_kernel(&odd);
    println!("   Phi-fixed: yes; H.E == E.H: {}", equivariant(&h_odd, e_odd.matrix()));
    for violation in witness_totality(&odd) {
        println!("   unserved: {violation}");
    }

    // Dropping to the witness-total core — the largest sub-kernel whose
    // every edge is witnessed from inside — restores the commuting
    // structure without giving up the livelock verdict.
    let core = witness_total_core(&odd);
    let rendered: Vec<String> = core.iter().map(|t| t.to_string()).collect();
    println!("   witness-total core: {}", rendered.join(" "));
    let h_core = PseudolivelockGraph::build(&core).relation();
    let e_core = PropagationRelation::for_kernel(&core);
    assert!(!core.is_empty());
    assert!(witness_totality(&core).is_empty());
    assert!(equivariant(&h_core, e_core.matrix()));
    assert_eq!(phi(&core), core);
    println!("   core is Phi-fixed, witness-total, and commutes");

    println!();
    println!("wrap-around pairs rule sizes out by arithmetic alone; the core");
    println!("construction keeps that arithmetic honest on awkward kernels.");
}

fn indent(block: &str) -> String {
    block
        .trim_end()
        .lines()
        .map(|line| format!("     {line}"))
        .collect::<Vec<_>>()
        .join("\n")
}
