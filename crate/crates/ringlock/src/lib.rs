//! Livelock detection for self-disabling unidirectional ring protocols.
//!
//! A ring of `K` identical processes, each owning one variable over
//! `Z_m`, each able to read only its predecessor's variable: does *any*
//! ring size admit an infinite run? This crate answers that parameterized
//! question — every `K >= 2` at once — by refining the protocol's
//! transition set to its self-sustaining kernel, and it ships the
//! independent machinery (exhaustive per-`K` oracle, cycle-chain witness
//! search, differential fuzzing) to keep that answer honest.
//!
//! # Quick start
//!
//! ```
//! use ringlock::decide::{decide_symmetric, Decision};
//! use ringlock::transition::validate_protocol;
//!
//! // Each process increments once its value matches its predecessor's.
//! let t = validate_protocol(3, &[(0, 0, 1), (1, 1, 2), (2, 2, 0)]).unwrap();
//! let verdict = decide_symmetric(&t);
//! assert_eq!(verdict.decision, Decision::Livelock);
//! assert_eq!(verdict.kernel.len(), 3); // every transition self-sustains
//! ```
//!
//! # Examples
//!
//! Each major capability has a runnable walkthrough:
//!
//! - **`decide_symmetric`** — the refinement iteration on four classic
//!   protocols, step by step
//! - **`decide_ring11`** — rings with one distinguished process (the
//!   token ring), alternating two coupled refinements
//! - **`oracle_scan`** — exhaustive ground truth per ring size, and where
//!   the kernel decision and the bounded scan tell different stories
//! - **`witness_cycles`** — finite witnesses: simple cycles and the
//!   enabling walks that keep them alive
//! - **`circulation_pairs`** — wrap-around arithmetic: which `(a, K)`
//!   pairs are compatible with the kernel's propagation structure
//! - **`fuzz_differential`** — three independent deciders racing over
//!   seeded random protocols
//! - **`protocol_files`** — the TOML file format, round-tripping, and
//!   validation diagnostics
//!
//! ```bash
//! cargo run -p ringlock --example decide_symmetric
//! cargo run -p ringlock --example decide_ring11
//! cargo run -p ringlock --example oracle_scan
//! cargo run -p ringlock --example witness_cycles
//! cargo run -p ringlock --example circulation_pairs
//! cargo run -p ringlock --example fuzz_differential
//! cargo run -p ringlock --example protocol_files
//! ```
//!
//! The same capabilities are scriptable through the `ringlock` binary:
//! `check`, `oracle`, `gen`, `fuzz`, `witness`, and `circulation`
//! subcommands (see `ringlock --help`).
//!
//! # Module map
//!
//! - [`transition`] — domain values, transitions, validated transition
//!   sets
//! - [`graph`] — the enabling graph between transitions and its cyclic
//!   part
//! - [`operators`] — shadows, filtering, and the one-step refinement
//! - [`decide`] — fixed-point deciders for symmetric and 1-1 rings
//! - [`relation`] — boolean relation algebra (composition, powers)
//! - [`circulation`] — propagation relations, commuting checks, and
//!   admissible wrap-around pairs
//! - [`witness`] — simple cycles, enabling walks, and the independent
//!   cycle-chain decider
//! - [`oracle`] — exhaustive explicit-state search at a concrete ring
//!   size
//! - [`protocols`] — named families, generators, certified fingerprints
//! - [`sampler`] — seeded random protocol generation
//! - [`differential`] — the three-way fuzzing harness
//! - [`format`] — the TOML protocol file format
//! - [`report`] — deterministic text and JSON rendering
//! - [`cli`] — subcommand logic and exit codes

pub mod circulation;
pub mod cli;
pub mod decide;
pub mod differential;
pub mod format;
pub mod graph;
pub mod operators;
pub mod oracle;
pub mod protocols;
pub mod relation;
pub mod report;
pub mod sampler;
pub mod transition;
pub mod witness;

pub use circulation::{circulation_search, AdmissibleKReport, PropagationRelation};
pub use decide::{decide_ring11, decide_symmetric, Decision, Ring11Verdict, Verdict};
pub use differential::{run_differential, DifferentialConfig, DifferentialReport};
pub use format::{emit_protocol, parse_protocol};
pub use graph::{pl, PseudolivelockGraph};
pub use operators::{filter, phi, shadow, ShadowSet};
pub use oracle::{oracle_livelock, oracle_scan, OracleError, OracleResult};
pub use protocols::{generate, roster, ProtocolSpec, Topology};
pub use transition::{validate_protocol, Transition, TransitionSet, Value, Violation};
pub use witness::{enumerate_simple_cycles, naive_decide, NaiveOutcome, SimpleCycle};
