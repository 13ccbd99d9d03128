//! The TOML protocol file format: emit, parse, round-trip, reject.
//!
//! Files are the tool's wire format: `gen` writes them, `check`,
//! `oracle`, `witness`, and `circulation` read them, and bug reports
//! travel as them. Emission is deterministic to the byte, parsing
//! re-validates everything, and the two compose to the identity — so a
//! file in a bug report is exactly the instance the reporter ran.
//!
//! ```bash
//! cargo run -p ringlock --example protocol_files
//! ```

use ringlock::format::{emit_protocol, parse_protocol, FormatError};
use ringlock::protocols::generate;
use ringlock::transition::validate_protocol;

fn main() {
    // A symmetric file: one table, one domain size, a name for reports.
    let spec = generate("coloring-det", 3).expect("roster family");
    let text = emit_protocol(&spec);
    println!("== emitted symmetric file");
    print!("{text}");
    println!();

    // Round trip: parsing what we emit reproduces the instance exactly,
    // and emitting again reproduces the bytes.
    let parsed = parse_protocol(&text).expect("our own output parses");
    assert_eq!(parsed, spec);
    assert_eq!(emit_protocol(&parsed), text);
    println!("   parse(emit(spec)) == spec, emit is byte-stable");
    println!();

    // A 1-1 ring file carries two tables under the same domain.
    let spec = generate("dijkstra", 3).expect("roster family");
    let text = emit_protocol(&spec);
    println!("== emitted 1-1 ring file");
    print!("{text}");
    assert_eq!(parse_protocol(&text).expect("parses"), spec);
    println!();

    // Hand-written files may omit the name; everything else is checked.
    let minimal = "m = 3\ntopology = \"symmetric\"\ntransitions = [[0, 0, 1]]\n";
    let parsed = parse_protocol(minimal).expect("minimal file parses");
    println!("== minimal hand-written file");
    println!("   name defaults to {:?}", parsed.name);
    assert_eq!(parsed.name, "unnamed");
    println!();

    // Rejections carry the reason. Three different failure layers:
    println!("== what rejection looks like");

    // (a) not our shape: unknown fields are refused outright, so typos
    //     do not silently drop a table.
    let err = parse_protocol("m = 3\ntopology = \"symmetric\"\ntransitionz = [[0,0,1]]\n")
        .expect_err("typo field");
    println!("   unknown field:\n{}", indent(&err.to_string()));

    // (b) shape/topology mismatch: a symmetric file with ring tables.
    let err = parse_protocol("m = 3\ntopology = \"symmetric\"\np0_transitions = [[0,0,1]]\n")
        .expect_err("wrong fields");
    assert!(matches!(err, FormatError::WrongFields { .. }));
    println!("   wrong fields:\n{}", indent(&err.to_string()));

    // (c) invalid protocol: every violation is reported, not just the
    //     first — here a value out of range, a self-write, and a pair
    //     that breaks self-disabling all show up together.
    let err = parse_protocol(
        "m = 3\ntopology = \"symmetric\"\ntransitions = [[0, 0, 3], [1, 2, 2], [0, 0, 1], [0, 1, 0]]\n",
    )
    .expect_err("invalid table");
    assert!(matches!(err, FormatError::Invalid { .. }));
    println!("   invalid protocol:\n{}", indent(&err.to_string()));
    println!();

    // The same validation backs the library entry point, so a table
    // that never touches a file obeys the same rules.
    let violations = validate_protocol(3, &[(0, 0, 1), (0, 1, 0)]).expect_err("not self-disabling");
    println!("== validate_protocol agrees: {} violation(s)", violations.len());
    for v in &violations {
        println!("   - {v}");
    }

    println!();
    println!("one format, one validator, no way to smuggle an invalid instance");
    println!("past the deciders by writing it down instead of constructing it.");
}

fn indent(block: &str) -> String {
    block
        .trim_end()
        .lines()
        .map(|line| format!("     {line}"))
        .collect::<Vec<_>>()
        .join("\n")
}
