//! The protocol file format: TOML in, TOML out, byte-stable.
//!
//! A protocol file names the instance, fixes the domain size `m`, picks a
//! topology, and lists transition triples `[pred, own, written]`:
//!
//! ```toml
//! name = "coloring-det-m3"
//! m = 3
//! topology = "symmetric"
//! transitions = [
//!     [0, 0, 1],
//!     [1, 1, 2],
//!     [2, 2, 0],
//! ]
//! ```
//!
//! A `ring11` topology replaces `transitions` with `p0_transitions` (the
//! distinguished position) and `other_transitions` (everyone else). Both
//! tables share the one `m`.
//!
//! Parsing rejects unknown fields, mismatched field/topology combinations,
//! and any table that fails protocol validation — reporting *every*
//! validation violation, not just the first. Emission is hand-rendered so
//! the output is deterministic down to the byte: parsing an emitted file
//! always reproduces the original instance exactly.

use serde::Deserialize;
use thiserror::Error;

use crate::protocols::{ProtocolSpec, Topology};
use crate::transition::{validate_protocol, TransitionSet, Violation};

/// Raw shape of a protocol file, prior to validation.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProtocolFile {
    name: Option<String>,
    m: u8,
    topology: String,
    transitions: Option<Vec<[u8; 3]>>,
    p0_transitions: Option<Vec<[u8; 3]>>,
    other_transitions: Option<Vec<[u8; 3]>>,
}

/// Why a protocol file was rejected.
#[derive(Debug, Error)]
pub enum FormatError {
    #[error("protocol file is not valid TOML: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("unknown topology {found:?}: expected \"symmetric\" or \"ring11\"")]
    UnknownTopology { found: String },
    #[error("topology \"{topology}\" takes {expected}, but the file has {found}")]
    WrongFields {
        topology: &'static str,
        expected: &'static str,
        found: String,
    },
    #[error("invalid protocol:\n{}", render_violations(.violations))]
    Invalid { violations: Vec<Violation> },
}

fn render_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| format!("  - {v}"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn listed_fields(file: &ProtocolFile) -> String {
    let mut present = Vec::new();
    if file.transitions.is_some() {
        present.push("transitions");
    }
    if file.p0_transitions.is_some() {
        present.push("p0_transitions");
    }
    if file.other_transitions.is_some() {
        present.push("other_transitions");
    }
    if present.is_empty() {
        "no transition fields".to_string()
    } else {
        present.join(", ")
    }
}

fn validated(m: u8, triples: &[[u8; 3]]) -> Result<TransitionSet, FormatError> {
    let triples: Vec<(u8, u8, u8)> = triples.iter().map(|t| (t[0], t[1], t[2])).collect();
    validate_protocol(m, &triples).map_err(|violations| FormatError::Invalid { violations })
}

/// Parses a protocol file into a validated instance.
pub fn parse_protocol(text: &str) -> Result<ProtocolSpec, FormatError> {
    let file: ProtocolFile = toml::from_str(text)?;
    let name = file.name.clone().unwrap_or_else(|| "unnamed".to_string());
    let topology = match file.topology.as_str() {
        "symmetric" => {
            let Some(triples) = &file.transitions else {
                return Err(FormatError::WrongFields {
                    topology: "symmetric",
                    expected: "the single field `transitions`",
                    found: listed_fields(&file),
                });
            };
            if file.p0_transitions.is_some() || file.other_transitions.is_some() {
                return Err(FormatError::WrongFields {
                    topology: "symmetric",
                    expected: "the single field `transitions`",
                    found: listed_fields(&file),
                });
            }
            Topology::Symmetric(validated(file.m, triples)?)
        }
        "ring11" => {
            let (Some(p0), Some(others)) = (&file.p0_transitions, &file.other_transitions) else {
                return Err(FormatError::WrongFields {
                    topology: "ring11",
                    expected: "both `p0_transitions` and `other_transitions`",
                    found: listed_fields(&file),
                });
            };
            if file.transitions.is_some() {
                return Err(FormatError::WrongFields {
                    topology: "ring11",
                    expected: "both `p0_transitions` and `other_transitions`",
                    found: listed_fields(&file),
                });
            }
            Topology::Ring11 {
                p0: validated(file.m, p0)?,
                others: validated(file.m, others)?,
            }
        }
        other => {
            return Err(FormatError::UnknownTopology {
                found: other.to_string(),
            })
        }
    };
    Ok(ProtocolSpec { name, topology })
}

fn escape(text: &str) -> String {
    text.chars()
        .flat_map(|c| match c {
            '\\' => "\\\\".chars().collect::<Vec<_>>(),
            '"' => "\\\"".chars().collect(),
            '\n' => "\\n".chars().collect(),
            other => vec![other],
        })
        .collect()
}

fn render_table(out: &mut String, key: &str, set: &TransitionSet) {
    if set.is_empty() {
        out.push_str(&format!("{key} = []\n"));
        return;
    }
    out.push_str(&format!("{key} = [\n"));
    for t in set.iter() {
        let (p, o, w) = t.as_triple();
        out.push_str(&format!("    [{p}, {o}, {w}],\n"));
    }
    out.push_str("]\n");
}

/// Renders an instance as a protocol file, with optional `#` comment
/// lines above the fields.
pub fn emit_protocol_with_header(spec: &ProtocolSpec, header: &[String]) -> String {
    let mut out = String::new();
    for line in header {
        out.push_str(&format!("# {line}\n"));
    }
    out.push_str(&format!("name = \"{}\"\n", escape(&spec.name)));
    out.push_str(&format!("m = {}\n", spec.topology.m()));
    match &spec.topology {
        Topology::Symmetric(t) => {
            out.push_str("topology = \"symmetric\"\n");
            render_table(&mut out, "transitions", t);
        }
        Topology::Ring11 { p0, others } => {
            out.push_str("topology = \"ring11\"\n");
            render_table(&mut out, "p0_transitions", p0);
            render_table(&mut out, "other_transitions", others);
        }
    }
    out
}

/// Renders an instance as a protocol file.
pub fn emit_protocol(spec: &ProtocolSpec) -> String {
    emit_protocol_with_header(spec, &[])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocols::{generate, roster};
    use crate::transition::Transition;

    #[test]
    fn every_roster_instance_round_trips() {
        for spec in roster() {
            let text = emit_protocol(&spec);
            let reparsed = parse_protocol(&text).expect("emitted files parse");
            assert_eq!(reparsed, spec, "round trip of {}", spec.name);
            assert_eq!(emit_protocol(&reparsed), text, "emission is stable");
        }
    }

    #[test]
    fn emission_is_frozen_for_the_increment_ring() {
        let spec = generate("coloring-det", 3).unwrap();
        let expected = "name = \"coloring-det-m3\"\n\
                        m = 3\n\
                        topology = \"symmetric\"\n\
                        transitions = [\n    \
                            [0, 0, 1],\n    \
                            [1, 1, 2],\n    \
                            [2, 2, 0],\n\
                        ]\n";
        assert_eq!(emit_protocol(&spec), expected);
    }

    #[test]
    fn comments_and_formatting_freedom_are_tolerated() {
        let text = r#"
# anything above the fields
name = "scratch"   # trailing remark
m = 3

topology = "symmetric"
transitions = [[1, 0, 1], [2, 1, 0]]
"#;
        let spec = parse_protocol(text).unwrap();
        assert_eq!(spec.name, "scratch");
        let Topology::Symmetric(t) = &spec.topology else {
            panic!("symmetric file");
        };
        assert_eq!(
            t.transitions(),
            &[Transition::new(1, 0, 1), Transition::new(2, 1, 0)]
        );
    }

    #[test]
    fn name_defaults_when_omitted() {
        let spec = parse_protocol("m = 3\ntopology = \"symmetric\"\ntransitions = []\n").unwrap();
        assert_eq!(spec.name, "unnamed");
    }

    #[test]
    fn ring_files_parse_both_tables() {
        let text = emit_protocol(&generate("dijkstra", 3).unwrap());
        let spec = parse_protocol(&text).unwrap();
        let Topology::Ring11 { p0, others } = &spec.topology else {
            panic!("ring file");
        };
        assert_eq!(p0.len(), 3);
        assert_eq!(others.len(), 6);
    }

    #[test]
    fn header_comments_do_not_change_the_instance() {
        let spec = generate("coloring-nondet", 4).unwrap();
        let text = emit_protocol_with_header(
            &spec,
            &["generated table".to_string(), "uncertified".to_string()],
        );
        assert!(text.starts_with("# generated table\n# uncertified\n"));
        assert_eq!(parse_protocol(&text).unwrap(), spec);
    }

    #[test]
    fn unknown_fields_are_rejected_with_position() {
        let err = parse_protocol(
            "m = 3\ntopology = \"symmetric\"\ntransitions = []\nfrobnicate = 1\n",
        )
        .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("frobnicate"), "names the field: {msg}");
    }

    #[test]
    fn syntax_errors_carry_line_information() {
        let err = parse_protocol("m = \n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line"), "points at the line: {msg}");
    }

    #[test]
    fn topology_field_mismatches_are_rejected() {
        let missing = parse_protocol("m = 3\ntopology = \"symmetric\"\n").unwrap_err();
        assert!(matches!(missing, FormatError::WrongFields { .. }));

        let mixed = parse_protocol(
            "m = 3\ntopology = \"ring11\"\ntransitions = []\n\
             p0_transitions = []\nother_transitions = []\n",
        )
        .unwrap_err();
        assert!(matches!(mixed, FormatError::WrongFields { .. }));

        let unknown =
            parse_protocol("m = 3\ntopology = \"mesh\"\ntransitions = []\n").unwrap_err();
        assert!(matches!(unknown, FormatError::UnknownTopology { .. }));
    }

    #[test]
    fn validation_reports_every_violation() {
        let err = parse_protocol(
            "m = 3\ntopology = \"symmetric\"\ntransitions = [[0, 1, 1], [5, 0, 1]]\n",
        )
        .unwrap_err();
        let FormatError::Invalid { violations } = &err else {
            panic!("expected validation failure, got {err}");
        };
        assert_eq!(violations.len(), 2, "{violations:?}");
        let msg = err.to_string();
        assert!(msg.contains("  - "), "lists violations line by line: {msg}");
    }

    #[test]
    fn quotes_in_names_survive_the_round_trip() {
        let spec = ProtocolSpec {
            name: "odd \"name\" \\ here".to_string(),
            topology: Topology::Symmetric(TransitionSet::empty(3)),
        };
        let reparsed = parse_protocol(&emit_protocol(&spec)).unwrap();
        assert_eq!(reparsed.name, spec.name);
    }
}
