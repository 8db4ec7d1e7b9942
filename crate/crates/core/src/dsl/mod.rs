//! Textual specification format (`.lsat`): lexer, parser with located
//! diagnostics, and a canonical printer.
//!
//! ```text
//! resource R1 { peripheral p1 unmovable { action a time 2.0 } }
//! activity Act {
//!   nodes { n1: claim R1  n2: p1.a  n3: release R1 }
//!   flow  { n1 -> n2 -> n3 }
//! }
//! dispatch sequence { Act ; repeat { Act } }
//! ```

mod lexer;
mod parser;
mod printer;

pub use parser::{parse, parse_bytes, Parsed};
pub use printer::pretty_print;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{DispatchDescription, NodeKind, TimingSpec};
    use crate::validate::validate_spec;
    use proptest::prelude::*;

    const EXAMPLE: &str = "\
// two resources, one activity
resource R1 { peripheral p1 unmovable { action a time 2.0 } }
resource R2 { peripheral p2 movable {
    positions { left, middle, right }
    move l_to_m from left to middle profile second(v=1.0, a=2.0) distance 1.0 settling 0.1
} }
activity Act {
  nodes { n1: claim R1   n2: claim R2   n3: p1.a
          n4: p2.l_to_m  n5: release R1 n6: release R2 }
  flow  { n1 -> n3 -> n5   n2 -> n4 -> n6   n3 -> n4 }
}
dispatch sequence { Act }
";

    fn codes(text: &str) -> Vec<&'static str> {
        parse(text, "t.lsat")
            .unwrap_err()
            .iter()
            .map(|d| d.code.as_str())
            .collect()
    }

    #[test]
    fn example_file() {
        let p = parse(EXAMPLE, "example.lsat").unwrap();
        let spec = &p.spec;
        assert_eq!(spec.resources.len(), 2);
        assert_eq!(spec.peripherals.len(), 2);
        assert_eq!(spec.activities.len(), 1);
        let act = &spec.activities["Act"];
        assert_eq!(act.nodes.len(), 6);
        assert_eq!(act.edges.len(), 5);
        assert_eq!(
            act.nodes["n4"],
            NodeKind::Action {
                action: "l_to_m".into(),
                peripheral: "p2".into()
            }
        );
        assert_eq!(validate_spec(spec), vec![]);
        let span = p.source_map.get("node Act.n3").unwrap();
        assert_eq!((span.line, span.column), (8, 41));
    }

    #[test]
    fn empty_file_lacks_dispatch() {
        let d = parse("", "e.lsat").unwrap_err();
        assert_eq!(d.len(), 1);
        assert_eq!(
            d[0].render("e.lsat"),
            "P_SYNTAX:e.lsat:1:1: missing `dispatch` section"
        );
    }

    #[test]
    fn duplicate_activity_reports_both_places() {
        let text = "activity A { nodes { } }\nactivity A { nodes { } }\ndispatch sequence { }";
        let d = parse(text, "d.lsat").unwrap_err();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].code.as_str(), "P_DUPLICATE");
        assert_eq!(d[0].span.as_ref().unwrap().line, 2);
        assert_eq!(d[0].related.as_ref().unwrap().line, 1);
    }

    #[test]
    fn misspelled_keywords() {
        assert_eq!(codes("resorce R { }"), ["P_UNKNOWN_KEYWORD"]);
        assert_eq!(
            codes("resource R { peripheral p unmovable { action a time gauss(mu=1) } }"),
            ["P_UNKNOWN_KEYWORD"]
        );
        assert_eq!(
            codes("activity A { nodes { n: grab R } } dispatch sequence { }"),
            ["P_UNKNOWN_KEYWORD"]
        );
    }

    #[test]
    fn syntax_errors() {
        assert_eq!(codes("resource { }"), ["P_SYNTAX"]);
        assert_eq!(codes("dispatch sequence { A ; }"), ["P_SYNTAX"]);
        assert_eq!(
            codes("resource R { peripheral p unmovable { action a time normal(mu=1) } }"),
            ["P_SYNTAX"]
        );
        assert_eq!(
            codes("dispatch fsa { states { s } initial t }"),
            ["E_UNKNOWN_REF"]
        );
    }

    #[test]
    fn timing_and_dispatch_forms() {
        let text = "
resource R { peripheral p unmovable {
  action a time pert(a=1.0, m=2.0, b=4.0)
  action b time triangular(b=3, a=1, m=2)
  action c time normal(mu=1.5, sigma=.2)
} }
dispatch fsa { states { s0, s1 } initial s0 edge s0 -A-> s1 edge s1 -B-> s0 }";
        let spec = parse(text, "t").unwrap().spec;
        let DispatchDescription::Fsa(d) = &spec.dispatch else {
            panic!("expected an automaton");
        };
        assert_eq!(d.transitions.len(), 2);
        let crate::model::PeripheralKind::Unmovable { actions } = &spec.peripherals["p"].kind
        else {
            panic!("expected unmovable");
        };
        assert_eq!(
            actions["b"],
            TimingSpec::Triangular {
                a: 1.0,
                m: 2.0,
                b: 3.0
            }
        );
        assert_eq!(
            actions["c"],
            TimingSpec::Normal {
                mu: 1.5,
                sigma: 0.2
            }
        );
    }

    #[test]
    fn repeat_block() {
        let spec = parse("dispatch sequence { A ; repeat { B ; C } }", "t")
            .unwrap()
            .spec;
        assert_eq!(
            spec.dispatch_sequence().unwrap().to_string(),
            "A ; (B ; C)^w"
        );
    }

    #[test]
    fn round_trip_of_example() {
        let spec = parse(EXAMPLE, "t").unwrap().spec;
        let text = pretty_print(&spec);
        assert_eq!(parse(&text, "t").unwrap().spec, spec);
        assert_eq!(pretty_print(&parse(&text, "t").unwrap().spec), text);
        assert!(!text.contains("//"));
    }

    #[test]
    fn printed_declarations_are_sorted() {
        let text = "resource Z { } resource A { } dispatch sequence { }";
        let out = pretty_print(&parse(text, "t").unwrap().spec);
        assert!(out.find("resource A").unwrap() < out.find("resource Z").unwrap());
    }

    fn offset_of(text: &str, line: usize, column: usize) -> Option<usize> {
        let mut l = 1;
        let mut c = 1;
        for (i, ch) in text.char_indices() {
            if (l, c) == (line, column) {
                return Some(i);
            }
            if ch == '\n' {
                l += 1;
                c = 1;
            } else {
                c += 1;
            }
        }
        ((l, c) == (line, column)).then_some(text.len())
    }

    proptest! {
        #[test]
        fn never_panics_on_bytes(bytes in proptest::collection::vec(any::<u8>(), 0..200)) {
            let _ = parse_bytes(&bytes, "fuzz");
        }

        #[test]
        fn spans_point_into_the_input(text in "[a-z{}():;.=0-9 \\n>-]{0,80}") {
            if let Err(diags) = parse(&text, "f") {
                for d in diags {
                    let s = d.span.clone().unwrap();
                    prop_assert!(offset_of(&text, s.line, s.column).is_some(), "{d}");
                }
            }
        }

        #[test]
        fn mutated_example_never_panics(cut in 0usize..EXAMPLE.len(), junk in "[ -~]{0,3}") {
            let mut text = EXAMPLE.to_string();
            if text.is_char_boundary(cut) {
                text.insert_str(cut, &junk);
            }
            if let Err(diags) = parse(&text, "f") {
                for d in diags {
                    let s = d.span.clone().unwrap();
                    prop_assert!(offset_of(&text, s.line, s.column).is_some(), "{d}");
                }
            }
        }
    }
}
