use std::fmt::Write;

use super::ExploredGraph;

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            _ => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Renders an explored graph as a Graphviz digraph. Initial states get an
/// entry arrow from a point-shaped pseudo-node; frontier states are dashed.
pub fn export_dot(g: &ExploredGraph) -> String {
    let mut s = String::new();
    s.push_str("digraph automaton {\n");
    s.push_str("  rankdir=LR;\n");
    s.push_str("  node [shape=ellipse];\n");
    for (i, key) in g.states.iter().enumerate() {
        let style = if g.frontier.contains(&i) {
            ", style=dashed"
        } else {
            ""
        };
        writeln!(s, "  s{i} [label={}{style}];", quote(key)).unwrap();
    }
    for i in &g.initial {
        writeln!(s, "  init{i} [shape=point, label=\"\"];").unwrap();
        writeln!(s, "  init{i} -> s{i};").unwrap();
    }
    for (from, e, to) in &g.transitions {
        writeln!(s, "  s{from} -> s{to} [label={}];", quote(&e.to_string())).unwrap();
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ActivityInstance, EventLabel};

    #[test]
    fn escapes_and_marks() {
        let e = EventLabel::claim(ActivityInstance::new("A", 1), "R");
        let g = ExploredGraph {
            states: vec!["x\"y".into(), "z".into()],
            transitions: vec![(0, e, 1)],
            initial: [0].into(),
            frontier: [1].into(),
            depth: 1,
            truncated: false,
        };
        let dot = export_dot(&g);
        assert!(dot.contains(r#"s0 [label="x\"y"];"#));
        assert!(dot.contains(r#"s1 [label="z", style=dashed];"#));
        assert!(dot.contains("init0 -> s0;"));
        assert!(dot.contains(r#"s0 -> s1 [label="A#1.claim(R)"];"#));
    }
}
