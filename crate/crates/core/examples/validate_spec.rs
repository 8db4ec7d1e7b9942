//! Parses a specification from text and prints located diagnostics.
//!
//! Run with a file argument, or without one to check a built-in example
//! that contains two mistakes.

use lsat_semantics::dsl::parse;
use lsat_semantics::validate::validate_spec;

const BROKEN: &str = "\
resource R1 { peripheral p1 unmovable { action a time 1.0  action b time 1.0 } }
activity Bad {
  nodes { c: claim R1  x: p1.a  y: p1.b  r: release R1  z: release R2 }
  flow  { c -> x -> r   c -> y -> r }
}
dispatch sequence { Bad }
";

fn main() {
    let (text, file) = match std::env::args().nth(1) {
        Some(path) => (std::fs::read_to_string(&path).expect("readable file"), path),
        None => (BROKEN.to_string(), "broken.lsat".to_string()),
    };
    let parsed = match parse(&text, &file) {
        Ok(p) => p,
        Err(diags) => {
            for d in diags {
                println!("{}", d.render(&file));
            }
            return;
        }
    };
    let mut diags = validate_spec(&parsed.spec);
    parsed.source_map.attach(&mut diags);
    if diags.is_empty() {
        println!("{file}: valid");
    }
    for d in diags {
        println!("{}", d.render(&file));
    }
}
