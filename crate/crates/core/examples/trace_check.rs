//! Checks event traces against a system automaton and reports the first
//! rejected event.

use lsat_semantics::automata::first_rejection;
use lsat_semantics::builders::PeripheralPins;
use lsat_semantics::fixtures;
use lsat_semantics::model::EventLabel;
use lsat_semantics::sequence::DispatchingSequence;
use lsat_semantics::system::build_mseq;

fn trace(lines: &[&str]) -> Vec<EventLabel> {
    lines
        .iter()
        .map(|l| l.parse().expect("valid event"))
        .collect()
}

fn main() -> lsat_semantics::Result<()> {
    let spec = fixtures::example_spec();
    let seq: DispatchingSequence = "(Act)^w".parse().expect("valid sequence");
    let m = build_mseq(&spec, &seq, &PeripheralPins::new())?;

    let overtaking = trace(&[
        "Act#1.claim(R1)",
        "Act#1.claim(R2)",
        "Act#1.do(p1.a)",
        "Act#1.release(R1)",
        "Act#2.claim(R1)",
        "Act#2.do(p1.a)",
        "Act#1.do(p2.b)",
    ]);
    let out_of_order = trace(&["Act#2.claim(R1)"]);
    let early_action = trace(&["Act#1.claim(R2)", "Act#1.do(p2.b)"]);

    for (name, t) in [
        ("overtaking", &overtaking),
        ("out of order", &out_of_order),
        ("early action", &early_action),
    ] {
        match first_rejection(&m, t) {
            None => println!("{name}: accept"),
            Some(i) => println!("{name}: reject at event {} ({})", i + 1, t[i]),
        }
    }
    Ok(())
}
