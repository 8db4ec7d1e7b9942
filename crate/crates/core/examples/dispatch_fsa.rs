//! Describes allowed dispatch orders with a finite automaton, derives a
//! complete set of lassos for it, and compares the resulting system with a
//! single-sequence system.

use lsat_semantics::automata::bounded_language_equal;
use lsat_semantics::builders::PeripheralPins;
use lsat_semantics::fixtures;
use lsat_semantics::sequence::DispatchingSequence;
use lsat_semantics::system::{
    build_mseq, build_union, check_complete, suggest_complete_set, DispatchFsa,
};

fn main() -> lsat_semantics::Result<()> {
    let d = DispatchFsa::new()
        .initial("s0")
        .edge("s0", "A1", "s1")
        .edge("s1", "A2", "s0");

    let suggested = suggest_complete_set(&d, 4)?;
    for s in &suggested.sequences {
        println!("suggested: {s}");
    }
    println!("{}", suggested.report);

    let wrong: DispatchingSequence = "A1 ; (A1)^w".parse().expect("valid sequence");
    println!("{}", check_complete(&d, &[wrong], 10));

    let spec = fixtures::two_activity_spec();
    let pins = PeripheralPins::new();
    let union = build_union(&spec, &d, &pins)?;
    let single = build_mseq(&spec, &suggested.sequences[0], &pins)?;
    let verdict = bounded_language_equal(&union, &single, 16, 1_000_000)?;
    println!(
        "automaton dispatch equals {} up to depth 16: {}",
        suggested.sequences[0],
        verdict.is_equal()
    );
    Ok(())
}
