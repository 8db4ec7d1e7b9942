//! Builds the four kinds of component automata for the small reference
//! models and prints their sizes and DOT text.

use lsat_semantics::automata::{bounded_explore, export_dot, ExploreOptions};
use lsat_semantics::builders::{
    build_activity_automaton, build_availability, build_claiming, build_peripheral,
    InstanceUniverse,
};
use lsat_semantics::fixtures;
use lsat_semantics::model::ActivityInstance;
use lsat_semantics::validate::used_sets;

fn main() -> lsat_semantics::Result<()> {
    let spec = fixtures::example_spec();
    let seq = spec.dispatch_sequence().unwrap();
    let universe = InstanceUniverse::from_used(&used_sets(&spec, seq)?);

    let avail = build_availability(&spec, &"R1".into(), &universe);
    let g = bounded_explore(&avail, ExploreOptions::full())?;
    println!("availability R1: {} states", g.states.len());
    print!("{}", export_dot(&g));

    let act = build_activity_automaton(
        ActivityInstance::new("Act", 1),
        &fixtures::example_activity(),
    )?;
    let g = bounded_explore(&act, ExploreOptions::full())?;
    println!(
        "activity Act#1: {} states, {} transitions",
        g.states.len(),
        g.transitions.len()
    );

    let spec = fixtures::claiming_example_spec();
    let seq = spec.dispatch_sequence().unwrap();
    let universe = InstanceUniverse::from_used(&used_sets(&spec, seq)?);
    let claiming = build_claiming(&spec, &"R2".into(), seq, &universe)?;
    let first: Vec<String> = (0..4)
        .filter_map(|k| claiming.next_claim(k))
        .map(|e| e.to_string())
        .collect();
    println!("claiming R2 for {seq}: {}", first.join(", "));

    let spec = fixtures::peripheral_spec();
    let seq = spec.dispatch_sequence().unwrap();
    let universe = InstanceUniverse::from_used(&used_sets(&spec, seq)?);
    for p in ["pu", "pm"] {
        let q = build_peripheral(&spec, &p.into(), &universe)?;
        let g = bounded_explore(&q, ExploreOptions::full())?;
        println!(
            "peripheral {p}: {} states, {} transitions, {} initial",
            g.states.len(),
            g.transitions.len(),
            g.initial.len()
        );
    }
    Ok(())
}
