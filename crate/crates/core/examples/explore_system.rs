//! Explores the lazy system automaton of a repeated activity and shows how
//! the number of overlapping instances grows with depth.

use lsat_semantics::automata::{explore, ExploreOptions};
use lsat_semantics::builders::PeripheralPins;
use lsat_semantics::fixtures;
use lsat_semantics::sequence::DispatchingSequence;
use lsat_semantics::system::build_mseq;

fn main() -> lsat_semantics::Result<()> {
    let spec = fixtures::example_spec();
    let seq: DispatchingSequence = "(Act)^w".parse().expect("valid sequence");
    let m = build_mseq(&spec, &seq, &PeripheralPins::new())?;
    for depth in [2, 4, 8, 12, 16] {
        let x = explore(&m, ExploreOptions::depth(depth))?;
        let most = x.states.iter().map(|s| s.in_flight()).max().unwrap_or(0);
        println!(
            "depth {depth:>2}: {:>5} states, {:>5} transitions, up to {most} instances in flight",
            x.graph.states.len(),
            x.graph.transitions.len()
        );
    }
    let x = explore(&m, ExploreOptions::depth(6))?;
    if let Some(s) = x.states.iter().find(|s| s.in_flight() == 2) {
        println!(
            "example state: {}",
            lsat_semantics::automata::Automaton::state_key(&m, s)
        );
    }
    Ok(())
}
