//! Dispatching sequences: parsing, indexing instances, reducing to the
//! activities of one resource and comparing lassos.

use lsat_semantics::fixtures;
use lsat_semantics::sequence::{DispatchingSequence, SeqItem};

fn main() -> lsat_semantics::Result<()> {
    let spec = fixtures::claiming_example_spec();
    let seq: DispatchingSequence = "ActA ; (ActB ; ActC)^w".parse().expect("valid sequence");

    let mut first = Vec::new();
    for k in 1..=7 {
        if let SeqItem::Item(inst) = seq.item(k)? {
            first.push(inst.to_string());
        }
    }
    println!("{seq}: {}", first.join(", "));
    for r in ["R1", "R2"] {
        println!(
            "reduced to {r}: {}",
            seq.reduce_for_resource(&r.into(), &spec)?
        );
    }

    let a: DispatchingSequence = "A1 ; A2 ; (A1 ; A2)^w".parse().expect("valid sequence");
    let b: DispatchingSequence = "A1 ; (A2 ; A1)^w".parse().expect("valid sequence");
    println!("{a} and {b} describe the same word: {}", a.same_word(&b));
    for p in a.prefix_stream().take(4) {
        println!("prefix: [{p}]");
    }
    Ok(())
}
