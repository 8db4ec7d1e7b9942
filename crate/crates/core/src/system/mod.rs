//! Whole-system automata: one dispatching sequence, or every sequence a
//! dispatch automaton allows.

mod fsa;
mod kernel;
mod mseq;
mod union;

pub use fsa::{
    check_complete, suggest_complete_set, CompletenessReport, DispatchFsa, SuggestedSet,
    SUGGEST_BUDGET,
};
pub use kernel::Execution;
pub use mseq::{build_mseq, build_mseq_explicit, SystemAutomaton, SystemState};
pub use union::{build_union, UnionAutomaton, UnionState};

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::automata::{bounded_language_equal, explore, Automaton, ExploreOptions};
    use crate::builders::PeripheralPins;
    use crate::fixtures;
    use crate::model::{Activity, EventLabel, Specification};
    use crate::sequence::DispatchingSequence;

    fn seq(s: &str) -> DispatchingSequence {
        s.parse().unwrap()
    }

    fn no_pins() -> PeripheralPins {
        PeripheralPins::new()
    }

    /// Every trace of length at most `depth`, by depth-first enumeration.
    fn traces<A: Automaton>(a: &A, depth: usize) -> BTreeSet<Vec<EventLabel>> {
        fn go<A: Automaton>(
            a: &A,
            s: &A::State,
            path: &mut Vec<EventLabel>,
            depth: usize,
            out: &mut BTreeSet<Vec<EventLabel>>,
        ) {
            out.insert(path.clone());
            if path.len() == depth {
                return;
            }
            for (e, t) in a.successors(s) {
                path.push(e);
                go(a, &t, path, depth, out);
                path.pop();
            }
        }
        let mut out = BTreeSet::new();
        for s in a.initial_states() {
            go(a, &s, &mut Vec::new(), depth, &mut out);
        }
        out
    }

    #[test]
    fn single_instance_terminates_with_resources_released() {
        let spec = fixtures::example_spec();
        let m = build_mseq(&spec, &seq("Act"), &no_pins()).unwrap();
        let x = explore(&m, ExploreOptions::full()).unwrap();
        assert!(!x.graph.truncated);
        let terminal: Vec<_> = (0..x.states.len())
            .filter(|&i| x.graph.transitions.iter().all(|(f, _, _)| *f != i))
            .collect();
        assert!(!terminal.is_empty());
        for i in terminal {
            let s = &x.states[i];
            assert!(s.exec.claimed.iter().all(|c| !c));
            assert_eq!(s.in_flight(), 0);
        }
        let explicit = build_mseq_explicit(&spec, &seq("Act"), 1, &no_pins()).unwrap();
        assert!(bounded_language_equal(&m, &explicit, 6, 1_000_000)
            .unwrap()
            .is_equal());
    }

    #[test]
    fn empty_sequence_has_only_the_empty_trace() {
        let spec = fixtures::example_spec();
        let m = build_mseq(&spec, &seq("ε"), &no_pins()).unwrap();
        assert_eq!(traces(&m, 5), BTreeSet::from([vec![]]));
        let u = build_union(&spec, &DispatchFsa::new().initial("s"), &no_pins()).unwrap();
        assert_eq!(traces(&u, 5), BTreeSet::from([vec![]]));
    }

    #[test]
    fn later_instance_can_overtake_inside_a_resource_gap() {
        let spec = fixtures::example_spec();
        let m = build_mseq(&spec, &seq("(Act)^w"), &no_pins()).unwrap();
        let a2: EventLabel = "Act#2.do(p1.a)".parse().unwrap();
        let b1: EventLabel = "Act#1.do(p2.b)".parse().unwrap();
        let found = traces(&m, 8).into_iter().any(|t| {
            let i = t.iter().position(|e| *e == a2);
            let j = t.iter().position(|e| *e == b1);
            i.is_some() && j.is_none_or(|j| i < Some(j))
        });
        assert!(found);
    }

    #[test]
    fn lazy_product_matches_explicit_composition() {
        for (spec, s) in [
            (fixtures::example_spec(), "(Act)^w"),
            (fixtures::claiming_example_spec(), "ActA ; (ActB ; ActC)^w"),
            (fixtures::two_activity_spec(), "A1 ; A2 ; (A1 ; A2)^w"),
            (fixtures::peripheral_spec(), "ActA ; ActB"),
        ] {
            let lazy = build_mseq(&spec, &seq(s), &no_pins()).unwrap();
            let explicit = build_mseq_explicit(&spec, &seq(s), 8, &no_pins()).unwrap();
            let v = bounded_language_equal(&lazy, &explicit, 8, 5_000_000).unwrap();
            assert!(v.is_equal(), "{s}: {v:?}");
        }
    }

    #[test]
    fn equivalent_lassos_give_equal_languages() {
        let spec = fixtures::two_activity_spec();
        let a = build_mseq(&spec, &seq("A1 ; A2 ; (A1 ; A2)^w"), &no_pins()).unwrap();
        let b = build_mseq(&spec, &seq("A1 ; (A2 ; A1)^w"), &no_pins()).unwrap();
        assert!(bounded_language_equal(&a, &b, 20, 5_000_000)
            .unwrap()
            .is_equal());
    }

    #[test]
    fn cycle_automaton_matches_its_sequence() {
        let spec = fixtures::two_activity_spec();
        let d = DispatchFsa::new()
            .initial("s0")
            .edge("s0", "A1", "s1")
            .edge("s1", "A2", "s0");
        let u = build_union(&spec, &d, &no_pins()).unwrap();
        let m = build_mseq(&spec, &seq("A1 ; (A2 ; A1)^w"), &no_pins()).unwrap();
        let v = bounded_language_equal(&u, &m, 20, 5_000_000).unwrap();
        assert!(v.is_equal(), "{v:?}");
    }

    fn disjoint_spec() -> Specification {
        let mut spec = Specification::default();
        spec.add_resource("R1");
        spec.add_resource("R2");
        spec.add_peripheral("R1", fixtures::unmovable("p1", &["x"]));
        spec.add_peripheral("R2", fixtures::unmovable("p2", &["y"]));
        for (a, r, p, x) in [("A1", "R1", "p1", "x"), ("A2", "R2", "p2", "y")] {
            spec.add_activity(
                Activity::new(a)
                    .node("c", fixtures::claim(r))
                    .node("d", fixtures::action(p, x))
                    .node("r", fixtures::release(r))
                    .edge("c", "d")
                    .edge("d", "r"),
            );
        }
        spec
    }

    #[test]
    fn branching_automaton_is_the_union_of_its_branches() {
        let spec = disjoint_spec();
        let d = DispatchFsa::new()
            .initial("s")
            .edge("s", "A1", "t")
            .edge("s", "A2", "u");
        let u = build_union(&spec, &d, &no_pins()).unwrap();
        let mut expected = traces(&build_mseq(&spec, &seq("A1"), &no_pins()).unwrap(), 10);
        expected.extend(traces(
            &build_mseq(&spec, &seq("A2"), &no_pins()).unwrap(),
            10,
        ));
        assert_eq!(traces(&u, 10), expected);
    }

    #[test]
    fn empty_dispatch_automaton_is_rejected() {
        let spec = fixtures::two_activity_spec();
        let err = build_union(&spec, &DispatchFsa::new(), &no_pins()).unwrap_err();
        assert_eq!(err.code(), "E_EMPTY_FSA");
    }

    #[test]
    fn invalid_spec_is_rejected() {
        let mut spec = fixtures::example_spec();
        let act = spec.activities.values_mut().next().unwrap();
        act.edges.insert(("n5".into(), "n1".into()));
        let err = build_mseq(&spec, &seq("Act"), &no_pins()).unwrap_err();
        assert_eq!(err.code(), "E_INVALID_SPEC");
    }

    #[test]
    fn pinned_peripherals_start_in_one_state() {
        let spec = fixtures::example_spec();
        let pins = PeripheralPins::from([("p1".into(), "a".to_string())]);
        let m = build_mseq(&spec, &seq("Act"), &pins).unwrap();
        assert_eq!(m.initial_states().len(), 1);
        let bad = PeripheralPins::from([("p1".into(), "zz".to_string())]);
        assert_eq!(
            build_mseq(&spec, &seq("Act"), &bad).unwrap_err().code(),
            "E_BAD_PIN"
        );
    }
}
