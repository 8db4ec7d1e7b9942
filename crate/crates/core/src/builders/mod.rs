//! Component automata: resource availability, FIFO claiming, activity
//! instance progress and peripheral state.

mod activity;
mod peripheral;
mod resource;

pub use activity::{
    build_activity_automaton, enumerate_postsets, ActivityAutomaton, CompiledActivity, Postset,
    DEFAULT_POSTSET_CAP,
};
pub use peripheral::{build_peripheral, PeripheralAutomaton, PeripheralState};
pub use resource::{
    build_availability, build_claiming, AvailabilityAutomaton, AvailabilityState,
    ClaimingAutomaton, InstanceUniverse,
};

use std::collections::BTreeMap;

use crate::automata::Automaton;
use crate::error::{Error, Result};
use crate::model::{EventLabel, PeripheralId, Specification};
use crate::sequence::DispatchingSequence;
use crate::validate::used_sets;

/// Any of the four component automata, so heterogeneous families can be
/// composed in one product.
#[derive(Debug, Clone, PartialEq)]
pub enum Component {
    Availability(AvailabilityAutomaton),
    Claiming(ClaimingAutomaton),
    Activity(ActivityAutomaton),
    Peripheral(PeripheralAutomaton),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ComponentState {
    Availability(AvailabilityState),
    Claiming(usize),
    Activity(Postset),
    Peripheral(PeripheralState),
}

macro_rules! dispatch_component {
    ($self:expr, $s:expr, |$a:ident, $x:ident| $body:expr) => {
        match ($self, $s) {
            (Component::Availability($a), ComponentState::Availability($x)) => $body,
            (Component::Claiming($a), ComponentState::Claiming($x)) => $body,
            (Component::Activity($a), ComponentState::Activity($x)) => $body,
            (Component::Peripheral($a), ComponentState::Peripheral($x)) => $body,
            _ => panic!("state does not belong to this component"),
        }
    };
}

fn wrap<S>(
    v: Vec<(EventLabel, S)>,
    f: impl Fn(S) -> ComponentState,
) -> Vec<(EventLabel, ComponentState)> {
    v.into_iter().map(|(e, s)| (e, f(s))).collect()
}

impl Automaton for Component {
    type State = ComponentState;

    fn initial_states(&self) -> Vec<ComponentState> {
        match self {
            Component::Availability(a) => a
                .initial_states()
                .into_iter()
                .map(ComponentState::Availability)
                .collect(),
            Component::Claiming(a) => a
                .initial_states()
                .into_iter()
                .map(ComponentState::Claiming)
                .collect(),
            Component::Activity(a) => a
                .initial_states()
                .into_iter()
                .map(ComponentState::Activity)
                .collect(),
            Component::Peripheral(a) => a
                .initial_states()
                .into_iter()
                .map(ComponentState::Peripheral)
                .collect(),
        }
    }

    fn successors(&self, s: &ComponentState) -> Vec<(EventLabel, ComponentState)> {
        match (self, s) {
            (Component::Availability(a), ComponentState::Availability(x)) => {
                wrap(a.successors(x), ComponentState::Availability)
            }
            (Component::Claiming(a), ComponentState::Claiming(x)) => {
                wrap(a.successors(x), ComponentState::Claiming)
            }
            (Component::Activity(a), ComponentState::Activity(x)) => {
                wrap(a.successors(x), ComponentState::Activity)
            }
            (Component::Peripheral(a), ComponentState::Peripheral(x)) => {
                wrap(a.successors(x), ComponentState::Peripheral)
            }
            _ => panic!("state does not belong to this component"),
        }
    }

    fn step(&self, s: &ComponentState, e: &EventLabel) -> Vec<ComponentState> {
        match (self, s) {
            (Component::Availability(a), ComponentState::Availability(x)) => a
                .step(x, e)
                .into_iter()
                .map(ComponentState::Availability)
                .collect(),
            (Component::Claiming(a), ComponentState::Claiming(x)) => a
                .step(x, e)
                .into_iter()
                .map(ComponentState::Claiming)
                .collect(),
            (Component::Activity(a), ComponentState::Activity(x)) => a
                .step(x, e)
                .into_iter()
                .map(ComponentState::Activity)
                .collect(),
            (Component::Peripheral(a), ComponentState::Peripheral(x)) => a
                .step(x, e)
                .into_iter()
                .map(ComponentState::Peripheral)
                .collect(),
            _ => panic!("state does not belong to this component"),
        }
    }

    fn in_alphabet(&self, e: &EventLabel) -> bool {
        match self {
            Component::Availability(a) => a.in_alphabet(e),
            Component::Claiming(a) => a.in_alphabet(e),
            Component::Activity(a) => a.in_alphabet(e),
            Component::Peripheral(a) => a.in_alphabet(e),
        }
    }

    fn state_key(&self, s: &ComponentState) -> String {
        dispatch_component!(self, s, |a, x| a.state_key(x))
    }
}

impl Component {
    pub fn name(&self) -> String {
        match self {
            Component::Availability(a) => format!("availability:{}", a.resource),
            Component::Claiming(a) => format!("claiming:{}", a.resource),
            Component::Activity(a) => format!("activity:{}", a.instance),
            Component::Peripheral(a) => format!("peripheral:{}", a.peripheral),
        }
    }
}

/// Initial peripheral states to fix instead of starting from every state.
pub type PeripheralPins = BTreeMap<PeripheralId, String>;

/// Every component automaton relevant to `seq`: availability and claiming
/// automata per used resource, one activity automaton per used instance and
/// one automaton per used peripheral.
///
/// Instances of unbounded activities are materialized up to
/// `instance_cap`; a trace of length `d` can only involve instances with
/// index at most `d`, so a cap of at least the exploration depth loses no
/// bounded behavior.
pub fn build_components(
    spec: &Specification,
    seq: &DispatchingSequence,
    instance_cap: u32,
    pins: &PeripheralPins,
) -> Result<Vec<Component>> {
    let used = used_sets(spec, seq)?;
    let universe = InstanceUniverse::from_used(&used).with_enumeration_limit(instance_cap);
    let mut out = Vec::new();
    for r in &used.resources {
        out.push(Component::Availability(build_availability(
            spec, r, &universe,
        )));
    }
    for r in &used.resources {
        out.push(Component::Claiming(build_claiming(
            spec, r, seq, &universe,
        )?));
    }
    for a in &used.activities {
        let act = spec
            .activity(a)
            .ok_or_else(|| Error::unknown("activity", a))?;
        for inst in universe.instances_of(a) {
            out.push(Component::Activity(build_activity_automaton(inst, act)?));
        }
    }
    for p in &used.peripherals {
        let mut q = build_peripheral(spec, p, &universe)?;
        if let Some(name) = pins.get(p) {
            q.pin(name)?;
        }
        out.push(Component::Peripheral(q));
    }
    for p in pins.keys() {
        if !used.peripherals.contains(p) {
            return Err(Error::unknown("used peripheral", p));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{accepts_trace, bounded_explore, ExploreOptions};
    use crate::fixtures;
    use crate::model::{ActivityInstance, EventLabel, ResourceId};
    use crate::validate::used_sets;

    fn inst(a: &str, j: u32) -> ActivityInstance {
        ActivityInstance::new(a, j)
    }

    fn universe(spec: &Specification) -> InstanceUniverse {
        InstanceUniverse::from_used(&used_sets(spec, spec.dispatch_sequence().unwrap()).unwrap())
    }

    #[test]
    fn availability_has_two_states() {
        let spec = fixtures::example_spec();
        let a = build_availability(&spec, &"R1".into(), &universe(&spec));
        let g = bounded_explore(&a, ExploreOptions::depth(5)).unwrap();
        assert_eq!(g.states, vec!["released", "claimed"]);
        assert_eq!(g.transitions.len(), 2);
        assert_eq!(g.initial.len(), 1);
        let cl = EventLabel::claim(inst("Act", 1), "R1");
        let rl = EventLabel::release(inst("Act", 1), "R1");
        assert!(accepts_trace(&a, &[cl.clone(), rl.clone(), cl.clone()]));
        assert!(!accepts_trace(&a, &[cl.clone(), cl.clone()]));
        assert!(!accepts_trace(&a, &[rl]));
    }

    #[test]
    fn unused_resource_has_no_transitions() {
        let mut spec = fixtures::example_spec();
        spec.add_resource("R9");
        let a = build_availability(&spec, &"R9".into(), &universe(&spec));
        let g = bounded_explore(&a, ExploreOptions::depth(5)).unwrap();
        assert_eq!(g.states.len(), 1);
        assert!(g.transitions.is_empty());
        // released -> claimed is never possible, so only one state is reached
        let all = [AvailabilityState::Released, AvailabilityState::Claimed];
        assert!(all.iter().all(|s| a.successors(s).is_empty()));
    }

    #[test]
    fn claiming_follows_reduced_order() {
        let spec = fixtures::claiming_example_spec();
        let seq = spec.dispatch_sequence().unwrap().clone();
        let u = universe(&spec).with_enumeration_limit(10);
        let path = |r: &str| -> Vec<String> {
            let c = build_claiming(&spec, &r.into(), &seq, &u).unwrap();
            (0..4)
                .map(|k| c.next_claim(k).unwrap().to_string())
                .collect()
        };
        assert_eq!(
            path("R1"),
            [
                "ActA#1.claim(R1)",
                "ActB#1.claim(R1)",
                "ActB#2.claim(R1)",
                "ActB#3.claim(R1)"
            ]
        );
        assert_eq!(
            path("R2"),
            [
                "ActB#1.claim(R2)",
                "ActC#1.claim(R2)",
                "ActB#2.claim(R2)",
                "ActC#2.claim(R2)"
            ]
        );
        let c = build_claiming(&spec, &"R1".into(), &seq, &u).unwrap();
        let g = bounded_explore(&c, ExploreOptions::depth(3)).unwrap();
        assert_eq!(g.states.len(), 4);
        assert_eq!(g.transitions.len(), 3);
        assert_eq!(g.states[2], "ActA#1;ActB#1");
    }

    #[test]
    fn claiming_unused_resource_is_a_single_state() {
        let mut spec = fixtures::claiming_example_spec();
        spec.add_resource("R9");
        let seq = spec.dispatch_sequence().unwrap().clone();
        let c = build_claiming(&spec, &"R9".into(), &seq, &universe(&spec)).unwrap();
        let g = bounded_explore(&c, ExploreOptions::depth(5)).unwrap();
        assert_eq!((g.states.len(), g.transitions.len()), (1, 0));
    }

    #[test]
    fn postsets_of_small_activities() {
        let empty = crate::model::Activity::new("E");
        assert_eq!(
            enumerate_postsets(&empty, 10).unwrap(),
            vec![Default::default()]
        );
        let one = crate::model::Activity::new("O").node("n", fixtures::claim("R1"));
        assert_eq!(enumerate_postsets(&one, 10).unwrap().len(), 2);
        assert_eq!(
            enumerate_postsets(&fixtures::example_activity(), DEFAULT_POSTSET_CAP)
                .unwrap()
                .len(),
            12
        );
        let err = enumerate_postsets(&fixtures::example_activity(), 5).unwrap_err();
        assert_eq!(err.code(), "E_TOO_LARGE");
    }

    #[test]
    fn activity_automaton_shape() {
        let b = build_activity_automaton(inst("Act", 1), &fixtures::example_activity()).unwrap();
        let g = bounded_explore(&b, ExploreOptions::full()).unwrap();
        assert_eq!((g.states.len(), g.transitions.len()), (12, 16));
        let first: Vec<String> = b
            .successors(&b.initial_states()[0])
            .into_iter()
            .map(|(e, _)| e.to_string())
            .collect();
        assert_eq!(first, ["Act#1.claim(R1)", "Act#1.claim(R2)"]);
        let terminal: Vec<&String> = g
            .states
            .iter()
            .enumerate()
            .filter(|(i, _)| !g.transitions.iter().any(|(f, _, _)| f == i))
            .map(|(_, s)| s)
            .collect();
        assert_eq!(terminal, vec!["∅"]);
        // claim, action and release events all belong to the alphabet
        assert!(b.in_alphabet(&EventLabel::release(inst("Act", 1), "R2")));
        assert!(!b.in_alphabet(&EventLabel::release(inst("Act", 2), "R2")));
    }

    #[test]
    fn peripheral_automaton_shapes() {
        let spec = fixtures::peripheral_spec();
        let u = universe(&spec);
        let qu = build_peripheral(&spec, &"pu".into(), &u).unwrap();
        let g = bounded_explore(&qu, ExploreOptions::full()).unwrap();
        assert_eq!(
            (g.states.len(), g.transitions.len(), g.initial.len()),
            (2, 4, 2)
        );
        let loops = g.transitions.iter().filter(|(f, _, t)| f == t).count();
        assert_eq!(loops, 2);

        let qm = build_peripheral(&spec, &"pm".into(), &u).unwrap();
        let g = bounded_explore(&qm, ExploreOptions::full()).unwrap();
        assert_eq!(
            (g.states.len(), g.transitions.len(), g.initial.len()),
            (3, 4, 3)
        );
    }

    #[test]
    fn movable_with_one_used_move() {
        let mut spec = fixtures::peripheral_spec();
        let b = spec.activities.get_mut("ActB").unwrap();
        *b = crate::model::Activity::new("ActB")
            .node("c", fixtures::claim("Rm"))
            .node("m1", fixtures::action("pm", "l_to_m"))
            .node("r", fixtures::release("Rm"))
            .edge("c", "m1")
            .edge("m1", "r");
        let qm = build_peripheral(&spec, &"pm".into(), &universe(&spec)).unwrap();
        let g = bounded_explore(&qm, ExploreOptions::full()).unwrap();
        assert_eq!((g.states.len(), g.transitions.len()), (2, 1));
    }

    #[test]
    fn pins_restrict_initial_states() {
        let spec = fixtures::peripheral_spec();
        let mut qm = build_peripheral(&spec, &"pm".into(), &universe(&spec)).unwrap();
        qm.pin("left").unwrap();
        assert_eq!(qm.initial_states().len(), 1);
        assert_eq!(qm.pin("nowhere").unwrap_err().code(), "E_BAD_PIN");
    }

    #[test]
    fn components_of_claiming_example() {
        let spec = fixtures::claiming_example_spec();
        let seq = spec.dispatch_sequence().unwrap().clone();
        let comps = build_components(&spec, &seq, 2, &PeripheralPins::new()).unwrap();
        let names: Vec<String> = comps.iter().map(Component::name).collect();
        assert_eq!(
            names,
            [
                "availability:R1",
                "availability:R2",
                "claiming:R1",
                "claiming:R2",
                "activity:ActA#1",
                "activity:ActB#1",
                "activity:ActB#2",
                "activity:ActC#1",
                "activity:ActC#2",
                "peripheral:p1",
                "peripheral:p2",
            ]
        );
        let r: ResourceId = "R1".into();
        assert!(comps[0].in_alphabet(&EventLabel::claim(inst("ActB", 7), r)));
    }
}
