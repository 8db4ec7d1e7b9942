use std::collections::{BTreeMap, BTreeSet};

use crate::automata::Automaton;
use crate::error::{Error, Result};
use crate::model::{ActivityId, ActivityInstance, EventLabel, Payload, ResourceId, Specification};
use crate::sequence::{DispatchingSequence, SeqItem};
use crate::validate::{InstanceBound, UsedSets};

/// The activity instances a model quantifies over, given as a membership
/// predicate plus a generator.
///
/// Unbounded activities have infinitely many instances; automata whose
/// fan-out ranges over all instances enumerate only indices up to
/// `enumeration_limit` in `successors`, while `step` and alphabet
/// membership stay exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceUniverse {
    pub bounds: BTreeMap<ActivityId, InstanceBound>,
    pub enumeration_limit: u32,
}

impl InstanceUniverse {
    pub const DEFAULT_ENUMERATION_LIMIT: u32 = 3;

    pub fn new(bounds: BTreeMap<ActivityId, InstanceBound>) -> Self {
        InstanceUniverse {
            bounds,
            enumeration_limit: Self::DEFAULT_ENUMERATION_LIMIT,
        }
    }

    pub fn from_used(used: &UsedSets) -> Self {
        Self::new(used.instance_bound.clone())
    }

    pub fn with_enumeration_limit(mut self, limit: u32) -> Self {
        self.enumeration_limit = limit;
        self
    }

    pub fn contains(&self, inst: &ActivityInstance) -> bool {
        self.bounds
            .get(&inst.activity)
            .is_some_and(|b| b.admits(inst.index))
    }

    pub fn activities(&self) -> impl Iterator<Item = &ActivityId> {
        self.bounds.keys()
    }

    /// Enumerated instances of one activity, in index order.
    pub fn instances_of(&self, act: &ActivityId) -> impl Iterator<Item = ActivityInstance> + '_ {
        let n = match self.bounds.get(act) {
            Some(InstanceBound::Finite(n)) => (*n).min(self.enumeration_limit),
            Some(InstanceBound::Unbounded) => self.enumeration_limit,
            None => 0,
        };
        let act = act.clone();
        (1..=n).map(move |j| ActivityInstance::new(act.clone(), j))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AvailabilityState {
    Released,
    Claimed,
}

/// Two-state automaton forcing claims and releases of one resource to
/// alternate, starting released.
#[derive(Debug, Clone, PartialEq)]
pub struct AvailabilityAutomaton {
    pub resource: ResourceId,
    users: BTreeSet<ActivityId>,
    universe: InstanceUniverse,
}

fn users_of(
    spec: &Specification,
    r: &ResourceId,
    universe: &InstanceUniverse,
) -> BTreeSet<ActivityId> {
    universe
        .activities()
        .filter(|a| spec.activity(a).is_some_and(|act| act.uses_resource(r)))
        .cloned()
        .collect()
}

pub fn build_availability(
    spec: &Specification,
    r: &ResourceId,
    universe: &InstanceUniverse,
) -> AvailabilityAutomaton {
    AvailabilityAutomaton {
        resource: r.clone(),
        users: users_of(spec, r, universe),
        universe: universe.clone(),
    }
}

impl AvailabilityAutomaton {
    fn covers(&self, inst: &ActivityInstance) -> bool {
        self.users.contains(&inst.activity) && self.universe.contains(inst)
    }
}

impl Automaton for AvailabilityAutomaton {
    type State = AvailabilityState;

    fn initial_states(&self) -> Vec<AvailabilityState> {
        vec![AvailabilityState::Released]
    }

    fn successors(&self, s: &AvailabilityState) -> Vec<(EventLabel, AvailabilityState)> {
        let mut out = Vec::new();
        for a in &self.users {
            for inst in self.universe.instances_of(a) {
                out.push(match s {
                    AvailabilityState::Released => (
                        EventLabel::claim(inst, self.resource.clone()),
                        AvailabilityState::Claimed,
                    ),
                    AvailabilityState::Claimed => (
                        EventLabel::release(inst, self.resource.clone()),
                        AvailabilityState::Released,
                    ),
                });
            }
        }
        out.sort();
        out
    }

    fn step(&self, s: &AvailabilityState, e: &EventLabel) -> Vec<AvailabilityState> {
        if !self.in_alphabet(e) {
            return Vec::new();
        }
        match (s, &e.payload) {
            (AvailabilityState::Released, Payload::Claim(_)) => vec![AvailabilityState::Claimed],
            (AvailabilityState::Claimed, Payload::Release(_)) => vec![AvailabilityState::Released],
            _ => Vec::new(),
        }
    }

    fn in_alphabet(&self, e: &EventLabel) -> bool {
        e.resource() == Some(&self.resource)
            && !matches!(e.payload, Payload::Do { .. })
            && self.covers(&e.instance)
    }

    fn state_key(&self, s: &AvailabilityState) -> String {
        match s {
            AvailabilityState::Released => "released".into(),
            AvailabilityState::Claimed => "claimed".into(),
        }
    }
}

/// Enforces the FIFO claim order of one resource: state `k` means the first
/// `k` claims of the resource-reduced dispatching sequence have happened.
#[derive(Debug, Clone, PartialEq)]
pub struct ClaimingAutomaton {
    pub resource: ResourceId,
    /// The dispatching sequence reduced to activities using the resource.
    pub reduced: DispatchingSequence,
    users: BTreeSet<ActivityId>,
    universe: InstanceUniverse,
}

pub fn build_claiming(
    spec: &Specification,
    r: &ResourceId,
    seq: &DispatchingSequence,
    universe: &InstanceUniverse,
) -> Result<ClaimingAutomaton> {
    if !spec.resources.contains(r) {
        return Err(Error::unknown("resource", r));
    }
    Ok(ClaimingAutomaton {
        resource: r.clone(),
        reduced: seq.reduce_for_resource(r, spec)?,
        users: users_of(spec, r, universe),
        universe: universe.clone(),
    })
}

impl ClaimingAutomaton {
    /// The claim that moves state `k` to `k + 1`, if the reduced sequence
    /// has a `(k+1)`-th element.
    pub fn next_claim(&self, k: usize) -> Option<EventLabel> {
        match self.reduced.item(k as i64 + 1) {
            Ok(SeqItem::Item(inst)) => Some(EventLabel::claim(inst, self.resource.clone())),
            _ => None,
        }
    }
}

impl Automaton for ClaimingAutomaton {
    type State = usize;

    fn initial_states(&self) -> Vec<usize> {
        vec![0]
    }

    fn successors(&self, s: &usize) -> Vec<(EventLabel, usize)> {
        self.next_claim(*s)
            .map(|e| (e, s + 1))
            .into_iter()
            .collect()
    }

    fn in_alphabet(&self, e: &EventLabel) -> bool {
        matches!(&e.payload, Payload::Claim(r) if *r == self.resource)
            && self.users.contains(&e.instance.activity)
            && self.universe.contains(&e.instance)
    }

    /// Renders the claimed prefix, e.g. `ActA#1;ActB#1`.
    fn state_key(&self, s: &usize) -> String {
        if *s == 0 {
            return "ε".into();
        }
        let items: Vec<String> = (1..=*s)
            .filter_map(|k| match self.reduced.item(k as i64) {
                Ok(SeqItem::Item(i)) => Some(i.to_string()),
                _ => None,
            })
            .collect();
        items.join(";")
    }
}
