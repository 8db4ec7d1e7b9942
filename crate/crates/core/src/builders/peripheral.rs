use std::collections::{BTreeMap, BTreeSet};

use crate::automata::Automaton;
use crate::error::{Error, Result};
use crate::model::{
    ActionId, ActivityId, EventLabel, Payload, PeripheralId, PeripheralKind, PositionId,
    Specification,
};

use super::InstanceUniverse;

/// Last executed action (unmovable) or current position (movable).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PeripheralState {
    LastAction(ActionId),
    At(PositionId),
}

impl PeripheralState {
    pub fn name(&self) -> &str {
        match self {
            PeripheralState::LastAction(a) => a.as_str(),
            PeripheralState::At(p) => p.as_str(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeripheralAutomaton {
    pub peripheral: PeripheralId,
    pub movable: bool,
    /// Used actions with the activities that use them.
    uses: BTreeMap<ActionId, BTreeSet<ActivityId>>,
    /// Source and target of each used movement.
    endpoints: BTreeMap<ActionId, (PositionId, PositionId)>,
    states: BTreeSet<PeripheralState>,
    initial: BTreeSet<PeripheralState>,
    universe: InstanceUniverse,
}

/// Builds the automaton of peripheral `p` over the actions used by the
/// universe's activities. Every state is initial.
pub fn build_peripheral(
    spec: &Specification,
    p: &PeripheralId,
    universe: &InstanceUniverse,
) -> Result<PeripheralAutomaton> {
    let per = spec
        .peripherals
        .get(p)
        .ok_or_else(|| Error::unknown("peripheral", p))?;
    let mut uses: BTreeMap<ActionId, BTreeSet<ActivityId>> = BTreeMap::new();
    for a in universe.activities() {
        let Some(act) = spec.activity(a) else {
            continue;
        };
        for action in act.actions_on(p) {
            uses.entry(action).or_default().insert(a.clone());
        }
    }
    let mut endpoints = BTreeMap::new();
    let states: BTreeSet<PeripheralState> = match &per.kind {
        PeripheralKind::Unmovable { .. } => uses
            .keys()
            .map(|a| PeripheralState::LastAction(a.clone()))
            .collect(),
        PeripheralKind::Movable { moves, .. } => {
            let mut st = BTreeSet::new();
            for a in uses.keys() {
                let m = moves
                    .get(a)
                    .ok_or_else(|| Error::unknown("movement", format!("{p}.{a}")))?;
                endpoints.insert(a.clone(), (m.source.clone(), m.target.clone()));
                st.insert(PeripheralState::At(m.source.clone()));
                st.insert(PeripheralState::At(m.target.clone()));
            }
            st
        }
    };
    Ok(PeripheralAutomaton {
        peripheral: p.clone(),
        movable: per.is_movable(),
        uses,
        endpoints,
        initial: states.clone(),
        states,
        universe: universe.clone(),
    })
}

impl PeripheralAutomaton {
    pub fn states(&self) -> &BTreeSet<PeripheralState> {
        &self.states
    }

    pub fn state_named(&self, name: &str) -> Option<&PeripheralState> {
        self.states.iter().find(|s| s.name() == name)
    }

    /// Restricts the initial states to one named state.
    pub fn pin(&mut self, name: &str) -> Result<()> {
        let s = self
            .state_named(name)
            .cloned()
            .ok_or_else(|| Error::BadPin {
                peripheral: self.peripheral.to_string(),
                state: name.to_string(),
            })?;
        self.initial = BTreeSet::from([s]);
        Ok(())
    }

    /// Target state of action `a` from `s`, if enabled.
    fn apply(&self, s: &PeripheralState, a: &ActionId) -> Option<PeripheralState> {
        if self.movable {
            let (src, dst) = self.endpoints.get(a)?;
            (*s == PeripheralState::At(src.clone())).then(|| PeripheralState::At(dst.clone()))
        } else {
            self.uses
                .contains_key(a)
                .then(|| PeripheralState::LastAction(a.clone()))
        }
    }
}

impl Automaton for PeripheralAutomaton {
    type State = PeripheralState;

    fn initial_states(&self) -> Vec<PeripheralState> {
        self.initial.iter().cloned().collect()
    }

    fn successors(&self, s: &PeripheralState) -> Vec<(EventLabel, PeripheralState)> {
        let mut out = Vec::new();
        for (a, acts) in &self.uses {
            let Some(t) = self.apply(s, a) else { continue };
            for act in acts {
                for inst in self.universe.instances_of(act) {
                    out.push((
                        EventLabel::action(inst, a.clone(), self.peripheral.clone()),
                        t.clone(),
                    ));
                }
            }
        }
        out.sort();
        out
    }

    fn step(&self, s: &PeripheralState, e: &EventLabel) -> Vec<PeripheralState> {
        if !self.in_alphabet(e) {
            return Vec::new();
        }
        let Payload::Do { action, .. } = &e.payload else {
            return Vec::new();
        };
        self.apply(s, action).into_iter().collect()
    }

    fn in_alphabet(&self, e: &EventLabel) -> bool {
        match &e.payload {
            Payload::Do { action, peripheral } => {
                *peripheral == self.peripheral
                    && self
                        .uses
                        .get(action)
                        .is_some_and(|acts| acts.contains(&e.instance.activity))
                    && self.universe.contains(&e.instance)
            }
            _ => false,
        }
    }

    fn state_key(&self, s: &PeripheralState) -> String {
        s.name().to_string()
    }
}
