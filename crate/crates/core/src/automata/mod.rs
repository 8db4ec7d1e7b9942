//! Possibly infinite-state automata over [`EventLabel`]s, presented lazily
//! through a successor function.

mod compose;
mod dot;
mod explore;

pub use compose::{sync_compose, SyncProduct};
pub use dot::export_dot;
pub use explore::{
    accepts_trace, bounded_explore, bounded_language_equal, explore, first_rejection, Exploration,
    ExploreOptions, ExploredGraph, LanguageVerdict,
};

use std::collections::BTreeSet;
use std::fmt::Debug;
use std::hash::Hash;

use crate::model::EventLabel;

/// A labelled transition system `(X, Σ, T, X0)` where each of the sets may be
/// infinite but every state has finitely many enumerated successors.
///
/// `successors` must be deterministic and sorted by event. `step` answers
/// membership of a single event exactly even when `successors` enumerates
/// only a bounded window of an infinite fan-out.
pub trait Automaton {
    type State: Clone + Ord + Hash + Debug;

    fn initial_states(&self) -> Vec<Self::State>;

    fn successors(&self, s: &Self::State) -> Vec<(EventLabel, Self::State)>;

    fn step(&self, s: &Self::State, e: &EventLabel) -> Vec<Self::State> {
        self.successors(s)
            .into_iter()
            .filter(|(ev, _)| ev == e)
            .map(|(_, t)| t)
            .collect()
    }

    /// Alphabet membership; composition synchronizes on this.
    fn in_alphabet(&self, e: &EventLabel) -> bool;

    /// Canonical printable key, stable across runs.
    fn state_key(&self, s: &Self::State) -> String;
}

impl<A: Automaton + ?Sized> Automaton for &A {
    type State = A::State;

    fn initial_states(&self) -> Vec<Self::State> {
        (**self).initial_states()
    }

    fn successors(&self, s: &Self::State) -> Vec<(EventLabel, Self::State)> {
        (**self).successors(s)
    }

    fn step(&self, s: &Self::State, e: &EventLabel) -> Vec<Self::State> {
        (**self).step(s, e)
    }

    fn in_alphabet(&self, e: &EventLabel) -> bool {
        (**self).in_alphabet(e)
    }

    fn state_key(&self, s: &Self::State) -> String {
        (**self).state_key(s)
    }
}

impl<A: Automaton + ?Sized> Automaton for Box<A> {
    type State = A::State;

    fn initial_states(&self) -> Vec<Self::State> {
        (**self).initial_states()
    }

    fn successors(&self, s: &Self::State) -> Vec<(EventLabel, Self::State)> {
        (**self).successors(s)
    }

    fn step(&self, s: &Self::State, e: &EventLabel) -> Vec<Self::State> {
        (**self).step(s, e)
    }

    fn in_alphabet(&self, e: &EventLabel) -> bool {
        (**self).in_alphabet(e)
    }

    fn state_key(&self, s: &Self::State) -> String {
        (**self).state_key(s)
    }
}

/// A finite automaton given by explicit state and transition lists.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExplicitAutomaton {
    pub states: Vec<String>,
    pub initial: BTreeSet<usize>,
    pub transitions: Vec<(usize, EventLabel, usize)>,
    pub alphabet: BTreeSet<EventLabel>,
}

impl ExplicitAutomaton {
    pub fn new(states: &[&str]) -> Self {
        ExplicitAutomaton {
            states: states.iter().map(|s| s.to_string()).collect(),
            ..Default::default()
        }
    }

    pub fn initial(mut self, s: usize) -> Self {
        self.initial.insert(s);
        self
    }

    pub fn transition(mut self, from: usize, e: EventLabel, to: usize) -> Self {
        self.alphabet.insert(e.clone());
        self.transitions.push((from, e, to));
        self
    }
}

impl From<&ExploredGraph> for ExplicitAutomaton {
    fn from(g: &ExploredGraph) -> Self {
        ExplicitAutomaton {
            states: g.states.clone(),
            initial: g.initial.clone(),
            transitions: g.transitions.clone(),
            alphabet: g.transitions.iter().map(|(_, e, _)| e.clone()).collect(),
        }
    }
}

impl Automaton for ExplicitAutomaton {
    type State = usize;

    fn initial_states(&self) -> Vec<usize> {
        self.initial.iter().copied().collect()
    }

    fn successors(&self, s: &usize) -> Vec<(EventLabel, usize)> {
        let mut out: Vec<_> = self
            .transitions
            .iter()
            .filter(|(f, _, _)| f == s)
            .map(|(_, e, t)| (e.clone(), *t))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    fn in_alphabet(&self, e: &EventLabel) -> bool {
        self.alphabet.contains(e)
    }

    fn state_key(&self, s: &usize) -> String {
        self.states[*s].clone()
    }
}
