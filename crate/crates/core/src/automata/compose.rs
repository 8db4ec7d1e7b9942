use std::collections::BTreeSet;

use super::Automaton;
use crate::model::EventLabel;

/// Synchronous product: shared events move every part that knows them in
/// lock-step, other events interleave.
#[derive(Debug, Clone)]
pub struct SyncProduct<A> {
    parts: Vec<A>,
}

pub fn sync_compose<A: Automaton>(parts: Vec<A>) -> SyncProduct<A> {
    assert!(
        !parts.is_empty(),
        "composition needs at least one automaton"
    );
    SyncProduct { parts }
}

impl<A> SyncProduct<A> {
    /// Product of possibly zero parts; the empty product has one initial
    /// state and no transitions.
    pub(crate) fn from_parts(parts: Vec<A>) -> Self {
        SyncProduct { parts }
    }

    pub fn parts(&self) -> &[A] {
        &self.parts
    }
}

fn cartesian<S: Clone>(options: &[Vec<S>]) -> Vec<Vec<S>> {
    let mut acc: Vec<Vec<S>> = vec![Vec::with_capacity(options.len())];
    for opts in options {
        let mut next = Vec::with_capacity(acc.len() * opts.len());
        for prefix in &acc {
            for o in opts {
                let mut v = prefix.clone();
                v.push(o.clone());
                next.push(v);
            }
        }
        acc = next;
    }
    acc
}

impl<A: Automaton> Automaton for SyncProduct<A> {
    type State = Vec<A::State>;

    fn initial_states(&self) -> Vec<Self::State> {
        let opts: Vec<_> = self.parts.iter().map(|p| p.initial_states()).collect();
        let mut out = cartesian(&opts);
        out.sort();
        out
    }

    fn successors(&self, s: &Self::State) -> Vec<(EventLabel, Self::State)> {
        let candidates: BTreeSet<EventLabel> = self
            .parts
            .iter()
            .zip(s)
            .flat_map(|(p, x)| p.successors(x).into_iter().map(|(e, _)| e))
            .collect();
        let mut out = Vec::new();
        for e in candidates {
            out.extend(self.step(s, &e).into_iter().map(|t| (e.clone(), t)));
        }
        out
    }

    fn step(&self, s: &Self::State, e: &EventLabel) -> Vec<Self::State> {
        let mut opts = Vec::with_capacity(self.parts.len());
        let mut involved = false;
        for (p, x) in self.parts.iter().zip(s) {
            if p.in_alphabet(e) {
                involved = true;
                let mut next = p.step(x, e);
                if next.is_empty() {
                    return Vec::new();
                }
                next.sort();
                next.dedup();
                opts.push(next);
            } else {
                opts.push(vec![x.clone()]);
            }
        }
        if !involved {
            return Vec::new();
        }
        cartesian(&opts)
    }

    fn in_alphabet(&self, e: &EventLabel) -> bool {
        self.parts.iter().any(|p| p.in_alphabet(e))
    }

    fn state_key(&self, s: &Self::State) -> String {
        let keys: Vec<String> = self
            .parts
            .iter()
            .zip(s)
            .map(|(p, x)| p.state_key(x))
            .collect();
        format!("({})", keys.join(", "))
    }
}
