use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write;

use super::fsa::DispatchFsa;
use super::kernel::{Execution, Kernel};
use super::mseq::check_valid;
use crate::automata::Automaton;
use crate::builders::PeripheralPins;
use crate::error::{Error, Result};
use crate::model::EventLabel;
use crate::model::Specification;
use crate::validate::used_sets_fsa;

/// The union of the system automata of every dispatching order a
/// dispatch automaton allows.
///
/// Dispatching is silent: taking a transition of the dispatch automaton
/// numbers a new instance and queues its claims, and only claims, releases
/// and actions are observable. Each observable step may be preceded by at
/// most `dispatch_cap` dispatches.
#[derive(Debug, Clone)]
pub struct UnionAutomaton {
    kernel: Kernel,
    pub fsa: DispatchFsa,
    /// D transitions as (source, kernel activity index, target).
    edges: Vec<(usize, usize, usize)>,
    pub dispatch_cap: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UnionState {
    pub(crate) dstate: usize,
    /// Instances dispatched so far, per activity.
    pub(crate) dispatched: Vec<u32>,
    /// Per resource, dispatched instances still waiting to claim it.
    pub(crate) pending: Vec<VecDeque<(u16, u32)>>,
    pub(crate) exec: Execution,
}

impl UnionState {
    pub fn in_flight(&self) -> usize {
        self.exec.in_flight()
    }
}

pub fn build_union(
    spec: &Specification,
    d: &DispatchFsa,
    pins: &PeripheralPins,
) -> Result<UnionAutomaton> {
    check_valid(spec)?;
    if d.initial.is_empty() {
        return Err(Error::EmptyFsa);
    }
    let used = used_sets_fsa(spec, d)?;
    let kernel = Kernel::new(spec, &used.activities, pins)?;
    let reach = d.reachable_states();
    let edges = d
        .transitions
        .iter()
        .filter(|(f, _, _)| reach.contains(f))
        .map(|(f, a, t)| (*f, kernel.activity_index(a).unwrap(), *t))
        .collect();
    Ok(UnionAutomaton {
        kernel,
        fsa: d.clone(),
        edges,
        dispatch_cap: (4 * d.states.len()).max(4),
    })
}

impl UnionAutomaton {
    pub fn with_dispatch_cap(mut self, cap: usize) -> Self {
        self.dispatch_cap = cap;
        self
    }

    /// Claims at the queue heads of `r` (or all resources), with the queue
    /// head popped in the result.
    fn head_claims(
        &self,
        s: &UnionState,
        only: Option<&[usize]>,
        out: &mut Vec<(EventLabel, UnionState)>,
    ) {
        for (r, queue) in s.pending.iter().enumerate() {
            if only.is_some_and(|rs| !rs.contains(&r)) {
                continue;
            }
            let Some(&(act, idx)) = queue.front() else {
                continue;
            };
            if let Some((e, exec)) = self.kernel.claim(&s.exec, act as usize, idx, r) {
                let mut t = s.clone();
                t.pending[r].pop_front();
                t.exec = exec;
                out.push((e, t));
            }
        }
    }
}

impl Automaton for UnionAutomaton {
    type State = UnionState;

    fn initial_states(&self) -> Vec<UnionState> {
        let n = self.kernel.activity_count();
        let mut out = Vec::new();
        for &q in &self.fsa.initial {
            for exec in self.kernel.initial_executions() {
                out.push(UnionState {
                    dstate: q,
                    dispatched: vec![0; n],
                    pending: vec![VecDeque::new(); self.kernel.resources.len()],
                    exec,
                });
            }
        }
        out
    }

    fn successors(&self, s: &UnionState) -> Vec<(EventLabel, UnionState)> {
        let mut out = Vec::new();
        self.head_claims(s, None, &mut out);
        for (e, exec) in self.kernel.local_moves(&s.exec) {
            let mut t = s.clone();
            t.exec = exec;
            out.push((e, t));
        }

        // Silent dispatches. A claim is offered after a dispatch only if
        // that dispatch enabled it; otherwise it was already offered before.
        let mut seen = BTreeSet::from([s.clone()]);
        let mut queue = VecDeque::from([(s.clone(), 0usize)]);
        while let Some((c, steps)) = queue.pop_front() {
            if steps == self.dispatch_cap {
                continue;
            }
            for &(f, act, t) in &self.edges {
                if f != c.dstate {
                    continue;
                }
                let mut n = c.clone();
                n.dstate = t;
                n.dispatched[act] += 1;
                let idx = n.dispatched[act];
                let mut fresh = Vec::new();
                for &r in self.kernel.resources_of(act) {
                    if n.pending[r].is_empty() {
                        fresh.push(r);
                    }
                    n.pending[r].push_back((act as u16, idx));
                }
                self.head_claims(&n, Some(&fresh), &mut out);
                if seen.insert(n.clone()) {
                    queue.push_back((n, steps + 1));
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    fn in_alphabet(&self, e: &EventLabel) -> bool {
        e.instance.index >= 1 && self.kernel.in_alphabet(e)
    }

    fn state_key(&self, s: &UnionState) -> String {
        let mut out = format!("D={} W[", self.fsa.states[s.dstate]);
        let mut first = true;
        for (act, &n) in s.dispatched.iter().enumerate() {
            if !first {
                out.push(',');
            }
            first = false;
            write!(out, "{}", self.kernel.instance_label(act as u16, n)).unwrap();
        }
        out.push_str("] P[");
        for (r, queue) in s.pending.iter().enumerate() {
            if r > 0 {
                out.push(',');
            }
            let items: Vec<String> = queue
                .iter()
                .map(|&(a, j)| self.kernel.instance_label(a, j))
                .collect();
            write!(out, "{}=[{}]", self.kernel.resources[r], items.join(";")).unwrap();
        }
        out.push_str("] ");
        self.kernel.render(&s.exec, &mut out);
        out
    }
}
