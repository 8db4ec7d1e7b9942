use std::fmt::Write;

use super::kernel::{Execution, Kernel};
use crate::automata::{Automaton, SyncProduct};
use crate::builders::{build_components, Component, InstanceUniverse, PeripheralPins};
use crate::error::{Error, Result};
use crate::model::{EventLabel, Specification};
use crate::sequence::{DispatchingSequence, SeqItem};
use crate::validate::{used_sets, validate_spec};

/// The system automaton of one dispatching sequence, computed on the fly.
///
/// Equivalent to the synchronous product of every component automaton,
/// but instances that have not started or have finished are implicit, so
/// infinite sequences need no instance cap.
#[derive(Debug, Clone)]
pub struct SystemAutomaton {
    kernel: Kernel,
    pub sequence: DispatchingSequence,
    /// Per kernel resource, the sequence reduced to its users.
    schedules: Vec<DispatchingSequence>,
    universe: InstanceUniverse,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SystemState {
    /// Claims made so far, per resource.
    pub(crate) claims: Vec<u32>,
    pub(crate) exec: Execution,
}

impl SystemState {
    /// Number of activity instances that started and have not finished.
    pub fn in_flight(&self) -> usize {
        self.exec.in_flight()
    }
}

pub(crate) fn check_valid(spec: &Specification) -> Result<()> {
    let diags = validate_spec(spec);
    if diags.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidSpec(diags))
    }
}

/// Builds the system automaton for `seq`. Peripherals without a pin start
/// in any of their states.
pub fn build_mseq(
    spec: &Specification,
    seq: &DispatchingSequence,
    pins: &PeripheralPins,
) -> Result<SystemAutomaton> {
    check_valid(spec)?;
    let used = used_sets(spec, seq)?;
    let kernel = Kernel::new(spec, &used.activities, pins)?;
    let schedules = kernel
        .resources
        .iter()
        .map(|r| seq.reduce_for_resource(r, spec))
        .collect::<Result<_>>()?;
    Ok(SystemAutomaton {
        kernel,
        sequence: seq.clone(),
        schedules,
        universe: InstanceUniverse::from_used(&used),
    })
}

/// The same language built literally as a synchronous product of the
/// component automata, materializing instances up to `instance_cap`.
/// Exact for traces of length at most `instance_cap`.
pub fn build_mseq_explicit(
    spec: &Specification,
    seq: &DispatchingSequence,
    instance_cap: u32,
    pins: &PeripheralPins,
) -> Result<SyncProduct<Component>> {
    check_valid(spec)?;
    Ok(SyncProduct::from_parts(build_components(
        spec,
        seq,
        instance_cap,
        pins,
    )?))
}

impl Automaton for SystemAutomaton {
    type State = SystemState;

    fn initial_states(&self) -> Vec<SystemState> {
        self.kernel
            .initial_executions()
            .into_iter()
            .map(|exec| SystemState {
                claims: vec![0; self.kernel.resources.len()],
                exec,
            })
            .collect()
    }

    fn successors(&self, s: &SystemState) -> Vec<(EventLabel, SystemState)> {
        let mut out = Vec::new();
        for (r, sched) in self.schedules.iter().enumerate() {
            let Ok(SeqItem::Item(inst)) = sched.item(s.claims[r] as i64 + 1) else {
                continue;
            };
            let act = self.kernel.activity_index(&inst.activity).unwrap();
            if let Some((e, exec)) = self.kernel.claim(&s.exec, act, inst.index, r) {
                let mut claims = s.claims.clone();
                claims[r] += 1;
                out.push((e, SystemState { claims, exec }));
            }
        }
        for (e, exec) in self.kernel.local_moves(&s.exec) {
            out.push((
                e,
                SystemState {
                    claims: s.claims.clone(),
                    exec,
                },
            ));
        }
        out.sort();
        out
    }

    fn in_alphabet(&self, e: &EventLabel) -> bool {
        self.universe.contains(&e.instance) && self.kernel.in_alphabet(e)
    }

    fn state_key(&self, s: &SystemState) -> String {
        let mut out = String::from("C[");
        for (i, r) in self.kernel.resources.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            write!(out, "{r}={}", s.claims[i]).unwrap();
        }
        out.push_str("] ");
        self.kernel.render(&s.exec, &mut out);
        out
    }
}
