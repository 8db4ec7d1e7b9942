//! Indexed execution core shared by the single-sequence and the
//! dispatch-automaton system products: resource availability, in-flight
//! activity instances and peripheral states.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use crate::builders::{CompiledActivity, PeripheralPins, Postset};
use crate::error::{Error, Result};
use crate::model::{
    ActionId, ActivityId, ActivityInstance, EventLabel, NodeKind, PeripheralId, PeripheralKind,
    ResourceId, Specification,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum NodeOp {
    Claim(usize),
    Release(usize),
    Do { periph: usize, action: usize },
}

#[derive(Debug, Clone)]
struct KActivity {
    id: ActivityId,
    compiled: CompiledActivity,
    ops: Vec<NodeOp>,
    /// Resource indices the activity claims, ascending.
    resources: Vec<usize>,
}

#[derive(Debug, Clone)]
struct KPeripheral {
    id: PeripheralId,
    states: Vec<String>,
    actions: Vec<ActionId>,
    /// `next[action][state]`: successor state, if the action is enabled.
    next: Vec<Vec<Option<u16>>>,
    initial: Vec<u16>,
}

/// Execution part of a system state.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Execution {
    pub(crate) claimed: Vec<bool>,
    /// Started, unfinished instances: (activity index, instance index).
    pub(crate) inflight: BTreeMap<(u16, u32), Postset>,
    pub(crate) completed: Vec<u32>,
    pub(crate) periph: Vec<u16>,
}

impl Execution {
    pub fn in_flight(&self) -> usize {
        self.inflight.len()
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Kernel {
    acts: Vec<KActivity>,
    act_index: BTreeMap<ActivityId, usize>,
    pub(crate) resources: Vec<ResourceId>,
    periphs: Vec<KPeripheral>,
}

impl Kernel {
    /// Indexes the used activities, their resources and peripherals.
    pub(crate) fn new(
        spec: &Specification,
        activities: &BTreeSet<ActivityId>,
        pins: &PeripheralPins,
    ) -> Result<Self> {
        let mut resources: BTreeSet<ResourceId> = BTreeSet::new();
        let mut used_actions: BTreeMap<PeripheralId, BTreeSet<ActionId>> = BTreeMap::new();
        for a in activities {
            let act = spec
                .activity(a)
                .ok_or_else(|| Error::unknown("activity", a))?;
            resources.extend(act.resources());
            for k in act.nodes.values() {
                if let NodeKind::Action { action, peripheral } = k {
                    used_actions
                        .entry(peripheral.clone())
                        .or_default()
                        .insert(action.clone());
                }
            }
        }
        let resources: Vec<ResourceId> = resources.into_iter().collect();
        let res_index: BTreeMap<&ResourceId, usize> =
            resources.iter().enumerate().map(|(i, r)| (r, i)).collect();

        let mut periphs = Vec::new();
        for (p, actions) in &used_actions {
            let per = spec
                .peripherals
                .get(p)
                .ok_or_else(|| Error::unknown("peripheral", p))?;
            let actions: Vec<ActionId> = actions.iter().cloned().collect();
            let (states, next) = match &per.kind {
                PeripheralKind::Unmovable { .. } => {
                    let states: Vec<String> = actions.iter().map(|a| a.to_string()).collect();
                    let next = (0..actions.len())
                        .map(|ai| vec![Some(ai as u16); states.len()])
                        .collect();
                    (states, next)
                }
                PeripheralKind::Movable { moves, .. } => {
                    let mut ends = Vec::new();
                    let mut positions = BTreeSet::new();
                    for a in &actions {
                        let m = moves
                            .get(a)
                            .ok_or_else(|| Error::unknown("movement", format!("{p}.{a}")))?;
                        positions.insert(m.source.to_string());
                        positions.insert(m.target.to_string());
                        ends.push((m.source.to_string(), m.target.to_string()));
                    }
                    let states: Vec<String> = positions.into_iter().collect();
                    let pos = |s: &str| states.iter().position(|x| x == s).unwrap() as u16;
                    let next = ends
                        .iter()
                        .map(|(src, dst)| {
                            let (src, dst) = (pos(src), pos(dst));
                            (0..states.len() as u16)
                                .map(|s| (s == src).then_some(dst))
                                .collect()
                        })
                        .collect();
                    (states, next)
                }
            };
            let initial = match pins.get(p) {
                Some(name) => {
                    let i = states
                        .iter()
                        .position(|s| s == name)
                        .ok_or_else(|| Error::BadPin {
                            peripheral: p.to_string(),
                            state: name.clone(),
                        })?;
                    vec![i as u16]
                }
                None => (0..states.len() as u16).collect(),
            };
            periphs.push(KPeripheral {
                id: p.clone(),
                states,
                actions,
                next,
                initial,
            });
        }
        for p in pins.keys() {
            if !used_actions.contains_key(p) {
                return Err(Error::unknown("used peripheral", p));
            }
        }

        let mut acts = Vec::new();
        for a in activities {
            let act = &spec.activities[a];
            let compiled = CompiledActivity::new(act)?;
            let ops = compiled
                .nodes
                .iter()
                .map(|(_, k)| match k {
                    NodeKind::Claim { resource } => NodeOp::Claim(res_index[resource]),
                    NodeKind::Release { resource } => NodeOp::Release(res_index[resource]),
                    NodeKind::Action { action, peripheral } => {
                        let periph = periphs.iter().position(|q| q.id == *peripheral).unwrap();
                        let action = periphs[periph]
                            .actions
                            .iter()
                            .position(|x| x == action)
                            .unwrap();
                        NodeOp::Do { periph, action }
                    }
                })
                .collect();
            acts.push(KActivity {
                id: a.clone(),
                resources: act.resources().iter().map(|r| res_index[r]).collect(),
                compiled,
                ops,
            });
        }
        let act_index = acts
            .iter()
            .enumerate()
            .map(|(i, a)| (a.id.clone(), i))
            .collect();
        Ok(Kernel {
            acts,
            act_index,
            resources,
            periphs,
        })
    }

    pub(crate) fn activity_index(&self, a: &ActivityId) -> Option<usize> {
        self.act_index.get(a).copied()
    }

    pub(crate) fn activity_count(&self) -> usize {
        self.acts.len()
    }

    pub(crate) fn resources_of(&self, act: usize) -> &[usize] {
        &self.acts[act].resources
    }

    pub(crate) fn initial_executions(&self) -> Vec<Execution> {
        let mut combos: Vec<Vec<u16>> = vec![Vec::new()];
        for p in &self.periphs {
            combos = combos
                .into_iter()
                .flat_map(|c| {
                    p.initial.iter().map(move |s| {
                        let mut c = c.clone();
                        c.push(*s);
                        c
                    })
                })
                .collect();
        }
        combos
            .into_iter()
            .map(|periph| Execution {
                claimed: vec![false; self.resources.len()],
                inflight: BTreeMap::new(),
                completed: vec![0; self.acts.len()],
                periph,
            })
            .collect()
    }

    fn instance(&self, act: usize, idx: u32) -> ActivityInstance {
        ActivityInstance::new(self.acts[act].id.clone(), idx)
    }

    fn event(&self, act: usize, idx: u32, node: usize) -> EventLabel {
        EventLabel::for_node(
            self.instance(act, idx),
            &self.acts[act].compiled.nodes[node].1,
        )
    }

    fn postset(&self, x: &Execution, act: usize, idx: u32) -> Postset {
        x.inflight
            .get(&(act as u16, idx))
            .copied()
            .unwrap_or_else(|| self.acts[act].compiled.full())
    }

    fn set_postset(&self, x: &mut Execution, act: usize, idx: u32, p: Postset) {
        if p.is_empty() {
            x.inflight.remove(&(act as u16, idx));
            x.completed[act] += 1;
        } else {
            x.inflight.insert((act as u16, idx), p);
        }
    }

    /// Claim of resource `r` by instance `act#idx`, if the resource is free
    /// and the instance's claim node is enabled.
    pub(crate) fn claim(
        &self,
        x: &Execution,
        act: usize,
        idx: u32,
        r: usize,
    ) -> Option<(EventLabel, Execution)> {
        if x.claimed[r] {
            return None;
        }
        let p = self.postset(x, act, idx);
        let ka = &self.acts[act];
        let node = ka
            .compiled
            .enabled(p)
            .find(|&i| ka.ops[i] == NodeOp::Claim(r))?;
        let mut y = x.clone();
        y.claimed[r] = true;
        self.set_postset(&mut y, act, idx, p.without(node));
        Some((self.event(act, idx, node), y))
    }

    /// Releases and actions of in-flight instances. Claims are left to the
    /// caller, which owns the claim order.
    pub(crate) fn local_moves(&self, x: &Execution) -> Vec<(EventLabel, Execution)> {
        let mut out = Vec::new();
        for (&(act, idx), &p) in &x.inflight {
            let act = act as usize;
            let ka = &self.acts[act];
            for node in ka.compiled.enabled(p) {
                let mut y = x.clone();
                match ka.ops[node] {
                    NodeOp::Claim(_) => continue,
                    NodeOp::Release(r) => {
                        if !x.claimed[r] {
                            continue;
                        }
                        y.claimed[r] = false;
                    }
                    NodeOp::Do { periph, action } => {
                        let cur = x.periph[periph] as usize;
                        let Some(t) = self.periphs[periph].next[action][cur] else {
                            continue;
                        };
                        y.periph[periph] = t;
                    }
                }
                self.set_postset(&mut y, act, idx, p.without(node));
                out.push((self.event(act, idx, node), y));
            }
        }
        out
    }

    pub(crate) fn render(&self, x: &Execution, out: &mut String) {
        out.push_str("A[");
        for (i, r) in self.resources.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let st = if x.claimed[i] { "claimed" } else { "released" };
            write!(out, "{r}={st}").unwrap();
        }
        out.push_str("] B[");
        for (i, (&(act, idx), &p)) in x.inflight.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let ka = &self.acts[act as usize];
            write!(out, "{}#{}={}", ka.id, idx, ka.compiled.render(p)).unwrap();
        }
        out.push_str("] done[");
        for (i, ka) in self.acts.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            write!(out, "{}={}", ka.id, x.completed[i]).unwrap();
        }
        out.push_str("] Q[");
        for (i, p) in self.periphs.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            write!(out, "{}={}", p.id, p.states[x.periph[i] as usize]).unwrap();
        }
        out.push(']');
    }

    pub(crate) fn instance_label(&self, act: u16, idx: u32) -> String {
        format!("{}#{}", self.acts[act as usize].id, idx)
    }

    /// Membership in the union of the component alphabets.
    pub(crate) fn in_alphabet(&self, e: &EventLabel) -> bool {
        let Some(&a) = self.act_index.get(&e.instance.activity) else {
            return false;
        };
        self.acts[a]
            .compiled
            .nodes
            .iter()
            .any(|(_, k)| EventLabel::for_node(e.instance.clone(), k) == *e)
    }
}
