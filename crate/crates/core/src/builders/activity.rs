use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::automata::Automaton;
use crate::error::{Error, Result};
use crate::model::{Activity, ActivityInstance, EventLabel, NodeId, NodeKind};

/// Default cap on the number of postsets of a single activity.
pub const DEFAULT_POSTSET_CAP: usize = 1_000_000;

/// Remaining (not yet executed) nodes of an activity, as a bit set over the
/// activity's nodes in id order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Postset(pub u64);

impl Postset {
    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn without(self, i: usize) -> Postset {
        Postset(self.0 & !(1 << i))
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |i| self.contains(*i))
    }
}

/// An activity with nodes numbered in id order and predecessor bit masks.
#[derive(Debug, Clone, PartialEq)]
pub struct CompiledActivity {
    pub activity: Activity,
    pub nodes: Vec<(NodeId, NodeKind)>,
    pub preds: Vec<u64>,
}

impl CompiledActivity {
    pub fn new(act: &Activity) -> Result<Self> {
        if act.nodes.len() > 64 {
            return Err(Error::TooLarge {
                activity: act.id.to_string(),
                reason: format!("{} nodes (at most 64 supported)", act.nodes.len()),
            });
        }
        let nodes: Vec<(NodeId, NodeKind)> = act
            .nodes
            .iter()
            .map(|(n, k)| (n.clone(), k.clone()))
            .collect();
        let index: BTreeMap<&NodeId, usize> =
            nodes.iter().enumerate().map(|(i, (n, _))| (n, i)).collect();
        let mut preds = vec![0u64; nodes.len()];
        for (s, t) in &act.edges {
            let (Some(&i), Some(&j)) = (index.get(s), index.get(t)) else {
                return Err(Error::unknown("node", format!("{}.{s} -> {t}", act.id)));
            };
            preds[j] |= 1 << i;
        }
        Ok(CompiledActivity {
            activity: act.clone(),
            nodes,
            preds,
        })
    }

    pub fn full(&self) -> Postset {
        if self.nodes.len() == 64 {
            Postset(u64::MAX)
        } else {
            Postset((1u64 << self.nodes.len()) - 1)
        }
    }

    /// Nodes of `p` none of whose predecessors remain.
    pub fn enabled(&self, p: Postset) -> impl Iterator<Item = usize> + '_ {
        p.iter().filter(move |&i| p.0 & self.preds[i] == 0)
    }

    /// Position of the node an event refers to, if the activity has one.
    pub fn node_for(&self, kind: &NodeKind, p: Postset) -> Option<usize> {
        self.enabled(p).find(|&i| &self.nodes[i].1 == kind)
    }

    pub fn names(&self, p: Postset) -> BTreeSet<NodeId> {
        p.iter().map(|i| self.nodes[i].0.clone()).collect()
    }

    pub fn render(&self, p: Postset) -> String {
        if p.is_empty() {
            return "∅".to_string();
        }
        let names: Vec<&str> = p.iter().map(|i| self.nodes[i].0.as_str()).collect();
        format!("{{{}}}", names.join(","))
    }

    /// All postsets reachable from the full node set by removing enabled
    /// nodes, in breadth-first order.
    pub fn postsets(&self, cap: usize) -> Result<Vec<Postset>> {
        let mut seen = BTreeSet::new();
        let mut order = Vec::new();
        let mut queue = VecDeque::from([self.full()]);
        seen.insert(self.full());
        while let Some(p) = queue.pop_front() {
            order.push(p);
            for i in self.enabled(p) {
                let q = p.without(i);
                if seen.insert(q) {
                    if seen.len() > cap {
                        return Err(Error::TooLarge {
                            activity: self.activity.id.to_string(),
                            reason: format!("more than {cap} postsets"),
                        });
                    }
                    queue.push_back(q);
                }
            }
        }
        Ok(order)
    }
}

/// All postsets of an activity: node subsets such that every removed node
/// has all its predecessors removed.
pub fn enumerate_postsets(act: &Activity, cap: usize) -> Result<Vec<BTreeSet<NodeId>>> {
    let c = CompiledActivity::new(act)?;
    Ok(c.postsets(cap)?.into_iter().map(|p| c.names(p)).collect())
}

/// Progress automaton of one activity instance; states are postsets.
#[derive(Debug, Clone, PartialEq)]
pub struct ActivityAutomaton {
    pub instance: ActivityInstance,
    pub compiled: CompiledActivity,
}

pub fn build_activity_automaton(
    inst: ActivityInstance,
    act: &Activity,
) -> Result<ActivityAutomaton> {
    let compiled = CompiledActivity::new(act)?;
    compiled.postsets(DEFAULT_POSTSET_CAP)?;
    Ok(ActivityAutomaton {
        instance: inst,
        compiled,
    })
}

impl ActivityAutomaton {
    fn event(&self, i: usize) -> EventLabel {
        EventLabel::for_node(self.instance.clone(), &self.compiled.nodes[i].1)
    }
}

impl Automaton for ActivityAutomaton {
    type State = Postset;

    fn initial_states(&self) -> Vec<Postset> {
        vec![self.compiled.full()]
    }

    fn successors(&self, s: &Postset) -> Vec<(EventLabel, Postset)> {
        let mut out: Vec<_> = self
            .compiled
            .enabled(*s)
            .map(|i| (self.event(i), s.without(i)))
            .collect();
        out.sort();
        out
    }

    fn in_alphabet(&self, e: &EventLabel) -> bool {
        e.instance == self.instance
            && self
                .compiled
                .nodes
                .iter()
                .any(|(_, k)| EventLabel::for_node(self.instance.clone(), k) == *e)
    }

    fn state_key(&self, s: &Postset) -> String {
        self.compiled.render(*s)
    }
}

impl fmt::Display for Postset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}
