//! In-memory specification model: peripherals, resources, actions, activities
//! and the event alphabet shared by every component automaton.

use std::borrow::Borrow;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::sequence::DispatchingSequence;
use crate::system::DispatchFsa;

macro_rules! id_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(Arc<str>);

        impl $name {
            pub fn new(s: impl AsRef<str>) -> Self {
                $name(Arc::from(s.as_ref()))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{:?}", &*self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                $name::new(s)
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                $name(Arc::from(s))
            }
        }

        impl Borrow<str> for $name {
            fn borrow(&self) -> &str {
                &self.0
            }
        }
    };
}

id_type!(
    /// Name of a resource (an exclusively claimable group of peripherals).
    ResourceId
);
id_type!(PeripheralId);
id_type!(
    /// Name of an action; unique per peripheral.
    ActionId
);
id_type!(ActivityId);
id_type!(NodeId);
id_type!(PositionId);

/// Duration of an unmovable peripheral's action.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimingSpec {
    Deterministic { t: f64 },
    Normal { mu: f64, sigma: f64 },
    Triangular { a: f64, m: f64, b: f64 },
    Pert { a: f64, m: f64, b: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Profile {
    SecondOrder { vmax: f64, amax: f64 },
    ThirdOrder { vmax: f64, amax: f64, jmax: f64 },
}

/// A directed movement of a movable peripheral between two of its positions.
#[derive(Debug, Clone, PartialEq)]
pub struct Movement {
    pub id: ActionId,
    pub source: PositionId,
    pub target: PositionId,
    pub profile: Profile,
    pub settling: f64,
    pub distance: f64,
}

impl Movement {
    pub const DEFAULT_DISTANCE: f64 = 1.0;
}

#[derive(Debug, Clone, PartialEq)]
pub enum PeripheralKind {
    Unmovable {
        actions: BTreeMap<ActionId, TimingSpec>,
    },
    Movable {
        positions: BTreeSet<PositionId>,
        moves: BTreeMap<ActionId, Movement>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Peripheral {
    pub id: PeripheralId,
    pub kind: PeripheralKind,
}

impl Peripheral {
    pub fn is_movable(&self) -> bool {
        matches!(self.kind, PeripheralKind::Movable { .. })
    }

    /// The set of actions the peripheral can perform.
    pub fn actions(&self) -> BTreeSet<ActionId> {
        match &self.kind {
            PeripheralKind::Unmovable { actions } => actions.keys().cloned().collect(),
            PeripheralKind::Movable { moves, .. } => moves.keys().cloned().collect(),
        }
    }

    pub fn has_action(&self, action: &ActionId) -> bool {
        match &self.kind {
            PeripheralKind::Unmovable { actions } => actions.contains_key(action),
            PeripheralKind::Movable { moves, .. } => moves.contains_key(action),
        }
    }

    pub fn movement(&self, action: &ActionId) -> Option<&Movement> {
        match &self.kind {
            PeripheralKind::Movable { moves, .. } => moves.get(action),
            PeripheralKind::Unmovable { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeKind {
    Claim {
        resource: ResourceId,
    },
    Release {
        resource: ResourceId,
    },
    Action {
        action: ActionId,
        peripheral: PeripheralId,
    },
}

/// An activity: a DAG of claim, release and action nodes.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Activity {
    pub id: ActivityId,
    pub nodes: BTreeMap<NodeId, NodeKind>,
    pub edges: BTreeSet<(NodeId, NodeId)>,
}

impl Default for ActivityId {
    fn default() -> Self {
        ActivityId::new("")
    }
}

impl Activity {
    pub fn new(id: impl Into<ActivityId>) -> Self {
        Activity {
            id: id.into(),
            ..Default::default()
        }
    }

    pub fn node(mut self, id: &str, kind: NodeKind) -> Self {
        self.nodes.insert(NodeId::new(id), kind);
        self
    }

    pub fn edge(mut self, from: &str, to: &str) -> Self {
        self.edges.insert((NodeId::new(from), NodeId::new(to)));
        self
    }

    /// Resources claimed by this activity, `R(Act)`.
    pub fn resources(&self) -> BTreeSet<ResourceId> {
        self.nodes
            .values()
            .filter_map(|k| match k {
                NodeKind::Claim { resource } => Some(resource.clone()),
                _ => None,
            })
            .collect()
    }

    pub fn uses_resource(&self, r: &ResourceId) -> bool {
        self.nodes
            .values()
            .any(|k| matches!(k, NodeKind::Claim { resource } if resource == r))
    }

    /// Peripherals referenced by action nodes.
    pub fn peripherals(&self) -> BTreeSet<PeripheralId> {
        self.nodes
            .values()
            .filter_map(|k| match k {
                NodeKind::Action { peripheral, .. } => Some(peripheral.clone()),
                _ => None,
            })
            .collect()
    }

    pub fn actions_on(&self, p: &PeripheralId) -> BTreeSet<ActionId> {
        self.nodes
            .values()
            .filter_map(|k| match k {
                NodeKind::Action { action, peripheral } if peripheral == p => Some(action.clone()),
                _ => None,
            })
            .collect()
    }

    pub fn predecessors<'a>(&'a self, n: &'a NodeId) -> impl Iterator<Item = &'a NodeId> + 'a {
        self.edges
            .iter()
            .filter(move |(_, t)| t == n)
            .map(|(s, _)| s)
    }
}

/// How activities are dispatched: one fixed sequence, or a finite automaton
/// over activity names describing a set of sequences.
#[derive(Debug, Clone, PartialEq)]
pub enum DispatchDescription {
    Sequence(DispatchingSequence),
    Fsa(DispatchFsa),
}

impl Default for DispatchDescription {
    fn default() -> Self {
        DispatchDescription::Sequence(DispatchingSequence::default())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Specification {
    pub peripherals: BTreeMap<PeripheralId, Peripheral>,
    pub resources: BTreeSet<ResourceId>,
    /// Owning resource of each peripheral.
    pub owner: BTreeMap<PeripheralId, ResourceId>,
    pub activities: BTreeMap<ActivityId, Activity>,
    pub dispatch: DispatchDescription,
}

impl Specification {
    pub fn add_resource(&mut self, r: impl Into<ResourceId>) -> &mut Self {
        self.resources.insert(r.into());
        self
    }

    pub fn add_peripheral(&mut self, r: impl Into<ResourceId>, p: Peripheral) -> &mut Self {
        let r = r.into();
        self.resources.insert(r.clone());
        self.owner.insert(p.id.clone(), r);
        self.peripherals.insert(p.id.clone(), p);
        self
    }

    pub fn add_activity(&mut self, a: Activity) -> &mut Self {
        self.activities.insert(a.id.clone(), a);
        self
    }

    pub fn resource_of(&self, p: &PeripheralId) -> Option<&ResourceId> {
        self.owner.get(p)
    }

    pub fn activity(&self, id: &ActivityId) -> Option<&Activity> {
        self.activities.get(id)
    }

    pub fn dispatch_sequence(&self) -> Option<&DispatchingSequence> {
        match &self.dispatch {
            DispatchDescription::Sequence(s) => Some(s),
            DispatchDescription::Fsa(_) => None,
        }
    }
}

/// The `j`-th dispatched occurrence of an activity, rendered `Act#j`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActivityInstance {
    pub activity: ActivityId,
    pub index: u32,
}

impl ActivityInstance {
    pub fn new(activity: impl Into<ActivityId>, index: u32) -> Self {
        debug_assert!(index >= 1);
        ActivityInstance {
            activity: activity.into(),
            index,
        }
    }
}

impl fmt::Display for ActivityInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.activity, self.index)
    }
}

impl FromStr for ActivityInstance {
    type Err = EventParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, idx) = s
            .split_once('#')
            .ok_or_else(|| EventParseError::new(s, "missing `#` instance index"))?;
        if !is_ident(name) {
            return Err(EventParseError::new(s, "bad activity name"));
        }
        let index: u32 = idx
            .parse()
            .map_err(|_| EventParseError::new(s, "bad instance index"))?;
        if index == 0 {
            return Err(EventParseError::new(s, "instance index must be >= 1"));
        }
        Ok(ActivityInstance::new(name, index))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Payload {
    Claim(ResourceId),
    Release(ResourceId),
    Do {
        action: ActionId,
        peripheral: PeripheralId,
    },
}

/// An event of the action-level semantics: an activity instance claiming or
/// releasing a resource, or performing an action on a peripheral.
///
/// Text encoding: `Name#k.claim(R)`, `Name#k.release(R)`, `Name#k.do(P.a)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EventLabel {
    pub instance: ActivityInstance,
    pub payload: Payload,
}

impl EventLabel {
    pub fn claim(instance: ActivityInstance, r: impl Into<ResourceId>) -> Self {
        EventLabel {
            instance,
            payload: Payload::Claim(r.into()),
        }
    }

    pub fn release(instance: ActivityInstance, r: impl Into<ResourceId>) -> Self {
        EventLabel {
            instance,
            payload: Payload::Release(r.into()),
        }
    }

    pub fn action(
        instance: ActivityInstance,
        a: impl Into<ActionId>,
        p: impl Into<PeripheralId>,
    ) -> Self {
        EventLabel {
            instance,
            payload: Payload::Do {
                action: a.into(),
                peripheral: p.into(),
            },
        }
    }

    /// The event an activity node produces for a given instance.
    pub fn for_node(instance: ActivityInstance, kind: &NodeKind) -> Self {
        let payload = match kind {
            NodeKind::Claim { resource } => Payload::Claim(resource.clone()),
            NodeKind::Release { resource } => Payload::Release(resource.clone()),
            NodeKind::Action { action, peripheral } => Payload::Do {
                action: action.clone(),
                peripheral: peripheral.clone(),
            },
        };
        EventLabel { instance, payload }
    }

    pub fn resource(&self) -> Option<&ResourceId> {
        match &self.payload {
            Payload::Claim(r) | Payload::Release(r) => Some(r),
            Payload::Do { .. } => None,
        }
    }
}

impl fmt::Display for EventLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.payload {
            Payload::Claim(r) => write!(f, "{}.claim({})", self.instance, r),
            Payload::Release(r) => write!(f, "{}.release({})", self.instance, r),
            Payload::Do { action, peripheral } => {
                write!(f, "{}.do({}.{})", self.instance, peripheral, action)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed event `{text}`: {reason}")]
pub struct EventParseError {
    pub text: String,
    pub reason: &'static str,
}

impl EventParseError {
    fn new(text: &str, reason: &'static str) -> Self {
        EventParseError {
            text: text.to_string(),
            reason,
        }
    }
}

pub(crate) fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl FromStr for EventLabel {
    type Err = EventParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let text = s.trim();
        let err = |reason| EventParseError::new(text, reason);
        let inner = text
            .strip_suffix(')')
            .ok_or_else(|| err("expected closing `)`"))?;
        let (head, arg) = inner.split_once('(').ok_or_else(|| err("expected `(`"))?;
        let (inst, verb) = head.rsplit_once('.').ok_or_else(|| err("expected `.`"))?;
        let instance: ActivityInstance = inst.parse()?;
        let payload = match verb {
            "claim" | "release" => {
                if !is_ident(arg) {
                    return Err(err("bad resource name"));
                }
                if verb == "claim" {
                    Payload::Claim(arg.into())
                } else {
                    Payload::Release(arg.into())
                }
            }
            "do" => {
                let (p, a) = arg
                    .split_once('.')
                    .ok_or_else(|| err("expected `peripheral.action`"))?;
                if !is_ident(p) || !is_ident(a) {
                    return Err(err("bad peripheral or action name"));
                }
                Payload::Do {
                    action: a.into(),
                    peripheral: p.into(),
                }
            }
            _ => return Err(err("expected claim, release or do")),
        };
        Ok(EventLabel { instance, payload })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn event_text_encoding() {
        let i = ActivityInstance::new("ActB", 2);
        assert_eq!(
            EventLabel::claim(i.clone(), "R1").to_string(),
            "ActB#2.claim(R1)"
        );
        assert_eq!(
            EventLabel::release(i.clone(), "R1").to_string(),
            "ActB#2.release(R1)"
        );
        assert_eq!(
            EventLabel::action(i, "a", "p1").to_string(),
            "ActB#2.do(p1.a)"
        );
    }

    #[test]
    fn rejects_malformed_events() {
        for bad in [
            "",
            "Act.claim(R1)",
            "Act#0.claim(R1)",
            "Act#1.grab(R1)",
            "Act#1.do(p1)",
            "Act#1.claim(R1",
            "Act#x.claim(R1)",
        ] {
            assert!(bad.parse::<EventLabel>().is_err(), "{bad}");
        }
    }

    #[test]
    fn claim_orders_before_release_before_do() {
        let i = ActivityInstance::new("A", 1);
        let c = EventLabel::claim(i.clone(), "R");
        let r = EventLabel::release(i.clone(), "R");
        let d = EventLabel::action(i, "a", "p");
        assert!(c < r && r < d);
    }

    fn ident() -> impl Strategy<Value = String> {
        "[A-Za-z_][A-Za-z0-9_]{0,6}"
    }

    proptest! {
        #[test]
        fn event_encoding_roundtrips(act in ident(), idx in 1u32..1000, r in ident(), p in ident(), kind in 0..3) {
            let inst = ActivityInstance::new(act.as_str(), idx);
            let ev = match kind {
                0 => EventLabel::claim(inst, r.as_str()),
                1 => EventLabel::release(inst, r.as_str()),
                _ => EventLabel::action(inst, r.as_str(), p.as_str()),
            };
            prop_assert_eq!(ev.to_string().parse::<EventLabel>().unwrap(), ev);
        }
    }
}
