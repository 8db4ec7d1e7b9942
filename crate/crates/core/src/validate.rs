//! Structural validation of specifications and the used-component sets of a
//! dispatching sequence.

use std::collections::{BTreeMap, BTreeSet};

use crate::diagnostic::{DiagCode, Diagnostic};
use crate::error::{Error, Result};
use crate::model::{
    Activity, ActivityId, NodeId, NodeKind, PeripheralId, PeripheralKind, Profile, ResourceId,
    Specification, TimingSpec,
};
use crate::sequence::DispatchingSequence;
use crate::system::DispatchFsa;

/// Checks every structural rule and returns all violations, sorted by entity
/// then code. An empty result means the specification is valid.
pub fn validate_spec(spec: &Specification) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for p in spec.peripherals.values() {
        let ent = format!("peripheral {}", p.id);
        match spec.owner.get(&p.id) {
            None => out.push(Diagnostic::new(
                DiagCode::UnknownRef,
                &ent,
                format!("peripheral `{}` belongs to no resource", p.id),
            )),
            Some(r) if !spec.resources.contains(r) => out.push(Diagnostic::new(
                DiagCode::UnknownRef,
                &ent,
                format!("peripheral `{}` is owned by unknown resource `{r}`", p.id),
            )),
            Some(_) => {}
        }
        check_peripheral(p, &mut out);
    }
    for p in spec.owner.keys() {
        if !spec.peripherals.contains_key(p) {
            out.push(Diagnostic::new(
                DiagCode::UnknownRef,
                format!("peripheral {p}"),
                format!("ownership declared for unknown peripheral `{p}`"),
            ));
        }
    }
    for act in spec.activities.values() {
        check_activity(spec, act, &mut out);
    }
    match &spec.dispatch {
        crate::model::DispatchDescription::Sequence(seq) => {
            for a in seq.activities() {
                if !spec.activities.contains_key(&a) {
                    out.push(unknown_activity(&a));
                }
            }
        }
        crate::model::DispatchDescription::Fsa(d) => {
            for (_, a, _) in &d.transitions {
                if !spec.activities.contains_key(a) {
                    out.push(unknown_activity(a));
                }
            }
        }
    }
    out.sort_by(|a, b| (&a.entity, a.code, &a.message).cmp(&(&b.entity, b.code, &b.message)));
    out.dedup();
    out
}

fn unknown_activity(a: &ActivityId) -> Diagnostic {
    Diagnostic::new(
        DiagCode::UnknownRef,
        "dispatch",
        format!("dispatch refers to unknown activity `{a}`"),
    )
}

fn check_timing(t: &TimingSpec) -> Option<&'static str> {
    let finite = |xs: &[f64]| xs.iter().all(|x| x.is_finite());
    match *t {
        TimingSpec::Deterministic { t } if !finite(&[t]) || t < 0.0 => {
            Some("deterministic time must be finite and non-negative")
        }
        TimingSpec::Normal { mu, sigma } if !finite(&[mu, sigma]) || sigma <= 0.0 => {
            Some("normal distribution needs sigma > 0")
        }
        TimingSpec::Triangular { a, m, b } | TimingSpec::Pert { a, m, b }
            if !finite(&[a, m, b]) || !(a <= m && m <= b) =>
        {
            Some("distribution bounds must satisfy a <= m <= b")
        }
        _ => None,
    }
}

fn check_peripheral(p: &crate::model::Peripheral, out: &mut Vec<Diagnostic>) {
    match &p.kind {
        PeripheralKind::Unmovable { actions } => {
            for (a, t) in actions {
                if let Some(msg) = check_timing(t) {
                    out.push(Diagnostic::new(
                        DiagCode::BadTiming,
                        format!("action {}.{}", p.id, a),
                        format!("action `{}.{a}`: {msg}", p.id),
                    ));
                }
            }
        }
        PeripheralKind::Movable { positions, moves } => {
            if positions.is_empty() {
                out.push(Diagnostic::new(
                    DiagCode::MoveEndpoints,
                    format!("peripheral {}", p.id),
                    format!("movable peripheral `{}` declares no positions", p.id),
                ));
            }
            for m in moves.values() {
                let ent = format!("action {}.{}", p.id, m.id);
                if m.source == m.target {
                    out.push(Diagnostic::new(
                        DiagCode::MoveEndpoints,
                        &ent,
                        format!("movement `{}` starts and ends at `{}`", m.id, m.source),
                    ));
                }
                for end in [&m.source, &m.target] {
                    if !positions.contains(end) {
                        out.push(Diagnostic::new(
                            DiagCode::MoveEndpoints,
                            &ent,
                            format!("movement `{}` uses undeclared position `{end}`", m.id),
                        ));
                    }
                }
                let params: Vec<f64> = match m.profile {
                    Profile::SecondOrder { vmax, amax } => vec![vmax, amax],
                    Profile::ThirdOrder { vmax, amax, jmax } => vec![vmax, amax, jmax],
                };
                if params.iter().any(|x| !x.is_finite() || *x <= 0.0) {
                    out.push(Diagnostic::new(
                        DiagCode::BadProfile,
                        &ent,
                        format!("movement `{}`: profile parameters must be positive", m.id),
                    ));
                }
                if !m.distance.is_finite()
                    || m.distance < 0.0
                    || !m.settling.is_finite()
                    || m.settling < 0.0
                {
                    out.push(Diagnostic::new(
                        DiagCode::BadProfile,
                        &ent,
                        format!(
                            "movement `{}`: distance and settling must be non-negative",
                            m.id
                        ),
                    ));
                }
            }
        }
    }
}

/// Reachability closure of an activity's edge relation.
struct Reach {
    index: BTreeMap<NodeId, usize>,
    // reach[i][j]: path of length >= 1 from i to j
    reach: Vec<Vec<bool>>,
}

impl Reach {
    fn new(act: &Activity) -> Self {
        let index: BTreeMap<NodeId, usize> = act
            .nodes
            .keys()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        let n = index.len();
        let mut reach = vec![vec![false; n]; n];
        for (s, t) in &act.edges {
            if let (Some(&i), Some(&j)) = (index.get(s), index.get(t)) {
                reach[i][j] = true;
            }
        }
        for k in 0..n {
            let via = reach[k].clone();
            for row in reach.iter_mut() {
                if row[k] {
                    for (r, &v) in row.iter_mut().zip(&via) {
                        *r |= v;
                    }
                }
            }
        }
        Reach { index, reach }
    }

    fn before(&self, a: &NodeId, b: &NodeId) -> bool {
        self.reach[self.index[a]][self.index[b]]
    }

    fn has_cycle(&self) -> bool {
        (0..self.reach.len()).any(|i| self.reach[i][i])
    }
}

fn check_activity(spec: &Specification, act: &Activity, out: &mut Vec<Diagnostic>) {
    let act_ent = format!("activity {}", act.id);
    let node_ent = |n: &NodeId| format!("node {}.{}", act.id, n);
    let mut refs_ok = true;

    for (s, t) in &act.edges {
        for n in [s, t] {
            if !act.nodes.contains_key(n) {
                refs_ok = false;
                out.push(Diagnostic::new(
                    DiagCode::UnknownRef,
                    &act_ent,
                    format!("dependency `{s} -> {t}` refers to unknown node `{n}`"),
                ));
            }
        }
    }

    let mut claims: BTreeMap<&ResourceId, Vec<&NodeId>> = BTreeMap::new();
    let mut releases: BTreeMap<&ResourceId, Vec<&NodeId>> = BTreeMap::new();
    let mut on_peripheral: BTreeMap<&PeripheralId, Vec<&NodeId>> = BTreeMap::new();
    for (n, kind) in &act.nodes {
        match kind {
            NodeKind::Claim { resource } | NodeKind::Release { resource } => {
                if !spec.resources.contains(resource) {
                    out.push(Diagnostic::new(
                        DiagCode::UnknownRef,
                        node_ent(n),
                        format!("node `{n}` refers to unknown resource `{resource}`"),
                    ));
                }
                let slot = if matches!(kind, NodeKind::Claim { .. }) {
                    &mut claims
                } else {
                    &mut releases
                };
                slot.entry(resource).or_default().push(n);
            }
            NodeKind::Action { action, peripheral } => match spec.peripherals.get(peripheral) {
                None => out.push(Diagnostic::new(
                    DiagCode::UnknownRef,
                    node_ent(n),
                    format!("node `{n}` refers to unknown peripheral `{peripheral}`"),
                )),
                Some(p) => {
                    if !p.has_action(action) {
                        out.push(Diagnostic::new(
                            DiagCode::UnknownRef,
                            node_ent(n),
                            format!("peripheral `{peripheral}` has no action `{action}`"),
                        ));
                    }
                    on_peripheral.entry(peripheral).or_default().push(n);
                }
            },
        }
    }

    for (which, map) in [("claimed", &claims), ("released", &releases)] {
        for (r, nodes) in map {
            if nodes.len() > 1 {
                out.push(Diagnostic::new(
                    DiagCode::MultiClaim,
                    &act_ent,
                    format!("resource `{r}` is {which} {} times", nodes.len()),
                ));
            }
        }
    }

    if !refs_ok {
        return;
    }
    let reach = Reach::new(act);
    if reach.has_cycle() {
        out.push(Diagnostic::new(
            DiagCode::Cycle,
            &act_ent,
            format!("dependencies of activity `{}` contain a cycle", act.id),
        ));
        return;
    }

    let resources: BTreeSet<&ResourceId> = claims.keys().chain(releases.keys()).copied().collect();
    for r in resources {
        let cls = claims.get(r).map(Vec::as_slice).unwrap_or_default();
        let rls = releases.get(r).map(Vec::as_slice).unwrap_or_default();
        match (cls, rls) {
            ([], _) => out.push(Diagnostic::new(
                DiagCode::ReleaseBeforeClaim,
                &act_ent,
                format!("resource `{r}` is released but never claimed"),
            )),
            (_, []) => out.push(Diagnostic::new(
                DiagCode::UnreleasedClaim,
                &act_ent,
                format!("resource `{r}` is claimed but never released"),
            )),
            _ => {
                for c in cls {
                    for rl in rls {
                        if reach.before(rl, c) {
                            out.push(Diagnostic::new(
                                DiagCode::ReleaseBeforeClaim,
                                node_ent(rl),
                                format!("release `{rl}` of `{r}` precedes its claim `{c}`"),
                            ));
                        } else if !reach.before(c, rl) {
                            out.push(Diagnostic::new(
                                DiagCode::UnreleasedClaim,
                                node_ent(c),
                                format!("claim `{c}` of `{r}` is not followed by release `{rl}`"),
                            ));
                        }
                    }
                }
            }
        }
    }

    for (n, kind) in &act.nodes {
        let NodeKind::Action { peripheral, .. } = kind else {
            continue;
        };
        let Some(r) = spec.owner.get(peripheral) else {
            continue;
        };
        let cls = claims.get(r).map(Vec::as_slice).unwrap_or_default();
        let rls = releases.get(r).map(Vec::as_slice).unwrap_or_default();
        if cls.is_empty() {
            out.push(Diagnostic::new(
                DiagCode::UnclaimedAction,
                node_ent(n),
                format!("action node `{n}` uses `{r}` which is never claimed"),
            ));
        } else if !cls.iter().any(|c| reach.before(c, n)) {
            out.push(Diagnostic::new(
                DiagCode::UnclaimedAction,
                node_ent(n),
                format!("action node `{n}` is not preceded by the claim of `{r}`"),
            ));
        }
        if !rls.is_empty() && !rls.iter().any(|rl| reach.before(n, rl)) {
            out.push(Diagnostic::new(
                DiagCode::UnclaimedAction,
                node_ent(n),
                format!("action node `{n}` is not followed by the release of `{r}`"),
            ));
        }
    }

    for (p, nodes) in &on_peripheral {
        for (i, a) in nodes.iter().enumerate() {
            for b in &nodes[i + 1..] {
                if !reach.before(a, b) && !reach.before(b, a) {
                    out.push(Diagnostic::new(
                        DiagCode::SelfConcurrency,
                        &act_ent,
                        format!("nodes `{a}` and `{b}` on peripheral `{p}` are unordered"),
                    ));
                }
            }
        }
    }
}

/// Whether a used activity has finitely many instances or unboundedly many.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum InstanceBound {
    Finite(u32),
    Unbounded,
}

impl InstanceBound {
    pub fn admits(self, index: u32) -> bool {
        index >= 1
            && match self {
                InstanceBound::Finite(n) => index <= n,
                InstanceBound::Unbounded => true,
            }
    }
}

/// Components relevant to a dispatching sequence.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UsedSets {
    pub activities: BTreeSet<ActivityId>,
    pub resources: BTreeSet<ResourceId>,
    pub peripherals: BTreeSet<PeripheralId>,
    pub instance_bound: BTreeMap<ActivityId, InstanceBound>,
}

impl UsedSets {
    fn from_bounds(
        spec: &Specification,
        instance_bound: BTreeMap<ActivityId, InstanceBound>,
    ) -> Result<Self> {
        let mut used = UsedSets {
            activities: instance_bound.keys().cloned().collect(),
            instance_bound,
            ..Default::default()
        };
        for a in &used.activities {
            let act = spec
                .activity(a)
                .ok_or_else(|| Error::unknown("activity", a))?;
            used.resources.extend(act.resources());
            used.peripherals.extend(act.peripherals());
        }
        Ok(used)
    }
}

pub fn used_sets(spec: &Specification, seq: &DispatchingSequence) -> Result<UsedSets> {
    let mut bounds = BTreeMap::new();
    for a in seq.transient.iter() {
        bounds.insert(
            a.clone(),
            InstanceBound::Finite(seq.transient.count(a) as u32),
        );
    }
    for a in seq.periodic.iter() {
        bounds.insert(a.clone(), InstanceBound::Unbounded);
    }
    UsedSets::from_bounds(spec, bounds)
}

/// Used sets for a dispatch automaton: activities labelling reachable
/// transitions, each with unboundedly many instances.
pub fn used_sets_fsa(spec: &Specification, d: &DispatchFsa) -> Result<UsedSets> {
    let bounds = d
        .reachable_labels()
        .into_iter()
        .map(|a| (a, InstanceBound::Unbounded))
        .collect();
    UsedSets::from_bounds(spec, bounds)
}
