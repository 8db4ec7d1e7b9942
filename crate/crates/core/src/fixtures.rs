//! Small reference models: the example activity with two resources, the
//! three-activity claiming example, and the peripheral examples.

use std::collections::{BTreeMap, BTreeSet};

use crate::model::{
    Activity, DispatchDescription, Movement, NodeKind, Peripheral, PeripheralKind, Profile,
    Specification, TimingSpec,
};
use crate::sequence::DispatchingSequence;

pub fn claim(r: &str) -> NodeKind {
    NodeKind::Claim { resource: r.into() }
}

pub fn release(r: &str) -> NodeKind {
    NodeKind::Release { resource: r.into() }
}

pub fn action(p: &str, a: &str) -> NodeKind {
    NodeKind::Action {
        action: a.into(),
        peripheral: p.into(),
    }
}

pub fn unmovable(id: &str, actions: &[&str]) -> Peripheral {
    Peripheral {
        id: id.into(),
        kind: PeripheralKind::Unmovable {
            actions: actions
                .iter()
                .map(|a| ((*a).into(), TimingSpec::Deterministic { t: 1.0 }))
                .collect(),
        },
    }
}

/// Movable peripheral with positions left, middle, right and moves between
/// neighbours (`l_to_m`, `m_to_l`, `m_to_r`, `r_to_m`).
pub fn movable_lmr(id: &str) -> Peripheral {
    let mv = |name: &str, s: &str, t: &str| Movement {
        id: name.into(),
        source: s.into(),
        target: t.into(),
        profile: Profile::SecondOrder {
            vmax: 1.0,
            amax: 2.0,
        },
        settling: 0.0,
        distance: Movement::DEFAULT_DISTANCE,
    };
    let moves: BTreeMap<_, _> = [
        mv("l_to_m", "left", "middle"),
        mv("m_to_l", "middle", "left"),
        mv("m_to_r", "middle", "right"),
        mv("r_to_m", "right", "middle"),
    ]
    .into_iter()
    .map(|m| (m.id.clone(), m))
    .collect();
    let positions: BTreeSet<_> = ["left", "middle", "right"]
        .into_iter()
        .map(Into::into)
        .collect();
    Peripheral {
        id: id.into(),
        kind: PeripheralKind::Movable { positions, moves },
    }
}

/// The example activity `Act`: `n1 -> n3 -> n5`, `n2 -> n4 -> n6`,
/// `n3 -> n4`, where n1/n2 claim R1/R2, n3 is `a` on p1, n4 is `b` on p2
/// and n5/n6 release R1/R2.
pub fn example_activity() -> Activity {
    Activity::new("Act")
        .node("n1", claim("R1"))
        .node("n2", claim("R2"))
        .node("n3", action("p1", "a"))
        .node("n4", action("p2", "b"))
        .node("n5", release("R1"))
        .node("n6", release("R2"))
        .edge("n1", "n3")
        .edge("n3", "n5")
        .edge("n2", "n4")
        .edge("n4", "n6")
        .edge("n3", "n4")
}

/// Two resources with one unmovable peripheral each, the example activity,
/// dispatched once.
pub fn example_spec() -> Specification {
    let mut spec = Specification::default();
    spec.add_peripheral("R1", unmovable("p1", &["a"]));
    spec.add_peripheral("R2", unmovable("p2", &["b"]));
    spec.add_activity(example_activity());
    spec.dispatch = DispatchDescription::Sequence(DispatchingSequence::finite(vec!["Act"]));
    spec
}

/// ActA uses R1, ActB uses R1 and R2, ActC uses R2; dispatched as
/// `ActA ; (ActB ; ActC)^w`.
pub fn claiming_example_spec() -> Specification {
    let mut spec = Specification::default();
    spec.add_peripheral("R1", unmovable("p1", &["a"]));
    spec.add_peripheral("R2", unmovable("p2", &["b"]));
    spec.add_activity(
        Activity::new("ActA")
            .node("c1", claim("R1"))
            .node("x", action("p1", "a"))
            .node("r1", release("R1"))
            .edge("c1", "x")
            .edge("x", "r1"),
    );
    spec.add_activity(
        Activity::new("ActB")
            .node("c1", claim("R1"))
            .node("c2", claim("R2"))
            .node("r1", release("R1"))
            .node("r2", release("R2"))
            .edge("c1", "r1")
            .edge("c2", "r2"),
    );
    spec.add_activity(
        Activity::new("ActC")
            .node("c2", claim("R2"))
            .node("y", action("p2", "b"))
            .node("r2", release("R2"))
            .edge("c2", "y")
            .edge("y", "r2"),
    );
    spec.dispatch =
        DispatchDescription::Sequence(DispatchingSequence::new(vec!["ActA"], vec!["ActB", "ActC"]));
    spec
}

/// Peripheral examples: `pu` (unmovable, actions a and b) used by ActA, and
/// `pm` (movable left/middle/right) whose four moves are used by ActB.
pub fn peripheral_spec() -> Specification {
    let mut spec = Specification::default();
    spec.add_peripheral("Ru", unmovable("pu", &["a", "b"]));
    spec.add_peripheral("Rm", movable_lmr("pm"));
    spec.add_activity(
        Activity::new("ActA")
            .node("c", claim("Ru"))
            .node("x", action("pu", "a"))
            .node("y", action("pu", "b"))
            .node("r", release("Ru"))
            .edge("c", "x")
            .edge("x", "y")
            .edge("y", "r"),
    );
    spec.add_activity(
        Activity::new("ActB")
            .node("c", claim("Rm"))
            .node("m1", action("pm", "l_to_m"))
            .node("m2", action("pm", "m_to_r"))
            .node("m3", action("pm", "r_to_m"))
            .node("m4", action("pm", "m_to_l"))
            .node("r", release("Rm"))
            .edge("c", "m1")
            .edge("m1", "m2")
            .edge("m2", "m3")
            .edge("m3", "m4")
            .edge("m4", "r"),
    );
    spec.dispatch =
        DispatchDescription::Sequence(DispatchingSequence::finite(vec!["ActA", "ActB"]));
    spec
}

/// Two activities over two resources: A1 works on R1 only, A2 claims both
/// and needs its R1 claim before acting on p2.
pub fn two_activity_spec() -> Specification {
    let mut spec = Specification::default();
    spec.add_peripheral("R1", unmovable("p1", &["x"]));
    spec.add_peripheral("R2", unmovable("p2", &["y"]));
    spec.add_activity(
        Activity::new("A1")
            .node("c", claim("R1"))
            .node("x", action("p1", "x"))
            .node("r", release("R1"))
            .edge("c", "x")
            .edge("x", "r"),
    );
    spec.add_activity(
        Activity::new("A2")
            .node("c1", claim("R1"))
            .node("c2", claim("R2"))
            .node("y", action("p2", "y"))
            .node("r1", release("R1"))
            .node("r2", release("R2"))
            .edge("c1", "y")
            .edge("c2", "y")
            .edge("c1", "r1")
            .edge("y", "r2"),
    );
    spec.dispatch =
        DispatchDescription::Sequence(DispatchingSequence::new(vec!["A1", "A2"], vec!["A1", "A2"]));
    spec
}
