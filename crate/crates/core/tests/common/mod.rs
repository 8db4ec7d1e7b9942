//! Seeded generators of valid specifications and random DAGs, shared by the
//! integration tests and the acceptance harness.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use lsat_semantics::model::{
    Activity, ActivityId, DispatchDescription, Movement, NodeKind, Peripheral, PeripheralKind,
    Profile, Specification, TimingSpec,
};
use lsat_semantics::sequence::{ActivitySequence, DispatchingSequence};
use lsat_semantics::system::DispatchFsa;
use lsat_semantics::validate::validate_spec;
use rand::seq::SliceRandom;
use rand::Rng;

/// Size limits for [`random_spec`].
#[derive(Debug, Clone, Copy)]
pub struct SpecShape {
    pub max_resources: usize,
    pub max_activities: usize,
    /// Maximum number of action nodes per claimed resource.
    pub max_actions: usize,
    /// Probability of an extra ordering edge between two nodes.
    pub cross_edge: f64,
    /// Maximum total length of a finite dispatching sequence.
    pub max_instances: usize,
    /// Allow `repeat` parts and dispatch automata.
    pub infinite_dispatch: bool,
    /// Draw random timing data instead of unit values.
    pub varied_timing: bool,
}

impl SpecShape {
    pub fn small() -> Self {
        SpecShape {
            max_resources: 2,
            max_activities: 2,
            max_actions: 2,
            cross_edge: 0.25,
            max_instances: 3,
            infinite_dispatch: false,
            varied_timing: false,
        }
    }

    pub fn rich() -> Self {
        SpecShape {
            max_resources: 3,
            max_activities: 3,
            max_actions: 3,
            cross_edge: 0.2,
            max_instances: 4,
            infinite_dispatch: true,
            varied_timing: true,
        }
    }
}

fn number<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    // mix round values with arbitrary ones so both print forms are covered
    if rng.gen_bool(0.5) {
        rng.gen_range((lo * 4.0) as i64..=(hi * 4.0) as i64) as f64 / 4.0
    } else {
        rng.gen_range(lo..hi)
    }
}

fn timing<R: Rng>(rng: &mut R, varied: bool) -> TimingSpec {
    if !varied {
        return TimingSpec::Deterministic { t: 1.0 };
    }
    let mut abc = [
        number(rng, 0.0, 5.0),
        number(rng, 0.0, 5.0),
        number(rng, 0.0, 5.0),
    ];
    abc.sort_by(f64::total_cmp);
    let [a, m, b] = abc;
    match rng.gen_range(0..4) {
        0 => TimingSpec::Deterministic {
            t: number(rng, 0.0, 10.0),
        },
        1 => TimingSpec::Normal {
            mu: number(rng, 0.0, 10.0),
            sigma: number(rng, 0.25, 2.0),
        },
        2 => TimingSpec::Triangular { a, m, b },
        _ => TimingSpec::Pert { a, m, b },
    }
}

fn peripheral<R: Rng>(rng: &mut R, id: &str, varied: bool) -> Peripheral {
    if rng.gen_bool(0.6) {
        let n = rng.gen_range(1..=3);
        let actions = ["a", "b", "c"][..n]
            .iter()
            .map(|a| ((*a).into(), timing(rng, varied)))
            .collect();
        return Peripheral {
            id: id.into(),
            kind: PeripheralKind::Unmovable { actions },
        };
    }
    let positions: BTreeSet<_> = ["l", "m", "r"].into_iter().map(Into::into).collect();
    let mut moves = BTreeMap::new();
    for (name, s, t) in [
        ("l_to_m", "l", "m"),
        ("m_to_l", "m", "l"),
        ("m_to_r", "m", "r"),
    ] {
        let profile = if varied && rng.gen_bool(0.2) {
            Profile::ThirdOrder {
                vmax: number(rng, 0.5, 3.0),
                amax: number(rng, 0.5, 3.0),
                jmax: number(rng, 0.5, 9.0),
            }
        } else if varied {
            Profile::SecondOrder {
                vmax: number(rng, 0.5, 3.0),
                amax: number(rng, 0.5, 3.0),
            }
        } else {
            Profile::SecondOrder {
                vmax: 1.0,
                amax: 2.0,
            }
        };
        let (distance, settling) = if varied {
            (number(rng, 0.0, 4.0), number(rng, 0.0, 0.5))
        } else {
            (Movement::DEFAULT_DISTANCE, 0.0)
        };
        moves.insert(
            name.into(),
            Movement {
                id: name.into(),
                source: s.into(),
                target: t.into(),
                profile,
                settling,
                distance,
            },
        );
    }
    Peripheral {
        id: id.into(),
        kind: PeripheralKind::Movable { positions, moves },
    }
}

/// A valid activity: per claimed resource a chain claim, actions on the
/// resource's peripheral, release; plus random forward edges over a random
/// interleaving of the chains.
fn activity<R: Rng>(rng: &mut R, id: &str, spec: &Specification, shape: &SpecShape) -> Activity {
    let resources: Vec<_> = spec.resources.iter().cloned().collect();
    let mut used: Vec<_> = resources
        .iter()
        .filter(|_| rng.gen_bool(0.6))
        .cloned()
        .collect();
    if used.is_empty() {
        used.push(resources.choose(rng).unwrap().clone());
    }
    let mut act = Activity::new(id);
    let mut chains: Vec<Vec<String>> = Vec::new();
    for (i, r) in used.iter().enumerate() {
        let mut chain = vec![format!("c{i}")];
        act.nodes.insert(
            chain[0].as_str().into(),
            NodeKind::Claim {
                resource: r.clone(),
            },
        );
        let periphs: Vec<_> = spec
            .owner
            .iter()
            .filter(|(_, o)| *o == r)
            .map(|(p, _)| p.clone())
            .collect();
        if let Some(p) = periphs.first() {
            let names: Vec<_> = spec.peripherals[p].actions().into_iter().collect();
            for k in 0..rng.gen_range(0..=shape.max_actions) {
                let n = format!("x{i}_{k}");
                act.nodes.insert(
                    n.as_str().into(),
                    NodeKind::Action {
                        action: names.choose(rng).unwrap().clone(),
                        peripheral: p.clone(),
                    },
                );
                chain.push(n);
            }
        }
        let n = format!("r{i}");
        act.nodes.insert(
            n.as_str().into(),
            NodeKind::Release {
                resource: r.clone(),
            },
        );
        chain.push(n);
        for w in chain.windows(2) {
            act = act.edge(&w[0], &w[1]);
        }
        chains.push(chain);
    }
    // a random interleaving keeps every chain in order, so forward edges
    // over it cannot close a cycle
    let mut order = Vec::new();
    let mut heads = vec![0usize; chains.len()];
    while order.len() < act.nodes.len() {
        let open: Vec<usize> = (0..chains.len())
            .filter(|&c| heads[c] < chains[c].len())
            .collect();
        let c = *open.choose(rng).unwrap();
        order.push(chains[c][heads[c]].clone());
        heads[c] += 1;
    }
    for i in 0..order.len() {
        for j in i + 1..order.len() {
            if rng.gen_bool(shape.cross_edge) {
                act = act.edge(&order[i], &order[j]);
            }
        }
    }
    act
}

fn word<R: Rng>(rng: &mut R, names: &[ActivityId], len: usize) -> ActivitySequence {
    ActivitySequence(
        (0..len)
            .map(|_| names.choose(rng).unwrap().clone())
            .collect(),
    )
}

fn dispatch<R: Rng>(rng: &mut R, names: &[ActivityId], shape: &SpecShape) -> DispatchDescription {
    if !shape.infinite_dispatch {
        let len = rng.gen_range(1..=shape.max_instances);
        return DispatchDescription::Sequence(DispatchingSequence::finite(word(rng, names, len)));
    }
    match rng.gen_range(0..3) {
        0 => {
            let len = rng.gen_range(0..=shape.max_instances);
            DispatchDescription::Sequence(DispatchingSequence::finite(word(rng, names, len)))
        }
        1 => {
            let t = rng.gen_range(0..=2);
            let p = rng.gen_range(1..=2);
            DispatchDescription::Sequence(DispatchingSequence::new(
                word(rng, names, t),
                word(rng, names, p),
            ))
        }
        _ => {
            let n = rng.gen_range(1..=3);
            let mut d = DispatchFsa::new().initial("s0");
            for k in 1..n {
                d.state(&format!("s{k}"));
            }
            for _ in 0..rng.gen_range(1..=4) {
                let from = format!("s{}", rng.gen_range(0..n));
                let to = format!("s{}", rng.gen_range(0..n));
                d = d.edge(&from, names.choose(rng).unwrap().as_str(), &to);
            }
            DispatchDescription::Fsa(d)
        }
    }
}

/// A random specification that passes validation.
pub fn random_spec<R: Rng>(rng: &mut R, shape: &SpecShape) -> Specification {
    let mut spec = Specification::default();
    for i in 1..=rng.gen_range(1..=shape.max_resources) {
        let r = format!("R{i}");
        if shape.varied_timing && rng.gen_bool(0.15) {
            spec.add_resource(r.as_str());
        } else {
            let p = peripheral(rng, &format!("p{i}"), shape.varied_timing);
            spec.add_peripheral(r.as_str(), p);
        }
    }
    let n = rng.gen_range(1..=shape.max_activities);
    let names: Vec<ActivityId> = (0..n)
        .map(|i| ActivityId::new(format!("{}", (b'A' + i as u8) as char)))
        .collect();
    for a in &names {
        let act = activity(rng, a.as_str(), &spec, shape);
        spec.add_activity(act);
    }
    spec.dispatch = dispatch(rng, &names, shape);
    let diags = validate_spec(&spec);
    assert!(
        diags.is_empty(),
        "generator produced an invalid spec: {diags:?}"
    );
    spec
}

/// A random DAG on `n` nodes named `v0..`, every node an action `p.v{i}`
/// so that labels identify nodes. Edges go from lower to higher index of a
/// random permutation.
pub fn random_dag<R: Rng>(rng: &mut R, n: usize, density: f64) -> Activity {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut act = Activity::new("G");
    for i in 0..n {
        act.nodes.insert(
            format!("v{i}").as_str().into(),
            NodeKind::Action {
                action: format!("v{i}").as_str().into(),
                peripheral: "p".into(),
            },
        );
    }
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                act = act.edge(&format!("v{}", perm[i]), &format!("v{}", perm[j]));
            }
        }
    }
    act
}

/// All orders of the nodes that respect every edge, by brute force over
/// permutations.
pub fn topological_orders(act: &Activity) -> BTreeSet<Vec<String>> {
    fn permute(rest: &mut Vec<String>, cur: &mut Vec<String>, out: &mut Vec<Vec<String>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            cur.push(x.clone());
            permute(rest, cur, out);
            cur.pop();
            rest.insert(i, x);
        }
    }
    let mut all = Vec::new();
    let mut nodes: Vec<String> = act.nodes.keys().map(|n| n.to_string()).collect();
    permute(&mut nodes, &mut Vec::new(), &mut all);
    all.into_iter()
        .filter(|p| {
            let pos = |n: &str| p.iter().position(|x| x == n).unwrap();
            act.edges
                .iter()
                .all(|(s, t)| pos(s.as_str()) < pos(t.as_str()))
        })
        .collect()
}

/// Composite Simpson rule on `[lo, hi]`.
fn simpson(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> f64 {
    let h = (hi - lo) / n as f64;
    let mut s = f(lo) + f(hi);
    for k in 1..n {
        s += if k % 2 == 1 { 4.0 } else { 2.0 } * f(lo + k as f64 * h);
    }
    s * h / 3.0
}

/// Numerically integrated travel time of a symmetric trapezoidal velocity
/// profile: bisection on the duration `T` such that the area under
/// `min(amax t, vmax, amax (T - t))` equals `d`. The quadrature is split at
/// the profile's corners.
pub fn numeric_travel_time(d: f64, vmax: f64, amax: f64) -> f64 {
    let area = |total: f64| {
        let v = |t: f64| (amax * t).min(vmax).min(amax * (total - t)).max(0.0);
        let ramp = (vmax / amax).min(total / 2.0);
        simpson(v, 0.0, ramp, 200)
            + simpson(v, ramp, total - ramp, 200)
            + simpson(v, total - ramp, total, 200)
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    while area(hi) < d {
        hi *= 2.0;
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if area(mid) < d {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Mean of the PERT Beta distribution on `[a, b]` with mode `m`, by
/// Simpson quadrature of the unnormalized density.
pub fn numeric_pert_mean(a: f64, m: f64, b: f64) -> f64 {
    let alpha = 1.0 + 4.0 * (m - a) / (b - a);
    let beta = 1.0 + 4.0 * (b - m) / (b - a);
    let f = |x: f64| x.powf(alpha - 1.0) * (1.0 - x).powf(beta - 1.0);
    let mass = simpson(f, 0.0, 1.0, 20_000);
    let moment = simpson(|x| x * f(x), 0.0, 1.0, 20_000);
    a + (b - a) * moment / mass
}
