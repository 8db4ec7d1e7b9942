use std::fmt::Write;

use crate::model::{
    DispatchDescription, Movement, NodeKind, PeripheralKind, Profile, Specification, TimingSpec,
};
use crate::sequence::{ActivitySequence, DispatchingSequence};
use crate::system::DispatchFsa;

/// Canonical text for a specification: declarations sorted by id, one
/// node or edge per line, numbers in shortest round-trip form. Comments
/// are not preserved. Peripherals without an owning resource cannot be
/// expressed and are left out.
pub fn pretty_print(spec: &Specification) -> String {
    let mut out = String::new();
    for r in &spec.resources {
        let peripherals: Vec<_> = spec
            .peripherals
            .values()
            .filter(|p| spec.owner.get(&p.id) == Some(r))
            .collect();
        if peripherals.is_empty() {
            writeln!(out, "resource {r} {{ }}\n").unwrap();
            continue;
        }
        writeln!(out, "resource {r} {{").unwrap();
        for p in peripherals {
            match &p.kind {
                PeripheralKind::Unmovable { actions } => {
                    writeln!(out, "  peripheral {} unmovable {{", p.id).unwrap();
                    for (a, t) in actions {
                        writeln!(out, "    action {a} time {}", timing(t)).unwrap();
                    }
                }
                PeripheralKind::Movable { positions, moves } => {
                    writeln!(out, "  peripheral {} movable {{", p.id).unwrap();
                    let names: Vec<&str> = positions.iter().map(|x| x.as_str()).collect();
                    writeln!(out, "    positions {{ {} }}", names.join(", ")).unwrap();
                    for m in moves.values() {
                        writeln!(out, "    {}", movement(m)).unwrap();
                    }
                }
            }
            writeln!(out, "  }}").unwrap();
        }
        writeln!(out, "}}\n").unwrap();
    }

    for act in spec.activities.values() {
        writeln!(out, "activity {} {{", act.id).unwrap();
        writeln!(out, "  nodes {{").unwrap();
        for (n, k) in &act.nodes {
            let kind = match k {
                NodeKind::Claim { resource } => format!("claim {resource}"),
                NodeKind::Release { resource } => format!("release {resource}"),
                NodeKind::Action { action, peripheral } => format!("{peripheral}.{action}"),
            };
            writeln!(out, "    {n}: {kind}").unwrap();
        }
        writeln!(out, "  }}").unwrap();
        writeln!(out, "  flow {{").unwrap();
        for (s, t) in &act.edges {
            writeln!(out, "    {s} -> {t}").unwrap();
        }
        writeln!(out, "  }}").unwrap();
        writeln!(out, "}}\n").unwrap();
    }

    match &spec.dispatch {
        DispatchDescription::Sequence(s) => {
            writeln!(out, "dispatch sequence {{ {}}}", sequence(s)).unwrap()
        }
        DispatchDescription::Fsa(d) => writeln!(out, "dispatch fsa {{\n{}}}", fsa(d)).unwrap(),
    }
    out
}

fn items(s: &ActivitySequence) -> String {
    s.iter().map(|a| a.as_str()).collect::<Vec<_>>().join(" ; ")
}

fn sequence(s: &DispatchingSequence) -> String {
    let mut parts = Vec::new();
    if !s.transient.is_empty() {
        parts.push(items(&s.transient));
    }
    if s.is_infinite() {
        parts.push(format!("repeat {{ {} }}", items(&s.periodic)));
    }
    if parts.is_empty() {
        String::new()
    } else {
        format!("{} ", parts.join(" ; "))
    }
}

fn fsa(d: &DispatchFsa) -> String {
    let mut out = format!("  states {{ {} }}\n", d.states.join(", "));
    let init: Vec<&str> = d.initial.iter().map(|&i| d.states[i].as_str()).collect();
    if !init.is_empty() {
        writeln!(out, "  initial {}", init.join(", ")).unwrap();
    }
    for (s, a, t) in &d.transitions {
        writeln!(out, "  edge {} -{a}-> {}", d.states[*s], d.states[*t]).unwrap();
    }
    out
}

fn timing(t: &TimingSpec) -> String {
    match t {
        TimingSpec::Deterministic { t } => format!("{t:?}"),
        TimingSpec::Normal { mu, sigma } => format!("normal(mu={mu:?}, sigma={sigma:?})"),
        TimingSpec::Triangular { a, m, b } => format!("triangular(a={a:?}, m={m:?}, b={b:?})"),
        TimingSpec::Pert { a, m, b } => format!("pert(a={a:?}, m={m:?}, b={b:?})"),
    }
}

fn movement(m: &Movement) -> String {
    let profile = match m.profile {
        Profile::SecondOrder { vmax, amax } => format!("second(v={vmax:?}, a={amax:?})"),
        Profile::ThirdOrder { vmax, amax, jmax } => {
            format!("third(v={vmax:?}, a={amax:?}, j={jmax:?})")
        }
    };
    format!(
        "move {} from {} to {} profile {profile} distance {:?} settling {:?}",
        m.id, m.source, m.target, m.distance, m.settling
    )
}
