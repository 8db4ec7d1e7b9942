//! The `lsat` command line: validation, exploration, trace checking, DOT
//! export, completeness checks and statistics for `.lsat` files.
//!
//! Exit codes: 0 success, 1 diagnostics or a violated property, 2 usage or
//! I/O error, 3 state budget exceeded.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::automata::{
    bounded_explore, export_dot, first_rejection, ExploreOptions, ExploredGraph,
};
use crate::builders::{
    build_activity_automaton, build_availability, build_claiming, build_peripheral,
    enumerate_postsets, Component, InstanceUniverse, PeripheralPins, DEFAULT_POSTSET_CAP,
};
use crate::dsl::{parse_bytes, Parsed};
use crate::error::Error;
use crate::model::{ActivityInstance, DispatchDescription, EventLabel, Specification};
use crate::sequence::DispatchingSequence;
use crate::system::{
    build_mseq, build_union, check_complete, suggest_complete_set, DispatchFsa, SystemAutomaton,
    UnionAutomaton,
};
use crate::validate::{used_sets, used_sets_fsa, validate_spec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FOUND: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "lsat",
    version,
    about = "Action-level automata for manufacturing specifications"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Report parse and structural diagnostics.
    Validate { file: PathBuf },
    /// Explore the state space breadth-first and print a summary.
    Explore {
        file: PathBuf,
        #[command(flatten)]
        window: Window,
        /// Also write the explored graph as DOT to this file.
        #[arg(long, value_name = "OUT")]
        dot: Option<PathBuf>,
        /// Print the summary as JSON.
        #[arg(long)]
        json: bool,
        /// Fail with exit code 3 instead of truncating at the state budget.
        #[arg(long)]
        strict: bool,
    },
    /// Check a trace (one event per line) against the automaton.
    Trace {
        file: PathBuf,
        trace: PathBuf,
        #[command(flatten)]
        target: Target,
    },
    /// Print the explored graph as DOT.
    Dot {
        file: PathBuf,
        #[command(flatten)]
        window: Window,
    },
    /// Check candidate dispatching sequences against the dispatch automaton.
    CompleteCheck {
        file: PathBuf,
        /// A candidate such as `A1 ; (A2 ; A1)^w`; repeatable. Without
        /// candidates a set is suggested and checked.
        #[arg(long)]
        candidate: Vec<String>,
        #[arg(long, default_value_t = 20)]
        depth: usize,
        /// Longest lasso part considered when suggesting a set.
        #[arg(long, default_value_t = 4)]
        max_len: usize,
    },
    /// Print element counts and per-activity postset counts.
    Stats { file: PathBuf },
}

#[derive(Debug, Args)]
struct Target {
    /// `system` (default), `availability:R`, `claiming:R`, `activity:Act#j`
    /// or `peripheral:p`.
    #[arg(long, default_value = "system")]
    component: String,
    /// Fix the initial state of a peripheral, e.g. `p1=a`; repeatable.
    #[arg(long = "initial", value_name = "P=STATE")]
    initial: Vec<String>,
    /// Reserved; exploration is deterministic.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct Window {
    #[command(flatten)]
    target: Target,
    /// Maximum number of transitions from an initial state.
    #[arg(long, default_value_t = 10, conflicts_with = "full")]
    depth: usize,
    /// Explore without a depth bound, until the state budget.
    #[arg(long)]
    full: bool,
    #[arg(long, default_value_t = 100_000)]
    max_states: usize,
}

impl Window {
    fn options(&self, strict: bool) -> ExploreOptions {
        ExploreOptions {
            depth: (!self.full).then_some(self.depth),
            max_states: self.max_states,
            strict,
        }
    }
}

#[derive(Debug, Serialize)]
struct Summary {
    states: usize,
    transitions: usize,
    frontier: usize,
    depth: usize,
    truncated: bool,
}

impl Summary {
    fn of(g: &ExploredGraph) -> Self {
        Summary {
            states: g.states.len(),
            transitions: g.transitions.len(),
            frontier: g.frontier.len(),
            depth: g.depth,
            truncated: g.truncated,
        }
    }
}

/// A failure that ends the command with the given exit code.
struct Exit(i32);

type Io<'a> = (&'a mut (dyn Write + 'a), &'a mut (dyn Write + 'a));

/// Runs the command line `args` (including the program name), writing to
/// `out` and `err`, and returns the exit code.
pub fn run<'a, I, T>(args: I, out: &'a mut dyn Write, err: &'a mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let mut io = (out, err);
    let result = match &cli.command {
        Command::Validate { file } => validate(file, &mut io),
        Command::Explore {
            file,
            window,
            dot,
            json,
            strict,
        } => explore(file, window, dot.as_deref(), *json, *strict, &mut io),
        Command::Trace {
            file,
            trace,
            target,
        } => check_trace(file, trace, target, &mut io),
        Command::Dot { file, window } => dot(file, window, &mut io),
        Command::CompleteCheck {
            file,
            candidate,
            depth,
            max_len,
        } => complete(file, candidate, *depth, *max_len, &mut io),
        Command::Stats { file } => stats(file, &mut io),
    };
    match result {
        Ok(code) | Err(Exit(code)) => code,
    }
}

fn fail(io: &mut Io, code: i32, msg: impl std::fmt::Display) -> Exit {
    let _ = writeln!(io.1, "error: {msg}");
    Exit(code)
}

fn library_error(io: &mut Io, e: Error) -> Exit {
    let code = match e {
        Error::Budget(_) => EXIT_BUDGET,
        Error::BadPin { .. } => EXIT_USAGE,
        _ => EXIT_FOUND,
    };
    if let Error::InvalidSpec(diags) = &e {
        for d in diags {
            let _ = writeln!(io.1, "{}", d.render("<input>"));
        }
        return Exit(code);
    }
    fail(io, code, format_args!("{}: {e}", e.code()))
}

fn read(path: &Path, io: &mut Io) -> Result<Vec<u8>, Exit> {
    std::fs::read(path).map_err(|e| {
        fail(
            io,
            EXIT_USAGE,
            format_args!("cannot read {}: {e}", path.display()),
        )
    })
}

/// Parses and validates; all diagnostics end the command with exit 1.
fn load(path: &Path, io: &mut Io) -> Result<Specification, Exit> {
    let bytes = read(path, io)?;
    let name = path.display().to_string();
    let (spec, mut diags) = match parse_bytes(&bytes, &name) {
        Ok(Parsed { spec, source_map }) => {
            let mut diags = validate_spec(&spec);
            source_map.attach(&mut diags);
            (spec, diags)
        }
        Err(diags) => (Specification::default(), diags),
    };
    if diags.is_empty() {
        return Ok(spec);
    }
    diags.sort_by_key(|d| d.span.as_ref().map(|s| (s.line, s.column)));
    for d in &diags {
        let _ = writeln!(io.1, "{}", d.render(&name));
    }
    Err(Exit(EXIT_FOUND))
}

fn validate(path: &Path, io: &mut Io) -> Result<i32, Exit> {
    load(path, io).map(|_| EXIT_OK)
}

fn pins(target: &Target, io: &mut Io) -> Result<PeripheralPins, Exit> {
    let mut pins = PeripheralPins::new();
    for item in &target.initial {
        let Some((p, s)) = item.split_once('=') else {
            return Err(fail(
                io,
                EXIT_USAGE,
                format_args!("--initial expects P=STATE, got `{item}`"),
            ));
        };
        pins.insert(p.trim().into(), s.trim().to_string());
    }
    Ok(pins)
}

enum Built {
    System(SystemAutomaton),
    Union(UnionAutomaton),
    Component(Component),
}

fn universe(spec: &Specification) -> crate::error::Result<InstanceUniverse> {
    let used = match &spec.dispatch {
        DispatchDescription::Sequence(s) => used_sets(spec, s)?,
        DispatchDescription::Fsa(d) => used_sets_fsa(spec, d)?,
    };
    Ok(InstanceUniverse::from_used(&used))
}

fn build(spec: &Specification, target: &Target, io: &mut Io) -> Result<Built, Exit> {
    let pins = pins(target, io)?;
    let (kind, name) = target
        .component
        .split_once(':')
        .unwrap_or((target.component.as_str(), ""));
    let built = match (kind, &spec.dispatch) {
        ("system", DispatchDescription::Sequence(s)) => {
            build_mseq(spec, s, &pins).map(Built::System)
        }
        ("system", DispatchDescription::Fsa(d)) => build_union(spec, d, &pins).map(Built::Union),
        ("claiming", DispatchDescription::Fsa(_)) => {
            return Err(fail(
                io,
                EXIT_USAGE,
                "claiming automata need a `dispatch sequence`",
            ))
        }
        ("availability" | "claiming" | "activity" | "peripheral", _) => {
            component(spec, kind, name, &pins).map(Built::Component)
        }
        _ => {
            return Err(fail(
                io,
                EXIT_USAGE,
                format_args!("unknown component `{}`", target.component),
            ))
        }
    };
    built.map_err(|e| library_error(io, e))
}

fn component(
    spec: &Specification,
    kind: &str,
    name: &str,
    pins: &PeripheralPins,
) -> crate::error::Result<Component> {
    let universe = universe(spec)?;
    Ok(match kind {
        "availability" => {
            let r = name.into();
            if !spec.resources.contains(&r) {
                return Err(Error::UnknownRef {
                    kind: "resource",
                    id: name.to_string(),
                });
            }
            Component::Availability(build_availability(spec, &r, &universe))
        }
        "claiming" => {
            let seq = spec.dispatch_sequence().cloned().unwrap_or_default();
            Component::Claiming(build_claiming(spec, &name.into(), &seq, &universe)?)
        }
        "activity" => {
            let inst: ActivityInstance = name.parse().map_err(|_| Error::UnknownRef {
                kind: "activity instance",
                id: name.to_string(),
            })?;
            let act = spec
                .activity(&inst.activity)
                .ok_or_else(|| Error::UnknownRef {
                    kind: "activity",
                    id: inst.activity.to_string(),
                })?;
            Component::Activity(build_activity_automaton(inst, act)?)
        }
        _ => {
            let p = name.into();
            let mut q = build_peripheral(spec, &p, &universe)?;
            if let Some(s) = pins.get(&p) {
                q.pin(s)?;
            }
            Component::Peripheral(q)
        }
    })
}

fn explore_built(b: &Built, opts: ExploreOptions) -> crate::error::Result<ExploredGraph> {
    match b {
        Built::System(a) => bounded_explore(a, opts),
        Built::Union(a) => bounded_explore(a, opts),
        Built::Component(a) => bounded_explore(a, opts),
    }
}

fn graph(path: &Path, window: &Window, strict: bool, io: &mut Io) -> Result<ExploredGraph, Exit> {
    let spec = load(path, io)?;
    let built = build(&spec, &window.target, io)?;
    explore_built(&built, window.options(strict)).map_err(|e| library_error(io, e))
}

fn explore(
    path: &Path,
    window: &Window,
    dot_out: Option<&Path>,
    json: bool,
    strict: bool,
    io: &mut Io,
) -> Result<i32, Exit> {
    let g = graph(path, window, strict, io)?;
    if let Some(out) = dot_out {
        std::fs::write(out, export_dot(&g)).map_err(|e| {
            fail(
                io,
                EXIT_USAGE,
                format_args!("cannot write {}: {e}", out.display()),
            )
        })?;
    }
    let s = Summary::of(&g);
    if json {
        let text = serde_json::to_string(&s).expect("summary serializes");
        let _ = writeln!(io.0, "{text}");
    } else {
        let _ = writeln!(
            io.0,
            "states={} transitions={} frontier={} depth={}",
            s.states, s.transitions, s.frontier, s.depth
        );
        if s.truncated {
            let _ = writeln!(io.1, "warning: stopped at {} states", window.max_states);
        }
    }
    Ok(EXIT_OK)
}

fn dot(path: &Path, window: &Window, io: &mut Io) -> Result<i32, Exit> {
    let g = graph(path, window, false, io)?;
    let _ = io.0.write_all(export_dot(&g).as_bytes());
    Ok(EXIT_OK)
}

/// Events of a trace file with their line numbers; blank lines and lines
/// starting with `#` are skipped.
fn read_trace(path: &Path, io: &mut Io) -> Result<Vec<(usize, EventLabel)>, Exit> {
    let bytes = read(path, io)?;
    let text = String::from_utf8(bytes).map_err(|_| {
        fail(
            io,
            EXIT_USAGE,
            format_args!("{} is not UTF-8", path.display()),
        )
    })?;
    let mut events = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match line.parse::<EventLabel>() {
            Ok(e) => events.push((i + 1, e)),
            Err(e) => {
                return Err(fail(
                    io,
                    EXIT_USAGE,
                    format_args!("{}:{}: {e}", path.display(), i + 1),
                ))
            }
        }
    }
    Ok(events)
}

fn check_trace(path: &Path, trace: &Path, target: &Target, io: &mut Io) -> Result<i32, Exit> {
    let spec = load(path, io)?;
    let built = build(&spec, target, io)?;
    let events = read_trace(trace, io)?;
    let labels: Vec<EventLabel> = events.iter().map(|(_, e)| e.clone()).collect();
    let rejected = match &built {
        Built::System(a) => first_rejection(a, &labels),
        Built::Union(a) => first_rejection(a, &labels),
        Built::Component(a) => first_rejection(a, &labels),
    };
    match rejected {
        None => {
            let _ = writeln!(io.0, "accept");
            Ok(EXIT_OK)
        }
        Some(i) => {
            // An automaton without initial states rejects even the empty trace.
            let line = events.get(i).map_or(0, |(l, _)| *l);
            let _ = writeln!(io.0, "reject at line {line}");
            Ok(EXIT_FOUND)
        }
    }
}

fn complete(
    path: &Path,
    candidates: &[String],
    depth: usize,
    max_len: usize,
    io: &mut Io,
) -> Result<i32, Exit> {
    let spec = load(path, io)?;
    let d = match &spec.dispatch {
        DispatchDescription::Fsa(d) => d.clone(),
        DispatchDescription::Sequence(s) => DispatchFsa::from_sequence(s),
    };
    let report = if candidates.is_empty() {
        let suggested = suggest_complete_set(&d, max_len).map_err(|e| library_error(io, e))?;
        for s in &suggested.sequences {
            let _ = writeln!(io.0, "candidate {s}");
        }
        check_complete(&d, &suggested.sequences, depth)
    } else {
        let mut seqs = Vec::new();
        for c in candidates {
            let s: DispatchingSequence = c
                .parse()
                .map_err(|e| fail(io, EXIT_USAGE, format_args!("{e}")))?;
            seqs.push(s);
        }
        check_complete(&d, &seqs, depth)
    };
    let _ = write!(io.0, "{report}");
    if report.is_complete() {
        let _ = writeln!(io.0);
        Ok(EXIT_OK)
    } else {
        Ok(EXIT_FOUND)
    }
}

fn stats(path: &Path, io: &mut Io) -> Result<i32, Exit> {
    let spec = load(path, io)?;
    let _ = writeln!(
        io.0,
        "resources={} peripherals={} activities={}",
        spec.resources.len(),
        spec.peripherals.len(),
        spec.activities.len()
    );
    for act in spec.activities.values() {
        let postsets =
            enumerate_postsets(act, DEFAULT_POSTSET_CAP).map_err(|e| library_error(io, e))?;
        let _ = writeln!(
            io.0,
            "activity {} nodes={} edges={} postsets={}",
            act.id,
            act.nodes.len(),
            act.edges.len(),
            postsets.len()
        );
    }
    match &spec.dispatch {
        DispatchDescription::Sequence(s) => {
            let _ = writeln!(io.0, "dispatch sequence {s}");
        }
        DispatchDescription::Fsa(d) => {
            let _ = writeln!(
                io.0,
                "dispatch fsa states={} transitions={} initial={}",
                d.states.len(),
                d.transitions.len(),
                d.initial.len()
            );
        }
    }
    Ok(EXIT_OK)
}
