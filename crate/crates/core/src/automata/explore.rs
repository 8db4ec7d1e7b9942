use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use super::Automaton;
use crate::error::{Error, Result};
use crate::model::EventLabel;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExploreOptions {
    /// Maximum number of transitions from an initial state; `None` explores
    /// until the state budget stops it.
    pub depth: Option<usize>,
    pub max_states: usize,
    /// Fail with `E_BUDGET` instead of truncating.
    pub strict: bool,
}

impl Default for ExploreOptions {
    fn default() -> Self {
        ExploreOptions {
            depth: Some(10),
            max_states: 100_000,
            strict: false,
        }
    }
}

impl ExploreOptions {
    pub fn depth(depth: usize) -> Self {
        ExploreOptions {
            depth: Some(depth),
            ..Default::default()
        }
    }

    pub fn full() -> Self {
        ExploreOptions {
            depth: None,
            ..Default::default()
        }
    }
}

/// A finite window onto an automaton.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ExploredGraph {
    pub states: Vec<String>,
    pub transitions: Vec<(usize, EventLabel, usize)>,
    pub initial: BTreeSet<usize>,
    /// States whose successors were not (fully) expanded.
    pub frontier: BTreeSet<usize>,
    /// Deepest level reached.
    pub depth: usize,
    /// Whether the state budget cut the exploration short.
    pub truncated: bool,
}

/// An explored graph together with the concrete states behind its keys.
#[derive(Debug, Clone)]
pub struct Exploration<S> {
    pub graph: ExploredGraph,
    pub states: Vec<S>,
    pub levels: Vec<usize>,
}

/// Breadth-first exploration; states are numbered in discovery order,
/// successors visited by event then target key.
pub fn explore<A: Automaton>(a: &A, opts: ExploreOptions) -> Result<Exploration<A::State>> {
    let mut index: HashMap<A::State, usize> = HashMap::new();
    let mut states: Vec<A::State> = Vec::new();
    let mut levels: Vec<usize> = Vec::new();
    let mut g = ExploredGraph::default();
    let mut queue = VecDeque::new();

    let mut init = a.initial_states();
    init.sort_by_cached_key(|s| a.state_key(s));
    init.dedup();
    for s in init {
        if index.contains_key(&s) {
            continue;
        }
        if states.len() >= opts.max_states {
            if opts.strict {
                return Err(Error::Budget(opts.max_states));
            }
            g.truncated = true;
            break;
        }
        let i = states.len();
        index.insert(s.clone(), i);
        g.initial.insert(i);
        states.push(s);
        levels.push(0);
        queue.push_back(i);
    }

    while let Some(i) = queue.pop_front() {
        let level = levels[i];
        if opts.depth.is_some_and(|d| level >= d) {
            g.frontier.insert(i);
            continue;
        }
        let mut succ = a.successors(&states[i]);
        succ.sort_by_cached_key(|(e, t)| (e.clone(), a.state_key(t)));
        succ.dedup();
        for (e, t) in succ {
            let j = match index.get(&t) {
                Some(&j) => j,
                None => {
                    if states.len() >= opts.max_states {
                        if opts.strict {
                            return Err(Error::Budget(opts.max_states));
                        }
                        g.truncated = true;
                        g.frontier.insert(i);
                        continue;
                    }
                    let j = states.len();
                    index.insert(t.clone(), j);
                    states.push(t);
                    levels.push(level + 1);
                    queue.push_back(j);
                    j
                }
            };
            g.transitions.push((i, e, j));
        }
    }

    g.depth = levels.iter().copied().max().unwrap_or(0);
    g.states = states.iter().map(|s| a.state_key(s)).collect();
    Ok(Exploration {
        graph: g,
        states,
        levels,
    })
}

pub fn bounded_explore<A: Automaton>(a: &A, opts: ExploreOptions) -> Result<ExploredGraph> {
    explore(a, opts).map(|x| x.graph)
}

/// Position of the first event no run can execute, or `None` if the whole
/// trace is accepted. An automaton without initial states rejects at 0.
pub fn first_rejection<A: Automaton>(a: &A, trace: &[EventLabel]) -> Option<usize> {
    let mut current: BTreeSet<A::State> = a.initial_states().into_iter().collect();
    if current.is_empty() {
        return Some(0);
    }
    for (i, e) in trace.iter().enumerate() {
        current = current.iter().flat_map(|s| a.step(s, e)).collect();
        if current.is_empty() {
            return Some(i);
        }
    }
    None
}

pub fn accepts_trace<A: Automaton>(a: &A, trace: &[EventLabel]) -> bool {
    first_rejection(a, trace).is_none()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LanguageVerdict {
    Equal,
    /// A shortest trace accepted by exactly one side.
    Differ {
        counterexample: Vec<EventLabel>,
    },
}

impl LanguageVerdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, LanguageVerdict::Equal)
    }
}

fn enabled<A: Automaton>(
    a: &A,
    set: &BTreeSet<A::State>,
) -> BTreeMap<EventLabel, BTreeSet<A::State>> {
    let mut out: BTreeMap<EventLabel, BTreeSet<A::State>> = BTreeMap::new();
    for s in set {
        for (e, t) in a.successors(s) {
            out.entry(e).or_default().insert(t);
        }
    }
    out
}

/// Compares the sets of traces of length at most `depth` by an on-the-fly
/// subset construction of both automata. Both languages are prefix-closed,
/// so they agree up to `depth` iff every reachable pair of state sets
/// enables the same events below that depth.
pub fn bounded_language_equal<A: Automaton, B: Automaton>(
    a: &A,
    b: &B,
    depth: usize,
    max_pairs: usize,
) -> Result<LanguageVerdict> {
    type Pair<A, B> = (
        BTreeSet<<A as Automaton>::State>,
        BTreeSet<<B as Automaton>::State>,
    );
    let start: Pair<A, B> = (
        a.initial_states().into_iter().collect(),
        b.initial_states().into_iter().collect(),
    );
    // The empty trace belongs to a language iff it has an initial state.
    if start.0.is_empty() != start.1.is_empty() {
        return Ok(LanguageVerdict::Differ {
            counterexample: Vec::new(),
        });
    }
    let mut seen: std::collections::HashSet<Pair<A, B>> = std::collections::HashSet::new();
    let mut queue: VecDeque<(Pair<A, B>, Vec<EventLabel>)> = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back((start, Vec::new()));
    while let Some(((sa, sb), path)) = queue.pop_front() {
        if path.len() >= depth {
            continue;
        }
        let ea = enabled(a, &sa);
        let eb = enabled(b, &sb);
        let only: BTreeSet<&EventLabel> = ea
            .keys()
            .filter(|e| !eb.contains_key(*e))
            .chain(eb.keys().filter(|e| !ea.contains_key(*e)))
            .collect();
        if let Some(e) = only.into_iter().next() {
            let mut counterexample = path;
            counterexample.push(e.clone());
            return Ok(LanguageVerdict::Differ { counterexample });
        }
        for (e, ta) in ea {
            let tb = eb[&e].clone();
            let pair = (ta, tb);
            if seen.contains(&pair) {
                continue;
            }
            if seen.len() >= max_pairs {
                return Err(Error::Budget(max_pairs));
            }
            seen.insert(pair.clone());
            let mut p = path.clone();
            p.push(e);
            queue.push_back((pair, p));
        }
    }
    Ok(LanguageVerdict::Equal)
}
