use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::model::ActivityId;
use crate::sequence::{ActivitySequence, DispatchingSequence};

/// Finite automaton over activity names; its (prefix-closed) language is
/// the set of allowed dispatching orders.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DispatchFsa {
    pub states: Vec<String>,
    pub transitions: Vec<(usize, ActivityId, usize)>,
    pub initial: BTreeSet<usize>,
}

type StateSet = BTreeSet<usize>;

impl DispatchFsa {
    pub fn new() -> Self {
        Self::default()
    }

    /// Index of the named state, adding it if needed.
    pub fn state(&mut self, name: &str) -> usize {
        match self.states.iter().position(|s| s == name) {
            Some(i) => i,
            None => {
                self.states.push(name.to_string());
                self.states.len() - 1
            }
        }
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn initial(mut self, name: &str) -> Self {
        let i = self.state(name);
        self.initial.insert(i);
        self
    }

    pub fn edge(mut self, from: &str, act: &str, to: &str) -> Self {
        let (f, t) = (self.state(from), self.state(to));
        self.transitions.push((f, ActivityId::new(act), t));
        self
    }

    /// The lasso automaton whose language is the prefix set of `seq`.
    pub fn from_sequence(seq: &DispatchingSequence) -> Self {
        let t = seq.transient.len();
        let p = seq.periodic.len();
        let mut d = DispatchFsa::new().initial("q0");
        for k in 1..=t + p {
            let target = if p > 0 && k == t + p { t } else { k };
            let from = format!("q{}", k - 1);
            let to = format!("q{target}");
            d = d.edge(&from, seq.activity_at(k).unwrap().as_str(), &to);
        }
        d
    }

    pub fn reachable_states(&self) -> StateSet {
        let mut seen = self.initial.clone();
        let mut stack: Vec<usize> = seen.iter().copied().collect();
        while let Some(q) = stack.pop() {
            for (f, _, t) in &self.transitions {
                if *f == q && seen.insert(*t) {
                    stack.push(*t);
                }
            }
        }
        seen
    }

    /// Labels of transitions leaving reachable states.
    pub fn reachable_labels(&self) -> BTreeSet<ActivityId> {
        let reach = self.reachable_states();
        self.transitions
            .iter()
            .filter(|(f, _, _)| reach.contains(f))
            .map(|(_, a, _)| a.clone())
            .collect()
    }

    pub fn post(&self, set: &StateSet, a: &ActivityId) -> StateSet {
        self.transitions
            .iter()
            .filter(|(f, l, _)| l == a && set.contains(f))
            .map(|(_, _, t)| *t)
            .collect()
    }

    /// Successor sets of `set`, grouped by label.
    pub fn moves(&self, set: &StateSet) -> BTreeMap<ActivityId, StateSet> {
        let mut out: BTreeMap<ActivityId, StateSet> = BTreeMap::new();
        for (f, a, t) in &self.transitions {
            if set.contains(f) {
                out.entry(a.clone()).or_default().insert(*t);
            }
        }
        out
    }

    /// States reached by reading `w` from the initial states.
    pub fn run(&self, w: &ActivitySequence) -> StateSet {
        w.iter()
            .fold(self.initial.clone(), |set, a| self.post(&set, a))
    }

    pub fn accepts(&self, w: &ActivitySequence) -> bool {
        !self.run(w).is_empty()
    }

    /// Every word of length at most `depth`, shortest first.
    pub fn words_up_to(&self, depth: usize) -> Vec<ActivitySequence> {
        self.words_with_runs(depth)
            .into_iter()
            .map(|(w, _)| w)
            .collect()
    }

    fn words_with_runs(&self, depth: usize) -> Vec<(ActivitySequence, StateSet)> {
        let mut out = Vec::new();
        if self.initial.is_empty() {
            return out;
        }
        let mut queue = VecDeque::from([(ActivitySequence::empty(), self.initial.clone())]);
        while let Some((w, set)) = queue.pop_front() {
            if w.len() < depth {
                for (a, next) in self.moves(&set) {
                    let mut v = w.clone();
                    v.0.push(a);
                    queue.push_back((v, next));
                }
            }
            out.push((w, set));
        }
        out
    }
}

impl fmt::Display for DispatchFsa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let init: Vec<&str> = self
            .initial
            .iter()
            .map(|&i| self.states[i].as_str())
            .collect();
        write!(
            f,
            "states {{{}}} initial {}",
            self.states.join(", "),
            init.join(", ")
        )?;
        for (s, a, t) in &self.transitions {
            write!(f, " edge {} -{}-> {}", self.states[*s], a, self.states[*t])?;
        }
        Ok(())
    }
}

/// Outcome of a bounded completeness check of candidate sequences
/// against a dispatch automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompletenessReport {
    pub depth: usize,
    /// Minimal words of the automaton that are no prefix of any candidate.
    pub uncovered: Vec<ActivitySequence>,
    /// Candidates with their shortest prefix the automaton rejects.
    pub outside: Vec<(DispatchingSequence, ActivitySequence)>,
}

impl CompletenessReport {
    pub fn is_complete(&self) -> bool {
        self.uncovered.is_empty() && self.outside.is_empty()
    }
}

impl fmt::Display for CompletenessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_complete() {
            return write!(f, "complete up to depth {}", self.depth);
        }
        writeln!(f, "incomplete up to depth {}", self.depth)?;
        for w in &self.uncovered {
            writeln!(f, "  word not covered by any sequence: {w}")?;
        }
        for (seq, w) in &self.outside {
            writeln!(f, "  prefix of {seq} not allowed: {w}")?;
        }
        Ok(())
    }
}

/// Checks, up to length `depth`, that the words of `d` are exactly the
/// prefixes of the candidate sequences.
pub fn check_complete(
    d: &DispatchFsa,
    candidates: &[DispatchingSequence],
    depth: usize,
) -> CompletenessReport {
    let covered = |w: &ActivitySequence| {
        candidates
            .iter()
            .any(|c| c.prefix(w.len()).is_some_and(|p| p == *w))
    };

    let mut uncovered = Vec::new();
    if !d.initial.is_empty() {
        let mut queue = VecDeque::from([(ActivitySequence::empty(), d.initial.clone())]);
        while let Some((w, set)) = queue.pop_front() {
            if !covered(&w) {
                uncovered.push(w);
                continue;
            }
            if w.len() < depth {
                for (a, next) in d.moves(&set) {
                    let mut v = w.clone();
                    v.0.push(a);
                    queue.push_back((v, next));
                }
            }
        }
    }

    let mut outside = Vec::new();
    for c in candidates {
        let mut set = d.initial.clone();
        for n in 0..=depth {
            if n > 0 {
                match c.activity_at(n) {
                    Some(a) => set = d.post(&set, a),
                    None => break,
                }
            }
            if set.is_empty() {
                outside.push((c.clone(), c.prefix(n).unwrap()));
                break;
            }
        }
    }

    CompletenessReport {
        depth,
        uncovered,
        outside,
    }
}

/// Candidate complete set for `d` with the report of its bounded check.
#[derive(Debug, Clone)]
pub struct SuggestedSet {
    pub sequences: Vec<DispatchingSequence>,
    pub report: CompletenessReport,
}

/// Maximum number of lassos [`suggest_complete_set`] examines.
pub const SUGGEST_BUDGET: usize = 200_000;

/// Enumerates lassos `w1 ; (w2)^w` with `|w1|, |w2| <= max_len` that `d`
/// can read forever, plus finite words ending in a deadlock, and checks
/// the result for completeness at depth `2 * max_len`.
pub fn suggest_complete_set(d: &DispatchFsa, max_len: usize) -> Result<SuggestedSet> {
    let max_len = max_len.max(1);
    let prefixes = d.words_with_runs(max_len);
    let mut examined = 0usize;
    let mut found: Vec<DispatchingSequence> = Vec::new();
    let push = |s: DispatchingSequence, found: &mut Vec<DispatchingSequence>| {
        if !found.iter().any(|f| f.same_word(&s)) {
            found.push(s);
        }
    };

    for (w1, set) in &prefixes {
        let deadlocked = set
            .iter()
            .any(|q| d.transitions.iter().all(|(f, _, _)| f != q));
        if deadlocked {
            push(DispatchingSequence::finite(w1.clone()), &mut found);
        }
        let cycles = words_from(d, set, max_len);
        for w2 in cycles.iter().filter(|w| !w.is_empty()) {
            examined += 1;
            if examined > SUGGEST_BUDGET {
                return Err(Error::Budget(SUGGEST_BUDGET));
            }
            if reads_forever(d, set, w2) {
                push(DispatchingSequence::new(w1.clone(), w2.clone()), &mut found);
            }
        }
    }

    // Finite words that are prefixes of other candidates add nothing.
    let sequences: Vec<DispatchingSequence> = found
        .iter()
        .filter(|s| {
            s.is_infinite()
                || !found.iter().any(|o| {
                    !o.same_word(s)
                        && o.prefix(s.transient.len())
                            .is_some_and(|p| p == s.transient)
                })
        })
        .cloned()
        .collect();
    let report = check_complete(d, &sequences, 2 * max_len);
    Ok(SuggestedSet { sequences, report })
}

fn words_from(d: &DispatchFsa, start: &StateSet, max_len: usize) -> Vec<ActivitySequence> {
    let mut out = Vec::new();
    let mut queue = VecDeque::from([(ActivitySequence::empty(), start.clone())]);
    while let Some((w, set)) = queue.pop_front() {
        if w.len() < max_len {
            for (a, next) in d.moves(&set) {
                let mut v = w.clone();
                v.0.push(a);
                queue.push_back((v, next));
            }
        }
        out.push(w);
    }
    out
}

/// Whether some run of `d` from `start` reads `w` infinitely often. The
/// state sets after each round form an eventually periodic sequence, and a
/// run exists iff none of them is empty.
fn reads_forever(d: &DispatchFsa, start: &StateSet, w: &ActivitySequence) -> bool {
    let mut seen = BTreeSet::new();
    let mut set = start.clone();
    while seen.insert(set.clone()) {
        set = w.iter().fold(set, |s, a| d.post(&s, a));
        if set.is_empty() {
            return false;
        }
    }
    true
}
