//! Activity sequences, dispatching sequences `ω1;(ω2)^∞`, per-resource
//! reduction and instance numbering.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{is_ident, ActivityId, ActivityInstance, ResourceId, Specification};

/// A finite, possibly empty, ordered list of activities.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActivitySequence(pub Vec<ActivityId>);

impl ActivitySequence {
    pub fn empty() -> Self {
        ActivitySequence(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ActivityId> {
        self.0.iter()
    }

    pub fn concat(&self, other: &ActivitySequence) -> ActivitySequence {
        let mut items = self.0.clone();
        items.extend(other.0.iter().cloned());
        ActivitySequence(items)
    }

    /// `n`-fold self-concatenation; `power(0)` is the empty sequence.
    pub fn power(&self, n: i64) -> Result<ActivitySequence> {
        if n < 0 {
            return Err(Error::NegativePower(n));
        }
        let mut items = Vec::with_capacity(self.len() * n as usize);
        for _ in 0..n {
            items.extend(self.0.iter().cloned());
        }
        Ok(ActivitySequence(items))
    }

    /// The 1-based subsequence `ω(1:i)`.
    pub fn prefix(&self, i: usize) -> ActivitySequence {
        ActivitySequence(self.0[..i.min(self.len())].to_vec())
    }

    pub fn prefixes(&self) -> BTreeSet<ActivitySequence> {
        (0..=self.len()).map(|i| self.prefix(i)).collect()
    }

    pub fn is_prefix_of(&self, other: &ActivitySequence) -> bool {
        other.0.starts_with(&self.0)
    }

    /// Keeps only the activities that use resource `r`, in order.
    pub fn reduce_for_resource(&self, r: &ResourceId, spec: &Specification) -> Result<Self> {
        let mut out = Vec::new();
        for a in &self.0 {
            let act = spec
                .activity(a)
                .ok_or_else(|| Error::unknown("activity", a))?;
            if act.uses_resource(r) {
                out.push(a.clone());
            }
        }
        Ok(ActivitySequence(out))
    }

    /// Index the next occurrence of `act` receives after `self`:
    /// one plus the number of times it already appears.
    pub fn instance_index(&self, act: &ActivityId) -> u32 {
        1 + self.0.iter().filter(|a| *a == act).count() as u32
    }

    /// Numbers each item with its occurrence count so far.
    pub fn instances(&self) -> Vec<ActivityInstance> {
        let mut seen: std::collections::BTreeMap<&ActivityId, u32> = Default::default();
        self.0
            .iter()
            .map(|a| {
                let c = seen.entry(a).or_insert(0);
                *c += 1;
                ActivityInstance::new(a.clone(), *c)
            })
            .collect()
    }

    pub fn count(&self, act: &ActivityId) -> usize {
        self.0.iter().filter(|a| *a == act).count()
    }
}

impl From<Vec<&str>> for ActivitySequence {
    fn from(v: Vec<&str>) -> Self {
        ActivitySequence(v.into_iter().map(ActivityId::new).collect())
    }
}

impl FromIterator<ActivityId> for ActivitySequence {
    fn from_iter<T: IntoIterator<Item = ActivityId>>(iter: T) -> Self {
        ActivitySequence(iter.into_iter().collect())
    }
}

impl fmt::Display for ActivitySequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("ε");
        }
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ; ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// `transient ; (periodic)^∞`. An empty periodic part makes the sequence finite.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DispatchingSequence {
    pub transient: ActivitySequence,
    pub periodic: ActivitySequence,
}

/// One step of a dispatching sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeqItem {
    Item(ActivityInstance),
    End,
}

impl DispatchingSequence {
    pub fn new(
        transient: impl Into<ActivitySequence>,
        periodic: impl Into<ActivitySequence>,
    ) -> Self {
        DispatchingSequence {
            transient: transient.into(),
            periodic: periodic.into(),
        }
    }

    pub fn finite(transient: impl Into<ActivitySequence>) -> Self {
        Self::new(transient, ActivitySequence::empty())
    }

    pub fn is_infinite(&self) -> bool {
        !self.periodic.is_empty()
    }

    /// All activities occurring anywhere in the sequence.
    pub fn activities(&self) -> BTreeSet<ActivityId> {
        self.transient
            .iter()
            .chain(self.periodic.iter())
            .cloned()
            .collect()
    }

    /// The `k`-th activity (1-based), without instance numbering.
    pub fn activity_at(&self, k: usize) -> Option<&ActivityId> {
        if k == 0 {
            return None;
        }
        let t = self.transient.len();
        if k <= t {
            return self.transient.0.get(k - 1);
        }
        if self.periodic.is_empty() {
            return None;
        }
        let p = self.periodic.len();
        self.periodic.0.get((k - t - 1) % p)
    }

    /// Number of occurrences of `act` among the first `k` items.
    pub fn occurrences_before(&self, act: &ActivityId, k: usize) -> usize {
        let t = self.transient.len();
        if k <= t {
            return self.transient.prefix(k).count(act);
        }
        let mut n = self.transient.count(act);
        if self.periodic.is_empty() {
            return n;
        }
        let rest = k - t;
        let p = self.periodic.len();
        n += (rest / p) * self.periodic.count(act);
        n += self.periodic.prefix(rest % p).count(act);
        n
    }

    /// The `k`-th dispatched activity with its global instance index.
    pub fn item(&self, k: i64) -> Result<SeqItem> {
        if k < 1 {
            return Err(Error::Index(k));
        }
        let k = k as usize;
        Ok(match self.activity_at(k) {
            Some(a) => SeqItem::Item(ActivityInstance::new(
                a.clone(),
                self.occurrences_before(a, k) as u32,
            )),
            None => SeqItem::End,
        })
    }

    /// The length-`n` prefix, or `None` past the end of a finite sequence.
    pub fn prefix(&self, n: usize) -> Option<ActivitySequence> {
        if !self.is_infinite() && n > self.transient.len() {
            return None;
        }
        Some(
            (1..=n)
                .map(|k| self.activity_at(k).unwrap().clone())
                .collect(),
        )
    }

    /// Lazily enumerates every prefix in nondecreasing length.
    pub fn prefix_stream(&self) -> PrefixStream<'_> {
        PrefixStream { seq: self, next: 0 }
    }

    pub fn reduce_for_resource(&self, r: &ResourceId, spec: &Specification) -> Result<Self> {
        Ok(DispatchingSequence {
            transient: self.transient.reduce_for_resource(r, spec)?,
            periodic: self.periodic.reduce_for_resource(r, spec)?,
        })
    }

    /// Whether two lasso presentations denote the same word.
    pub fn same_word(&self, other: &DispatchingSequence) -> bool {
        match (self.is_infinite(), other.is_infinite()) {
            (false, false) => self.transient == other.transient,
            (true, true) => {
                let n = self.transient.len().max(other.transient.len())
                    + self.periodic.len() * other.periodic.len();
                (1..=n).all(|k| self.activity_at(k) == other.activity_at(k))
            }
            _ => false,
        }
    }
}

impl fmt::Display for DispatchingSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.transient.is_empty(), self.periodic.is_empty()) {
            (true, true) => f.write_str("ε"),
            (false, true) => write!(f, "{}", self.transient),
            (true, false) => write!(f, "({})^w", self.periodic),
            (false, false) => write!(f, "{} ; ({})^w", self.transient, self.periodic),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed dispatching sequence `{0}`")]
pub struct SequenceParseError(pub String);

impl FromStr for DispatchingSequence {
    type Err = SequenceParseError;

    /// Parses the textual rendering, e.g. `ActA ; (ActB ; ActC)^w`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || SequenceParseError(s.to_string());
        let text = s.trim();
        let Some(open) = text.find('(') else {
            return parse_items(text).map(Self::finite).ok_or_else(err);
        };
        let body = &text[open + 1..];
        let body = body
            .strip_suffix(")^w")
            .or_else(|| body.strip_suffix(")^∞"))
            .ok_or_else(err)?;
        let head = text[..open].trim();
        let head = if head.is_empty() {
            head
        } else {
            head.strip_suffix(';').ok_or_else(err)?
        };
        let periodic = parse_items(body)
            .filter(|p| !p.is_empty())
            .ok_or_else(err)?;
        let transient = parse_items(head).ok_or_else(err)?;
        Ok(DispatchingSequence {
            transient,
            periodic,
        })
    }
}

fn parse_items(s: &str) -> Option<ActivitySequence> {
    let s = s.trim();
    if s.is_empty() || s == "ε" {
        return Some(ActivitySequence::empty());
    }
    s.split(';')
        .map(|item| {
            let item = item.trim();
            is_ident(item).then(|| ActivityId::new(item))
        })
        .collect()
}

/// Iterator over the prefixes of a dispatching sequence, shortest first.
/// Infinite iff the periodic part is nonempty.
pub struct PrefixStream<'a> {
    seq: &'a DispatchingSequence,
    next: usize,
}

impl Iterator for PrefixStream<'_> {
    type Item = ActivitySequence;

    fn next(&mut self) -> Option<ActivitySequence> {
        let p = self.seq.prefix(self.next)?;
        self.next += 1;
        Some(p)
    }
}
