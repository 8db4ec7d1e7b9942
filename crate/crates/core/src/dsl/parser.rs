// Diagnostics carry spans and related locations; boxing them buys nothing here.
#![allow(clippy::result_large_err)]

use std::collections::{BTreeMap, BTreeSet};

use super::lexer::{lex, span, Pos, Tok, Token};
use crate::diagnostic::{DiagCode, Diagnostic, SourceMap};
use crate::model::{
    Activity, ActivityId, DispatchDescription, Movement, NodeId, NodeKind, Peripheral,
    PeripheralKind, PositionId, Profile, Specification, TimingSpec,
};
use crate::sequence::{ActivitySequence, DispatchingSequence};
use crate::system::DispatchFsa;

/// A parsed specification together with declaration locations.
#[derive(Debug, Clone, PartialEq)]
pub struct Parsed {
    pub spec: Specification,
    pub source_map: SourceMap,
}

/// Parses specification text. Syntax errors stop the parse; duplicate
/// declarations are collected and reported together.
pub fn parse(text: &str, file: &str) -> Result<Parsed, Vec<Diagnostic>> {
    let tokens = lex(text, file).map_err(|d| vec![d])?;
    let mut p = Parser {
        tokens,
        at: 0,
        file,
        spec: Specification::default(),
        map: SourceMap::default(),
        seen: BTreeMap::new(),
        dupes: Vec::new(),
    };
    match p.file() {
        Ok(()) if p.dupes.is_empty() => Ok(Parsed {
            spec: p.spec,
            source_map: p.map,
        }),
        Ok(()) => Err(p.dupes),
        Err(d) => {
            let mut all = p.dupes;
            all.push(d);
            Err(all)
        }
    }
}

/// Like [`parse`], for raw bytes that may not be UTF-8.
pub fn parse_bytes(bytes: &[u8], file: &str) -> Result<Parsed, Vec<Diagnostic>> {
    match std::str::from_utf8(bytes) {
        Ok(text) => parse(text, file),
        Err(e) => {
            let valid = std::str::from_utf8(&bytes[..e.valid_up_to()]).unwrap_or_default();
            let line = valid.matches('\n').count() + 1;
            let column = valid.rsplit('\n').next().unwrap_or("").chars().count() + 1;
            let pos = Pos {
                line,
                column,
                length: 1,
            };
            Err(vec![Diagnostic::new(
                DiagCode::Syntax,
                "",
                "input is not valid UTF-8",
            )
            .with_span(span(file, pos))])
        }
    }
}

type PResult<T> = Result<T, Diagnostic>;

struct Parser<'f> {
    tokens: Vec<Token>,
    at: usize,
    file: &'f str,
    spec: Specification,
    map: SourceMap,
    /// First declaration position per entity key, for duplicate reports.
    seen: BTreeMap<String, Pos>,
    dupes: Vec<Diagnostic>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.tokens[self.at].tok
    }

    fn pos(&self) -> Pos {
        self.tokens[self.at].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.at].clone();
        if t.tok != Tok::Eof {
            self.at += 1;
        }
        t
    }

    fn error(&self, code: DiagCode, pos: Pos, msg: impl Into<String>) -> Diagnostic {
        Diagnostic::new(code, "", msg).with_span(span(self.file, pos))
    }

    fn unexpected(&self, wanted: &str) -> Diagnostic {
        let msg = format!("expected {wanted}, found {}", self.peek().describe());
        self.error(DiagCode::Syntax, self.pos(), msg)
    }

    fn expect(&mut self, tok: Tok) -> PResult<Pos> {
        if *self.peek() == tok {
            Ok(self.bump().pos)
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == w)
    }

    fn eat_word(&mut self, w: &str) -> bool {
        if self.is_word(w) {
            self.bump();
            true
        } else {
            false
        }
    }

    /// A keyword where a misspelled word gets `P_UNKNOWN_KEYWORD`.
    fn keyword(&mut self, w: &str) -> PResult<Pos> {
        match self.peek() {
            Tok::Ident(s) if s == w => Ok(self.bump().pos),
            Tok::Ident(s) => Err(self.error(
                DiagCode::UnknownKeyword,
                self.pos(),
                format!("unknown keyword `{s}`, expected `{w}`"),
            )),
            _ => Err(self.unexpected(&format!("`{w}`"))),
        }
    }

    /// One of several keywords, returned by name.
    fn choice(&mut self, options: &[&str]) -> PResult<(String, Pos)> {
        let listed = options
            .iter()
            .map(|o| format!("`{o}`"))
            .collect::<Vec<_>>()
            .join(" or ");
        match self.peek().clone() {
            Tok::Ident(s) if options.contains(&s.as_str()) => Ok((s, self.bump().pos)),
            Tok::Ident(s) => Err(self.error(
                DiagCode::UnknownKeyword,
                self.pos(),
                format!("unknown keyword `{s}`, expected {listed}"),
            )),
            _ => Err(self.unexpected(&listed)),
        }
    }

    fn ident(&mut self, what: &str) -> PResult<(String, Pos)> {
        match self.peek().clone() {
            Tok::Ident(s) => Ok((s, self.bump().pos)),
            _ => Err(self.unexpected(what)),
        }
    }

    fn number(&mut self) -> PResult<f64> {
        let negative = *self.peek() == Tok::Minus;
        if negative {
            self.bump();
        }
        match self.peek() {
            Tok::Number(n) => {
                let n = *n;
                self.bump();
                Ok(if negative { -n } else { n })
            }
            _ => Err(self.unexpected("a number")),
        }
    }

    /// Registers a declaration; returns false (after recording a
    /// `P_DUPLICATE`) if the key was declared before.
    fn declare(&mut self, key: String, pos: Pos) -> bool {
        if let Some(first) = self.seen.get(&key) {
            let mut d = self.error(DiagCode::Duplicate, pos, format!("duplicate {key}"));
            d.entity = key;
            d.related = Some(span(self.file, *first));
            self.dupes.push(d);
            return false;
        }
        self.map.insert(key.clone(), span(self.file, pos));
        self.seen.insert(key, pos);
        true
    }

    fn file(&mut self) -> PResult<()> {
        let mut dispatch = false;
        loop {
            if *self.peek() == Tok::Eof {
                break;
            }
            let (kw, pos) = self.choice(&["resource", "activity", "dispatch"])?;
            match kw.as_str() {
                "resource" => self.resource()?,
                "activity" => self.activity()?,
                _ => {
                    let d = self.dispatch()?;
                    if self.declare("dispatch".into(), pos) {
                        self.spec.dispatch = d;
                    }
                    dispatch = true;
                }
            }
        }
        if !dispatch {
            return Err(self.error(DiagCode::Syntax, self.pos(), "missing `dispatch` section"));
        }
        Ok(())
    }

    fn resource(&mut self) -> PResult<()> {
        let (r, pos) = self.ident("a resource name")?;
        let fresh = self.declare(format!("resource {r}"), pos);
        if fresh {
            self.spec.add_resource(r.as_str());
        }
        self.expect(Tok::LBrace)?;
        while *self.peek() != Tok::RBrace {
            self.keyword("peripheral")?;
            let p = self.peripheral()?;
            if let Some(p) = p {
                if fresh {
                    self.spec.add_peripheral(r.as_str(), p);
                }
            }
        }
        self.expect(Tok::RBrace)?;
        Ok(())
    }

    fn peripheral(&mut self) -> PResult<Option<Peripheral>> {
        let (id, pos) = self.ident("a peripheral name")?;
        let fresh = self.declare(format!("peripheral {id}"), pos);
        let (kind, _) = self.choice(&["unmovable", "movable"])?;
        self.expect(Tok::LBrace)?;
        let kind = if kind == "unmovable" {
            let mut actions = BTreeMap::new();
            while *self.peek() != Tok::RBrace {
                self.keyword("action")?;
                let (a, apos) = self.ident("an action name")?;
                self.keyword("time")?;
                let t = self.timing()?;
                if self.declare(format!("action {id}.{a}"), apos) {
                    actions.insert(a.into(), t);
                }
            }
            PeripheralKind::Unmovable { actions }
        } else {
            let mut positions = BTreeSet::new();
            let mut moves = BTreeMap::new();
            if self.eat_word("positions") {
                self.expect(Tok::LBrace)?;
                if *self.peek() != Tok::RBrace {
                    loop {
                        let (x, xpos) = self.ident("a position name")?;
                        if self.declare(format!("position {id}.{x}"), xpos) {
                            positions.insert(PositionId::new(x));
                        }
                        if *self.peek() != Tok::Comma {
                            break;
                        }
                        self.bump();
                    }
                }
                self.expect(Tok::RBrace)?;
            }
            while *self.peek() != Tok::RBrace {
                self.keyword("move")?;
                let (m, mpos) = self.ident("a movement name")?;
                self.keyword("from")?;
                let (source, _) = self.ident("a position")?;
                self.keyword("to")?;
                let (target, _) = self.ident("a position")?;
                self.keyword("profile")?;
                let profile = self.profile()?;
                let mut distance = Movement::DEFAULT_DISTANCE;
                let mut settling = 0.0;
                if self.eat_word("distance") {
                    distance = self.number()?;
                }
                if self.eat_word("settling") {
                    settling = self.number()?;
                }
                if self.declare(format!("action {id}.{m}"), mpos) {
                    moves.insert(
                        m.as_str().into(),
                        Movement {
                            id: m.into(),
                            source: source.into(),
                            target: target.into(),
                            profile,
                            settling,
                            distance,
                        },
                    );
                }
            }
            PeripheralKind::Movable { positions, moves }
        };
        self.expect(Tok::RBrace)?;
        Ok(fresh.then(|| Peripheral {
            id: id.into(),
            kind,
        }))
    }

    /// `(k1=v1, k2=v2, ...)` with exactly the given keys, in any order.
    fn named_args(&mut self, keys: &[&str]) -> PResult<Vec<f64>> {
        self.expect(Tok::LParen)?;
        let mut values: Vec<Option<f64>> = vec![None; keys.len()];
        loop {
            let (k, kpos) = self.ident("a parameter name")?;
            let Some(i) = keys.iter().position(|x| *x == k) else {
                return Err(self.error(
                    DiagCode::UnknownKeyword,
                    kpos,
                    format!("unknown parameter `{k}`"),
                ));
            };
            self.expect(Tok::Eq)?;
            let v = self.number()?;
            if values[i].replace(v).is_some() {
                return Err(self.error(
                    DiagCode::Duplicate,
                    kpos,
                    format!("parameter `{k}` given twice"),
                ));
            }
            if *self.peek() != Tok::Comma {
                break;
            }
            self.bump();
        }
        let close = self.expect(Tok::RParen)?;
        keys.iter()
            .zip(values)
            .map(|(k, v)| {
                v.ok_or_else(|| {
                    self.error(DiagCode::Syntax, close, format!("missing parameter `{k}`"))
                })
            })
            .collect()
    }

    fn timing(&mut self) -> PResult<TimingSpec> {
        if matches!(self.peek(), Tok::Number(_) | Tok::Minus) {
            return Ok(TimingSpec::Deterministic { t: self.number()? });
        }
        let (kind, _) = self.choice(&["normal", "triangular", "pert"])?;
        Ok(match kind.as_str() {
            "normal" => {
                let v = self.named_args(&["mu", "sigma"])?;
                TimingSpec::Normal {
                    mu: v[0],
                    sigma: v[1],
                }
            }
            "triangular" => {
                let v = self.named_args(&["a", "m", "b"])?;
                TimingSpec::Triangular {
                    a: v[0],
                    m: v[1],
                    b: v[2],
                }
            }
            _ => {
                let v = self.named_args(&["a", "m", "b"])?;
                TimingSpec::Pert {
                    a: v[0],
                    m: v[1],
                    b: v[2],
                }
            }
        })
    }

    fn profile(&mut self) -> PResult<Profile> {
        let (kind, _) = self.choice(&["second", "third"])?;
        Ok(if kind == "second" {
            let v = self.named_args(&["v", "a"])?;
            Profile::SecondOrder {
                vmax: v[0],
                amax: v[1],
            }
        } else {
            let v = self.named_args(&["v", "a", "j"])?;
            Profile::ThirdOrder {
                vmax: v[0],
                amax: v[1],
                jmax: v[2],
            }
        })
    }

    fn activity(&mut self) -> PResult<()> {
        let (id, pos) = self.ident("an activity name")?;
        let fresh = self.declare(format!("activity {id}"), pos);
        let mut act = Activity::new(id.as_str());
        self.expect(Tok::LBrace)?;
        self.keyword("nodes")?;
        self.expect(Tok::LBrace)?;
        while *self.peek() != Tok::RBrace {
            let (n, npos) = self.ident("a node name")?;
            self.expect(Tok::Colon)?;
            let kind = self.node_kind()?;
            if self.declare(format!("node {id}.{n}"), npos) {
                act.nodes.insert(NodeId::new(n), kind);
            }
        }
        self.expect(Tok::RBrace)?;
        if self.eat_word("flow") {
            self.expect(Tok::LBrace)?;
            while *self.peek() != Tok::RBrace {
                let (mut from, _) = self.ident("a node name")?;
                self.expect(Tok::Arrow)?;
                loop {
                    let (to, _) = self.ident("a node name")?;
                    act.edges.insert((from.as_str().into(), to.as_str().into()));
                    from = to;
                    if *self.peek() != Tok::Arrow {
                        break;
                    }
                    self.bump();
                }
            }
            self.expect(Tok::RBrace)?;
        }
        self.expect(Tok::RBrace)?;
        if fresh {
            self.spec.add_activity(act);
        }
        Ok(())
    }

    fn node_kind(&mut self) -> PResult<NodeKind> {
        let (first, _) = self.ident("`claim`, `release` or an action `peripheral.action`")?;
        if *self.peek() == Tok::Dot {
            self.bump();
            let (action, _) = self.ident("an action name")?;
            return Ok(NodeKind::Action {
                action: action.into(),
                peripheral: first.into(),
            });
        }
        let (r, _) = match first.as_str() {
            "claim" | "release" => self.ident("a resource name")?,
            other => {
                let pos = self.tokens[self.at - 1].pos;
                return Err(self.error(
                    DiagCode::UnknownKeyword,
                    pos,
                    format!("unknown node kind `{other}`, expected `claim`, `release` or `peripheral.action`"),
                ));
            }
        };
        Ok(if first == "claim" {
            NodeKind::Claim { resource: r.into() }
        } else {
            NodeKind::Release { resource: r.into() }
        })
    }

    fn dispatch(&mut self) -> PResult<DispatchDescription> {
        let (kind, _) = self.choice(&["sequence", "fsa"])?;
        self.expect(Tok::LBrace)?;
        let d = if kind == "sequence" {
            DispatchDescription::Sequence(self.sequence()?)
        } else {
            DispatchDescription::Fsa(self.fsa()?)
        };
        self.expect(Tok::RBrace)?;
        Ok(d)
    }

    fn sequence(&mut self) -> PResult<DispatchingSequence> {
        let mut transient = Vec::new();
        let mut periodic = Vec::new();
        if *self.peek() == Tok::RBrace {
            return Ok(DispatchingSequence::default());
        }
        loop {
            if self.eat_word("repeat") {
                self.expect(Tok::LBrace)?;
                loop {
                    periodic.push(ActivityId::new(self.ident("an activity name")?.0));
                    if *self.peek() != Tok::Semi {
                        break;
                    }
                    self.bump();
                }
                self.expect(Tok::RBrace)?;
                break;
            }
            transient.push(ActivityId::new(
                self.ident("an activity name or `repeat`")?.0,
            ));
            if *self.peek() != Tok::Semi {
                break;
            }
            self.bump();
        }
        Ok(DispatchingSequence::new(
            ActivitySequence(transient),
            ActivitySequence(periodic),
        ))
    }

    fn fsa(&mut self) -> PResult<DispatchFsa> {
        let mut d = DispatchFsa::new();
        self.keyword("states")?;
        self.expect(Tok::LBrace)?;
        while *self.peek() != Tok::RBrace {
            let (s, pos) = self.ident("a state name")?;
            if self.declare(format!("state {s}"), pos) {
                d.state(&s);
            }
            if *self.peek() != Tok::Comma {
                break;
            }
            self.bump();
        }
        self.expect(Tok::RBrace)?;
        if self.eat_word("initial") {
            loop {
                let i = self.known_state(&d)?;
                d.initial.insert(i);
                if *self.peek() != Tok::Comma {
                    break;
                }
                self.bump();
            }
        }
        while *self.peek() != Tok::RBrace {
            self.keyword("edge")?;
            let from = self.known_state(&d)?;
            self.expect(Tok::Minus)?;
            let (a, _) = self.ident("an activity name")?;
            self.expect(Tok::Arrow)?;
            let to = self.known_state(&d)?;
            d.transitions.push((from, a.into(), to));
        }
        Ok(d)
    }

    fn known_state(&mut self, d: &DispatchFsa) -> PResult<usize> {
        let (s, pos) = self.ident("a state name")?;
        d.state_index(&s).ok_or_else(|| {
            let mut e = self.error(DiagCode::UnknownRef, pos, format!("undeclared state `{s}`"));
            e.entity = format!("state {s}");
            e
        })
    }
}
