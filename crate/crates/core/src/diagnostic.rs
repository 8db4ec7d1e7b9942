//! Diagnostics shared by the parser and the structural validator.

use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DiagCode {
    Cycle,
    SelfConcurrency,
    UnclaimedAction,
    UnreleasedClaim,
    MultiClaim,
    ReleaseBeforeClaim,
    UnknownRef,
    BadTiming,
    BadProfile,
    MoveEndpoints,
    Syntax,
    Duplicate,
    UnknownKeyword,
}

impl DiagCode {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagCode::Cycle => "E_CYCLE",
            DiagCode::SelfConcurrency => "E_SELF_CONCURRENCY",
            DiagCode::UnclaimedAction => "E_UNCLAIMED_ACTION",
            DiagCode::UnreleasedClaim => "E_UNRELEASED_CLAIM",
            DiagCode::MultiClaim => "E_MULTI_CLAIM",
            DiagCode::ReleaseBeforeClaim => "E_RELEASE_BEFORE_CLAIM",
            DiagCode::UnknownRef => "E_UNKNOWN_REF",
            DiagCode::BadTiming => "E_BAD_TIMING",
            DiagCode::BadProfile => "E_BAD_PROFILE",
            DiagCode::MoveEndpoints => "E_MOVE_ENDPOINTS",
            DiagCode::Syntax => "P_SYNTAX",
            DiagCode::Duplicate => "P_DUPLICATE",
            DiagCode::UnknownKeyword => "P_UNKNOWN_KEYWORD",
        }
    }
}

impl fmt::Display for DiagCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A location in a source file; line and column are 1-based, length in chars.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SourceSpan {
    pub file: String,
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub code: DiagCode,
    /// Offending entity, e.g. `activity Act` or `node Act.n3`.
    pub entity: String,
    pub message: String,
    pub span: Option<SourceSpan>,
    /// Second location, e.g. the earlier declaration for a duplicate.
    pub related: Option<SourceSpan>,
}

impl Diagnostic {
    pub fn new(code: DiagCode, entity: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic {
            code,
            entity: entity.into(),
            message: message.into(),
            span: None,
            related: None,
        }
    }

    pub fn with_span(mut self, span: SourceSpan) -> Self {
        self.span = Some(span);
        self
    }

    /// Renders as `code:file:line:col: message`.
    pub fn render(&self, fallback_file: &str) -> String {
        match &self.span {
            Some(s) => format!(
                "{}:{}:{}:{}: {}",
                self.code, s.file, s.line, s.column, self.message
            ),
            None => format!("{}:{}:1:1: {}", self.code, fallback_file, self.message),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("<input>"))
    }
}

/// Entity key to declaration span, filled by the parser.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SourceMap {
    spans: BTreeMap<String, SourceSpan>,
}

impl SourceMap {
    pub fn insert(&mut self, entity: impl Into<String>, span: SourceSpan) {
        self.spans.entry(entity.into()).or_insert(span);
    }

    pub fn get(&self, entity: &str) -> Option<&SourceSpan> {
        self.spans.get(entity)
    }

    /// Span for an entity, falling back to its enclosing entity
    /// (`node Act.n3` falls back to `activity Act`).
    pub fn locate(&self, entity: &str) -> Option<&SourceSpan> {
        if let Some(s) = self.spans.get(entity) {
            return Some(s);
        }
        let (kind, name) = entity.split_once(' ')?;
        let (parent, _) = name.rsplit_once('.')?;
        let parent_kind = match kind {
            "node" => "activity",
            "action" => "peripheral",
            _ => return None,
        };
        self.spans.get(&format!("{parent_kind} {parent}"))
    }

    /// Attaches spans to diagnostics that lack one.
    pub fn attach(&self, diags: &mut [Diagnostic]) {
        for d in diags.iter_mut().filter(|d| d.span.is_none()) {
            d.span = self.locate(&d.entity).cloned();
        }
    }
}
