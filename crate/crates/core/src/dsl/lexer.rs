// Diagnostics carry spans and related locations; boxing them buys nothing here.
#![allow(clippy::result_large_err)]

use crate::diagnostic::{DiagCode, Diagnostic, SourceSpan};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Ident(String),
    Number(f64),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Colon,
    Semi,
    Dot,
    Eq,
    Arrow,
    Minus,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Number(n) => format!("number {n:?}"),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Pos {
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

pub(crate) fn span(file: &str, pos: Pos) -> SourceSpan {
    SourceSpan {
        file: file.to_string(),
        line: pos.line,
        column: pos.column,
        length: pos.length,
    }
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    text: &'a str,
    line: usize,
    column: usize,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().map(|&(_, c)| c)
    }

    fn peek2(&self) -> Option<char> {
        let mut it = self.chars.clone();
        it.next();
        it.next().map(|(_, c)| c)
    }

    fn offset(&mut self) -> usize {
        self.chars.peek().map_or(self.text.len(), |&(i, _)| i)
    }

    fn bump(&mut self) -> Option<char> {
        let (_, c) = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }
}

/// Splits `text` into tokens, ending with `Eof`.
pub(crate) fn lex(text: &str, file: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut cur = Cursor {
        chars: text.char_indices().peekable(),
        text,
        line: 1,
        column: 1,
    };
    let mut out = Vec::new();
    loop {
        while let Some(c) = cur.peek() {
            if c.is_whitespace() {
                cur.bump();
            } else if c == '/' && cur.peek2() == Some('/') {
                while cur.peek().is_some_and(|c| c != '\n') {
                    cur.bump();
                }
            } else {
                break;
            }
        }
        let (line, column) = (cur.line, cur.column);
        let start = cur.offset();
        let Some(c) = cur.peek() else {
            out.push(Token {
                tok: Tok::Eof,
                pos: Pos {
                    line,
                    column,
                    length: 0,
                },
            });
            return Ok(out);
        };
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            while cur
                .peek()
                .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
            {
                cur.bump();
            }
            Tok::Ident(text[start..cur.offset()].to_string())
        } else if c.is_ascii_digit()
            || (c == '.' && cur.peek2().is_some_and(|d| d.is_ascii_digit()))
        {
            lex_number(&mut cur, text, start).map_err(|msg| {
                let pos = Pos {
                    line,
                    column,
                    length: text[start..cur.offset()].chars().count().max(1),
                };
                Diagnostic::new(DiagCode::Syntax, "", msg).with_span(span(file, pos))
            })?
        } else {
            cur.bump();
            match c {
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                ':' => Tok::Colon,
                ';' => Tok::Semi,
                '.' => Tok::Dot,
                '=' => Tok::Eq,
                '-' if cur.peek() == Some('>') => {
                    cur.bump();
                    Tok::Arrow
                }
                '-' => Tok::Minus,
                other => {
                    let pos = Pos {
                        line,
                        column,
                        length: 1,
                    };
                    return Err(Diagnostic::new(
                        DiagCode::Syntax,
                        "",
                        format!("unexpected character {other:?}"),
                    )
                    .with_span(span(file, pos)));
                }
            }
        };
        let length = text[start..cur.offset()].chars().count();
        out.push(Token {
            tok,
            pos: Pos {
                line,
                column,
                length,
            },
        });
    }
}

fn lex_number(cur: &mut Cursor<'_>, text: &str, start: usize) -> Result<Tok, String> {
    let digits = |cur: &mut Cursor<'_>| {
        while cur.peek().is_some_and(|c| c.is_ascii_digit()) {
            cur.bump();
        }
    };
    digits(cur);
    if cur.peek() == Some('.') && cur.peek2().is_some_and(|c| c.is_ascii_digit()) {
        cur.bump();
        digits(cur);
    }
    if matches!(cur.peek(), Some('e' | 'E')) {
        cur.bump();
        if matches!(cur.peek(), Some('+' | '-')) {
            cur.bump();
        }
        if !cur.peek().is_some_and(|c| c.is_ascii_digit()) {
            return Err("malformed exponent".into());
        }
        digits(cur);
    }
    let s = &text[start..cur.offset()];
    s.parse::<f64>()
        .map(Tok::Number)
        .map_err(|_| format!("malformed number `{s}`"))
}
