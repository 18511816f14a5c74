use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Punct(&'static str),
    Newline,
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

const PUNCT: [&str; 14] = ["->", ":=", "~>", ":", ";", ",", "(", ")", "{", "}", "!", "&", "|", "~"];

pub(crate) fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '.' | '\'')
}

/// Splits `text` into identifiers and punctuation; `#` starts a comment.
pub(crate) fn lex(text: &str, newlines: bool) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let column = i + 1;
            if c.is_whitespace() {
                i += 1;
            } else if c == '#' {
                break;
            } else if is_ident_char(c) {
                let start = i;
                while i < chars.len() && is_ident_char(chars[i]) {
                    i += 1;
                }
                out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), line: ln + 1, column });
            } else {
                let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
                let p = PUNCT.iter().find(|p| rest.starts_with(**p)).ok_or_else(|| Error::Syntax {
                    line: ln + 1,
                    column,
                    message: format!("unexpected character `{c}`"),
                })?;
                i += p.len();
                out.push(Token { tok: Tok::Punct(p), line: ln + 1, column });
            }
        }
        if newlines {
            out.push(Token { tok: Tok::Newline, line: ln + 1, column: chars.len() + 1 });
        }
    }
    Ok(out)
}

pub(crate) struct Cursor {
    toks: Vec<Token>,
    pos: usize,
    end: (usize, usize),
}

impl Cursor {
    pub fn new(toks: Vec<Token>, text: &str) -> Self {
        let end = (text.lines().count().max(1), text.lines().last().map_or(1, |l| l.chars().count() + 1));
        Cursor { toks, pos: 0, end }
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn error(&self, message: impl Into<String>) -> Error {
        let (line, column) = self.toks.get(self.pos).map_or(self.end, |t| (t.line, t.column));
        Error::Syntax { line, column, message: message.into() }
    }

    pub fn eat(&mut self, p: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Punct(q)) if *q == p) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, p: &str) -> Result<()> {
        if self.eat(p) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{p}`, found {}", self.describe())))
        }
    }

    pub fn eat_newlines(&mut self) {
        while matches!(self.peek(), Some(Tok::Newline)) {
            self.pos += 1;
        }
    }

    pub fn ident(&mut self, what: &str) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.error(format!("expected {what}, found {}", self.describe()))),
        }
    }

    pub fn keyword(&mut self, kw: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Ident(s)) if s == kw) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn describe(&self) -> String {
        match self.peek() {
            None => "end of input".to_owned(),
            Some(Tok::Newline) => "end of line".to_owned(),
            Some(Tok::Ident(s)) => format!("`{s}`"),
            Some(Tok::Punct(p)) => format!("`{p}`"),
        }
    }
}
