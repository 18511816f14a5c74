use super::{Coalition, Dialect, Formula};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    True,
    False,
    Not,
    And,
    Or,
    LParen,
    RParen,
    Open,
    Close,
    Comma,
    Next,
    Always,
    Eventually,
    Until,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::True => "`true`".into(),
            Tok::False => "`false`".into(),
            Tok::Not => "`!`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Open => "`<<`".into(),
            Tok::Close => "`>>`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Next => "`X`".into(),
            Tok::Always => "`G`".into(),
            Tok::Eventually => "`F`".into(),
            Tok::Until => "`U`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Pos {
    line: usize,
    column: usize,
}

fn syntax(pos: Pos, message: impl Into<String>) -> Error {
    Error::Syntax { line: pos.line, column: pos.column, message: message.into() }
}

pub(crate) fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

pub(crate) fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '.'
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column: col };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let two = chars.get(i + 1).copied();
        let (tok, len) = match c {
            '!' => (Tok::Not, 1),
            '&' => (Tok::And, 1),
            '|' => (Tok::Or, 1),
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            ',' => (Tok::Comma, 1),
            '<' if two == Some('<') => (Tok::Open, 2),
            '>' if two == Some('>') => (Tok::Close, 2),
            c if is_ident_start(c) => {
                let mut j = i;
                while j < chars.len() && is_ident_char(chars[j]) {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                let tok = match word.as_str() {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    "X" => Tok::Next,
                    "G" => Tok::Always,
                    "F" => Tok::Eventually,
                    "U" => Tok::Until,
                    _ => Tok::Ident(word),
                };
                (tok, j - i)
            }
            other => return Err(syntax(pos, format!("unexpected character `{other}`"))),
        };
        out.push((tok, pos));
        i += len;
        col += len;
    }
    out.push((Tok::Eof, Pos { line, column: col }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(syntax(
                self.pos(),
                format!("expected {}, found {}", want.describe(), self.peek().describe()),
            ))
        }
    }

    fn or(&mut self) -> Result<Formula> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            lhs = lhs.or(self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut lhs = self.until()?;
        while *self.peek() == Tok::And {
            self.bump();
            lhs = lhs.and(self.until()?);
        }
        Ok(lhs)
    }

    fn until(&mut self) -> Result<Formula> {
        let lhs = self.unary()?;
        if *self.peek() == Tok::Until {
            self.bump();
            return Ok(lhs.until(self.until()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            Tok::Not => {
                self.bump();
                Ok(self.unary()?.not())
            }
            Tok::Next => {
                self.bump();
                Ok(self.unary()?.next())
            }
            Tok::Always => {
                self.bump();
                Ok(self.unary()?.always())
            }
            Tok::Eventually => {
                self.bump();
                Ok(self.unary()?.eventually())
            }
            Tok::Open => {
                self.bump();
                let mut agents = Vec::new();
                if *self.peek() != Tok::Close {
                    loop {
                        match self.bump() {
                            Tok::Ident(a) => agents.push(a),
                            other => {
                                self.at -= 1;
                                return Err(syntax(
                                    self.pos(),
                                    format!("expected agent name, found {}", other.describe()),
                                ));
                            }
                        }
                        if *self.peek() == Tok::Comma {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                }
                self.expect(Tok::Close)?;
                Ok(Formula::coalition(Coalition::new(agents), self.unary()?))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula> {
        let pos = self.pos();
        match self.bump() {
            Tok::True => Ok(Formula::True),
            Tok::False => Ok(Formula::False),
            Tok::Ident(p) => Ok(Formula::Atom(p)),
            Tok::LParen => {
                let f = self.or()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            other => Err(syntax(pos, format!("expected a formula, found {}", other.describe()))),
        }
    }
}

fn parse_raw(text: &str) -> Result<Formula> {
    let mut p = Parser { toks: lex(text)?, at: 0 };
    let f = p.or()?;
    if *p.peek() != Tok::Eof {
        return Err(syntax(p.pos(), format!("unexpected {}", p.peek().describe())));
    }
    Ok(f)
}

fn desugar_eventually(f: Formula) -> Formula {
    use Formula::*;
    let b = |f: Box<Formula>| Box::new(desugar_eventually(*f));
    match f {
        True | False | Atom(_) => f,
        Not(x) => Not(b(x)),
        And(l, r) => And(b(l), b(r)),
        Or(l, r) => Or(b(l), b(r)),
        Coalition(c, x) => Coalition(c, b(x)),
        Next(x) => Next(b(x)),
        Always(x) => Always(b(x)),
        Eventually(x) => Until(Box::new(True), b(x)),
        Until(l, r) => Until(b(l), b(r)),
    }
}

/// Parses a state formula of the given dialect.
///
/// Precedence, tightest first: `!`, `X`, `G`, `F` and `<<A>>`; then `U`
/// (right-associative); then `&`; then `|`. In ATL, `F φ` is read as
/// `true U φ`.
pub fn parse_formula(text: &str, dialect: Dialect) -> Result<Formula> {
    let mut f = parse_raw(text)?;
    if dialect == Dialect::Atl {
        f = desugar_eventually(f);
    }
    f.check_dialect(dialect)?;
    Ok(f)
}

/// Parses a formula that may have temporal operators at the top level.
pub fn parse_path_formula(text: &str, dialect: Dialect) -> Result<Formula> {
    let mut f = parse_raw(text)?;
    if dialect == Dialect::Atl {
        f = desugar_eventually(f);
    }
    f.check_path_dialect(dialect)?;
    Ok(f)
}
