//! Concrete syntax: an ASCII parser plus a canonical and a SPIN printer.
//!
//! ```text
//! ternary  := implies ( "?" ternary ":" ternary )?
//! implies  := or ( "->" implies )?                 right-associative
//! or       := and ( "||" and )*                    left-associative
//! and      := temporal ( "&&" temporal )*          left-associative
//! temporal := unary ( ("U" | "W" | "P") temporal )?  right-associative
//! unary    := ("!" | "X" | "[]" | "<>") unary | primary
//! primary  := "true" | "false" | ident
//!           | ("up" | "down" | "any") "(" ternary ")"
//!           | "(" ternary ")"
//! ```
//!
//! `U`, `W` and `P` are operators only where a binary operator is expected;
//! in operand position they are ordinary atoms, so `up(R) P P` reads as
//! "`up(R)` precedes the atom `P`". `X`, `true`, `false`, `up`, `down` and
//! `any` are reserved.

use std::fmt;

use thiserror::Error;

use crate::formula::Formula;

/// Byte range `start..end` into the parsed text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl SourceSpan {
    fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        SourceSpan { start, end }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected {found} at {span}; expected {}", .expected.join(", "))]
    Unexpected {
        span: SourceSpan,
        found: String,
        expected: Vec<String>,
    },
    #[error("unknown operator `{name}` at {span}")]
    UnknownOperator { span: SourceSpan, name: String },
    #[error("invalid character {ch:?} at {span}")]
    InvalidChar { span: SourceSpan, ch: char },
}

impl ParseError {
    pub fn span(&self) -> SourceSpan {
        match self {
            ParseError::Unexpected { span, .. }
            | ParseError::UnknownOperator { span, .. }
            | ParseError::InvalidChar { span, .. } => *span,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Bang,
    AndAnd,
    OrOr,
    Arrow,
    Question,
    Colon,
    Box,
    Diamond,
    LParen,
    RParen,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Bang => "`!`".into(),
            Tok::AndAnd => "`&&`".into(),
            Tok::OrOr => "`||`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Question => "`?`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Box => "`[]`".into(),
            Tok::Diamond => "`<>`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

const RESERVED: [&str; 6] = ["true", "false", "X", "up", "down", "any"];

/// True if `name` can be printed as an atom and parsed back.
pub fn is_valid_atom_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && !RESERVED.contains(&name)
}

fn lex(text: &str) -> Result<Vec<(Tok, SourceSpan)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let two = |a: u8, b: u8| c == a && bytes.get(i + 1) == Some(&b);
        let (tok, len) = if two(b'&', b'&') {
            (Tok::AndAnd, 2)
        } else if two(b'|', b'|') {
            (Tok::OrOr, 2)
        } else if two(b'-', b'>') {
            (Tok::Arrow, 2)
        } else if two(b'[', b']') {
            (Tok::Box, 2)
        } else if two(b'<', b'>') {
            (Tok::Diamond, 2)
        } else {
            match c {
                b'!' => (Tok::Bang, 1),
                b'?' => (Tok::Question, 1),
                b':' => (Tok::Colon, 1),
                b'(' => (Tok::LParen, 1),
                b')' => (Tok::RParen, 1),
                c if c.is_ascii_alphabetic() || c == b'_' => {
                    let end = bytes[i..]
                        .iter()
                        .position(|b| !(b.is_ascii_alphanumeric() || *b == b'_'))
                        .map_or(bytes.len(), |n| i + n);
                    (Tok::Ident(text[i..end].to_string()), end - i)
                }
                _ => {
                    let ch = text[i..].chars().next().unwrap_or('\u{fffd}');
                    return Err(ParseError::InvalidChar {
                        span: SourceSpan::new(i, i + ch.len_utf8()),
                        ch,
                    });
                }
            }
        };
        out.push((tok, SourceSpan::new(i, i + len)));
        i += len;
    }
    out.push((Tok::Eof, SourceSpan::new(text.len(), text.len())));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        ParseError::Unexpected {
            span: self.span(),
            found: self.peek().describe(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&[what]))
        }
    }

    fn ternary(&mut self) -> Result<Formula, ParseError> {
        let cond = self.implies()?;
        if *self.peek() != Tok::Question {
            return Ok(cond);
        }
        self.bump();
        let then = self.ternary()?;
        self.expect(Tok::Colon, "`:`")?;
        let other = self.ternary()?;
        Ok(Formula::ite(cond, then, other))
    }

    fn implies(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implies()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::OrOr {
            self.bump();
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.temporal()?;
        while *self.peek() == Tok::AndAnd {
            self.bump();
            let rhs = self.temporal()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn temporal(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.unary()?;
        let op = match self.peek() {
            Tok::Ident(s) if s == "U" || s == "W" || s == "P" => s.clone(),
            _ => return Ok(lhs),
        };
        self.bump();
        let rhs = self.temporal()?;
        Ok(match op.as_str() {
            "U" => Formula::until(lhs, rhs),
            "W" => Formula::weak_until(lhs, rhs),
            _ => Formula::precedes(lhs, rhs),
        })
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Bang => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Box => {
                self.bump();
                Ok(Formula::always(self.unary()?))
            }
            Tok::Diamond => {
                self.bump();
                Ok(Formula::eventually(self.unary()?))
            }
            Tok::Ident(s) if s == "X" => {
                self.bump();
                Ok(Formula::next(self.unary()?))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        const OPERAND: &[&str] = &[
            "`(`", "`!`", "`X`", "`[]`", "`<>`", "`true`", "`false`", "`up`", "`down`", "`any`",
            "identifier",
        ];
        let span = self.span();
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.ternary()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Ident(name) => match name.as_str() {
                "true" => {
                    self.bump();
                    Ok(Formula::tt())
                }
                "false" => {
                    self.bump();
                    Ok(Formula::ff())
                }
                "up" | "down" | "any" => {
                    self.bump();
                    self.expect(Tok::LParen, "`(`")?;
                    let f = self.ternary()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(match name.as_str() {
                        "up" => Formula::up(f),
                        "down" => Formula::down(f),
                        _ => Formula::any(f),
                    })
                }
                _ if *self.peek_at(1) == Tok::LParen => {
                    Err(ParseError::UnknownOperator { span, name })
                }
                _ => {
                    self.bump();
                    Ok(Formula::Atom(name))
                }
            },
            _ => Err(self.unexpected(OPERAND)),
        }
    }
}

/// Parses one formula; trailing input is an error.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let f = p.ternary()?;
    if *p.peek() != Tok::Eof {
        return Err(p.unexpected(&[
            "`U`", "`W`", "`P`", "`&&`", "`||`", "`->`", "`?`", "end of input",
        ]));
    }
    Ok(f)
}

const TERNARY: u8 = 0;
const IMPLIES: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const TEMPORAL: u8 = 4;
const UNARY: u8 = 5;
const ATOMIC: u8 = 6;

fn level(f: &Formula) -> u8 {
    use Formula::*;
    match f {
        IfThenElse(..) => TERNARY,
        Implies(..) => IMPLIES,
        Or(..) => OR,
        And(..) => AND,
        Until(..) | WeakUntil(..) | Precedes(..) => TEMPORAL,
        Not(_) | Next(_) | Always(_) | Eventually(_) => UNARY,
        Const(_) | Atom(_) | EdgeUp(_) | EdgeDown(_) | EdgeAny(_) => ATOMIC,
    }
}

fn canonical(f: &Formula, ctx: u8, out: &mut String) {
    use Formula::*;
    let paren = level(f) < ctx;
    if paren {
        out.push('(');
    }
    let bin = |a: &Formula, op: &str, la: u8, b: &Formula, lb: u8, out: &mut String| {
        canonical(a, la, out);
        out.push_str(op);
        canonical(b, lb, out);
    };
    match f {
        Const(true) => out.push_str("true"),
        Const(false) => out.push_str("false"),
        Atom(name) => out.push_str(name),
        Not(a) => {
            out.push('!');
            canonical(a, UNARY, out);
        }
        Next(a) => {
            out.push_str("X ");
            canonical(a, UNARY, out);
        }
        Always(a) => {
            out.push_str("[] ");
            canonical(a, UNARY, out);
        }
        Eventually(a) => {
            out.push_str("<> ");
            canonical(a, UNARY, out);
        }
        EdgeUp(a) | EdgeDown(a) | EdgeAny(a) => {
            out.push_str(match f {
                EdgeUp(_) => "up(",
                EdgeDown(_) => "down(",
                _ => "any(",
            });
            canonical(a, TERNARY, out);
            out.push(')');
        }
        And(a, b) => bin(a, " && ", AND, b, TEMPORAL, out),
        Or(a, b) => bin(a, " || ", OR, b, AND, out),
        Implies(a, b) => bin(a, " -> ", OR, b, IMPLIES, out),
        Until(a, b) => bin(a, " U ", UNARY, b, TEMPORAL, out),
        WeakUntil(a, b) => bin(a, " W ", UNARY, b, TEMPORAL, out),
        Precedes(a, b) => bin(a, " P ", UNARY, b, TEMPORAL, out),
        IfThenElse(c, t, e) => {
            canonical(c, IMPLIES, out);
            out.push_str(" ? ");
            canonical(t, TERNARY, out);
            out.push_str(" : ");
            canonical(e, TERNARY, out);
        }
    }
    if paren {
        out.push(')');
    }
}

/// Prints with the fewest parentheses that still parse back to the same tree.
pub fn print_canonical(f: &Formula) -> String {
    let mut out = String::new();
    canonical(f, TERNARY, &mut out);
    out
}

fn spin(f: &Formula, out: &mut String) {
    use Formula::*;
    let operand = |g: &Formula, out: &mut String| {
        if matches!(g, Const(_) | Atom(_)) {
            spin(g, out);
        } else {
            out.push('(');
            spin(g, out);
            out.push(')');
        }
    };
    match f {
        Const(true) => out.push_str("true"),
        Const(false) => out.push_str("false"),
        Atom(name) => out.push_str(name),
        Not(a) | Next(a) | Always(a) | Eventually(a) => {
            out.push_str(match f {
                Not(_) => "! ",
                Next(_) => "X ",
                Always(_) => "[] ",
                _ => "<> ",
            });
            operand(a, out);
        }
        And(a, b) | Or(a, b) | Implies(a, b) | Until(a, b) => {
            operand(a, out);
            out.push_str(match f {
                And(..) => " && ",
                Or(..) => " || ",
                Implies(..) => " -> ",
                _ => " U ",
            });
            operand(b, out);
        }
        WeakUntil(..) | Precedes(..) | IfThenElse(..) | EdgeUp(_) | EdgeDown(_) | EdgeAny(_) => {
            unreachable!("lowered before printing")
        }
    }
}

/// Lowers sugar and edges, then prints every compound operand in
/// parentheses using only `true false ! && || -> X [] <> U`.
pub fn print_spin(f: &Formula) -> String {
    let lowered = f.eliminate_sugar().eliminate_edges();
    let mut out = String::new();
    spin(&lowered, &mut out);
    out
}
