//! Recursive-descent parsers for both concrete syntaxes.
//!
//! Constructive formulas:
//!
//! ```text
//! formula := imp
//! imp     := or ("->" imp)?
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := ("[]" | "<>" | "[*]" | "<*>" | "~") unary | "false" | IDENT | "(" formula ")"
//! ```
//!
//! PDL formulas share the binary layer (`a -> b` is read as `!a | b`) with
//!
//! ```text
//! punary := ("[" prog "]" | "<" prog ">" | "!") punary | IDENT | "(" pformula ")"
//! prog   := pstar (";" pstar)*
//! pstar  := ("i" | "m" | "a" | "(" prog ")") "*"*
//! ```

use thiserror::Error;

use super::formula::{Formula, P_BOT};
use super::pdl::{PdlFormula, Program, ProgramAtom};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at byte {offset}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unexpected character `{0}`")]
    UnexpectedChar(char),
    #[error("expected `{0}`")]
    Expected(&'static str),
    #[error("`{0}` is reserved and cannot be used as an atom")]
    ReservedIdentifier(String),
    #[error("unknown atomic program `{0}` (expected i, m or a)")]
    UnknownProgram(String),
    #[error("trailing input")]
    Trailing,
}

type PResult<T> = Result<T, ParseError>;

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            offset: self.pos,
            kind,
        }
    }

    fn unexpected(&mut self) -> ParseError {
        match self.peek() {
            Some(c) => self.err(ParseErrorKind::UnexpectedChar(c)),
            None => self.err(ParseErrorKind::UnexpectedEnd),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char, what: &'static str) -> PResult<()> {
        if self.eat(c) {
            Ok(())
        } else if self.peek().is_none() {
            Err(self.err(ParseErrorKind::UnexpectedEnd))
        } else {
            Err(self.err(ParseErrorKind::Expected(what)))
        }
    }

    fn eat_arrow(&mut self) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with('-') {
            let save = self.pos;
            self.pos += 1;
            if self.eat('>') {
                return true;
            }
            self.pos = save;
        }
        false
    }

    fn ident(&mut self) -> Option<(usize, &'a str)> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let mut chars = rest.char_indices();
        match chars.next() {
            Some((_, c)) if c.is_ascii_lowercase() => {}
            _ => return None,
        }
        let end = chars
            .find(|&(_, c)| !(c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_'))
            .map_or(rest.len(), |(i, _)| i);
        self.pos = start + end;
        Some((start, &rest[..end]))
    }

    fn finish(&mut self) -> PResult<()> {
        if self.peek().is_some() {
            Err(self.err(ParseErrorKind::Trailing))
        } else {
            Ok(())
        }
    }
}

/// Parses a formula of the constructive language. `~x` is read as `x -> false`.
pub fn parse_formula(text: &str) -> PResult<Formula> {
    let mut c = Cursor::new(text);
    let f = imp(&mut c)?;
    c.finish()?;
    Ok(f)
}

/// Like [`parse_formula`] but rejects the reserved atom `p_bot`, which is not
/// part of the fallible languages.
pub fn parse_constructive(text: &str) -> PResult<Formula> {
    let f = parse_formula(text)?;
    if f.mentions(P_BOT) {
        let offset = text.find(P_BOT).unwrap_or(0);
        return Err(ParseError {
            offset,
            kind: ParseErrorKind::ReservedIdentifier(P_BOT.into()),
        });
    }
    Ok(f)
}

fn imp(c: &mut Cursor) -> PResult<Formula> {
    let l = or(c)?;
    if c.eat_arrow() {
        let r = imp(c)?;
        Ok(Formula::imp(l, r))
    } else {
        Ok(l)
    }
}

fn or(c: &mut Cursor) -> PResult<Formula> {
    let mut acc = and(c)?;
    while c.eat('|') {
        acc = Formula::or(acc, and(c)?);
    }
    Ok(acc)
}

fn and(c: &mut Cursor) -> PResult<Formula> {
    let mut acc = unary(c)?;
    while c.eat('&') {
        acc = Formula::and(acc, unary(c)?);
    }
    Ok(acc)
}

fn unary(c: &mut Cursor) -> PResult<Formula> {
    match c.peek() {
        Some('[') => {
            c.eat('[');
            let star = c.eat('*');
            c.expect(']', "]")?;
            let f = unary(c)?;
            Ok(if star {
                Formula::box_star(f)
            } else {
                Formula::boxed(f)
            })
        }
        Some('<') => {
            c.eat('<');
            let star = c.eat('*');
            c.expect('>', ">")?;
            let f = unary(c)?;
            Ok(if star {
                Formula::dia_star(f)
            } else {
                Formula::dia(f)
            })
        }
        Some('~') => {
            c.eat('~');
            Ok(Formula::neg(unary(c)?))
        }
        Some('(') => {
            c.eat('(');
            let f = imp(c)?;
            c.expect(')', ")")?;
            Ok(f)
        }
        _ => match c.ident() {
            Some((_, "false")) => Ok(Formula::Bot),
            Some((_, name)) => Ok(Formula::atom(name)),
            None => Err(c.unexpected()),
        },
    }
}

/// Parses a PDL formula. `<α>φ` and `a -> b` are expanded while parsing.
pub fn parse_pdl(text: &str) -> PResult<PdlFormula> {
    let mut c = Cursor::new(text);
    let f = pimp(&mut c)?;
    c.finish()?;
    Ok(f)
}

pub fn parse_program(text: &str) -> PResult<Program> {
    let mut c = Cursor::new(text);
    let p = prog(&mut c)?;
    c.finish()?;
    Ok(p)
}

fn pimp(c: &mut Cursor) -> PResult<PdlFormula> {
    let l = por(c)?;
    if c.eat_arrow() {
        let r = pimp(c)?;
        Ok(PdlFormula::implies(l, r))
    } else {
        Ok(l)
    }
}

fn por(c: &mut Cursor) -> PResult<PdlFormula> {
    let mut acc = pand(c)?;
    while c.eat('|') {
        acc = PdlFormula::or(acc, pand(c)?);
    }
    Ok(acc)
}

fn pand(c: &mut Cursor) -> PResult<PdlFormula> {
    let mut acc = punary(c)?;
    while c.eat('&') {
        acc = PdlFormula::and(acc, punary(c)?);
    }
    Ok(acc)
}

fn punary(c: &mut Cursor) -> PResult<PdlFormula> {
    match c.peek() {
        Some('[') => {
            c.eat('[');
            let p = prog(c)?;
            c.expect(']', "]")?;
            Ok(PdlFormula::boxed(p, punary(c)?))
        }
        Some('<') => {
            c.eat('<');
            let p = prog(c)?;
            c.expect('>', ">")?;
            Ok(PdlFormula::dia(p, punary(c)?))
        }
        Some('!') => {
            c.eat('!');
            Ok(PdlFormula::neg(punary(c)?))
        }
        Some('(') => {
            c.eat('(');
            let f = pimp(c)?;
            c.expect(')', ")")?;
            Ok(f)
        }
        _ => match c.ident() {
            Some((start, "false")) => Err(ParseError {
                offset: start,
                kind: ParseErrorKind::ReservedIdentifier("false".into()),
            }),
            Some((_, name)) => Ok(PdlFormula::atom(name)),
            None => Err(c.unexpected()),
        },
    }
}

fn prog(c: &mut Cursor) -> PResult<Program> {
    let mut acc = pstar(c)?;
    while c.eat(';') {
        acc = Program::comp(acc, pstar(c)?);
    }
    Ok(acc)
}

fn pstar(c: &mut Cursor) -> PResult<Program> {
    let mut p = if c.eat('(') {
        let p = prog(c)?;
        c.expect(')', ")")?;
        p
    } else {
        match c.ident() {
            Some((start, name)) => {
                let atom = (name.len() == 1)
                    .then(|| ProgramAtom::from_char(name.chars().next().unwrap()))
                    .flatten();
                match atom {
                    Some(a) => Program::Atom(a),
                    None => {
                        return Err(ParseError {
                            offset: start,
                            kind: ParseErrorKind::UnknownProgram(name.into()),
                        })
                    }
                }
            }
            None => return Err(c.unexpected()),
        }
    };
    while c.eat('*') {
        p = Program::star(p);
    }
    Ok(p)
}
