//! Printing with minimal parentheses. Output always parses back to the same tree.

use std::fmt::{self, Display, Write};

use super::formula::{AnyFormula, Formula};
use super::pdl::{PdlFormula, Program};

// Binding strength: higher binds tighter.
const IMP: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const UNARY: u8 = 4;

fn level(f: &Formula) -> u8 {
    match f {
        Formula::Imp(..) => IMP,
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        _ => UNARY,
    }
}

fn plevel(f: &PdlFormula) -> u8 {
    match f {
        PdlFormula::Or(..) => OR,
        PdlFormula::And(..) => AND,
        _ => UNARY,
    }
}

fn write_formula(out: &mut impl Write, f: &Formula, min: u8) -> fmt::Result {
    let paren = level(f) < min;
    if paren {
        out.write_char('(')?;
    }
    match f {
        Formula::Bot => out.write_str("false")?,
        Formula::Atom(p) => out.write_str(p)?,
        // `->` is right-associative, `&` and `|` left-associative.
        Formula::Imp(l, r) => {
            write_formula(out, l, IMP + 1)?;
            out.write_str(" -> ")?;
            write_formula(out, r, IMP)?;
        }
        Formula::Or(l, r) => {
            write_formula(out, l, OR)?;
            out.write_str(" | ")?;
            write_formula(out, r, OR + 1)?;
        }
        Formula::And(l, r) => {
            write_formula(out, l, AND)?;
            out.write_str(" & ")?;
            write_formula(out, r, AND + 1)?;
        }
        Formula::Box(g) | Formula::Dia(g) | Formula::BoxStar(g) | Formula::DiaStar(g) => {
            out.write_str(match f {
                Formula::Box(_) => "[]",
                Formula::Dia(_) => "<>",
                Formula::BoxStar(_) => "[*]",
                _ => "<*>",
            })?;
            write_formula(out, g, UNARY)?;
        }
    }
    if paren {
        out.write_char(')')?;
    }
    Ok(())
}

fn write_program(out: &mut impl Write, p: &Program, atomic: bool) -> fmt::Result {
    match p {
        Program::Atom(a) => write!(out, "{a}"),
        Program::Star(q) => {
            write_program(out, q, true)?;
            out.write_char('*')
        }
        Program::Comp(l, r) => {
            if atomic {
                out.write_char('(')?;
            }
            write_program(out, l, false)?;
            out.write_char(';')?;
            // composition parses left-nested
            match **r {
                Program::Comp(..) => write_program(out, r, true)?,
                _ => write_program(out, r, false)?,
            }
            if atomic {
                out.write_char(')')?;
            }
            Ok(())
        }
    }
}

fn write_pdl(out: &mut impl Write, f: &PdlFormula, min: u8) -> fmt::Result {
    let paren = plevel(f) < min;
    if paren {
        out.write_char('(')?;
    }
    match f {
        PdlFormula::Atom(p) => out.write_str(p)?,
        PdlFormula::Neg(g) => {
            out.write_char('!')?;
            write_pdl(out, g, UNARY)?;
        }
        PdlFormula::Or(l, r) => {
            write_pdl(out, l, OR)?;
            out.write_str(" | ")?;
            write_pdl(out, r, OR + 1)?;
        }
        PdlFormula::And(l, r) => {
            write_pdl(out, l, AND)?;
            out.write_str(" & ")?;
            write_pdl(out, r, AND + 1)?;
        }
        PdlFormula::BoxP(p, g) => {
            out.write_char('[')?;
            write_program(out, p, false)?;
            out.write_char(']')?;
            write_pdl(out, g, UNARY)?;
        }
    }
    if paren {
        out.write_char(')')?;
    }
    Ok(())
}

impl Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self, IMP)
    }
}

impl Display for PdlFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_pdl(f, self, IMP)
    }
}

impl Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_program(f, self, false)
    }
}

pub fn render<'a>(f: impl Into<AnyFormula<'a>>) -> String {
    match f.into() {
        AnyFormula::Constructive(f) => f.to_string(),
        AnyFormula::Classical(f) => f.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_pdl, parse_program, ProgramAtom};

    #[test]
    fn examples() {
        assert_eq!(Formula::neg(Formula::atom("p")).to_string(), "p -> false");
        assert_eq!(
            Formula::boxed(Formula::box_star(Formula::atom("p"))).to_string(),
            "[][*]p"
        );
        let prog = Program::comp(
            Program::star(Program::Atom(ProgramAtom::I)),
            Program::Atom(ProgramAtom::M),
        );
        assert_eq!(
            render(&PdlFormula::boxed(prog, PdlFormula::atom("p"))),
            "[i*;m]p"
        );
    }

    #[test]
    fn minimal_parentheses() {
        for s in [
            "[](p -> q) -> []p -> []q",
            "(p -> q) -> r",
            "p & q & r",
            "p & (q & r)",
            "p | q & r",
            "(p | q) & r",
            "~(p -> q)",
            "<*>(p | false)",
        ] {
            let f = parse_formula(s).unwrap();
            let out = f.to_string();
            assert_eq!(parse_formula(&out).unwrap(), f, "{s} -> {out}");
        }
        assert_eq!(
            parse_formula("(p -> q) -> r").unwrap().to_string(),
            "(p -> q) -> r"
        );
        assert_eq!(
            parse_formula("p -> (q -> r)").unwrap().to_string(),
            "p -> q -> r"
        );
        assert_eq!(
            parse_formula("p & (q & r)").unwrap().to_string(),
            "p & (q & r)"
        );
    }

    #[test]
    fn programs_round_trip() {
        for s in ["i", "i*", "(i*;m)*", "i;m;a", "i;(m;a)", "i**", "(i;m)*;a"] {
            let p = parse_program(s).unwrap();
            assert_eq!(p.to_string(), s);
        }
        let f = parse_pdl("<a*>p & !(q | [m](p -> q))").unwrap();
        assert_eq!(parse_pdl(&f.to_string()).unwrap(), f);
    }
}
