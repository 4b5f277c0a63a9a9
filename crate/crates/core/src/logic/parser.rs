//! Recursive-descent parser for the formula language.
//!
//! ```text
//! F := ('forall' | 'exists') VAR+ ':' F | I
//! I := D ('->' I)?                  right-associative, loosest
//! D := C ('|' C)*
//! C := U ('&' U)*
//! U := '~' U | '(' F ')' | ATOM | ('forall' | 'exists') VAR+ ':' F
//! ATOM := pred '(' TERM (',' TERM)* ')' | pred '(' ')'
//! ```
//!
//! Variables start with an uppercase letter, predicates and constants with a
//! lowercase one. `forall X Y : f` (commas between variables allowed) is sugar
//! for `forall X : forall Y : f`. A quantifier body extends as far right as
//! possible.

use super::formula::{Formula, Term, Theory, Var};
use super::vocab::Vocabulary;
use super::{Constant, LogicError};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Lower(String),
    Upper(String),
    Forall,
    Exists,
    LParen,
    RParen,
    Comma,
    Colon,
    Not,
    And,
    Or,
    Arrow,
    End,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, LogicError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            ':' => Some(Tok::Colon),
            '~' => Some(Tok::Not),
            '&' => Some(Tok::And),
            '|' => Some(Tok::Or),
            _ => None,
        };
        if let Some(t) = single {
            out.push((start, t));
            i += 1;
            continue;
        }
        if c == '-' {
            if bytes.get(i + 1) == Some(&b'>') {
                out.push((start, Tok::Arrow));
                i += 2;
                continue;
            }
            return Err(syntax(start, "expected `->`"));
        }
        if c.is_ascii_alphanumeric() || c == '_' {
            while i < bytes.len() && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let word = &text[start..i];
            let tok = match word {
                "forall" => Tok::Forall,
                "exists" => Tok::Exists,
                w if w.starts_with(|ch: char| ch.is_ascii_uppercase()) => Tok::Upper(w.to_string()),
                w if w.starts_with(|ch: char| ch.is_ascii_lowercase() || ch.is_ascii_digit()) => {
                    Tok::Lower(w.to_string())
                }
                w => return Err(syntax(start, &format!("invalid identifier `{w}`"))),
            };
            out.push((start, tok));
            continue;
        }
        return Err(syntax(start, &format!("unexpected character `{c}`")));
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

fn syntax(pos: usize, message: &str) -> LogicError {
    LogicError::Syntax {
        pos,
        message: message.to_string(),
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), LogicError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(syntax(self.pos(), &format!("expected {what}")))
        }
    }

    fn formula(&mut self) -> Result<Formula, LogicError> {
        match self.peek() {
            Tok::Forall | Tok::Exists => self.quantified(),
            _ => self.implication(),
        }
    }

    fn quantified(&mut self) -> Result<Formula, LogicError> {
        let universal = self.bump() == Tok::Forall;
        let mut vars = Vec::new();
        while let Tok::Upper(v) = self.peek().clone() {
            self.bump();
            vars.push(v);
            if *self.peek() == Tok::Comma {
                self.bump();
            }
        }
        if vars.is_empty() {
            return Err(syntax(self.pos(), "expected a variable after quantifier"));
        }
        self.expect(Tok::Colon, "`:` after quantified variables")?;
        let mut body = self.formula()?;
        for v in vars.into_iter().rev() {
            body = if universal {
                Formula::Forall(Var::new(&v), Box::new(body))
            } else {
                Formula::Exists(Var::new(&v), Box::new(body))
            };
        }
        Ok(body)
    }

    fn implication(&mut self) -> Result<Formula, LogicError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication_rhs()?;
            return Ok(Formula::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn implication_rhs(&mut self) -> Result<Formula, LogicError> {
        match self.peek() {
            Tok::Forall | Tok::Exists => self.quantified(),
            _ => self.implication(),
        }
    }

    fn disjunction(&mut self) -> Result<Formula, LogicError> {
        let mut items = vec![self.conjunction()?];
        while *self.peek() == Tok::Or {
            self.bump();
            items.push(self.conjunction()?);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Formula::Or(items)
        })
    }

    fn conjunction(&mut self) -> Result<Formula, LogicError> {
        let mut items = vec![self.unary()?];
        while *self.peek() == Tok::And {
            self.bump();
            items.push(self.unary()?);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Formula::And(items)
        })
    }

    fn unary(&mut self) -> Result<Formula, LogicError> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(Formula::Not(Box::new(self.unary()?)))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Forall | Tok::Exists => self.quantified(),
            Tok::Lower(name) => {
                self.bump();
                self.atom_args(&name)
            }
            Tok::Upper(v) => Err(syntax(self.pos(), &format!("variable `{v}` cannot start a formula"))),
            _ => Err(syntax(self.pos(), "expected a formula")),
        }
    }

    fn atom_args(&mut self, predicate: &str) -> Result<Formula, LogicError> {
        self.expect(Tok::LParen, &format!("`(` after predicate `{predicate}`"))?;
        let mut terms = Vec::new();
        if *self.peek() == Tok::RParen {
            self.bump();
            return Ok(Formula::atom(predicate, terms));
        }
        loop {
            let at = self.pos();
            match self.bump() {
                Tok::Upper(v) => terms.push(Term::Var(Var::new(&v))),
                Tok::Lower(c) => terms.push(Term::Const(Constant::new(&c))),
                _ => return Err(syntax(at, "expected a term")),
            }
            let at = self.pos();
            match self.bump() {
                Tok::Comma => continue,
                Tok::RParen => break,
                _ => return Err(syntax(at, "expected `,` or `)`")),
            }
        }
        Ok(Formula::atom(predicate, terms))
    }
}

/// Parses a closed formula and checks it against `vocab`.
pub fn parse_formula(text: &str, vocab: &Vocabulary) -> Result<Formula, LogicError> {
    let f = parse_unchecked(text)?;
    f.check_closed()?;
    f.check_vocabulary(vocab)?;
    Ok(f)
}

/// Parses `f1; f2; ...` as a theory. An empty string is the empty theory.
pub fn parse_theory(text: &str, vocab: &Vocabulary) -> Result<Theory, LogicError> {
    let mut out = Vec::new();
    let mut offset = 0;
    for part in text.split(';') {
        if !part.trim().is_empty() {
            let f = parse_formula(part, vocab).map_err(|e| match e {
                LogicError::Syntax { pos, message } => LogicError::Syntax {
                    pos: pos + offset,
                    message,
                },
                other => other,
            })?;
            out.push(f);
        }
        offset += part.len() + 1;
    }
    Ok(Theory(out))
}

pub(crate) fn parse_unchecked(text: &str) -> Result<Formula, LogicError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
    };
    let f = p.formula()?;
    if *p.peek() != Tok::End {
        return Err(syntax(p.pos(), "unexpected trailing input"));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vocab() -> Vocabulary {
        Vocabulary::new([("sm", 1), ("fr", 2), ("rain", 0)], ["alice", "bob", "eve"]).unwrap()
    }

    fn var(v: &str) -> Term {
        Term::Var(Var::new(v))
    }

    #[test]
    fn parses_universal_smokers() {
        let f = parse_formula("forall X : sm(X)", &vocab()).unwrap();
        assert_eq!(f, Formula::forall("X", Formula::atom("sm", vec![var("X")])));
    }

    #[test]
    fn multi_variable_block_is_nesting() {
        let nested = parse_formula("exists X : exists Y : fr(X,Y)", &vocab()).unwrap();
        let block = parse_formula("exists X, Y : fr(X,Y)", &vocab()).unwrap();
        let spaced = parse_formula("exists X Y: fr(X, Y)", &vocab()).unwrap();
        let expected = Formula::exists("X", Formula::exists("Y", Formula::atom("fr", vec![var("X"), var("Y")])));
        assert_eq!(nested, expected);
        assert_eq!(block, expected);
        assert_eq!(spaced, expected);
    }

    #[test]
    fn unbound_variable() {
        let err = parse_formula("forall X : sm(Y)", &vocab()).unwrap_err();
        assert_eq!(err, LogicError::UnboundVariable("Y".into()));
    }

    #[test]
    fn shadowing_rejected() {
        let err = parse_formula("forall X : exists X : sm(X)", &vocab()).unwrap_err();
        assert_eq!(err, LogicError::ShadowedVariable("X".into()));
    }

    #[test]
    fn vocabulary_errors() {
        assert_eq!(
            parse_formula("exists X : likes(X,X)", &vocab()).unwrap_err(),
            LogicError::UnknownPredicate("likes".into())
        );
        assert!(matches!(
            parse_formula("exists X : fr(X)", &vocab()).unwrap_err(),
            LogicError::ArityMismatch {
                expected: 2,
                found: 1,
                ..
            }
        ));
        assert_eq!(
            parse_formula("sm(zed)", &vocab()).unwrap_err(),
            LogicError::UnknownConstant("zed".into())
        );
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse_formula("forall X  sm(X)", &vocab()).unwrap_err() {
            LogicError::Syntax { pos, .. } => assert_eq!(pos, 10),
            e => panic!("unexpected {e:?}"),
        }
        assert!(matches!(
            parse_formula("sm(alice) &", &vocab()),
            Err(LogicError::Syntax { .. })
        ));
        assert!(matches!(
            parse_formula("sm(alice))", &vocab()),
            Err(LogicError::Syntax { pos: 9, .. })
        ));
        assert!(matches!(
            parse_formula("sm(alice) - sm(bob)", &vocab()),
            Err(LogicError::Syntax { .. })
        ));
    }

    #[test]
    fn precedence() {
        let f = parse_formula("sm(alice) | sm(bob) & ~sm(eve) -> rain()", &vocab()).unwrap();
        match f {
            Formula::Implies(lhs, rhs) => {
                assert!(
                    matches!(*lhs, Formula::Or(ref items) if items.len() == 2 && matches!(items[1], Formula::And(_)))
                );
                assert!(matches!(*rhs, Formula::Atom { .. }));
            }
            other => panic!("unexpected {other:?}"),
        }
        let right = parse_formula("rain() -> rain() -> sm(bob)", &vocab()).unwrap();
        assert!(matches!(right, Formula::Implies(_, ref r) if matches!(**r, Formula::Implies(..))));
    }

    #[test]
    fn printer_round_trips() {
        for text in [
            "forall X : sm(X)",
            "exists X Y : fr(X,Y) & ~fr(Y,X)",
            "(sm(alice) & sm(bob)) & sm(eve)",
            "(sm(alice) | sm(bob)) & (rain() -> sm(eve))",
            "(rain() -> rain()) -> ~(sm(bob) | ~sm(eve))",
            "(forall X : sm(X)) | exists Y : fr(Y,alice)",
            "~~rain()",
        ] {
            let f = parse_formula(text, &vocab()).unwrap();
            let printed = f.to_string();
            assert_eq!(parse_formula(&printed, &vocab()).unwrap(), f, "{text} -> {printed}");
        }
    }

    #[test]
    fn theories_split_on_semicolons() {
        let t = parse_theory("forall X : sm(X); exists X : sm(X)", &vocab()).unwrap();
        assert_eq!(t.formulas().len(), 2);
        assert!(parse_theory("", &vocab()).unwrap().formulas().is_empty());
        match parse_theory("rain(); sm(", &vocab()).unwrap_err() {
            LogicError::Syntax { pos, .. } => assert_eq!(pos, 11),
            e => panic!("unexpected {e:?}"),
        }
    }
}
