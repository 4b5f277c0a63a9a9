use std::fmt;
use std::sync::Arc;

use super::example::{Constant, RelationalExample};
use super::vocab::Vocabulary;
use super::LogicError;

/// A variable name (starts with an uppercase letter).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(Arc<str>);

impl Var {
    pub fn new(name: &str) -> Self {
        Var(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Var),
    Const(Constant),
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Const(c) => write!(f, "{c}"),
        }
    }
}

/// Function-free first-order formula. `And`/`Or` hold two or more operands.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom { predicate: Arc<str>, terms: Vec<Term> },
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(Var, Box<Formula>),
    Exists(Var, Box<Formula>),
}

impl Formula {
    pub fn atom(predicate: &str, terms: Vec<Term>) -> Self {
        Formula::Atom {
            predicate: Arc::from(predicate),
            terms,
        }
    }

    pub fn negate(self) -> Self {
        Formula::Not(Box::new(self))
    }

    pub fn forall(var: &str, body: Formula) -> Self {
        Formula::Forall(Var::new(var), Box::new(body))
    }

    pub fn exists(var: &str, body: Formula) -> Self {
        Formula::Exists(Var::new(var), Box::new(body))
    }

    /// Checks that every variable occurrence is bound by exactly one
    /// enclosing quantifier.
    pub fn check_closed(&self) -> Result<(), LogicError> {
        fn walk<'a>(f: &'a Formula, scope: &mut Vec<&'a Var>) -> Result<(), LogicError> {
            match f {
                Formula::Atom { terms, .. } => {
                    for t in terms {
                        if let Term::Var(v) = t {
                            if !scope.contains(&v) {
                                return Err(LogicError::UnboundVariable(v.to_string()));
                            }
                        }
                    }
                    Ok(())
                }
                Formula::Not(g) => walk(g, scope),
                Formula::And(gs) | Formula::Or(gs) => gs.iter().try_for_each(|g| walk(g, scope)),
                Formula::Implies(a, b) => {
                    walk(a, scope)?;
                    walk(b, scope)
                }
                Formula::Forall(v, body) | Formula::Exists(v, body) => {
                    if scope.contains(&v) {
                        return Err(LogicError::ShadowedVariable(v.to_string()));
                    }
                    scope.push(v);
                    let r = walk(body, scope);
                    scope.pop();
                    r
                }
            }
        }
        walk(self, &mut Vec::new())
    }

    /// Checks predicates, arities and constants against a vocabulary.
    pub fn check_vocabulary(&self, vocab: &Vocabulary) -> Result<(), LogicError> {
        match self {
            Formula::Atom { predicate, terms } => {
                let arity = vocab
                    .arity(predicate)
                    .ok_or_else(|| LogicError::UnknownPredicate(predicate.to_string()))?;
                if arity != terms.len() {
                    return Err(LogicError::ArityMismatch {
                        name: predicate.to_string(),
                        expected: arity,
                        found: terms.len(),
                    });
                }
                for t in terms {
                    if let Term::Const(c) = t {
                        if !vocab.has_constant(c.as_str()) {
                            return Err(LogicError::UnknownConstant(c.to_string()));
                        }
                    }
                }
                Ok(())
            }
            Formula::Not(g) | Formula::Forall(_, g) | Formula::Exists(_, g) => g.check_vocabulary(vocab),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().try_for_each(|g| g.check_vocabulary(vocab)),
            Formula::Implies(a, b) => {
                a.check_vocabulary(vocab)?;
                b.check_vocabulary(vocab)
            }
        }
    }

    fn is_quantifier(&self) -> bool {
        matches!(self, Formula::Forall(..) | Formula::Exists(..))
    }

    fn fmt_operand(&self, f: &mut fmt::Formatter<'_>, bare: impl Fn(&Formula) -> bool) -> fmt::Result {
        if bare(self) {
            write!(f, "{self}")
        } else {
            write!(f, "({self})")
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom { predicate, terms } => {
                write!(f, "{predicate}(")?;
                for (i, t) in terms.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{t}")?;
                }
                f.write_str(")")
            }
            Formula::Not(g) => {
                f.write_str("~")?;
                g.fmt_operand(f, |g| matches!(g, Formula::Atom { .. } | Formula::Not(_)))
            }
            Formula::And(gs) | Formula::Or(gs) => {
                let sep = if matches!(self, Formula::And(_)) { " & " } else { " | " };
                for (i, g) in gs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(sep)?;
                    }
                    // same-operator children keep their parentheses so the
                    // tree shape survives a round trip
                    g.fmt_operand(f, |g| {
                        matches!(
                            (self, g),
                            (_, Formula::Atom { .. } | Formula::Not(_)) | (Formula::Or(_), Formula::And(_))
                        )
                    })?;
                }
                Ok(())
            }
            Formula::Implies(a, b) => {
                a.fmt_operand(f, |g| !matches!(g, Formula::Implies(..)) && !g.is_quantifier())?;
                f.write_str(" -> ")?;
                b.fmt_operand(f, |g| !g.is_quantifier())
            }
            Formula::Forall(v, body) => write!(f, "forall {v} : {body}"),
            Formula::Exists(v, body) => write!(f, "exists {v} : {body}"),
        }
    }
}

/// A theory: a list of formulas read as their conjunction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Theory(pub Vec<Formula>);

impl Theory {
    pub fn formulas(&self) -> &[Formula] {
        &self.0
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, phi) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{phi}")?;
        }
        Ok(())
    }
}

/// `ex ⊨ f` with quantifiers ranging over `ex`'s domain. Atoms that mention a
/// constant outside the domain are false.
pub fn evaluate(f: &Formula, ex: &RelationalExample) -> bool {
    let mut env = Vec::new();
    eval(f, ex, &mut env)
}

/// Conjunction over the theory's members; the empty theory holds everywhere.
pub fn evaluate_theory(theory: &Theory, ex: &RelationalExample) -> bool {
    theory.0.iter().all(|f| evaluate(f, ex))
}

fn eval<'a>(f: &'a Formula, ex: &RelationalExample, env: &mut Vec<(&'a Var, Constant)>) -> bool {
    match f {
        Formula::Atom { predicate, terms } => {
            let mut args = Vec::with_capacity(terms.len());
            for t in terms {
                match t {
                    Term::Const(c) => args.push(c.clone()),
                    Term::Var(v) => {
                        let bound = env.iter().rev().find(|(name, _)| *name == v);
                        match bound {
                            Some((_, c)) => args.push(c.clone()),
                            // unreachable for closed formulas
                            None => return false,
                        }
                    }
                }
            }
            ex.holds(predicate, &args)
        }
        Formula::Not(g) => !eval(g, ex, env),
        Formula::And(gs) => gs.iter().all(|g| eval(g, ex, env)),
        Formula::Or(gs) => gs.iter().any(|g| eval(g, ex, env)),
        Formula::Implies(a, b) => !eval(a, ex, env) || eval(b, ex, env),
        Formula::Forall(v, body) => ex.domain().iter().all(|c| {
            env.push((v, c.clone()));
            let r = eval(body, ex, env);
            env.pop();
            r
        }),
        Formula::Exists(v, body) => ex.domain().iter().any(|c| {
            env.push((v, c.clone()));
            let r = eval(body, ex, env);
            env.pop();
            r
        }),
    }
}
