use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

/// LTLf abstract syntax. Children are reference counted so that formulas can
/// be cloned cheaply and shared across threads.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom(Arc<str>),
    Not(Arc<Formula>),
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Implies(Arc<Formula>, Arc<Formula>),
    Next(Arc<Formula>),
    WeakNext(Arc<Formula>),
    Until(Arc<Formula>, Arc<Formula>),
    Release(Arc<Formula>, Arc<Formula>),
    Eventually(Arc<Formula>),
    Always(Arc<Formula>),
}

pub use Formula::*;

pub fn atom(name: &str) -> Formula {
    Atom(Arc::from(name))
}

pub fn not(f: Formula) -> Formula {
    Not(Arc::new(f))
}

pub fn and(f: Formula, g: Formula) -> Formula {
    And(Arc::new(f), Arc::new(g))
}

pub fn or(f: Formula, g: Formula) -> Formula {
    Or(Arc::new(f), Arc::new(g))
}

pub fn implies(f: Formula, g: Formula) -> Formula {
    Implies(Arc::new(f), Arc::new(g))
}

pub fn next(f: Formula) -> Formula {
    Next(Arc::new(f))
}

pub fn weak_next(f: Formula) -> Formula {
    WeakNext(Arc::new(f))
}

pub fn until(f: Formula, g: Formula) -> Formula {
    Until(Arc::new(f), Arc::new(g))
}

pub fn release(f: Formula, g: Formula) -> Formula {
    Release(Arc::new(f), Arc::new(g))
}

pub fn eventually(f: Formula) -> Formula {
    Eventually(Arc::new(f))
}

pub fn always(f: Formula) -> Formula {
    Always(Arc::new(f))
}

pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Formula {
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            True | False | Atom(_) => vec![],
            Not(f) | Next(f) | WeakNext(f) | Eventually(f) | Always(f) => vec![f],
            And(f, g) | Or(f, g) | Implies(f, g) | Until(f, g) | Release(f, g) => vec![f, g],
        }
    }

    /// Number of distinct subformulas of the formula as written. Abbreviations
    /// count as a single node, shared subformulas count once.
    pub fn size(&self) -> usize {
        fn walk<'a>(f: &'a Formula, seen: &mut HashSet<&'a Formula>) {
            if seen.insert(f) {
                for c in f.children() {
                    walk(c, seen);
                }
            }
        }
        let mut seen = HashSet::new();
        walk(self, &mut seen);
        seen.len()
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    /// Atom names in first-occurrence (pre-order) order, without duplicates.
    pub fn atoms(&self) -> Vec<String> {
        fn walk(f: &Formula, out: &mut Vec<String>) {
            if let Atom(name) = f {
                if !out.iter().any(|n| n.as_str() == &**name) {
                    out.push(name.to_string());
                }
            }
            for c in f.children() {
                walk(c, out);
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    /// Rewrites into negation normal form: negations only in front of atoms,
    /// `->` eliminated. `F` and `G` are kept as such (their negations swap).
    pub fn to_nnf(&self) -> Formula {
        nnf(self, false)
    }

    fn precedence(&self) -> u8 {
        match self {
            Implies(..) => 1,
            Or(..) => 2,
            And(..) => 3,
            Until(..) | Release(..) => 4,
            Not(_) | Next(_) | WeakNext(_) | Eventually(_) | Always(_) => 5,
            True | False | Atom(_) => 6,
        }
    }
}

fn nnf(f: &Formula, negated: bool) -> Formula {
    match (f, negated) {
        (True, false) | (False, true) => True,
        (True, true) | (False, false) => False,
        (Atom(_), false) => f.clone(),
        (Atom(_), true) => not(f.clone()),
        (Not(g), _) => nnf(g, !negated),
        (And(g, h), false) => and(nnf(g, false), nnf(h, false)),
        (And(g, h), true) => or(nnf(g, true), nnf(h, true)),
        (Or(g, h), false) => or(nnf(g, false), nnf(h, false)),
        (Or(g, h), true) => and(nnf(g, true), nnf(h, true)),
        (Implies(g, h), false) => or(nnf(g, true), nnf(h, false)),
        (Implies(g, h), true) => and(nnf(g, false), nnf(h, true)),
        (Next(g), false) => next(nnf(g, false)),
        (Next(g), true) => weak_next(nnf(g, true)),
        (WeakNext(g), false) => weak_next(nnf(g, false)),
        (WeakNext(g), true) => next(nnf(g, true)),
        (Until(g, h), false) => until(nnf(g, false), nnf(h, false)),
        (Until(g, h), true) => release(nnf(g, true), nnf(h, true)),
        (Release(g, h), false) => release(nnf(g, false), nnf(h, false)),
        (Release(g, h), true) => until(nnf(g, true), nnf(h, true)),
        (Eventually(g), false) => eventually(nnf(g, false)),
        (Eventually(g), true) => always(nnf(g, true)),
        (Always(g), false) => always(nnf(g, false)),
        (Always(g), true) => eventually(nnf(g, true)),
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Children of a binary operator are parenthesized whenever they are
        // binary themselves, which keeps associativity explicit on re-parse.
        fn operand(child: &Formula, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            if child.precedence() <= 4 {
                write!(f, "({child})")
            } else {
                write!(f, "{child}")
            }
        }
        fn binary(l: &Formula, op: &str, r: &Formula, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            operand(l, f)?;
            write!(f, " {op} ")?;
            operand(r, f)
        }
        fn unary(op: &str, c: &Formula, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            if op == "!" {
                write!(f, "!")?;
            } else {
                write!(f, "{op} ")?;
            }
            operand(c, f)
        }
        match self {
            True => write!(f, "true"),
            False => write!(f, "false"),
            Atom(name) => write!(f, "{name}"),
            Not(c) => unary("!", c, f),
            Next(c) => unary("X", c, f),
            WeakNext(c) => unary("WX", c, f),
            Eventually(c) => unary("F", c, f),
            Always(c) => unary("G", c, f),
            And(l, r) => binary(l, "&", r, f),
            Or(l, r) => binary(l, "|", r, f),
            Implies(l, r) => binary(l, "->", r, f),
            Until(l, r) => binary(l, "U", r, f),
            Release(l, r) => binary(l, "R", r, f),
        }
    }
}
