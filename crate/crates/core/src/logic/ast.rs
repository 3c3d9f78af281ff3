use std::collections::BTreeSet;
use std::fmt;

use crate::error::Result;

/// A term: a vertex variable or a named constant (written `@name`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Const(String),
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Const(c) => write!(f, "@{c}"),
        }
    }
}

/// FO formulas over the signature of colored graphs with constants and
/// flags, extended with a primitive bounded-distance atom `dist<=K(s, t)`.
///
/// The distance atom is a rank-0 primitive, not sugar for a quantified
/// path formula; it states that a path of length at most `K` exists in the
/// underlying graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Edge(Term, Term),
    /// `U_name(t)`
    Color(String, Term),
    Eq(Term, Term),
    /// `flag(name)`
    Flag(String),
    /// `dist<=K(s, t)`
    DistLe(u32, Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Xor(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

impl Formula {
    pub fn parse(text: &str) -> Result<Formula> {
        super::parse::parse(text)
    }

    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn edge(t1: Term, t2: Term) -> Formula {
        Formula::Edge(t1, t2)
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn xor(a: Formula, b: Formula) -> Formula {
        Formula::Xor(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn exists(v: &str, f: Formula) -> Formula {
        Formula::Exists(v.to_string(), Box::new(f))
    }

    pub fn forall(v: &str, f: Formula) -> Formula {
        Formula::Forall(v.to_string(), Box::new(f))
    }

    /// Conjunction of all formulas, or `True` when empty.
    pub fn conj(fs: impl IntoIterator<Item = Formula>) -> Formula {
        let mut it = fs.into_iter();
        match it.next() {
            None => Formula::True,
            Some(first) => it.fold(first, Formula::and),
        }
    }

    /// Disjunction of all formulas, or `False` when empty.
    pub fn disj(fs: impl IntoIterator<Item = Formula>) -> Formula {
        let mut it = fs.into_iter();
        match it.next() {
            None => Formula::False,
            Some(first) => it.fold(first, Formula::or),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        fn term(t: &Term, acc: &mut BTreeSet<String>) {
            if let Term::Var(v) = t {
                acc.insert(v.clone());
            }
        }
        fn walk(f: &Formula, acc: &mut BTreeSet<String>) {
            match f {
                Formula::True | Formula::False | Formula::Flag(_) => {}
                Formula::Edge(a, b) | Formula::Eq(a, b) | Formula::DistLe(_, a, b) => {
                    term(a, acc);
                    term(b, acc);
                }
                Formula::Color(_, t) => term(t, acc),
                Formula::Not(g) => walk(g, acc),
                Formula::And(a, b)
                | Formula::Or(a, b)
                | Formula::Xor(a, b)
                | Formula::Implies(a, b) => {
                    walk(a, acc);
                    walk(b, acc);
                }
                Formula::Exists(v, g) | Formula::Forall(v, g) => {
                    let mut inner = BTreeSet::new();
                    walk(g, &mut inner);
                    inner.remove(v);
                    acc.extend(inner);
                }
            }
        }
        let mut acc = BTreeSet::new();
        walk(self, &mut acc);
        acc
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_var_names(&self) -> BTreeSet<String> {
        fn term(t: &Term, acc: &mut BTreeSet<String>) {
            if let Term::Var(v) = t {
                acc.insert(v.clone());
            }
        }
        fn walk(f: &Formula, acc: &mut BTreeSet<String>) {
            match f {
                Formula::True | Formula::False | Formula::Flag(_) => {}
                Formula::Edge(a, b) | Formula::Eq(a, b) | Formula::DistLe(_, a, b) => {
                    term(a, acc);
                    term(b, acc);
                }
                Formula::Color(_, t) => term(t, acc),
                Formula::Not(g) => walk(g, acc),
                Formula::And(a, b)
                | Formula::Or(a, b)
                | Formula::Xor(a, b)
                | Formula::Implies(a, b) => {
                    walk(a, acc);
                    walk(b, acc);
                }
                Formula::Exists(v, g) | Formula::Forall(v, g) => {
                    acc.insert(v.clone());
                    walk(g, acc);
                }
            }
        }
        let mut acc = BTreeSet::new();
        walk(self, &mut acc);
        acc
    }

    /// Maximal quantifier nesting depth. The distance atom counts as rank 0.
    pub fn quantifier_rank(&self) -> usize {
        match self {
            Formula::True
            | Formula::False
            | Formula::Edge(..)
            | Formula::Color(..)
            | Formula::Eq(..)
            | Formula::Flag(_)
            | Formula::DistLe(..) => 0,
            Formula::Not(g) => g.quantifier_rank(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Xor(a, b)
            | Formula::Implies(a, b) => a.quantifier_rank().max(b.quantifier_rank()),
            Formula::Exists(_, g) | Formula::Forall(_, g) => 1 + g.quantifier_rank(),
        }
    }

    /// Replace free occurrences of variables per `map`. Callers must ensure
    /// no capture; `rewrite_edges` guarantees this by renaming binders to
    /// fresh names first.
    pub(crate) fn substitute(&self, map: &[(String, Term)]) -> Formula {
        fn term(t: &Term, map: &[(String, Term)]) -> Term {
            match t {
                Term::Var(v) => map
                    .iter()
                    .find(|(name, _)| name == v)
                    .map(|(_, repl)| repl.clone())
                    .unwrap_or_else(|| t.clone()),
                Term::Const(_) => t.clone(),
            }
        }
        match self {
            Formula::True | Formula::False | Formula::Flag(_) => self.clone(),
            Formula::Edge(a, b) => Formula::Edge(term(a, map), term(b, map)),
            Formula::Eq(a, b) => Formula::Eq(term(a, map), term(b, map)),
            Formula::DistLe(r, a, b) => Formula::DistLe(*r, term(a, map), term(b, map)),
            Formula::Color(name, t) => Formula::Color(name.clone(), term(t, map)),
            Formula::Not(g) => Formula::not(g.substitute(map)),
            Formula::And(a, b) => Formula::and(a.substitute(map), b.substitute(map)),
            Formula::Or(a, b) => Formula::or(a.substitute(map), b.substitute(map)),
            Formula::Xor(a, b) => Formula::xor(a.substitute(map), b.substitute(map)),
            Formula::Implies(a, b) => Formula::implies(a.substitute(map), b.substitute(map)),
            Formula::Exists(v, g) | Formula::Forall(v, g) => {
                let filtered: Vec<(String, Term)> = map
                    .iter()
                    .filter(|(name, _)| name != v)
                    .cloned()
                    .collect();
                let body = g.substitute(&filtered);
                match self {
                    Formula::Exists(..) => Formula::exists(v, body),
                    _ => Formula::forall(v, body),
                }
            }
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Formula::Exists(..) | Formula::Forall(..) => 0,
            Formula::Implies(..) => 1,
            Formula::Xor(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            Formula::Not(..) => 5,
            _ => 6,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.prec() < min {
            write!(f, "(")?;
            self.fmt_prec(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Edge(a, b) => write!(f, "E({a},{b})"),
            Formula::Color(name, t) => write!(f, "U_{name}({t})"),
            Formula::Eq(a, b) => write!(f, "{a}={b}"),
            Formula::Flag(name) => write!(f, "flag({name})"),
            Formula::DistLe(r, a, b) => write!(f, "dist<={r}({a},{b})"),
            Formula::Not(g) => {
                write!(f, "~")?;
                g.fmt_prec(f, 5)
            }
            Formula::And(a, b) => {
                a.fmt_prec(f, 4)?;
                write!(f, " & ")?;
                b.fmt_prec(f, 5)
            }
            Formula::Or(a, b) => {
                a.fmt_prec(f, 3)?;
                write!(f, " | ")?;
                b.fmt_prec(f, 4)
            }
            Formula::Xor(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, " ^ ")?;
                b.fmt_prec(f, 3)
            }
            Formula::Implies(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, " -> ")?;
                b.fmt_prec(f, 1)
            }
            Formula::Exists(v, g) => {
                write!(f, "exists {v}. ")?;
                g.fmt_prec(f, 0)
            }
            Formula::Forall(v, g) => {
                write!(f, "forall {v}. ")?;
                g.fmt_prec(f, 0)
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantifier_rank_examples() {
        assert_eq!(Formula::parse("E(x,y)").unwrap().quantifier_rank(), 0);
        assert_eq!(
            Formula::parse("exists x. exists y. E(x,y)")
                .unwrap()
                .quantifier_rank(),
            2
        );
        // the square formula has rank 1
        let sq = Formula::parse("E(x,y) | exists z. (E(x,z) & E(z,y))").unwrap();
        assert_eq!(sq.quantifier_rank(), 1);
    }

    #[test]
    fn free_vars_respect_binders() {
        let f = Formula::parse("exists x. (E(x,y) & U_red(@c))").unwrap();
        assert_eq!(
            f.free_vars().into_iter().collect::<Vec<_>>(),
            vec!["y".to_string()]
        );
    }

    #[test]
    fn substitute_respects_shadowing() {
        let f = Formula::parse("E(x,y) & exists x. E(x,y)").unwrap();
        let sub = f.substitute(&[("x".into(), Term::Const("c".into()))]);
        assert_eq!(sub.to_string(), "E(@c,y) & (exists x. E(x,y))");
    }
}
