//! Recursive-descent parser for the formula grammar.
//!
//! Precedence, loosest first: `->` (right assoc), `^`, `|`, `&`, `~`.
//! Quantifier bodies extend maximally to the right.

use crate::error::{Error, Result};

use super::ast::{Formula, Term};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    LParen,
    RParen,
    Comma,
    Dot,
    At,
    Eq,
    Neq,
    Not,
    And,
    Or,
    Xor,
    Implies,
    Le,
    EdgeSym,
    ColorSym(String),
    Ident(String),
    Int(u32),
    Eof,
}

fn err<T>(offset: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        offset,
        msg: msg.into(),
    })
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '(' => toks.push((Tok::LParen, start)),
            ')' => toks.push((Tok::RParen, start)),
            ',' => toks.push((Tok::Comma, start)),
            '.' => toks.push((Tok::Dot, start)),
            '@' => toks.push((Tok::At, start)),
            '=' => toks.push((Tok::Eq, start)),
            '~' => toks.push((Tok::Not, start)),
            '&' => toks.push((Tok::And, start)),
            '|' => toks.push((Tok::Or, start)),
            '^' => toks.push((Tok::Xor, start)),
            '!' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    toks.push((Tok::Neq, start));
                    i += 1;
                } else {
                    return err(start, "expected '=' after '!'");
                }
            }
            '-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    toks.push((Tok::Implies, start));
                    i += 1;
                } else {
                    return err(start, "expected '>' after '-'");
                }
            }
            '<' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    toks.push((Tok::Le, start));
                    i += 1;
                } else {
                    return err(start, "expected '=' after '<'");
                }
            }
            'E' => toks.push((Tok::EdgeSym, start)),
            'U' => {
                if bytes.get(i + 1) != Some(&b'_') {
                    return err(start, "expected '_' after 'U'");
                }
                i += 2;
                let name_start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                if i == name_start {
                    return err(name_start, "expected color name after 'U_'");
                }
                toks.push((Tok::ColorSym(text[name_start..i].to_string()), start));
                continue;
            }
            'a'..='z' => {
                while i < bytes.len()
                    && (bytes[i].is_ascii_lowercase()
                        || bytes[i].is_ascii_digit()
                        || bytes[i] == b'_')
                {
                    i += 1;
                }
                toks.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let v: u32 = text[start..i]
                    .parse()
                    .map_err(|_| Error::Parse {
                        offset: start,
                        msg: "integer literal out of range".into(),
                    })?;
                toks.push((Tok::Int(v), start));
                continue;
            }
            other => return err(start, format!("unexpected character '{other}'")),
        }
        i += 1;
    }
    toks.push((Tok::Eof, bytes.len()));
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            err(self.offset(), format!("expected {what}"))
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let lhs = self.xor_chain()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.formula()?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn xor_chain(&mut self) -> Result<Formula> {
        let mut acc = self.or_chain()?;
        while *self.peek() == Tok::Xor {
            self.bump();
            acc = Formula::xor(acc, self.or_chain()?);
        }
        Ok(acc)
    }

    fn or_chain(&mut self) -> Result<Formula> {
        let mut acc = self.and_chain()?;
        while *self.peek() == Tok::Or {
            self.bump();
            acc = Formula::or(acc, self.and_chain()?);
        }
        Ok(acc)
    }

    fn and_chain(&mut self) -> Result<Formula> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Ident(name) if name == "exists" || name == "forall" => {
                let is_exists = name == "exists";
                self.bump();
                let var = self.var_name()?;
                self.expect(Tok::Dot, "'.' after quantified variable")?;
                let body = self.formula()?;
                Ok(if is_exists {
                    Formula::exists(&var, body)
                } else {
                    Formula::forall(&var, body)
                })
            }
            _ => self.atom(),
        }
    }

    fn var_name(&mut self) -> Result<String> {
        let off = self.offset();
        match self.bump() {
            Tok::Ident(name) => {
                if matches!(name.as_str(), "exists" | "forall" | "flag" | "dist" | "true" | "false")
                {
                    err(off, format!("'{name}' is a keyword, not a variable"))
                } else {
                    Ok(name)
                }
            }
            _ => err(off, "expected variable name"),
        }
    }

    fn term(&mut self) -> Result<Term> {
        match self.peek().clone() {
            Tok::At => {
                self.bump();
                let off = self.offset();
                match self.bump() {
                    Tok::Ident(name) => Ok(Term::Const(name)),
                    _ => err(off, "expected constant name after '@'"),
                }
            }
            Tok::Ident(_) => Ok(Term::Var(self.var_name()?)),
            _ => err(self.offset(), "expected term"),
        }
    }

    fn pair_args(&mut self) -> Result<(Term, Term)> {
        self.expect(Tok::LParen, "'('")?;
        let a = self.term()?;
        self.expect(Tok::Comma, "','")?;
        let b = self.term()?;
        self.expect(Tok::RParen, "')'")?;
        Ok((a, b))
    }

    fn atom(&mut self) -> Result<Formula> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(f)
            }
            Tok::EdgeSym => {
                self.bump();
                let (a, b) = self.pair_args()?;
                Ok(Formula::Edge(a, b))
            }
            Tok::ColorSym(name) => {
                self.bump();
                self.expect(Tok::LParen, "'('")?;
                let t = self.term()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(Formula::Color(name, t))
            }
            Tok::Ident(name) if name == "true" => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::Ident(name) if name == "false" => {
                self.bump();
                Ok(Formula::False)
            }
            Tok::Ident(name) if name == "flag" => {
                self.bump();
                self.expect(Tok::LParen, "'('")?;
                let off = self.offset();
                let flag = match self.bump() {
                    Tok::Ident(n) => n,
                    _ => return err(off, "expected flag name"),
                };
                self.expect(Tok::RParen, "')'")?;
                Ok(Formula::Flag(flag))
            }
            Tok::Ident(name) if name == "dist" => {
                self.bump();
                self.expect(Tok::Le, "'<=' after 'dist'")?;
                let off = self.offset();
                let r = match self.bump() {
                    Tok::Int(r) => r,
                    _ => return err(off, "expected integer bound"),
                };
                let (a, b) = self.pair_args()?;
                Ok(Formula::DistLe(r, a, b))
            }
            Tok::Ident(_) | Tok::At => {
                let a = self.term()?;
                let off = self.offset();
                match self.bump() {
                    Tok::Eq => Ok(Formula::Eq(a, self.term()?)),
                    Tok::Neq => Ok(Formula::not(Formula::Eq(a, self.term()?))),
                    _ => err(off, "expected '=' or '!=' after term"),
                }
            }
            _ => err(self.offset(), "expected formula"),
        }
    }
}

pub fn parse(text: &str) -> Result<Formula> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return err(p.offset(), "unexpected trailing input");
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn edge_atom() {
        assert_eq!(
            parse("E(x,y)").unwrap(),
            Formula::Edge(Term::Var("x".into()), Term::Var("y".into()))
        );
    }

    #[test]
    fn rank_two_sentence() {
        let f = parse("exists x. forall y. (x=y | E(x,y))").unwrap();
        assert_eq!(f.quantifier_rank(), 2);
        assert!(f.free_vars().is_empty());
    }

    #[test]
    fn error_offset() {
        match parse("E(x,") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn precedence_chain() {
        // ~ binds tighter than &, & tighter than |, | tighter than ^, ^ tighter than ->
        let f = parse("~x=y & E(x,y) | x=y ^ flag(a) -> true").unwrap();
        let expect = Formula::implies(
            Formula::xor(
                Formula::or(
                    Formula::and(
                        Formula::not(Formula::Eq(Term::Var("x".into()), Term::Var("y".into()))),
                        Formula::Edge(Term::Var("x".into()), Term::Var("y".into())),
                    ),
                    Formula::Eq(Term::Var("x".into()), Term::Var("y".into())),
                ),
                Formula::Flag("a".into()),
            ),
            Formula::True,
        );
        assert_eq!(f, expect);
    }

    #[test]
    fn quantifier_scope_is_maximal() {
        let f = parse("exists x. E(x,y) & x=y").unwrap();
        match f {
            Formula::Exists(_, body) => {
                assert!(matches!(*body, Formula::And(..)));
            }
            other => panic!("expected exists at top, got {other:?}"),
        }
    }

    #[test]
    fn dist_atom() {
        let f = parse("dist<=3(x,@c0)").unwrap();
        assert_eq!(
            f,
            Formula::DistLe(3, Term::Var("x".into()), Term::Const("c0".into()))
        );
    }

    #[test]
    fn not_equal_sugar() {
        assert_eq!(
            parse("x!=y").unwrap(),
            Formula::not(Formula::Eq(Term::Var("x".into()), Term::Var("y".into())))
        );
    }

    fn arb_term() -> impl Strategy<Value = Term> {
        prop_oneof![
            prop_oneof![Just("x"), Just("y"), Just("z"), Just("w1")]
                .prop_map(|s| Term::Var(s.to_string())),
            prop_oneof![Just("c0"), Just("c1")].prop_map(|s| Term::Const(s.to_string())),
        ]
    }

    fn arb_formula() -> impl Strategy<Value = Formula> {
        let leaf = prop_oneof![
            Just(Formula::True),
            Just(Formula::False),
            (arb_term(), arb_term()).prop_map(|(a, b)| Formula::Edge(a, b)),
            (arb_term(), arb_term()).prop_map(|(a, b)| Formula::Eq(a, b)),
            arb_term().prop_map(|t| Formula::Color("red".into(), t)),
            Just(Formula::Flag("f1".into())),
            (0u32..5, arb_term(), arb_term()).prop_map(|(r, a, b)| Formula::DistLe(r, a, b)),
        ];
        leaf.prop_recursive(4, 24, 3, |inner| {
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::xor(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
                (prop_oneof![Just("x"), Just("y"), Just("z")], inner.clone())
                    .prop_map(|(v, g)| Formula::exists(v, g)),
                (prop_oneof![Just("x"), Just("y"), Just("z")], inner)
                    .prop_map(|(v, g)| Formula::forall(v, g)),
            ]
        })
    }

    proptest! {
        #[test]
        fn pretty_print_roundtrips(f in arb_formula()) {
            let printed = f.to_string();
            let reparsed = parse(&printed).unwrap();
            prop_assert_eq!(reparsed, f);
        }
    }
}
