//! Relations as nested superbrackets with integer coefficients.
//!
//! ```text
//! relation := expr ['=' expr]
//! expr     := term (('+'|'-') term)*
//! term     := ['-'] [uint '*'] atom
//! atom     := '0' | name | '[' expr ',' expr ']' | 'ad(' expr ')' ['^' uint] '(' expr ')' | '(' expr ')'
//! ```
//!
//! [`fmt::Display`] prints the canonical form, and parsing it gives back
//! the same tree.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::divided::Parity;
use crate::field::PrimeField;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unbound generator `{0}`")]
    Unbound(String),
    #[error("`{0}` is not homogeneous")]
    Inhomogeneous(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Gen(String),
    Bracket(Box<Expr>, Box<Expr>),
    /// `ad(x)^k(y) = [x, [x, ... [x, y]]]`.
    Ad {
        x: Box<Expr>,
        power: u32,
        y: Box<Expr>,
    },
    /// Linear combination. The empty sum is `0`.
    Sum(Vec<(i64, Expr)>),
}

impl Expr {
    pub fn gen(name: &str) -> Self {
        Expr::Gen(name.to_string())
    }

    pub fn bracket(a: Expr, b: Expr) -> Self {
        Expr::Bracket(Box::new(a), Box::new(b))
    }

    pub fn zero() -> Self {
        Expr::Sum(Vec::new())
    }

    pub fn is_zero_literal(&self) -> bool {
        matches!(self, Expr::Sum(t) if t.is_empty())
    }

    /// Whether printing and parsing gives back this exact tree: no sum
    /// consists of a single term with coefficient 1.
    pub fn is_canonical(&self) -> bool {
        match self {
            Expr::Gen(_) => true,
            Expr::Bracket(a, b) => a.is_canonical() && b.is_canonical(),
            Expr::Ad { x, power, y } => *power >= 1 && x.is_canonical() && y.is_canonical(),
            Expr::Sum(t) => !(t.len() == 1 && t[0].0 == 1) && t.iter().all(|(_, e)| e.is_canonical()),
        }
    }

    /// `(degree, parity)` when homogeneous. `None` for the zero literal.
    pub fn weight(&self, gens: &BTreeMap<String, (i64, Parity)>) -> Result<Option<(i64, Parity)>, DslError> {
        let pair = |a: Option<(i64, Parity)>, b: Option<(i64, Parity)>| match (a, b) {
            (Some((d, p)), Some((e, q))) => Some((d + e, p.add(q))),
            _ => None,
        };
        match self {
            Expr::Gen(n) => gens
                .get(n)
                .copied()
                .map(Some)
                .ok_or_else(|| DslError::Unbound(n.clone())),
            Expr::Bracket(a, b) => Ok(pair(a.weight(gens)?, b.weight(gens)?)),
            Expr::Ad { x, power, y } => {
                let mut w = y.weight(gens)?;
                let wx = x.weight(gens)?;
                for _ in 0..*power {
                    w = pair(wx, w);
                }
                Ok(w)
            }
            Expr::Sum(terms) => {
                let mut out = None;
                for (_, e) in terms {
                    match (out, e.weight(gens)?) {
                        (_, None) => {}
                        (None, w) => out = w,
                        (Some(a), Some(b)) if a == b => {}
                        _ => return Err(DslError::Inhomogeneous(self.to_string())),
                    }
                }
                Ok(out)
            }
        }
    }

    /// Evaluates in `alg` with the generators bound by `env`.
    pub fn eval<F: PrimeField, A: LieSuper<F>>(
        &self,
        alg: &A,
        env: &BTreeMap<String, A::Elem>,
    ) -> Result<A::Elem, DslError> {
        match self {
            Expr::Gen(n) => env.get(n).cloned().ok_or_else(|| DslError::Unbound(n.clone())),
            Expr::Bracket(a, b) => Ok(alg.bracket(&a.eval(alg, env)?, &b.eval(alg, env)?)),
            Expr::Ad { x, power, y } => {
                let x = x.eval(alg, env)?;
                let mut v = y.eval(alg, env)?;
                for _ in 0..*power {
                    v = alg.bracket(&x, &v);
                }
                Ok(v)
            }
            Expr::Sum(terms) => {
                let mut acc = alg.zero();
                for (c, e) in terms {
                    alg.add_scaled(&mut acc, &e.eval(alg, env)?, F::from_i64(*c));
                }
                Ok(acc)
            }
        }
    }
}

/// A Lie superalgebra in which relations can be evaluated.
pub trait LieSuper<F: PrimeField> {
    type Elem: Clone;
    fn zero(&self) -> Self::Elem;
    fn bracket(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn add_scaled(&self, acc: &mut Self::Elem, x: &Self::Elem, c: F);
    fn is_zero(&self, x: &Self::Elem) -> bool;
}

/// `lhs = rhs`, read as the element `lhs - rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub lhs: Expr,
    pub rhs: Expr,
}

impl Relation {
    pub fn new(lhs: Expr, rhs: Expr) -> Self {
        Relation { lhs, rhs }
    }

    /// `lhs - rhs` as one expression.
    pub fn element(&self) -> Expr {
        if self.rhs.is_zero_literal() {
            self.lhs.clone()
        } else {
            Expr::Sum(vec![(1, self.lhs.clone()), (-1, self.rhs.clone())])
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Gen(n) => write!(f, "{n}"),
            Expr::Bracket(a, b) => write!(f, "[{a}, {b}]"),
            Expr::Ad { x, power, y } => {
                if *power == 1 {
                    write!(f, "ad({x})({y})")
                } else {
                    write!(f, "ad({x})^{power}({y})")
                }
            }
            Expr::Sum(terms) => {
                if terms.is_empty() {
                    return write!(f, "0");
                }
                for (i, (c, e)) in terms.iter().enumerate() {
                    let body = match e {
                        Expr::Sum(_) => format!("({e})"),
                        _ => e.to_string(),
                    };
                    let (neg, a) = (*c < 0, c.unsigned_abs());
                    match (i, neg) {
                        (0, false) => {}
                        (0, true) => write!(f, "-")?,
                        (_, false) => write!(f, " + ")?,
                        (_, true) => write!(f, " - ")?,
                    }
                    if a == 1 {
                        write!(f, "{body}")?;
                    } else {
                        write!(f, "{a}*{body}")?;
                    }
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

impl std::str::FromStr for Expr {
    type Err = DslError;
    fn from_str(s: &str) -> Result<Self, DslError> {
        let mut p = Parser {
            s: s.as_bytes(),
            pos: 0,
        };
        let e = p.expr()?;
        p.end()?;
        Ok(e)
    }
}

impl std::str::FromStr for Relation {
    type Err = DslError;
    fn from_str(s: &str) -> Result<Self, DslError> {
        let mut p = Parser {
            s: s.as_bytes(),
            pos: 0,
        };
        let lhs = p.expr()?;
        let rhs = if p.eat(b'=') { p.expr()? } else { Expr::zero() };
        p.end()?;
        Ok(Relation { lhs, rhs })
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T, DslError> {
        Err(DslError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), DslError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(&format!("expected `{}`", c as char))
        }
    }

    fn end(&mut self) -> Result<(), DslError> {
        if self.peek().is_some() {
            self.err("trailing input")
        } else {
            Ok(())
        }
    }

    fn uint(&mut self) -> Result<u64, DslError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii");
        match text.parse() {
            Ok(v) => Ok(v),
            Err(_) => {
                self.pos = start;
                self.err("expected an integer")
            }
        }
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        let ok_first = |c: u8| c.is_ascii_alphabetic() || c == b'_';
        if self.pos < self.s.len() && ok_first(self.s[self.pos]) {
            self.pos += 1;
            while self.pos < self.s.len()
                && (self.s[self.pos].is_ascii_alphanumeric() || b"_'".contains(&self.s[self.pos]))
            {
                self.pos += 1;
            }
            Some(String::from_utf8(self.s[start..self.pos].to_vec()).expect("ascii"))
        } else {
            None
        }
    }

    fn expr(&mut self) -> Result<Expr, DslError> {
        let mut terms = vec![self.term(false)?];
        loop {
            if self.eat(b'+') {
                terms.push(self.term(false)?);
            } else if self.peek() == Some(b'-') {
                terms.push(self.term(true)?);
            } else {
                break;
            }
        }
        if terms.len() == 1 && terms[0].0 == 1 {
            return Ok(terms.pop().expect("one term").1);
        }
        Ok(Expr::Sum(terms))
    }

    fn term(&mut self, after_op: bool) -> Result<(i64, Expr), DslError> {
        let neg = self.eat(b'-');
        debug_assert!(!after_op || neg);
        let mut c = 1i64;
        if self.peek().is_some_and(|b| b.is_ascii_digit()) {
            let save = self.pos;
            let v = self.uint()?;
            if self.eat(b'*') {
                c = i64::try_from(v).or_else(|_| self.err("coefficient too large"))?;
            } else if v == 0 {
                self.pos = save;
                self.uint()?;
                return Ok((if neg { -1 } else { 1 }, Expr::zero()));
            } else {
                self.pos = save;
                return self.err("a coefficient needs `*`");
            }
        }
        let a = self.atom()?;
        Ok((if neg { -c } else { c }, a))
    }

    fn atom(&mut self) -> Result<Expr, DslError> {
        match self.peek() {
            Some(b'[') => {
                self.pos += 1;
                let a = self.expr()?;
                self.expect(b',')?;
                let b = self.expr()?;
                self.expect(b']')?;
                Ok(Expr::bracket(a, b))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(_) => {
                let Some(name) = self.ident() else {
                    return self.err("expected a generator, bracket or `ad`");
                };
                if name == "ad" && self.peek() == Some(b'(') {
                    self.pos += 1;
                    let x = self.expr()?;
                    self.expect(b')')?;
                    let power = if self.eat(b'^') {
                        let v = self.uint()?;
                        u32::try_from(v)
                            .ok()
                            .filter(|&k| k >= 1)
                            .map_or_else(|| self.err("bad power"), Ok)?
                    } else {
                        1
                    };
                    self.expect(b'(')?;
                    let y = self.expr()?;
                    self.expect(b')')?;
                    return Ok(Expr::Ad {
                        x: Box::new(x),
                        power,
                        y: Box::new(y),
                    });
                }
                Ok(Expr::Gen(name))
            }
            None => self.err("unexpected end"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_nested_brackets_and_powers() {
        let r: Relation = "[[x2, [x1, x2]], [x2, [x1, x2]]] = 2*[[x1, x2], [[x1, x2], [x2, x2]]]"
            .parse()
            .unwrap();
        assert!(matches!(r.lhs, Expr::Bracket(..)));
        assert!(matches!(&r.rhs, Expr::Sum(t) if t.len() == 1 && t[0].0 == 2));
        let e: Expr = "ad(x2)^3(x1)".parse().unwrap();
        assert_eq!(
            e,
            Expr::Ad {
                x: Box::new(Expr::gen("x2")),
                power: 3,
                y: Box::new(Expr::gen("x1"))
            }
        );
        let e: Expr = "[x2, [x1, [x1, x2]]] - [[x1, x2], [x1, x2]]".parse().unwrap();
        assert!(matches!(&e, Expr::Sum(t) if t[1].0 == -1));
    }

    #[test]
    fn relation_without_right_side_is_zero() {
        let r: Relation = "[x1, x1]".parse().unwrap();
        assert!(r.rhs.is_zero_literal());
        assert_eq!(r.to_string(), "[x1, x1] = 0");
        assert_eq!(r.to_string().parse::<Relation>().unwrap(), r);
    }

    #[test]
    fn rejects_bad_input() {
        for s in ["[x1 x2]", "3 x1", "ad(x1)^0(x2)", "x1 +", "[x1, x2]]"] {
            assert!(s.parse::<Expr>().is_err(), "{s}");
        }
    }

    #[test]
    fn weights_and_homogeneity() {
        let gens: BTreeMap<String, (i64, Parity)> = [
            ("x1".to_string(), (1, Parity::Odd)),
            ("x2".to_string(), (2, Parity::Even)),
        ]
        .into();
        let e: Expr = "ad(x1)^2(x2)".parse().unwrap();
        assert_eq!(e.weight(&gens).unwrap(), Some((4, Parity::Even)));
        let bad: Expr = "x1 + x2".parse().unwrap();
        assert!(matches!(bad.weight(&gens), Err(DslError::Inhomogeneous(_))));
        let unbound: Expr = "[x1, y]".parse().unwrap();
        assert_eq!(unbound.weight(&gens), Err(DslError::Unbound("y".into())));
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![Just(Expr::gen("x1")), Just(Expr::gen("x2")), Just(Expr::gen("H1'"))];
        leaf.prop_recursive(4, 24, 3, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::bracket(a, b)),
                (inner.clone(), 1u32..5, inner.clone()).prop_map(|(x, power, y)| Expr::Ad {
                    x: Box::new(x),
                    power,
                    y: Box::new(y)
                }),
                prop::collection::vec((-4i64..5, inner), 0..4).prop_map(Expr::Sum),
            ]
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn display_round_trips(e in arb_expr().prop_filter("canonical", Expr::is_canonical)) {
            let text = e.to_string();
            prop_assert_eq!(text.parse::<Expr>().unwrap(), e);
        }
    }
}
