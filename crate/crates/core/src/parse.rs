//! Text syntax for polynomials and vector fields.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := atom ['^' ( '(' int ')' | int )]
//! atom   := int | name | 'd' name | 'd' index | label | '(' expr ')' | '[' expr ',' expr ']'
//! ```
//!
//! `x^(k)` is always the divided power. Plain `x^k` is read according to
//! [`PowerMode`]. `d<name>` (or `d<i>`, 1-based) is the partial derivative.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::divided::{SuperPolynomial, VariableSpec};
use crate::field::PrimeField;
use crate::vectorfield::{bracket, VectorField};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown name `{0}`")]
    Unknown(String),
    #[error("type error: {0}")]
    Type(String),
    #[error("exponent {exp} of `{var}` exceeds its height")]
    Exponent { var: String, exp: u32 },
}

/// How plain `x^k` is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Deserialize, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PowerMode {
    /// `x^k` is the divided power `x^(k)`.
    #[default]
    Divided,
    /// `x^k` is the ordinary power `k! x^(k)`.
    Ordinary,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Int(i64),
    Name(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow { base: Box<Expr>, exp: u32, divided: bool },
    Bracket(Box<Expr>, Box<Expr>),
}

impl Expr {
    /// Every identifier in the expression.
    pub fn names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect(&mut out);
        out
    }

    fn collect(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Int(_) => {}
            Expr::Name(n) => {
                out.insert(n.clone());
            }
            Expr::Neg(a) => a.collect(out),
            Expr::Pow { base, .. } => base.collect(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Bracket(a, b) => {
                a.collect(out);
                b.collect(out);
            }
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{}`", c as char))
        }
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .or_else(|_| self.err("integer too large"))
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = if self.eat(b'-') {
            Expr::Neg(Box::new(self.term()?))
        } else {
            self.eat(b'+');
            self.term()?
        };
        loop {
            if self.eat(b'+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat(b'*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
            } else if self.eat(b'/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let (exp, divided) = if self.eat(b'(') {
            let e = self.int()?;
            self.expect(b')')?;
            (e, true)
        } else {
            (self.int()?, false)
        };
        let exp = u32::try_from(exp).or_else(|_| self.err("exponent too large"))?;
        Ok(Expr::Pow {
            base: Box::new(base),
            exp,
            divided,
        })
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(b'[') => {
                self.pos += 1;
                let a = self.expr()?;
                self.expect(b',')?;
                let b = self.expr()?;
                self.expect(b']')?;
                Ok(Expr::Bracket(Box::new(a), Box::new(b)))
            }
            Some(c) if c.is_ascii_digit() => Ok(Expr::Int(self.int()?)),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || matches!(self.src[self.pos], b'_' | b'\''))
                {
                    self.pos += 1;
                }
                Ok(Expr::Name(
                    String::from_utf8_lossy(&self.src[start..self.pos]).into_owned(),
                ))
            }
            _ => self.err("expected a term"),
        }
    }
}

pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value<F: PrimeField> {
    Scalar(F),
    Poly(SuperPolynomial<F>),
    Field(VectorField<F>),
}

/// Name resolution for [`eval`].
pub struct Scope<'a, F> {
    pub spec: &'a VariableSpec,
    pub power: PowerMode,
    pub labels: &'a HashMap<String, VectorField<F>>,
}

impl<'a, F: PrimeField> Scope<'a, F> {
    fn lookup(&self, name: &str) -> Result<Value<F>, ParseError> {
        if let Some(i) = self.spec.index_of(name) {
            let m = self
                .spec
                .variable_power(i, 1)
                .map_err(|e| ParseError::Type(e.to_string()))?;
            return Ok(Value::Poly(SuperPolynomial::monomial(m, F::one())));
        }
        if let Some(x) = self.labels.get(name) {
            return Ok(Value::Field(x.clone()));
        }
        if let Some(rest) = name.strip_prefix('d') {
            if let Some(i) = self.spec.index_of(rest) {
                return Ok(Value::Field(VectorField::partial(self.spec, i)));
            }
            if let Ok(i) = rest.parse::<usize>() {
                if i >= 1 && i <= self.spec.len() {
                    return Ok(Value::Field(VectorField::partial(self.spec, i - 1)));
                }
            }
        }
        Err(ParseError::Unknown(name.to_string()))
    }

    fn as_poly(&self, v: Value<F>) -> Result<SuperPolynomial<F>, ParseError> {
        match v {
            Value::Scalar(c) => Ok(SuperPolynomial::constant(self.spec, c)),
            Value::Poly(p) => Ok(p),
            Value::Field(_) => Err(ParseError::Type("expected a function, found a vector field".into())),
        }
    }
}

fn left_multiply<F: PrimeField>(spec: &VariableSpec, f: &SuperPolynomial<F>, x: &VectorField<F>) -> VectorField<F> {
    let mut out = VectorField::zero();
    for (i, comp) in x.components() {
        out.add_scaled(&VectorField::from_component(&spec.multiply(f, &comp), i), F::one());
    }
    out
}

pub fn eval<F: PrimeField>(e: &Expr, scope: &Scope<'_, F>) -> Result<Value<F>, ParseError> {
    use Value::*;
    Ok(match e {
        Expr::Int(n) => Scalar(F::from_i64(*n)),
        Expr::Name(n) => scope.lookup(n)?,
        Expr::Neg(a) => match eval(a, scope)? {
            Scalar(c) => Scalar(-c),
            Poly(p) => Poly(p.scale(-F::one())),
            Field(x) => Field(x.scale(-F::one())),
        },
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let s = if matches!(e, Expr::Sub(..)) {
                -F::one()
            } else {
                F::one()
            };
            match (eval(a, scope)?, eval(b, scope)?) {
                (Scalar(x), Scalar(y)) => Scalar(x + s * y),
                (Field(x), Field(y)) => {
                    let mut z = x;
                    z.add_scaled(&y, s);
                    Field(z)
                }
                (Field(_), _) | (_, Field(_)) => {
                    return Err(ParseError::Type("cannot add a function and a vector field".into()))
                }
                (x, y) => {
                    let mut p = scope.as_poly(x)?;
                    p.add_assign_scaled(&scope.as_poly(y)?, s);
                    Poly(p)
                }
            }
        }
        Expr::Mul(a, b) => match (eval(a, scope)?, eval(b, scope)?) {
            (Scalar(x), Scalar(y)) => Scalar(x * y),
            (Scalar(c), Poly(p)) | (Poly(p), Scalar(c)) => Poly(p.scale(c)),
            (Scalar(c), Field(x)) | (Field(x), Scalar(c)) => Field(x.scale(c)),
            (Poly(p), Poly(q)) => Poly(scope.spec.multiply(&p, &q)),
            (Poly(p), Field(x)) => Field(left_multiply(scope.spec, &p, &x)),
            (Field(_), _) => {
                return Err(ParseError::Type(
                    "vector fields can only be multiplied on the left".into(),
                ))
            }
        },
        Expr::Div(a, b) => {
            let d = match eval(b, scope)? {
                Scalar(d) => d.inv().ok_or_else(|| ParseError::Type("division by zero".into()))?,
                _ => return Err(ParseError::Type("only division by integers is allowed".into())),
            };
            match eval(a, scope)? {
                Scalar(c) => Scalar(c * d),
                Poly(p) => Poly(p.scale(d)),
                Field(x) => Field(x.scale(d)),
            }
        }
        Expr::Pow { base, exp, divided } => {
            let v = eval(base, scope)?;
            let var = match (&**base, &v) {
                (Expr::Name(n), Poly(_)) => scope.spec.index_of(n),
                _ => None,
            };
            if let Scalar(c) = v {
                Scalar(c.pow(*exp as u64))
            } else if *divided || scope.power == PowerMode::Divided {
                let i = var.ok_or_else(|| ParseError::Type("divided powers apply to variables only".into()))?;
                let m = scope.spec.variable_power(i, *exp).map_err(|_| ParseError::Exponent {
                    var: scope.spec.var(i).name.clone(),
                    exp: *exp,
                })?;
                Poly(SuperPolynomial::monomial(m, F::one()))
            } else {
                let p = scope.as_poly(v)?;
                let mut acc = SuperPolynomial::constant(scope.spec, F::one());
                for _ in 0..*exp {
                    acc = scope.spec.multiply(&acc, &p);
                }
                Poly(acc)
            }
        }
        Expr::Bracket(a, b) => match (eval(a, scope)?, eval(b, scope)?) {
            (Field(x), Field(y)) => Field(bracket(scope.spec, &x, &y)),
            _ => return Err(ParseError::Type("brackets need two vector fields".into())),
        },
    })
}

pub fn parse_field<F: PrimeField>(src: &str, scope: &Scope<'_, F>) -> Result<VectorField<F>, ParseError> {
    match eval(&parse_expr(src)?, scope)? {
        Value::Field(x) => Ok(x),
        Value::Scalar(c) if c.is_zero() => Ok(VectorField::zero()),
        _ => Err(ParseError::Type(format!("`{src}` is not a vector field"))),
    }
}

pub fn parse_poly<F: PrimeField>(src: &str, scope: &Scope<'_, F>) -> Result<SuperPolynomial<F>, ParseError> {
    let v = eval(&parse_expr(src)?, scope)?;
    scope.as_poly(v)
}

/// Evaluates labelled definitions that may refer to each other in any order.
pub fn resolve_labels<F: PrimeField>(
    spec: &VariableSpec,
    power: PowerMode,
    defs: &[(String, String)],
) -> Result<HashMap<String, VectorField<F>>, ParseError> {
    resolve_labels_with(spec, power, HashMap::new(), defs)
}

/// Like [`resolve_labels`], with some labels already known.
pub fn resolve_labels_with<F: PrimeField>(
    spec: &VariableSpec,
    power: PowerMode,
    known: HashMap<String, VectorField<F>>,
    defs: &[(String, String)],
) -> Result<HashMap<String, VectorField<F>>, ParseError> {
    let parsed: Vec<(String, Expr)> = defs
        .iter()
        .map(|(l, s)| parse_expr(s).map(|e| (l.clone(), e)))
        .collect::<Result<_, _>>()?;
    let labels_defined: BTreeSet<&str> = parsed.iter().map(|(l, _)| l.as_str()).collect();
    let mut done = known;
    let mut pending: Vec<&(String, Expr)> = parsed.iter().collect();
    while !pending.is_empty() {
        let before = pending.len();
        let mut rest = Vec::new();
        for item in pending {
            let ready = item
                .1
                .names()
                .iter()
                .all(|n| !labels_defined.contains(n.as_str()) || done.contains_key(n) || n == &item.0);
            if !ready {
                rest.push(item);
                continue;
            }
            let scope = Scope {
                spec,
                power,
                labels: &done,
            };
            let v = match eval(&item.1, &scope)? {
                Value::Field(x) => x,
                _ => return Err(ParseError::Type(format!("label `{}` is not a vector field", item.0))),
            };
            done.insert(item.0.clone(), v);
        }
        if rest.len() == before {
            return Err(ParseError::Unknown(format!(
                "cyclic definitions: {}",
                rest.iter().map(|r| r.0.as_str()).collect::<Vec<_>>().join(", ")
            )));
        }
        pending = rest;
    }
    Ok(done)
}
