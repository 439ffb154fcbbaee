//! A small whitelisted expression language for weights, profiles and metrics.
//!
//! Grammar: numbers, the constants `e` and `pi`, the radial variable `t`
//! (alias `r`), the norm `|x|`, coordinates `x1 x2 x3`, the operators
//! `+ - * / ^`, and the functions `pow log ln exp sqrt abs min max`.
//! In a field context `t`, `r` and `|x|` all denote the Euclidean norm of
//! the point; in a scalar context they denote the argument and coordinates
//! are rejected.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::func::{FieldFn, ScalarFn};
use crate::point::Point;

#[derive(Clone, Debug, PartialEq)]
enum Node {
    Num(f64),
    Radius,
    Coord(usize),
    Neg(Box<Node>),
    Bin(Op, Box<Node>, Box<Node>),
    Call(Func, Vec<Node>),
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Func {
    Pow,
    Log,
    Exp,
    Sqrt,
    Abs,
    Min,
    Max,
}

impl Func {
    fn lookup(name: &str) -> Option<(Func, usize)> {
        Some(match name {
            "pow" => (Func::Pow, 2),
            "log" | "ln" => (Func::Log, 1),
            "exp" => (Func::Exp, 1),
            "sqrt" => (Func::Sqrt, 1),
            "abs" => (Func::Abs, 1),
            "min" => (Func::Min, 2),
            "max" => (Func::Max, 2),
            _ => return None,
        })
    }
}

/// A parsed expression.
#[derive(Clone, PartialEq)]
pub struct Expr {
    source: String,
    root: Node,
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({:?})", self.source)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Norm,
    Op(char),
    LParen,
    RParen,
    Comma,
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '0'..='9' | '.' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                // exponent part, e.g. 1e-3; a bare `e` after a number is not allowed
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    let mut j = i + 1;
                    if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                        j += 1;
                    }
                    if j < chars.len() && chars[j].is_ascii_digit() {
                        i = j;
                        while i < chars.len() && chars[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text: String = chars[start..i].iter().collect();
                let v = text
                    .parse::<f64>()
                    .map_err(|_| Error::Expression(format!("bad number `{text}`")))?;
                out.push(Token::Num(v));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Token::Ident(chars[start..i].iter().collect()));
            }
            '|' => {
                if chars.get(i + 1) == Some(&'x') && chars.get(i + 2) == Some(&'|') {
                    out.push(Token::Norm);
                    i += 3;
                } else {
                    return Err(Error::Expression(
                        "only `|x|` may appear between bars; use abs() otherwise".into(),
                    ));
                }
            }
            '+' | '-' | '*' | '/' | '^' => {
                out.push(Token::Op(c));
                i += 1;
            }
            '(' => {
                out.push(Token::LParen);
                i += 1;
            }
            ')' => {
                out.push(Token::RParen);
                i += 1;
            }
            ',' => {
                out.push(Token::Comma);
                i += 1;
            }
            other => {
                return Err(Error::Expression(format!(
                    "unexpected character `{other}`"
                )))
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, tok: Token) -> Result<()> {
        match self.next() {
            Some(t) if t == tok => Ok(()),
            other => Err(Error::Expression(format!(
                "expected {tok:?}, found {other:?}"
            ))),
        }
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        while let Some(Token::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            let op = if c == '+' { Op::Add } else { Op::Sub };
            lhs = Node::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.unary()?;
        while let Some(Token::Op(c @ ('*' | '/'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.unary()?;
            let op = if c == '*' { Op::Mul } else { Op::Div };
            lhs = Node::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Node> {
        if let Some(Token::Op('-')) = self.peek() {
            self.pos += 1;
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        if let Some(Token::Op('+')) = self.peek() {
            self.pos += 1;
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node> {
        let base = self.atom()?;
        if let Some(Token::Op('^')) = self.peek() {
            self.pos += 1;
            let exp = self.unary()?;
            return Ok(Node::Bin(Op::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node> {
        match self.next() {
            Some(Token::Num(v)) => Ok(Node::Num(v)),
            Some(Token::Norm) => Ok(Node::Radius),
            Some(Token::LParen) => {
                let inner = self.expr()?;
                self.expect(Token::RParen)?;
                Ok(inner)
            }
            Some(Token::Ident(name)) => {
                if let Some(Token::LParen) = self.peek() {
                    let (func, arity) = Func::lookup(&name).ok_or_else(|| {
                        Error::Expression(format!("unknown function `{name}`"))
                    })?;
                    self.pos += 1;
                    let mut args = vec![self.expr()?];
                    while let Some(Token::Comma) = self.peek() {
                        self.pos += 1;
                        args.push(self.expr()?);
                    }
                    self.expect(Token::RParen)?;
                    if args.len() != arity {
                        return Err(Error::Expression(format!(
                            "`{name}` takes {arity} argument(s), got {}",
                            args.len()
                        )));
                    }
                    return Ok(Node::Call(func, args));
                }
                match name.as_str() {
                    "t" | "r" => Ok(Node::Radius),
                    "e" => Ok(Node::Num(std::f64::consts::E)),
                    "pi" => Ok(Node::Num(std::f64::consts::PI)),
                    "x1" => Ok(Node::Coord(0)),
                    "x2" => Ok(Node::Coord(1)),
                    "x3" => Ok(Node::Coord(2)),
                    _ => Err(Error::Expression(format!("unknown identifier `{name}`"))),
                }
            }
            other => Err(Error::Expression(format!("unexpected token {other:?}"))),
        }
    }
}

fn eval(node: &Node, radius: f64, point: Option<&Point>) -> f64 {
    match node {
        Node::Num(v) => *v,
        Node::Radius => radius,
        Node::Coord(i) => point
            .and_then(|p| p.as_slice().get(*i).copied())
            .unwrap_or(f64::NAN),
        Node::Neg(a) => -eval(a, radius, point),
        Node::Bin(op, a, b) => {
            let (a, b) = (eval(a, radius, point), eval(b, radius, point));
            match op {
                Op::Add => a + b,
                Op::Sub => a - b,
                Op::Mul => a * b,
                Op::Div => a / b,
                Op::Pow => pow(a, b),
            }
        }
        Node::Call(f, args) => {
            let a = eval(&args[0], radius, point);
            match f {
                Func::Pow => pow(a, eval(&args[1], radius, point)),
                Func::Log => a.ln(),
                Func::Exp => a.exp(),
                Func::Sqrt => a.sqrt(),
                Func::Abs => a.abs(),
                Func::Min => a.min(eval(&args[1], radius, point)),
                Func::Max => a.max(eval(&args[1], radius, point)),
            }
        }
    }
}

fn pow(a: f64, b: f64) -> f64 {
    if b.fract() == 0.0 && b.abs() < 64.0 {
        a.powi(b as i32)
    } else {
        a.powf(b)
    }
}

fn uses_coords(node: &Node) -> bool {
    match node {
        Node::Coord(_) => true,
        Node::Num(_) | Node::Radius => false,
        Node::Neg(a) => uses_coords(a),
        Node::Bin(_, a, b) => uses_coords(a) || uses_coords(b),
        Node::Call(_, args) => args.iter().any(uses_coords),
    }
}

impl Expr {
    pub fn parse(source: &str) -> Result<Self> {
        let tokens = tokenize(source)?;
        if tokens.is_empty() {
            return Err(Error::Expression("empty expression".into()));
        }
        let mut parser = Parser { tokens, pos: 0 };
        let root = parser.expr()?;
        if parser.pos != parser.tokens.len() {
            return Err(Error::Expression(format!(
                "trailing input after position {}",
                parser.pos
            )));
        }
        Ok(Expr {
            source: source.to_string(),
            root,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn eval_scalar(&self, t: f64) -> f64 {
        eval(&self.root, t, None)
    }

    pub fn eval_point(&self, x: &Point) -> f64 {
        eval(&self.root, x.norm(), Some(x))
    }

    /// Compiles to a function of one variable; fails if coordinates are used.
    pub fn to_scalar(&self) -> Result<ScalarFn> {
        if uses_coords(&self.root) {
            return Err(Error::Expression(format!(
                "`{}` uses coordinates but a function of t was expected",
                self.source
            )));
        }
        let root = self.root.clone();
        Ok(Arc::new(move |t| eval(&root, t, None)))
    }

    pub fn to_field(&self) -> FieldFn {
        let root = self.root.clone();
        Arc::new(move |x: &Point| eval(&root, x.norm(), Some(x)))
    }
}
