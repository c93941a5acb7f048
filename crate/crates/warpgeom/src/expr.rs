//! Closed-form scalar expressions of at most two variables.
//!
//! Standard infix grammar with precedence `^  >  unary -  >  * /  >  + -`,
//! parentheses and call syntax `f(x)` for the built-in functions
//! `sin cos sinh cosh exp sqrt`. Exponents of `^` must be literal constants.
//! Expressions are immutable after parsing and evaluation is pure, so they
//! may be shared freely across threads.

use std::fmt;

use crate::error::{Error, Result};
use crate::jet::Jet2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnaryFn {
    Sin,
    Cos,
    Sinh,
    Cosh,
    Exp,
    Sqrt,
    Neg,
}

impl UnaryFn {
    fn name(self) -> &'static str {
        match self {
            UnaryFn::Sin => "sin",
            UnaryFn::Cos => "cos",
            UnaryFn::Sinh => "sinh",
            UnaryFn::Cosh => "cosh",
            UnaryFn::Exp => "exp",
            UnaryFn::Sqrt => "sqrt",
            UnaryFn::Neg => "-",
        }
    }

    fn from_name(name: &str) -> Option<UnaryFn> {
        Some(match name {
            "sin" => UnaryFn::Sin,
            "cos" => UnaryFn::Cos,
            "sinh" => UnaryFn::Sinh,
            "cosh" => UnaryFn::Cosh,
            "exp" => UnaryFn::Exp,
            "sqrt" => UnaryFn::Sqrt,
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Const(f64),
    Var(usize),
    Unary(UnaryFn, Box<Node>),
    Bin(BinOp, Box<Node>, Box<Node>),
    /// Power with a literal constant exponent.
    Pow(Box<Node>, f64),
}

/// A parsed expression together with its declared variable names.
#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    root: Node,
    vars: Vec<String>,
}

impl Expr {
    /// Build an expression from an already-constructed tree (programmatic
    /// construction; parsing is the usual entry point).
    pub fn from_parts(root: Node, variables: &[&str]) -> Result<Expr> {
        fn check(node: &Node, nvars: usize) -> Result<()> {
            match node {
                Node::Const(c) => {
                    if !c.is_finite() {
                        return Err(Error::NonFinite {
                            context: "constant".into(),
                        });
                    }
                }
                Node::Var(i) => {
                    if *i >= nvars {
                        return Err(Error::UnknownIdent {
                            name: format!("#{i}"),
                            offset: 0,
                        });
                    }
                }
                Node::Unary(_, a) => check(a, nvars)?,
                Node::Bin(_, a, b) => {
                    check(a, nvars)?;
                    check(b, nvars)?;
                }
                Node::Pow(a, e) => {
                    if !e.is_finite() {
                        return Err(Error::NonFinite {
                            context: "exponent".into(),
                        });
                    }
                    check(a, nvars)?;
                }
            }
            Ok(())
        }
        if variables.len() > 3 {
            return Err(Error::Syntax {
                offset: 0,
                msg: "at most three chart variables are supported".into(),
            });
        }
        check(&root, variables.len())?;
        let expr = Expr {
            root,
            vars: variables.iter().map(|s| s.to_string()).collect(),
        };
        expr.check_reference_budget()?;
        Ok(expr)
    }

    /// Parse `source` over the declared variables. Up to three names may be
    /// declared (3-dimensional charts), but any single expression may
    /// reference at most two distinct variables.
    pub fn parse(source: &str, variables: &[&str]) -> Result<Expr> {
        if variables.len() > 3 {
            return Err(Error::Syntax {
                offset: 0,
                msg: "at most three chart variables are supported".into(),
            });
        }
        let vars: Vec<String> = variables.iter().map(|s| s.to_string()).collect();
        let mut p = Parser {
            src: source.as_bytes(),
            pos: 0,
            vars: &vars,
        };
        p.skip_ws();
        if p.pos >= p.src.len() {
            return Err(Error::Syntax {
                offset: 0,
                msg: "empty expression".into(),
            });
        }
        let root = p.parse_sum()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(Error::Syntax {
                offset: p.pos,
                msg: format!("unexpected trailing input `{}`", &source[p.pos..]),
            });
        }
        let expr = Expr { root, vars };
        expr.check_reference_budget()?;
        Ok(expr)
    }

    /// At most two distinct variables may appear in one tree.
    fn check_reference_budget(&self) -> Result<()> {
        fn collect(node: &Node, seen: &mut [bool; 3]) {
            match node {
                Node::Var(i) => seen[*i] = true,
                Node::Unary(_, a) | Node::Pow(a, _) => collect(a, seen),
                Node::Bin(_, a, b) => {
                    collect(a, seen);
                    collect(b, seen);
                }
                Node::Const(_) => {}
            }
        }
        let mut seen = [false; 3];
        collect(&self.root, &mut seen);
        if seen.iter().filter(|&&s| s).count() > 2 {
            return Err(Error::Syntax {
                offset: 0,
                msg: "an expression may reference at most two variables".into(),
            });
        }
        Ok(())
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Evaluate with exact derivatives with respect to the variable at index
    /// `wrt`; the other variable (if any) is held constant.
    pub fn eval_jet2(&self, at: &[f64], wrt: usize) -> Result<Jet2> {
        if at.len() != self.vars.len() {
            return Err(Error::ShapeMismatch(format!(
                "expression takes {} variable(s), got {} value(s)",
                self.vars.len(),
                at.len()
            )));
        }
        let j = eval_node(&self.root, at, wrt)?;
        if !j.is_finite() {
            return Err(Error::NonFinite {
                context: self.to_string(),
            });
        }
        Ok(j)
    }

    /// Plain value evaluation.
    pub fn eval(&self, at: &[f64]) -> Result<f64> {
        Ok(self.eval_jet2(at, usize::MAX)?.v)
    }
}

fn eval_node(node: &Node, at: &[f64], wrt: usize) -> Result<Jet2> {
    Ok(match node {
        Node::Const(c) => Jet2::constant(*c),
        Node::Var(i) => {
            if *i == wrt {
                Jet2::variable(at[*i])
            } else {
                Jet2::constant(at[*i])
            }
        }
        Node::Unary(f, a) => {
            let a = eval_node(a, at, wrt)?;
            match f {
                UnaryFn::Sin => a.sin(),
                UnaryFn::Cos => a.cos(),
                UnaryFn::Sinh => a.sinh(),
                UnaryFn::Cosh => a.cosh(),
                UnaryFn::Exp => a.exp(),
                UnaryFn::Sqrt => a.sqrt()?,
                UnaryFn::Neg => -a,
            }
        }
        Node::Bin(op, a, b) => {
            let a = eval_node(a, at, wrt)?;
            let b = eval_node(b, at, wrt)?;
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => a.div(b)?,
            }
        }
        Node::Pow(a, e) => eval_node(a, at, wrt)?.powc(*e)?,
    })
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a [String],
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn parse_sum(&mut self) -> Result<Node> {
        let mut lhs = self.parse_term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let rhs = self.parse_term()?;
                    lhs = Node::Bin(BinOp::Add, Box::new(lhs), Box::new(rhs));
                }
                Some(b'-') => {
                    self.pos += 1;
                    let rhs = self.parse_term()?;
                    lhs = Node::Bin(BinOp::Sub, Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_term(&mut self) -> Result<Node> {
        let mut lhs = self.parse_unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let rhs = self.parse_unary()?;
                    lhs = Node::Bin(BinOp::Mul, Box::new(lhs), Box::new(rhs));
                }
                Some(b'/') => {
                    self.pos += 1;
                    let rhs = self.parse_unary()?;
                    lhs = Node::Bin(BinOp::Div, Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_unary(&mut self) -> Result<Node> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            let inner = self.parse_unary()?;
            return Ok(Node::Unary(UnaryFn::Neg, Box::new(inner)));
        }
        self.parse_power()
    }

    fn parse_power(&mut self) -> Result<Node> {
        let mut base = self.parse_atom()?;
        while self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.parse_const_exponent()?;
            base = Node::Pow(Box::new(base), e);
        }
        Ok(base)
    }

    /// Exponent must be a (possibly negated, possibly parenthesised) literal.
    fn parse_const_exponent(&mut self) -> Result<f64> {
        let start = self.pos;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.parse_const_exponent()?;
                if self.peek() != Some(b')') {
                    return Err(Error::Syntax {
                        offset: self.pos,
                        msg: "expected `)` after exponent".into(),
                    });
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.parse_const_exponent()?)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let n = self.lex_number()?;
                Ok(n)
            }
            _ => Err(Error::NonConstExponent { offset: start }),
        }
    }

    fn parse_atom(&mut self) -> Result<Node> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.parse_sum()?;
                if self.peek() != Some(b')') {
                    return Err(Error::Syntax {
                        offset: self.pos,
                        msg: "expected `)`".into(),
                    });
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => Ok(Node::Const(self.lex_number()?)),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                let name = self.lex_ident();
                if self.peek() == Some(b'(') {
                    let f = UnaryFn::from_name(&name).ok_or(Error::UnknownFunction {
                        name: name.clone(),
                        offset: start,
                    })?;
                    self.pos += 1;
                    let arg = self.parse_sum()?;
                    if self.peek() != Some(b')') {
                        return Err(Error::Syntax {
                            offset: self.pos,
                            msg: format!("expected `)` to close call to `{name}`"),
                        });
                    }
                    self.pos += 1;
                    Ok(Node::Unary(f, Box::new(arg)))
                } else if let Some(i) = self.vars.iter().position(|v| v == &name) {
                    Ok(Node::Var(i))
                } else if name == "pi" {
                    Ok(Node::Const(std::f64::consts::PI))
                } else {
                    Err(Error::UnknownIdent { name, offset: start })
                }
            }
            Some(c) => Err(Error::Syntax {
                offset: self.pos,
                msg: format!("unexpected character `{}`", c as char),
            }),
            None => Err(Error::Syntax {
                offset: self.pos,
                msg: "unexpected end of input".into(),
            }),
        }
    }

    fn lex_ident(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn lex_number(&mut self) -> Result<f64> {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'.')
        {
            self.pos += 1;
        }
        if self.pos < self.src.len() && (self.src[self.pos] == b'e' || self.src[self.pos] == b'E') {
            let mut k = self.pos + 1;
            if k < self.src.len() && (self.src[k] == b'+' || self.src[k] == b'-') {
                k += 1;
            }
            if k < self.src.len() && self.src[k].is_ascii_digit() {
                self.pos = k;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        text.parse::<f64>().map_err(|_| Error::Syntax {
            offset: start,
            msg: format!("invalid number `{text}`"),
        })
    }
}

// Pretty-printing with minimal parentheses; `parse(print(e))` evaluates
// identically to `e`.

fn prec(node: &Node) -> u8 {
    match node {
        Node::Const(_) | Node::Var(_) => 4,
        Node::Unary(UnaryFn::Neg, _) => 2,
        Node::Unary(..) | Node::Pow(..) => 4,
        Node::Bin(BinOp::Mul | BinOp::Div, ..) => 1,
        Node::Bin(BinOp::Add | BinOp::Sub, ..) => 0,
    }
}

fn fmt_node(node: &Node, out: &mut fmt::Formatter<'_>, vars: &[String]) -> fmt::Result {
    let paren = |n: &Node, min: u8, out: &mut fmt::Formatter<'_>| -> fmt::Result {
        if prec(n) < min {
            write!(out, "(")?;
            fmt_node(n, out, vars)?;
            write!(out, ")")
        } else {
            fmt_node(n, out, vars)
        }
    };
    match node {
        Node::Const(c) => {
            if *c < 0.0 {
                write!(out, "({c})")
            } else {
                write!(out, "{c}")
            }
        }
        Node::Var(i) => write!(out, "{}", vars[*i]),
        Node::Unary(UnaryFn::Neg, a) => {
            write!(out, "-")?;
            paren(a, 2, out)
        }
        Node::Unary(f, a) => {
            write!(out, "{}(", f.name())?;
            fmt_node(a, out, vars)?;
            write!(out, ")")
        }
        Node::Bin(op, a, b) => {
            let (sym, lp, rp) = match op {
                BinOp::Add => ("+", 0, 0),
                BinOp::Sub => ("-", 0, 1),
                BinOp::Mul => ("*", 1, 1),
                BinOp::Div => ("/", 1, 2),
            };
            paren(a, lp, out)?;
            write!(out, " {sym} ")?;
            paren(b, rp.max(lp), out)
        }
        Node::Pow(a, e) => {
            paren(a, 4, out)?;
            if *e < 0.0 {
                write!(out, "^({e})")
            } else {
                write!(out, "^{e}")
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_node(&self.root, f, &self.vars)
    }
}
