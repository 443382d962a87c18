//! A small analytic-expression language: parse, evaluate, differentiate.
//!
//! The grammar is fixed and closed. It covers polynomial, trigonometric,
//! hyperbolic, exponential and square-root constructs in a declared set
//! of variables, which is everything the surface-pencil construction
//! needs for curves, marching-scale functions and λ(s).
//!
//! Expressions are immutable after parse and evaluation is pure, so they
//! may be evaluated concurrently from any number of threads.
//!
//! ```
//! use lorentz_pencil::expr::Expr;
//!
//! let e = Expr::parse("sinh(s/2)", &["s"]).unwrap();
//! assert_eq!(e.eval(&[("s", 0.0)]).unwrap(), 0.0);
//! let d = e.derivative("s");
//! assert!((d.eval(&[("s", 0.0)]).unwrap() - 0.5).abs() < 1e-15);
//! ```

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    Neg,
    Sin,
    Cos,
    Sinh,
    Cosh,
    Tanh,
    Exp,
    Sqrt,
}

impl UnaryOp {
    fn name(self) -> &'static str {
        match self {
            UnaryOp::Neg => "-",
            UnaryOp::Sin => "sin",
            UnaryOp::Cos => "cos",
            UnaryOp::Sinh => "sinh",
            UnaryOp::Cosh => "cosh",
            UnaryOp::Tanh => "tanh",
            UnaryOp::Exp => "exp",
            UnaryOp::Sqrt => "sqrt",
        }
    }

    fn apply(self, v: f64) -> f64 {
        match self {
            UnaryOp::Neg => -v,
            UnaryOp::Sin => v.sin(),
            UnaryOp::Cos => v.cos(),
            UnaryOp::Sinh => v.sinh(),
            UnaryOp::Cosh => v.cosh(),
            UnaryOp::Tanh => v.tanh(),
            UnaryOp::Exp => v.exp(),
            UnaryOp::Sqrt => v.sqrt(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }
}

/// A parsed analytic expression.
///
/// Power is restricted to constant exponents, which keeps symbolic
/// differentiation closed over the grammar.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(String),
    Unary(UnaryOp, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, f64),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("undeclared variable `{name}` at byte {offset}")]
    UndeclaredVariable { name: String, offset: usize },
    #[error("exponent at byte {offset} must be a constant")]
    NonConstantExponent { offset: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("division by zero in `{0}`")]
    DivisionByZero(String),
    #[error("negative base {base} with non-integer exponent {exp}")]
    NegativePow { base: f64, exp: f64 },
    #[error("square root of negative value {0}")]
    NegativeSqrt(f64),
}

impl Expr {
    /// Parse `text` against a set of allowed variable names.
    ///
    /// `pi` (or `π`) and `e` are reserved constants and cannot be
    /// declared as variables.
    pub fn parse(text: &str, allowed_vars: &[&str]) -> Result<Expr, ParseError> {
        let mut p = Parser {
            src: text.as_bytes(),
            pos: 0,
            vars: allowed_vars,
        };
        p.skip_ws();
        if p.pos >= p.src.len() {
            return Err(ParseError::Syntax {
                offset: 0,
                message: "empty expression".into(),
            });
        }
        let e = p.expr()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(ParseError::Syntax {
                offset: p.pos,
                message: format!("unexpected trailing input `{}`", &text[p.pos..]),
            });
        }
        Ok(e)
    }

    /// Evaluate with named bindings in IEEE double precision,
    /// innermost-first.
    pub fn eval(&self, bindings: &[(&str, f64)]) -> Result<f64, EvalError> {
        match self {
            Expr::Const(c) => Ok(*c),
            Expr::Var(name) => bindings
                .iter()
                .find(|(n, _)| n == name)
                .map(|(_, v)| *v)
                .ok_or_else(|| EvalError::UnboundVariable(name.clone())),
            Expr::Unary(op, a) => {
                let v = a.eval(bindings)?;
                if *op == UnaryOp::Sqrt && v < 0.0 {
                    return Err(EvalError::NegativeSqrt(v));
                }
                Ok(op.apply(v))
            }
            Expr::Binary(op, a, b) => {
                let x = a.eval(bindings)?;
                let y = b.eval(bindings)?;
                match op {
                    BinOp::Add => Ok(x + y),
                    BinOp::Sub => Ok(x - y),
                    BinOp::Mul => Ok(x * y),
                    BinOp::Div => {
                        if y == 0.0 {
                            Err(EvalError::DivisionByZero(b.to_string()))
                        } else {
                            Ok(x / y)
                        }
                    }
                }
            }
            Expr::Pow(base, k) => {
                let x = base.eval(bindings)?;
                if x < 0.0 && k.fract() != 0.0 {
                    return Err(EvalError::NegativePow { base: x, exp: *k });
                }
                Ok(x.powf(*k))
            }
        }
    }

    /// Evaluate an expression in `s` only.
    pub fn eval_s(&self, s: f64) -> Result<f64, EvalError> {
        self.eval(&[("s", s)])
    }

    /// Evaluate an expression in `s` and `t`.
    pub fn eval_st(&self, s: f64, t: f64) -> Result<f64, EvalError> {
        self.eval(&[("s", s), ("t", t)])
    }

    /// Exact symbolic partial derivative with respect to `var`.
    ///
    /// Literal arithmetic is constant-folded (`0*x`, `x+0`, `1*x`, ...)
    /// so the derivative of a constant is the literal `0`.
    pub fn derivative(&self, var: &str) -> Expr {
        match self {
            Expr::Const(_) => Expr::Const(0.0),
            Expr::Var(name) => {
                if name == var {
                    Expr::Const(1.0)
                } else {
                    Expr::Const(0.0)
                }
            }
            Expr::Unary(op, a) => {
                let da = a.derivative(var);
                let inner = (**a).clone();
                match op {
                    UnaryOp::Neg => neg(da),
                    UnaryOp::Sin => mul(un(UnaryOp::Cos, inner), da),
                    UnaryOp::Cos => neg(mul(un(UnaryOp::Sin, inner), da)),
                    UnaryOp::Sinh => mul(un(UnaryOp::Cosh, inner), da),
                    UnaryOp::Cosh => mul(un(UnaryOp::Sinh, inner), da),
                    UnaryOp::Tanh => mul(
                        sub(Expr::Const(1.0), pow(un(UnaryOp::Tanh, inner), 2.0)),
                        da,
                    ),
                    UnaryOp::Exp => mul(un(UnaryOp::Exp, inner), da),
                    UnaryOp::Sqrt => div(da, mul(Expr::Const(2.0), un(UnaryOp::Sqrt, inner))),
                }
            }
            Expr::Binary(op, a, b) => {
                let da = a.derivative(var);
                let db = b.derivative(var);
                match op {
                    BinOp::Add => add(da, db),
                    BinOp::Sub => sub(da, db),
                    BinOp::Mul => add(mul(da, (**b).clone()), mul((**a).clone(), db)),
                    BinOp::Div => div(
                        sub(mul(da, (**b).clone()), mul((**a).clone(), db)),
                        pow((**b).clone(), 2.0),
                    ),
                }
            }
            Expr::Pow(base, k) => mul(
                mul(Expr::Const(*k), pow((**base).clone(), k - 1.0)),
                base.derivative(var),
            ),
        }
    }

    /// Replace every occurrence of `var` by `replacement`.
    pub fn substitute(&self, var: &str, replacement: &Expr) -> Expr {
        match self {
            Expr::Const(c) => Expr::Const(*c),
            Expr::Var(name) => {
                if name == var {
                    replacement.clone()
                } else {
                    Expr::Var(name.clone())
                }
            }
            Expr::Unary(op, a) => Expr::Unary(*op, Box::new(a.substitute(var, replacement))),
            Expr::Binary(op, a, b) => Expr::Binary(
                *op,
                Box::new(a.substitute(var, replacement)),
                Box::new(b.substitute(var, replacement)),
            ),
            Expr::Pow(base, k) => Expr::Pow(Box::new(base.substitute(var, replacement)), *k),
        }
    }

    /// Sum with literal folding; building block for programmatic trees.
    pub fn sum(a: Expr, b: Expr) -> Expr {
        add(a, b)
    }

    /// Product with literal folding.
    pub fn product(a: Expr, b: Expr) -> Expr {
        mul(a, b)
    }

    /// Constant-exponent power with literal folding.
    pub fn power(base: Expr, k: f64) -> Expr {
        pow(base, k)
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Unary(UnaryOp::Neg, _) => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }
}

// Smart constructors used by `derivative`; they fold literal arithmetic
// so derivative trees stay small. The `c == 0.0` guards stay guards:
// float literals in patterns are on their way out of the language.

#[allow(clippy::redundant_guards)]
fn add(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x + y),
        (Expr::Const(c), b) if c == 0.0 => b,
        (a, Expr::Const(c)) if c == 0.0 => a,
        (a, b) => Expr::Binary(BinOp::Add, Box::new(a), Box::new(b)),
    }
}

#[allow(clippy::redundant_guards)]
fn sub(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x - y),
        (a, Expr::Const(c)) if c == 0.0 => a,
        (Expr::Const(c), b) if c == 0.0 => neg(b),
        (a, b) => Expr::Binary(BinOp::Sub, Box::new(a), Box::new(b)),
    }
}

#[allow(clippy::redundant_guards)]
fn mul(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x * y),
        (Expr::Const(c), _) | (_, Expr::Const(c)) if c == 0.0 => Expr::Const(0.0),
        (Expr::Const(c), b) if c == 1.0 => b,
        (a, Expr::Const(c)) if c == 1.0 => a,
        (a, b) => Expr::Binary(BinOp::Mul, Box::new(a), Box::new(b)),
    }
}

#[allow(clippy::redundant_guards)]
fn div(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::Const(x), Expr::Const(y)) if y != 0.0 => Expr::Const(x / y),
        (Expr::Const(c), b) if c == 0.0 && b != Expr::Const(0.0) => Expr::Const(0.0),
        (a, Expr::Const(c)) if c == 1.0 => a,
        (a, b) => Expr::Binary(BinOp::Div, Box::new(a), Box::new(b)),
    }
}

fn neg(a: Expr) -> Expr {
    match a {
        Expr::Const(c) => Expr::Const(-c),
        a => Expr::Unary(UnaryOp::Neg, Box::new(a)),
    }
}

fn un(op: UnaryOp, a: Expr) -> Expr {
    Expr::Unary(op, Box::new(a))
}

fn pow(base: Expr, k: f64) -> Expr {
    if k == 0.0 {
        Expr::Const(1.0)
    } else if k == 1.0 {
        base
    } else if let Expr::Const(c) = base {
        Expr::Const(c.powf(k))
    } else {
        Expr::Pow(Box::new(base), k)
    }
}

/// Canonical infix printer: minimal parentheses, `.` decimal separator,
/// locale-free. `parse ∘ print` is the identity on trees produced by
/// `parse`.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{}", c),
            Expr::Var(name) => write!(f, "{}", name),
            Expr::Unary(UnaryOp::Neg, a) => {
                if a.precedence() <= 2 {
                    write!(f, "-({})", a)
                } else {
                    write!(f, "-{}", a)
                }
            }
            Expr::Unary(op, a) => write!(f, "{}({})", op.name(), a),
            Expr::Binary(op, a, b) => {
                let prec = self.precedence();
                if a.precedence() < prec {
                    write!(f, "({})", a)?;
                } else {
                    write!(f, "{}", a)?;
                }
                write!(f, "{}", op.symbol())?;
                // Right operand of a left-associative operator needs
                // parentheses at equal precedence too.
                if b.precedence() <= prec {
                    write!(f, "({})", b)
                } else {
                    write!(f, "{}", b)
                }
            }
            Expr::Pow(base, k) => {
                if base.precedence() < 4 {
                    write!(f, "({})^{}", base, k)
                } else {
                    write!(f, "{}^{}", base, k)
                }
            }
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a [&'a str],
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

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        while let Some(c) = self.peek() {
            let op = match c {
                b'+' => BinOp::Add,
                b'-' => BinOp::Sub,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while let Some(c) = self.peek() {
            let op = match c {
                b'*' => BinOp::Mul,
                b'/' => BinOp::Div,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            let inner = self.unary()?;
            // Fold a leading minus into literals so "-1.5" and the
            // canonical printer agree on one tree.
            return Ok(neg_parsed(inner));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let mut base = self.atom()?;
        while self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let exp_offset = self.pos;
            let exp = if self.peek() == Some(b'-') {
                self.pos += 1;
                neg_parsed(self.atom()?)
            } else {
                self.atom()?
            };
            let k = match constant_value(&exp) {
                Some(k) => k,
                None => return Err(ParseError::NonConstantExponent { offset: exp_offset }),
            };
            base = Expr::Pow(Box::new(base), k);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c >= 0x80 => self.identifier(),
            Some(c) => Err(ParseError::Syntax {
                offset: self.pos,
                message: format!("unexpected character `{}`", c as char),
            }),
            None => Err(ParseError::Syntax {
                offset: self.pos,
                message: "unexpected end of input".into(),
            }),
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(ParseError::Syntax {
                offset: self.pos,
                message: format!("expected `{}`", c as char),
            })
        }
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'.')
        {
            self.pos += 1;
        }
        // exponent part
        if self.pos < self.src.len() && (self.src[self.pos] == b'e' || self.src[self.pos] == b'E') {
            let mut probe = self.pos + 1;
            if probe < self.src.len() && (self.src[probe] == b'+' || self.src[probe] == b'-') {
                probe += 1;
            }
            if probe < self.src.len() && self.src[probe].is_ascii_digit() {
                self.pos = probe;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        text.parse::<f64>()
            .map(Expr::Const)
            .map_err(|_| ParseError::Syntax {
                offset: start,
                message: format!("invalid number `{}`", text),
            })
    }

    fn identifier(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric()
                || self.src[self.pos] == b'_'
                || self.src[self.pos] >= 0x80)
        {
            self.pos += 1;
        }
        let name =
            std::str::from_utf8(&self.src[start..self.pos]).map_err(|_| ParseError::Syntax {
                offset: start,
                message: "invalid identifier bytes".into(),
            })?;
        let func = match name {
            "sin" => Some(UnaryOp::Sin),
            "cos" => Some(UnaryOp::Cos),
            "sinh" => Some(UnaryOp::Sinh),
            "cosh" => Some(UnaryOp::Cosh),
            "tanh" => Some(UnaryOp::Tanh),
            "exp" => Some(UnaryOp::Exp),
            "sqrt" => Some(UnaryOp::Sqrt),
            _ => None,
        };
        if let Some(op) = func {
            self.expect(b'(')?;
            let arg = self.expr()?;
            self.expect(b')')?;
            return Ok(Expr::Unary(op, Box::new(arg)));
        }
        match name {
            "pi" | "π" => Ok(Expr::Const(std::f64::consts::PI)),
            "e" if !self.vars.contains(&"e") => Ok(Expr::Const(std::f64::consts::E)),
            _ => {
                if self.vars.contains(&name) {
                    Ok(Expr::Var(name.to_string()))
                } else {
                    Err(ParseError::UndeclaredVariable {
                        name: name.to_string(),
                        offset: start,
                    })
                }
            }
        }
    }
}

fn neg_parsed(inner: Expr) -> Expr {
    match inner {
        Expr::Const(c) => Expr::Const(-c),
        other => Expr::Unary(UnaryOp::Neg, Box::new(other)),
    }
}

fn constant_value(e: &Expr) -> Option<f64> {
    e.eval(&[]).ok()
}
