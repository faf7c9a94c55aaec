//! Small expression language for nonlinearities f(t,u) and right-hand
//! sides y(t).
//!
//! Grammar (standard precedence, `^` binds tightest and right-associative):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?
//! atom   := number | 't' | 'u' | func '(' expr ((',' | ';') expr)* ')' | '(' expr ')'
//! func   := log | exp | abs | min | max | sqrt | phi_p | gamma
//! ```
//!
//! `phi_p(p; x)` is the p-Laplacian x·|x|^{p−1}. In solver contexts the
//! variable `u` binds to the weighted value t^{2−α}u(t), matching how the
//! nonlinearity enters the differential equation.

use crate::error::{Error, Result};
use crate::mlf;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    T,
    U,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Log,
    Exp,
    Abs,
    Min,
    Max,
    Sqrt,
    PhiP,
    Gamma,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Log => "log",
            Func::Exp => "exp",
            Func::Abs => "abs",
            Func::Min => "min",
            Func::Max => "max",
            Func::Sqrt => "sqrt",
            Func::PhiP => "phi_p",
            Func::Gamma => "gamma",
        }
    }

    fn arity(self) -> usize {
        match self {
            Func::Min | Func::Max | Func::PhiP => 2,
            _ => 1,
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "log" => Func::Log,
            "exp" => Func::Exp,
            "abs" => Func::Abs,
            "min" => Func::Min,
            "max" => Func::Max,
            "sqrt" => Func::Sqrt,
            "phi_p" => Func::PhiP,
            "gamma" => Func::Gamma,
            _ => return None,
        })
    }
}

/// Abstract syntax tree over the variables t and u.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(Var),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

// ---------------------------------------------------------------------------
// Lexer

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Sep,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Self {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn next(&mut self) -> Result<Option<(Tok, usize)>> {
        self.skip_ws();
        if self.pos >= self.src.len() {
            return Ok(None);
        }
        let start = self.pos;
        let c = self.src[self.pos];
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' | b';' => Tok::Sep,
            b'0'..=b'9' | b'.' => {
                let mut end = self.pos;
                while end < self.src.len()
                    && (self.src[end].is_ascii_digit() || self.src[end] == b'.')
                {
                    end += 1;
                }
                if end < self.src.len() && (self.src[end] == b'e' || self.src[end] == b'E') {
                    let mut e = end + 1;
                    if e < self.src.len() && (self.src[e] == b'+' || self.src[e] == b'-') {
                        e += 1;
                    }
                    if e < self.src.len() && self.src[e].is_ascii_digit() {
                        end = e;
                        while end < self.src.len() && self.src[end].is_ascii_digit() {
                            end += 1;
                        }
                    }
                }
                let text = std::str::from_utf8(&self.src[self.pos..end]).unwrap();
                let value: f64 = text.parse().map_err(|_| Error::SyntaxError {
                    offset: start,
                    expected: "number".into(),
                })?;
                self.pos = end;
                return Ok(Some((Tok::Num(value), start)));
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let mut end = self.pos;
                while end < self.src.len()
                    && (self.src[end].is_ascii_alphanumeric() || self.src[end] == b'_')
                {
                    end += 1;
                }
                let text = std::str::from_utf8(&self.src[self.pos..end]).unwrap().to_string();
                self.pos = end;
                return Ok(Some((Tok::Ident(text), start)));
            }
            _ => {
                return Err(Error::SyntaxError {
                    offset: start,
                    expected: "operator, number, identifier or parenthesis".into(),
                })
            }
        };
        self.pos += 1;
        Ok(Some((tok, start)))
    }
}

// ---------------------------------------------------------------------------
// Parser

struct Parser {
    toks: Vec<(Tok, usize)>,
    idx: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.idx).map(|(_, o)| *o).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.idx).map(|(t, _)| t.clone());
        self.idx += 1;
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.idx += 1;
            Ok(())
        } else {
            Err(Error::SyntaxError {
                offset: self.offset(),
                expected: what.into(),
            })
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.idx += 1;
                    let rhs = self.term()?;
                    lhs = Expr::Bin(BinOp::Add, Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Minus) => {
                    self.idx += 1;
                    let rhs = self.term()?;
                    lhs = Expr::Bin(BinOp::Sub, Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.idx += 1;
                    let rhs = self.unary()?;
                    lhs = Expr::Bin(BinOp::Mul, Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Slash) => {
                    self.idx += 1;
                    let rhs = self.unary()?;
                    lhs = Expr::Bin(BinOp::Div, Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek() == Some(&Tok::Minus) {
            self.idx += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.idx += 1;
            let exp = self.unary()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let offset = self.offset();
        match self.bump() {
            Some(Tok::Num(v)) => Ok(Expr::Num(v)),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "closing parenthesis")?;
                Ok(inner)
            }
            Some(Tok::Ident(name)) => match name.as_str() {
                "t" => Ok(Expr::Var(Var::T)),
                "u" => Ok(Expr::Var(Var::U)),
                other => {
                    let func = Func::from_name(other).ok_or_else(|| Error::SyntaxError {
                        offset,
                        expected: format!("known identifier, found `{other}`"),
                    })?;
                    self.expect(Tok::LParen, "opening parenthesis after function name")?;
                    let mut args = vec![self.expr()?];
                    while self.peek() == Some(&Tok::Sep) {
                        self.idx += 1;
                        args.push(self.expr()?);
                    }
                    self.expect(Tok::RParen, "closing parenthesis")?;
                    if args.len() != func.arity() {
                        return Err(Error::SyntaxError {
                            offset,
                            expected: format!(
                                "{} arguments for {}, found {}",
                                func.arity(),
                                func.name(),
                                args.len()
                            ),
                        });
                    }
                    Ok(Expr::Call(func, args))
                }
            },
            _ => Err(Error::SyntaxError {
                offset,
                expected: "number, variable, function or parenthesis".into(),
            }),
        }
    }
}

/// Parse source text into an AST.
pub fn parse(src: &str) -> Result<Expr> {
    if src.trim().is_empty() {
        return Err(Error::SyntaxError {
            offset: 0,
            expected: "non-empty expression".into(),
        });
    }
    let mut lexer = Lexer::new(src);
    let mut toks = Vec::new();
    while let Some(t) = lexer.next()? {
        toks.push(t);
    }
    let end = src.len();
    let mut parser = Parser { toks, idx: 0, end };
    let e = parser.expr()?;
    if parser.idx != parser.toks.len() {
        return Err(Error::SyntaxError {
            offset: parser.offset(),
            expected: "end of input".into(),
        });
    }
    Ok(e)
}

// ---------------------------------------------------------------------------
// Printing (precedence-aware; output reparses to an identical AST)

fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
        Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
        Expr::Neg(_) => 3,
        Expr::Bin(BinOp::Pow, ..) => 4,
        _ => 5,
    }
}

fn print_with(e: &Expr, out: &mut String) {
    match e {
        Expr::Num(v) => {
            if *v < 0.0 || (*v == 0.0 && v.is_sign_negative()) {
                // Negative literals do not exist in the grammar; emit the
                // equivalent negation so the text reparses.
                out.push('-');
                out.push_str(&format!("{}", -*v));
            } else {
                out.push_str(&format!("{v}"));
            }
        }
        Expr::Var(Var::T) => out.push('t'),
        Expr::Var(Var::U) => out.push('u'),
        Expr::Neg(inner) => {
            out.push('-');
            wrap(inner, precedence(e), true, out);
        }
        Expr::Bin(op, l, r) => {
            let p = precedence(e);
            if *op == BinOp::Pow {
                // Right-associative: parenthesize a left child of equal
                // precedence, keep the right one bare.
                wrap(l, p + 1, false, out);
                out.push('^');
                wrap(r, p, true, out);
            } else {
                // Left-associative: an equal-precedence right child must
                // keep its parentheses to preserve the tree shape.
                let sym = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                    BinOp::Pow => unreachable!(),
                };
                wrap(l, p, false, out);
                out.push_str(sym);
                wrap(r, p + 1, false, out);
            }
        }
        Expr::Call(func, args) => {
            out.push_str(func.name());
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                print_with(a, out);
            }
            out.push(')');
        }
    }
}

fn wrap(e: &Expr, min_prec: u8, allow_neg: bool, out: &mut String) {
    let bare = precedence(e) >= min_prec || (allow_neg && matches!(e, Expr::Neg(_)));
    // A negative literal would fuse with a preceding operator; force parens
    // unless negation is explicitly allowed here.
    let neg_literal = matches!(e, Expr::Num(v) if *v < 0.0) && !allow_neg;
    if bare && !neg_literal {
        print_with(e, out);
    } else {
        out.push('(');
        print_with(e, out);
        out.push(')');
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        print_with(self, &mut s);
        f.write_str(&s)
    }
}

/// Render the AST as text that reparses to an identical tree.
pub fn print(e: &Expr) -> String {
    format!("{e}")
}

// ---------------------------------------------------------------------------
// Evaluation

fn eval_err(node: &str, reason: impl Into<String>) -> Error {
    Error::EvalError {
        node: node.into(),
        reason: reason.into(),
    }
}

/// The p-Laplacian x·|x|^{p−1}, written as sign(x)|x|^p so it is continuous
/// at x = 0 for every p > 0.
pub fn phi_p(p: f64, x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.signum() * x.abs().powf(p)
    }
}

impl Expr {
    /// Evaluate at (t, u). In solver contexts u is the weighted value
    /// t^{2−α}u(t).
    pub fn eval(&self, t: f64, u: f64) -> Result<f64> {
        Ok(match self {
            Expr::Num(v) => *v,
            Expr::Var(Var::T) => t,
            Expr::Var(Var::U) => u,
            Expr::Neg(inner) => -inner.eval(t, u)?,
            Expr::Bin(op, l, r) => {
                let a = l.eval(t, u)?;
                let b = r.eval(t, u)?;
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b == 0.0 {
                            return Err(eval_err("/", format!("division by zero at t={t}, u={u}")));
                        }
                        a / b
                    }
                    BinOp::Pow => {
                        let v = a.powf(b);
                        if v.is_nan() {
                            return Err(eval_err(
                                "^",
                                format!("{a}^{b} is undefined over the reals"),
                            ));
                        }
                        v
                    }
                }
            }
            Expr::Call(func, args) => {
                let x = args[0].eval(t, u)?;
                match func {
                    Func::Log => {
                        if x <= 0.0 {
                            return Err(eval_err("log", format!("argument {x} not positive")));
                        }
                        x.ln()
                    }
                    Func::Exp => x.exp(),
                    Func::Abs => x.abs(),
                    Func::Sqrt => {
                        if x < 0.0 {
                            return Err(eval_err("sqrt", format!("argument {x} negative")));
                        }
                        x.sqrt()
                    }
                    Func::Gamma => {
                        let r = mlf::recip_gamma(x);
                        if r == 0.0 {
                            return Err(eval_err("gamma", format!("pole at {x}")));
                        }
                        1.0 / r
                    }
                    Func::Min => x.min(args[1].eval(t, u)?),
                    Func::Max => x.max(args[1].eval(t, u)?),
                    Func::PhiP => {
                        let arg = args[1].eval(t, u)?;
                        if x <= 0.0 {
                            return Err(eval_err("phi_p", format!("exponent {x} not positive")));
                        }
                        phi_p(x, arg)
                    }
                }
            }
        })
    }

    /// Closure view f(t, u) for the solver; evaluation faults surface as NaN
    /// and are caught by the solver's convergence checks.
    pub fn as_fn(&self) -> impl Fn(f64, f64) -> f64 + '_ {
        move |t, u| self.eval(t, u).unwrap_or(f64::NAN)
    }
}

// ---------------------------------------------------------------------------
// Builtin registry

/// Construct a registered nonlinearity. Parameters:
///
/// - `example1a`: none — (1+t)·log(2+u)
/// - `example1b`: \[a\] — (2−t)·u^a
/// - `example2`:  none — t·(u+1)/(u+2)
/// - `example3`:  [p, lambda, alpha] — phi_p(p; u) − lambda·t^alpha
pub fn builtin(name: &str, args: &[f64]) -> Result<Expr> {
    let need = |n: usize| -> Result<()> {
        if args.len() != n {
            return Err(Error::UnknownBuiltin(format!(
                "{name} takes {n} parameter(s), got {}",
                args.len()
            )));
        }
        Ok(())
    };
    let src = match name {
        "example1a" => {
            need(0)?;
            "(1+t)*log(2+u)".to_string()
        }
        "example1b" => {
            need(1)?;
            format!("(2-t)*u^{}", fmt_param(args[0]))
        }
        "example2" => {
            need(0)?;
            "t*(u+1)/(u+2)".to_string()
        }
        "example3" => {
            need(3)?;
            format!(
                "phi_p({}; u) - {}*t^{}",
                fmt_param(args[0]),
                fmt_param(args[1]),
                fmt_param(args[2])
            )
        }
        other => return Err(Error::UnknownBuiltin(other.into())),
    };
    parse(&src)
}

fn fmt_param(v: f64) -> String {
    if v < 0.0 {
        format!("(0-{})", -v)
    } else {
        format!("{v}")
    }
}

/// Split a specification like `example1b(2)` into name and numeric
/// parameters; a bare name carries none.
pub fn parse_builtin_spec(spec: &str) -> Result<(String, Vec<f64>)> {
    let spec = spec.trim();
    let Some(open) = spec.find('(') else {
        return Ok((spec.to_string(), Vec::new()));
    };
    if !spec.ends_with(')') {
        return Err(Error::UnknownBuiltin(spec.into()));
    }
    let name = spec[..open].trim().to_string();
    let inner = &spec[open + 1..spec.len() - 1];
    let mut args = Vec::new();
    for part in inner.split([',', ';']) {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        args.push(part.parse::<f64>().map_err(|_| {
            Error::UnknownBuiltin(format!("bad parameter `{part}` in `{spec}`"))
        })?);
    }
    Ok((name, args))
}
