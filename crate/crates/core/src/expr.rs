//! Parametric expression language for curve coordinates and curvature
//! profiles.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr    = term { ("+" | "-") term } ;
//! term    = unary { ("*" | "/") unary } ;
//! unary   = "-" unary | power ;
//! power   = primary [ "^" unary ] ;          (right-associative)
//! primary = number | name | name "(" expr ")" | "(" expr ")" ;
//! name    = letter { letter | digit | "_" } ;
//! ```
//!
//! `t` is the curve parameter (rebindable to any symbol on evaluation),
//! `pi` and `e` are named constants, the recognized function names are
//! `exp log sin cos sinh cosh tan tanh sqrt atan`, and any other name is a
//! free parameter that must be bound at evaluation time.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::jet::{ElemFn, Jet};

pub type Bindings = BTreeMap<String, f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedConst {
    Pi,
    E,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Number(f64),
    /// The curve parameter `t`.
    Var,
    Const(NamedConst),
    /// Free symbol resolved through the evaluation bindings.
    Param(String),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(ElemFn, Box<Expr>),
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr> {
        let tokens = lex(src)?;
        let mut p = Parser { tokens, pos: 0 };
        let e = p.parse_expr(0)?;
        p.expect_eof()?;
        Ok(e)
    }

    /// Parse either a single expression or a parenthesized comma list of
    /// coordinate expressions: `(e1, e2, e3)`.
    pub fn parse_coordinates(src: &str) -> Result<Vec<Expr>> {
        let tokens = lex(src)?;
        if matches!(tokens.first().map(|t| &t.kind), Some(TokenKind::LParen)) {
            let mut p = Parser {
                tokens: tokens.clone(),
                pos: 1,
            };
            if let Ok(list) = p.parse_comma_list() {
                return Ok(list);
            }
        }
        Expr::parse(src).map(|e| vec![e])
    }

    /// Evaluate on a jet of the parameter.
    pub fn eval_jet(&self, t: &Jet, params: &Bindings) -> Result<Jet> {
        let order = t.order();
        match self {
            Expr::Number(v) => Ok(Jet::constant(*v, order)),
            Expr::Var => Ok(t.clone()),
            Expr::Const(NamedConst::Pi) => Ok(Jet::constant(std::f64::consts::PI, order)),
            Expr::Const(NamedConst::E) => Ok(Jet::constant(std::f64::consts::E, order)),
            Expr::Param(name) => params
                .get(name)
                .map(|v| Jet::constant(*v, order))
                .ok_or_else(|| Error::UnboundSymbol(name.clone())),
            Expr::Neg(e) => Ok(e.eval_jet(t, params)?.neg()),
            Expr::Bin(op, l, r) => {
                let lj = l.eval_jet(t, params)?;
                let rj = r.eval_jet(t, params)?;
                match op {
                    BinOp::Add => Ok(lj.add(&rj)),
                    BinOp::Sub => Ok(lj.sub(&rj)),
                    BinOp::Mul => Ok(lj.mul(&rj)),
                    BinOp::Div => lj.div(&rj),
                    BinOp::Pow => pow_jet(&lj, &rj),
                }
            }
            Expr::Call(f, arg) => crate::jet::jet_elem(*f, &arg.eval_jet(t, params)?),
        }
    }

    pub fn eval_scalar(&self, t: f64, params: &Bindings) -> Result<f64> {
        Ok(self.eval_jet(&Jet::constant(t, 0), params)?.value())
    }

    /// Linear combination builder, used for affine images of curves.
    pub fn linear_combination(terms: &[(f64, Expr)], offset: f64) -> Expr {
        let mut acc = Expr::Number(offset);
        for (c, e) in terms {
            if *c == 0.0 {
                continue;
            }
            let term = Expr::Bin(BinOp::Mul, Box::new(Expr::Number(*c)), Box::new(e.clone()));
            acc = Expr::Bin(BinOp::Add, Box::new(acc), Box::new(term));
        }
        acc
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Neg(..) => 3,
            Expr::Bin(BinOp::Pow, ..) => 4,
            _ => 5,
        }
    }
}

/// `base ^ exponent` with the domain convention: constant integer exponents
/// work for any base, anything else requires a positive base.
fn pow_jet(base: &Jet, exponent: &Jet) -> Result<Jet> {
    let constant_exp = exponent.coeffs()[1..].iter().all(|c| *c == 0.0);
    if constant_exp {
        let a = exponent.value();
        if a.fract() == 0.0 && a.abs() < 2_147_483_647.0 {
            return base.powi(a as i32);
        }
        return base.powf(a);
    }
    // variable exponent: b^a = exp(a log b)
    Ok(exponent.mul(&base.ln()?).exp())
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(f: &mut fmt::Formatter<'_>, e: &Expr, min_prec: u8) -> fmt::Result {
            if e.precedence() < min_prec {
                write!(f, "(")?;
                write!(f, "{e}")?;
                write!(f, ")")
            } else {
                write!(f, "{e}")
            }
        }
        match self {
            Expr::Number(v) => {
                if *v < 0.0 {
                    write!(f, "({v})")
                } else {
                    write!(f, "{v}")
                }
            }
            Expr::Var => write!(f, "t"),
            Expr::Const(NamedConst::Pi) => write!(f, "pi"),
            Expr::Const(NamedConst::E) => write!(f, "e"),
            Expr::Param(name) => write!(f, "{name}"),
            Expr::Neg(e) => {
                write!(f, "-")?;
                child(f, e, 4)
            }
            Expr::Bin(op, l, r) => {
                let (sym, prec) = match op {
                    BinOp::Add => ("+", 1),
                    BinOp::Sub => ("-", 1),
                    BinOp::Mul => ("*", 2),
                    BinOp::Div => ("/", 2),
                    BinOp::Pow => ("^", 4),
                };
                // - and / need a stricter right side; ^ is right-associative
                let (lp, rp) = match op {
                    BinOp::Add => (1, 1),
                    BinOp::Sub => (1, 2),
                    BinOp::Mul => (2, 2),
                    BinOp::Div => (2, 3),
                    BinOp::Pow => (5, 4),
                };
                let _ = prec;
                child(f, l, lp)?;
                write!(f, "{sym}")?;
                child(f, r, rp)
            }
            Expr::Call(func, arg) => write!(f, "{}({arg})", func_name(*func)),
        }
    }
}

pub fn func_name(f: ElemFn) -> &'static str {
    match f {
        ElemFn::Exp => "exp",
        ElemFn::Log => "log",
        ElemFn::Sin => "sin",
        ElemFn::Cos => "cos",
        ElemFn::Sinh => "sinh",
        ElemFn::Cosh => "cosh",
        ElemFn::Tan => "tan",
        ElemFn::Tanh => "tanh",
        ElemFn::Sqrt => "sqrt",
        ElemFn::Atan => "atan",
    }
}

fn func_by_name(name: &str) -> Option<ElemFn> {
    Some(match name {
        "exp" => ElemFn::Exp,
        "log" | "ln" => ElemFn::Log,
        "sin" => ElemFn::Sin,
        "cos" => ElemFn::Cos,
        "sinh" => ElemFn::Sinh,
        "cosh" => ElemFn::Cosh,
        "tan" => ElemFn::Tan,
        "tanh" => ElemFn::Tanh,
        "sqrt" => ElemFn::Sqrt,
        "atan" => ElemFn::Atan,
        _ => return None,
    })
}

#[derive(Debug, Clone, PartialEq)]
enum TokenKind {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokenKind,
    offset: usize,
}

fn lex(src: &str) -> Result<Vec<Token>> {
    if src.trim().is_empty() {
        return Err(Error::EmptyInput("expression".into()));
    }
    let bytes = src.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let offset = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
            }
            '+' | '-' | '*' | '/' | '^' | '(' | ')' | ',' => {
                let kind = match c {
                    '+' => TokenKind::Plus,
                    '-' => TokenKind::Minus,
                    '*' => TokenKind::Star,
                    '/' => TokenKind::Slash,
                    '^' => TokenKind::Caret,
                    '(' => TokenKind::LParen,
                    ')' => TokenKind::RParen,
                    _ => TokenKind::Comma,
                };
                tokens.push(Token { kind, offset });
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &src[start..i];
                let value = text.parse::<f64>().map_err(|_| Error::Lex {
                    offset: start,
                    msg: format!("malformed number `{text}`"),
                })?;
                tokens.push(Token {
                    kind: TokenKind::Num(value),
                    offset: start,
                });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                tokens.push(Token {
                    kind: TokenKind::Ident(src[start..i].to_string()),
                    offset: start,
                });
            }
            other => {
                return Err(Error::Lex {
                    offset,
                    msg: format!("unexpected character `{other}`"),
                });
            }
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn end_offset(&self) -> usize {
        self.tokens.last().map(|t| t.offset + 1).unwrap_or(0)
    }

    fn expect_eof(&self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(tok) => Err(Error::Parse {
                offset: tok.offset,
                msg: format!("unexpected token, expected operator or end: {:?}", tok.kind),
            }),
        }
    }

    fn expect(&mut self, kind: TokenKind, what: &str) -> Result<()> {
        match self.peek() {
            Some(tok) if tok.kind == kind => {
                self.pos += 1;
                Ok(())
            }
            Some(tok) => Err(Error::Parse {
                offset: tok.offset,
                msg: format!("expected {what}"),
            }),
            None => Err(Error::Parse {
                offset: self.end_offset(),
                msg: format!("expected {what}, found end of input"),
            }),
        }
    }

    fn parse_comma_list(&mut self) -> Result<Vec<Expr>> {
        // called with the position just after the opening parenthesis
        let mut list = vec![self.parse_expr(0)?];
        if !matches!(self.peek().map(|t| &t.kind), Some(TokenKind::Comma)) {
            return Err(Error::Parse {
                offset: self.peek().map(|t| t.offset).unwrap_or(self.end_offset()),
                msg: "expected `,`".into(),
            });
        }
        while matches!(self.peek().map(|t| &t.kind), Some(TokenKind::Comma)) {
            self.pos += 1;
            list.push(self.parse_expr(0)?);
        }
        self.expect(TokenKind::RParen, "`)`")?;
        self.expect_eof()?;
        Ok(list)
    }

    fn parse_expr(&mut self, min_bp: u8) -> Result<Expr> {
        let mut lhs = self.parse_prefix()?;
        loop {
            let (op, l_bp, r_bp) = match self.peek().map(|t| &t.kind) {
                Some(TokenKind::Plus) => (BinOp::Add, 10, 11),
                Some(TokenKind::Minus) => (BinOp::Sub, 10, 11),
                Some(TokenKind::Star) => (BinOp::Mul, 20, 21),
                Some(TokenKind::Slash) => (BinOp::Div, 20, 21),
                Some(TokenKind::Caret) => (BinOp::Pow, 31, 30),
                _ => break,
            };
            if l_bp < min_bp {
                break;
            }
            self.pos += 1;
            let rhs = self.parse_expr(r_bp)?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn parse_prefix(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            None => Err(Error::Parse {
                offset: self.end_offset(),
                msg: "expected expression, found end of input".into(),
            }),
            Some(tok) => match tok.kind {
                TokenKind::Minus => {
                    self.pos += 1;
                    // binds tighter than * but looser than ^
                    Ok(Expr::Neg(Box::new(self.parse_expr(25)?)))
                }
                TokenKind::Num(v) => {
                    self.pos += 1;
                    Ok(Expr::Number(v))
                }
                TokenKind::LParen => {
                    self.pos += 1;
                    let e = self.parse_expr(0)?;
                    self.expect(TokenKind::RParen, "`)`")?;
                    Ok(e)
                }
                TokenKind::Ident(name) => {
                    self.pos += 1;
                    if matches!(self.peek().map(|t| &t.kind), Some(TokenKind::LParen)) {
                        let func = func_by_name(&name).ok_or(Error::UnknownFunction {
                            name: name.clone(),
                            offset: tok.offset,
                        })?;
                        self.pos += 1;
                        let arg = self.parse_expr(0)?;
                        self.expect(TokenKind::RParen, "`)`")?;
                        Ok(Expr::Call(func, Box::new(arg)))
                    } else {
                        Ok(match name.as_str() {
                            "t" => Expr::Var,
                            "pi" => Expr::Const(NamedConst::Pi),
                            "e" => Expr::Const(NamedConst::E),
                            _ => Expr::Param(name),
                        })
                    }
                }
                other => Err(Error::Parse {
                    offset: tok.offset,
                    msg: format!("expected expression, found {other:?}"),
                }),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn eval(src: &str, t: f64, params: &[(&str, f64)]) -> f64 {
        let bindings: Bindings = params
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect();
        Expr::parse(src)
            .unwrap()
            .eval_scalar(t, &bindings)
            .unwrap()
    }

    #[test]
    fn basic_evaluation() {
        assert_relative_eq!(
            eval("exp(g*t)*cos(a*t)", 0.0, &[("g", 1.0), ("a", 1.0)]),
            1.0
        );
        assert_relative_eq!(eval("t^2/2", 3.0, &[]), 4.5);
        assert_relative_eq!(eval("pi", 0.0, &[]), std::f64::consts::PI);
        assert_relative_eq!(eval("2^-2", 0.0, &[]), 0.25);
        assert_relative_eq!(eval("-t^2", 2.0, &[]), -4.0);
        assert_relative_eq!(eval("2^3^2", 0.0, &[]), 512.0);
        assert_relative_eq!(eval("1-2-3", 0.0, &[]), -4.0);
        assert_relative_eq!(eval("(-2)^3", 0.0, &[]), -8.0);
    }

    #[test]
    fn malformed_inputs() {
        let err = Expr::parse("co s(t").unwrap_err();
        match err {
            Error::Parse { offset, .. } => assert_eq!(offset, 3),
            other => panic!("unexpected error {other}"),
        }
        assert!(matches!(
            Expr::parse("foo(t)"),
            Err(Error::UnknownFunction { .. })
        ));
        assert!(Expr::parse("").is_err());
        assert!(Expr::parse("1 + ").is_err());
        assert!(matches!(Expr::parse("2 $ 3"), Err(Error::Lex { .. })));
    }

    #[test]
    fn negative_base_powers() {
        // integer exponents allowed on negative bases, real ones are not
        assert_relative_eq!(eval("t^3", -2.0, &[]), -8.0);
        let e = Expr::parse("t^0.5").unwrap();
        assert!(e.eval_scalar(-2.0, &Bindings::new()).is_err());
        assert_relative_eq!(eval("t^0.5", 4.0, &[]), 2.0);
    }

    #[test]
    fn coordinate_lists() {
        let v = Expr::parse_coordinates("(1+cos(2*t), sin(2*t), 2*sin(t))").unwrap();
        assert_eq!(v.len(), 3);
        let single = Expr::parse_coordinates("(t+1)*2").unwrap();
        assert_eq!(single.len(), 1);
        assert_relative_eq!(single[0].eval_scalar(2.0, &Bindings::new()).unwrap(), 6.0);
    }

    #[test]
    fn jet_evaluation_matches_derivatives() {
        let e = Expr::parse("exp(t)*sin(2*t)").unwrap();
        let j = e
            .eval_jet(&Jet::variable(0.3, 4).unwrap(), &Bindings::new())
            .unwrap();
        // d/dt [e^t sin 2t] = e^t (sin 2t + 2 cos 2t)
        let t: f64 = 0.3;
        assert_relative_eq!(
            j.derivative(1).unwrap(),
            t.exp() * ((2.0 * t).sin() + 2.0 * (2.0 * t).cos()),
            max_relative = 1e-12
        );
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (-2.0f64..2.0).prop_map(Expr::Number),
            Just(Expr::Var),
            Just(Expr::Const(NamedConst::Pi)),
        ];
        leaf.prop_recursive(3, 24, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Bin(
                    BinOp::Add,
                    Box::new(a),
                    Box::new(b)
                )),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Bin(
                    BinOp::Sub,
                    Box::new(a),
                    Box::new(b)
                )),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Bin(
                    BinOp::Mul,
                    Box::new(a),
                    Box::new(b)
                )),
                inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
                inner.clone().prop_map(|a| Expr::Call(ElemFn::Sin, Box::new(a))),
                inner.clone().prop_map(|a| Expr::Call(ElemFn::Cos, Box::new(a))),
                inner.prop_map(|a| Expr::Call(ElemFn::Atan, Box::new(a))),
            ]
        })
    }

    proptest! {
        /// the parser returns errors, never panics, on arbitrary input
        #[test]
        fn parser_total_on_garbage(src in "[ -~]{0,40}") {
            let _ = Expr::parse(&src);
            let _ = Expr::parse_coordinates(&src);
        }

        /// print -> reparse preserves evaluation everywhere
        #[test]
        fn display_roundtrip(e in arb_expr(), ts in proptest::collection::vec(-3.0f64..3.0, 8)) {
            let printed = e.to_string();
            let reparsed = Expr::parse(&printed).unwrap();
            let empty = Bindings::new();
            for t in ts {
                let a = e.eval_scalar(t, &empty).unwrap();
                let b = reparsed.eval_scalar(t, &empty).unwrap();
                prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
            }
        }
    }
}
