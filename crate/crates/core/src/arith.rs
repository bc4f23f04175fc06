//! Rational numbers as `(0, 1)` diagrams.
//!
//! The natural `n` is `n` white units summed by a black spider and denotes
//! `n|0> + |1>`. A fraction `p/q` multiplies `|p|` with the tick of `q`,
//! giving `|p||0> + q|1>`, and a negative one carries a cross on its output.
//! Decoding reads the ratio of the two amplitudes.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::diagram::{Builder, Decoration, Diagram, Port, VertexKind};
use crate::semantics::{evaluate, Environment, EvalError};
use crate::shapes::{decorate_output, mult, par, seq, Colour};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("denominator is zero")]
    ZeroDenominator,
    #[error("denominator {0} is negative")]
    NegativeDenominator(i64),
    #[error("expected a (0, 1) diagram, got {0:?}")]
    WrongSignature((usize, usize)),
    #[error("{op:?} takes {expected} arguments of shape (0, 1)")]
    ArityMismatch { op: ArithOp, expected: usize },
    #[error("parse error at byte {at}: {message}")]
    ParseError { at: usize, message: String },
    #[error("literal {0} is larger than {MAX_LITERAL}; its encoding is too wide to evaluate")]
    LiteralTooLarge(u64),
    #[error("expression divides by zero")]
    DegenerateValue,
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// A rational extended with `1/0` and `0/0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtendedRational {
    Finite(BigRational),
    Infinity,
    Undefined,
}

impl ExtendedRational {
    pub fn from_ints(p: i64, q: i64) -> Self {
        ExtendedRational::from_ratio(&BigInt::from(p).into(), &BigInt::from(q).into())
    }

    /// `a / b` with the degenerate cases spelled out.
    pub fn from_ratio(a: &BigRational, b: &BigRational) -> Self {
        match (a.is_zero(), b.is_zero()) {
            (true, true) => ExtendedRational::Undefined,
            (false, true) => ExtendedRational::Infinity,
            _ => ExtendedRational::Finite(a / b),
        }
    }

    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            ExtendedRational::Finite(r) => Some(r),
            _ => None,
        }
    }
}

impl fmt::Display for ExtendedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedRational::Finite(r) if r.is_integer() => write!(f, "{}", r.numer()),
            ExtendedRational::Finite(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            ExtendedRational::Infinity => f.write_str("inf"),
            ExtendedRational::Undefined => f.write_str("undefined"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArithOp {
    Add,
    Mul,
    Inv,
    Neg,
}

impl ArithOp {
    pub fn arity(self) -> usize {
        match self {
            ArithOp::Add | ArithOp::Mul => 2,
            ArithOp::Inv | ArithOp::Neg => 1,
        }
    }
}

/// `n` white units feeding an `n`-input black spider.
pub fn encode_nat(n: usize) -> Diagram {
    let mut b = Builder::new(0, 1);
    let sum = b.vertex(VertexKind::WSpider, n, 1).expect("legal arity");
    for i in 0..n {
        let u = b.vertex(VertexKind::GhzSpider, 0, 1).expect("legal arity");
        b.link(u, 0, sum, i).expect("free ports");
    }
    b.connect(Port::out_of(sum, 0), Port::output(0), Decoration::PLAIN)
        .expect("free ports");
    b.finish().expect("valid encoding")
}

/// White multiplication of `enc |p|` and the ticked `enc q`, crossed when
/// `p < 0`.
pub fn encode_rational(p: i64, q: i64) -> Result<Diagram, ArithError> {
    if q == 0 {
        return Err(ArithError::ZeroDenominator);
    }
    if q < 0 {
        return Err(ArithError::NegativeDenominator(q));
    }
    let num = encode_nat(p.unsigned_abs() as usize);
    let den = decorate_output(&encode_nat(q as usize), 0, Decoration::TICK);
    let d = seq(&par(&num, &den), &mult(Colour::White));
    Ok(if p < 0 {
        decorate_output(&d, 0, Decoration::CROSS)
    } else {
        d
    })
}

/// Evaluates a point and returns the ratio of its `|0>` and `|1>` amplitudes.
pub fn decode(d: &Diagram, env: &Environment) -> Result<ExtendedRational, ArithError> {
    if d.signature() != (0, 1) {
        return Err(ArithError::WrongSignature(d.signature()));
    }
    let t = evaluate(d, env)?;
    Ok(ExtendedRational::from_ratio(&t.entries()[0], &t.entries()[1]))
}

pub fn apply_arith(op: ArithOp, args: &[Diagram]) -> Result<Diagram, ArithError> {
    if args.len() != op.arity() || args.iter().any(|a| a.signature() != (0, 1)) {
        return Err(ArithError::ArityMismatch {
            op,
            expected: op.arity(),
        });
    }
    Ok(match op {
        ArithOp::Add => seq(&par(&args[0], &args[1]), &mult(Colour::Black)),
        ArithOp::Mul => seq(&par(&args[0], &args[1]), &mult(Colour::White)),
        ArithOp::Inv => decorate_output(&args[0], 0, Decoration::TICK),
        ArithOp::Neg => decorate_output(&args[0], 0, Decoration::CROSS),
    })
}

/// Largest literal accepted by [`Expr::compile`]. The encoding of `n` is a
/// black spider with `n + 1` legs, and its dense tensor has `2^(n+1)`
/// entries.
pub const MAX_LITERAL: u64 = 16;

/// Arithmetic expressions over natural literals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Lit(u64),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
}

struct Parser<'a> {
    src: &'a [u8],
    at: usize,
}

impl<'a> Parser<'a> {
    fn skip(&mut self) {
        while self.at < self.src.len() && self.src[self.at].is_ascii_whitespace() {
            self.at += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip();
        self.src.get(self.at).copied()
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ArithError> {
        Err(ArithError::ParseError {
            at: self.at,
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<Expr, ArithError> {
        let mut lhs = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.at += 1;
            let rhs = self.term()?;
            lhs = if c == b'+' {
                Expr::Add(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Sub(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ArithError> {
        let mut lhs = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.at += 1;
            let rhs = self.unary()?;
            lhs = if c == b'*' {
                Expr::Mul(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Div(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ArithError> {
        match self.peek() {
            Some(b'-') => {
                self.at += 1;
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some(b'(') => {
                self.at += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected `)`");
                }
                self.at += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.at;
                while self.at < self.src.len() && self.src[self.at].is_ascii_digit() {
                    self.at += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.at]).unwrap();
                match text.parse() {
                    Ok(n) => Ok(Expr::Lit(n)),
                    Err(_) => Err(ArithError::ParseError {
                        at: start,
                        message: format!("literal `{text}` is too large"),
                    }),
                }
            }
            Some(c) => self.err(format!("unexpected `{}`", c as char)),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses `+ - * /`, unary minus and parentheses over natural literals.
pub fn parse_expression(text: &str) -> Result<Expr, ArithError> {
    let mut p = Parser {
        src: text.as_bytes(),
        at: 0,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}

impl Expr {
    /// Exact value computed directly on rationals.
    pub fn oracle(&self) -> Result<BigRational, ArithError> {
        Ok(match self {
            Expr::Lit(n) => BigRational::from_integer(BigInt::from(*n)),
            Expr::Neg(a) => -a.oracle()?,
            Expr::Add(a, b) => a.oracle()? + b.oracle()?,
            Expr::Sub(a, b) => a.oracle()? - b.oracle()?,
            Expr::Mul(a, b) => a.oracle()? * b.oracle()?,
            Expr::Div(a, b) => {
                let d = b.oracle()?;
                if d.is_zero() {
                    return Err(ArithError::DegenerateValue);
                }
                a.oracle()? / d
            }
        })
    }

    /// The diagram built from encodings and the four operations.
    pub fn compile(&self) -> Result<Diagram, ArithError> {
        let bin =
            |op, a: &Expr, b: &Expr| -> Result<Diagram, ArithError> { apply_arith(op, &[a.compile()?, b.compile()?]) };
        match self {
            Expr::Lit(n) if *n > MAX_LITERAL => Err(ArithError::LiteralTooLarge(*n)),
            Expr::Lit(n) => Ok(encode_nat(*n as usize)),
            Expr::Neg(a) => apply_arith(ArithOp::Neg, &[a.compile()?]),
            Expr::Add(a, b) => bin(ArithOp::Add, a, b),
            Expr::Mul(a, b) => bin(ArithOp::Mul, a, b),
            Expr::Sub(a, b) => {
                let nb = apply_arith(ArithOp::Neg, &[b.compile()?])?;
                apply_arith(ArithOp::Add, &[a.compile()?, nb])
            }
            Expr::Div(a, b) => {
                let ib = apply_arith(ArithOp::Inv, &[b.compile()?])?;
                apply_arith(ArithOp::Mul, &[a.compile()?, ib])
            }
        }
    }
}

/// Compiles an expression, decodes the diagram and computes the same value
/// directly; returns the diagram, the decoded value and the direct value.
pub fn eval_expression(text: &str) -> Result<(Diagram, ExtendedRational, ExtendedRational), ArithError> {
    let e = parse_expression(text)?;
    let oracle = ExtendedRational::Finite(e.oracle()?);
    let d = e.compile()?;
    let decoded = decode(&d, &Environment::new())?;
    Ok((d, decoded, oracle))
}

/// `p/q` in lowest terms with a positive denominator, from `P/Q` text.
pub fn parse_fraction(text: &str) -> Result<(i64, i64), ArithError> {
    let bad = |message: &str| ArithError::ParseError {
        at: 0,
        message: message.to_string(),
    };
    let (p, q) = match text.trim().split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (text.trim(), "1"),
    };
    let p: i64 = p.parse().map_err(|_| bad("numerator is not an integer"))?;
    let q: i64 = q.parse().map_err(|_| bad("denominator is not an integer"))?;
    if q == 0 {
        return Err(ArithError::ZeroDenominator);
    }
    let r = BigRational::new(BigInt::from(p), BigInt::from(q));
    let p: i64 = r.numer().try_into().map_err(|_| bad("numerator out of range"))?;
    let q: i64 = r.denom().try_into().map_err(|_| bad("denominator out of range"))?;
    Ok((p, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{int, Tensor};

    fn value(d: &Diagram) -> ExtendedRational {
        decode(d, &Environment::new()).unwrap()
    }

    #[test]
    fn small_encodings() {
        let env = Environment::new();
        assert_eq!(
            evaluate(&encode_nat(0), &env).unwrap(),
            Tensor::from_ints(0, 1, &[0, 1])
        );
        assert_eq!(
            evaluate(&encode_nat(1), &env).unwrap(),
            Tensor::from_ints(0, 1, &[1, 1])
        );
        assert_eq!(
            evaluate(&encode_nat(3), &env).unwrap(),
            Tensor::from_ints(0, 1, &[3, 1])
        );
        let half = evaluate(&encode_rational(1, 2).unwrap(), &env).unwrap();
        assert_eq!(half.entries(), &[int(1), int(2)]);
        let neg = evaluate(&encode_rational(-2, 3).unwrap(), &env).unwrap();
        assert_eq!(neg.entries(), &[int(-2), int(3)]);
    }

    #[test]
    fn decode_cases() {
        assert_eq!(value(&encode_nat(0)), ExtendedRational::from_ints(0, 1));
        let ket0 = decorate_output(&encode_nat(0), 0, Decoration::TICK);
        assert_eq!(value(&ket0), ExtendedRational::Infinity);
        let vanishing = seq(
            &crate::shapes::unit(Colour::Black),
            &crate::shapes::counit(Colour::Black),
        );
        assert_eq!(value(&par(&encode_nat(2), &vanishing)), ExtendedRational::Undefined);
        assert!(matches!(
            decode(&mult(Colour::White), &Environment::new()),
            Err(ArithError::WrongSignature((2, 1)))
        ));
    }

    #[test]
    fn operations() {
        let f = |p, q| encode_rational(p, q).unwrap();
        let add = apply_arith(ArithOp::Add, &[f(1, 2), f(1, 3)]).unwrap();
        assert_eq!(value(&add), ExtendedRational::from_ints(5, 6));
        let mul = apply_arith(ArithOp::Mul, &[f(2, 3), f(3, 4)]).unwrap();
        assert_eq!(value(&mul), ExtendedRational::from_ints(1, 2));
        let neg = apply_arith(ArithOp::Neg, &[apply_arith(ArithOp::Neg, &[f(2, 3)]).unwrap()]).unwrap();
        assert_eq!(value(&neg), ExtendedRational::from_ints(2, 3));
        let inv = apply_arith(ArithOp::Inv, &[encode_nat(2)]).unwrap();
        assert_eq!(value(&inv), ExtendedRational::from_ints(1, 2));
        assert!(matches!(
            apply_arith(ArithOp::Add, &[f(1, 2)]),
            Err(ArithError::ArityMismatch { .. })
        ));
        assert_eq!(encode_rational(1, 0), Err(ArithError::ZeroDenominator));
    }

    #[test]
    fn expressions() {
        for (text, expected) in [
            ("1/2 + 1/3", (5, 6)),
            ("2 * 3", (6, 1)),
            ("-(2/3) + 2/3", (0, 1)),
            ("7 - 10", (-3, 1)),
        ] {
            let (_, decoded, oracle) = eval_expression(text).unwrap();
            assert_eq!(decoded, oracle, "{text}");
            assert_eq!(oracle, ExtendedRational::from_ints(expected.0, expected.1));
        }
        assert!(matches!(eval_expression("1 +"), Err(ArithError::ParseError { .. })));
        assert!(matches!(
            eval_expression("1 / (2 - 2)"),
            Err(ArithError::DegenerateValue)
        ));
        assert!(matches!(eval_expression("100"), Err(ArithError::LiteralTooLarge(100))));
    }

    #[test]
    fn fractions_parse_reduced() {
        assert_eq!(parse_fraction("4/6").unwrap(), (2, 3));
        assert_eq!(parse_fraction("3/-4").unwrap(), (-3, 4));
        assert_eq!(parse_fraction(" 5 ").unwrap(), (5, 1));
        assert_eq!(parse_fraction("1/0"), Err(ArithError::ZeroDenominator));
        assert_eq!(ExtendedRational::from_ints(-6, 4).to_string(), "-3/2");
    }
}
