//! Prefix-expression text form of [`ScalarFn`].
//!
//! ```text
//! expr   := number | var | symbol | "(" op expr* ")"
//! var    := t | u | s | x            (all denote the function's variable)
//! op     := + | * | - | / | exp | sqrt | pow | poly | compose | affine
//! ```
//!
//! `(pow f p)` takes a numeric exponent, `(poly c0 c1 ...)` numeric
//! coefficients in increasing degree, `(affine a b f)` is `f(a*t + b)` and
//! `(compose f g)` is `f(g(t))`. `/`, `sqrt` and `pow` accept a trailing
//! `:domain lo hi` validity interval. Symbols other than the variable must be
//! bound to numbers through [`parse_with`]. Printing always uses `t` and emits
//! every float in shortest round-trip form, so `parse(print(f)) == f`.

use std::collections::BTreeMap;
use std::fmt;

use super::{Interval, Node, ScalarFn};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Open,
    Close,
    Atom(String),
}

fn tokenize(src: &str) -> Vec<(usize, Token)> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        match c {
            '(' => {
                out.push((i, Token::Open));
                chars.next();
            }
            ')' => {
                out.push((i, Token::Close));
                chars.next();
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            _ => {
                let start = i;
                let mut atom = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if c == '(' || c == ')' || c.is_whitespace() {
                        break;
                    }
                    atom.push(c);
                    chars.next();
                }
                out.push((start, Token::Atom(atom)));
            }
        }
    }
    out
}

struct Parser<'a> {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
    bindings: &'a BTreeMap<String, f64>,
}

fn perr(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        offset,
        message: message.into(),
    }
}

fn parse_number(s: &str) -> Option<f64> {
    match s {
        "inf" | "+inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        _ => {
            let first = s.chars().next()?;
            if !(first.is_ascii_digit() || first == '-' || first == '+' || first == '.') {
                return None;
            }
            s.parse::<f64>().ok().filter(|v| !v.is_nan())
        }
    }
}

impl Parser<'_> {
    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map(|t| t.0).unwrap_or(self.end)
    }

    fn next(&mut self) -> Result<Token> {
        let tok = self
            .tokens
            .get(self.pos)
            .map(|t| t.1.clone())
            .ok_or_else(|| perr(self.end, "unexpected end of input"))?;
        self.pos += 1;
        Ok(tok)
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|t| &t.1)
    }

    fn number(&mut self) -> Result<f64> {
        let off = self.offset();
        match self.next()? {
            Token::Atom(a) => parse_number(&a)
                .or_else(|| self.bindings.get(&a).copied())
                .ok_or_else(|| perr(off, format!("expected a number, found `{a}`"))),
            _ => Err(perr(off, "expected a number")),
        }
    }

    fn expr(&mut self) -> Result<ScalarFn> {
        let off = self.offset();
        match self.next()? {
            Token::Close => Err(perr(off, "unexpected `)`")),
            Token::Atom(a) => self.atom(&a, off),
            Token::Open => {
                let op_off = self.offset();
                let op = match self.next()? {
                    Token::Atom(a) => a,
                    _ => return Err(perr(op_off, "expected an operator after `(`")),
                };
                let f = self.form(&op, op_off)?;
                let close = self.offset();
                match self.next() {
                    Ok(Token::Close) => Ok(f),
                    _ => Err(perr(close, format!("expected `)` to close `{op}`"))),
                }
            }
        }
    }

    fn atom(&self, a: &str, off: usize) -> Result<ScalarFn> {
        if matches!(a, "t" | "u" | "s" | "x") {
            return Ok(ScalarFn::var());
        }
        if let Some(v) = parse_number(a) {
            return Ok(ScalarFn::constant(v));
        }
        if let Some(v) = self.bindings.get(a) {
            return Ok(ScalarFn::constant(*v));
        }
        Err(perr(off, format!("unbound symbol `{a}`")))
    }

    fn args_until_close(&mut self) -> Result<Vec<ScalarFn>> {
        let mut args = Vec::new();
        while !matches!(self.peek(), Some(Token::Close) | None) {
            if let Some(Token::Atom(a)) = self.peek() {
                if a == ":domain" {
                    break;
                }
            }
            args.push(self.expr()?);
        }
        Ok(args)
    }

    fn domain(&mut self) -> Result<Interval> {
        if let Some(Token::Atom(a)) = self.peek() {
            if a == ":domain" {
                self.pos += 1;
                let off = self.offset();
                let lo = self.number()?;
                let hi = self.number()?;
                return Interval::new(lo, hi).map_err(|e| perr(off, e.to_string()));
            }
        }
        Ok(Interval::REAL_LINE)
    }

    fn arity(op: &str, off: usize, args: &[ScalarFn], n: usize) -> Result<()> {
        if args.len() == n {
            Ok(())
        } else {
            Err(perr(
                off,
                format!("`{op}` takes {n} argument(s), got {}", args.len()),
            ))
        }
    }

    fn form(&mut self, op: &str, off: usize) -> Result<ScalarFn> {
        match op {
            "+" | "*" => {
                let args = self.args_until_close()?;
                if args.is_empty() {
                    return Err(perr(off, format!("`{op}` needs at least one argument")));
                }
                Ok(ScalarFn::from_node(if op == "+" {
                    Node::Sum(args)
                } else {
                    Node::Product(args)
                }))
            }
            "-" => {
                let args = self.args_until_close()?;
                let neg = |f: &ScalarFn| {
                    ScalarFn::from_node(Node::Product(vec![ScalarFn::constant(-1.0), f.clone()]))
                };
                match args.len() {
                    0 => Err(perr(off, "`-` needs at least one argument")),
                    1 => Ok(neg(&args[0])),
                    _ => {
                        let mut terms = vec![args[0].clone()];
                        terms.extend(args[1..].iter().map(neg));
                        Ok(ScalarFn::from_node(Node::Sum(terms)))
                    }
                }
            }
            "/" => {
                let args = self.args_until_close()?;
                Self::arity(op, off, &args, 2)?;
                let domain = self.domain()?;
                Ok(ScalarFn::quotient_on(&args[0], &args[1], domain))
            }
            "exp" => {
                let args = self.args_until_close()?;
                Self::arity(op, off, &args, 1)?;
                Ok(args[0].exp())
            }
            "sqrt" => {
                let args = self.args_until_close()?;
                Self::arity(op, off, &args, 1)?;
                let domain = self.domain()?;
                Ok(args[0].sqrt_on(domain))
            }
            "pow" => {
                let base = self.expr()?;
                let p = self.number()?;
                let domain = self.domain()?;
                Ok(base.powf_on(p, domain))
            }
            "poly" => {
                let mut c = Vec::new();
                while !matches!(self.peek(), Some(Token::Close) | None) {
                    c.push(self.number()?);
                }
                if c.is_empty() {
                    return Err(perr(off, "`poly` needs at least one coefficient"));
                }
                Ok(ScalarFn::poly(c))
            }
            "compose" => {
                let args = self.args_until_close()?;
                Self::arity(op, off, &args, 2)?;
                Ok(args[0].compose(&args[1]))
            }
            "affine" => {
                let a = self.number()?;
                let b = self.number()?;
                let f = self.expr()?;
                Ok(f.affine(a, b))
            }
            other => Err(perr(off, format!("unknown operator `{other}`"))),
        }
    }
}

/// Parses an expression with no symbol bindings.
pub fn parse(src: &str) -> Result<ScalarFn> {
    parse_with(src, &BTreeMap::new())
}

/// Parses an expression, substituting bound symbols by their numeric values.
pub fn parse_with(src: &str, bindings: &BTreeMap<String, f64>) -> Result<ScalarFn> {
    let mut p = Parser {
        tokens: tokenize(src),
        pos: 0,
        end: src.len(),
        bindings,
    };
    let f = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(perr(p.offset(), "trailing input after expression"));
    }
    Ok(f)
}

pub(super) fn write_num(x: f64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if x == 0.0 || !x.is_finite() || (1e-5..1e16).contains(&x.abs()) {
        write!(f, "{x}")
    } else {
        write!(f, "{x:e}")
    }
}

fn write_domain(d: &Interval, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if d.is_real_line() {
        return Ok(());
    }
    f.write_str(" :domain ")?;
    write_num(d.lo, f)?;
    f.write_str(" ")?;
    write_num(d.hi, f)
}

pub(super) fn write_expr(e: &ScalarFn, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match &*e.0 {
        Node::Const(c) => write_num(*c, f),
        Node::Var => f.write_str("t"),
        Node::Poly(c) => {
            f.write_str("(poly")?;
            for x in c {
                f.write_str(" ")?;
                write_num(*x, f)?;
            }
            f.write_str(")")
        }
        Node::Pow {
            base,
            exponent,
            domain,
        } => {
            f.write_str("(pow ")?;
            write_expr(base, f)?;
            f.write_str(" ")?;
            write_num(*exponent, f)?;
            write_domain(domain, f)?;
            f.write_str(")")
        }
        Node::Exp(a) => {
            f.write_str("(exp ")?;
            write_expr(a, f)?;
            f.write_str(")")
        }
        Node::Sqrt { arg, domain } => {
            f.write_str("(sqrt ")?;
            write_expr(arg, f)?;
            write_domain(domain, f)?;
            f.write_str(")")
        }
        Node::Sum(v) | Node::Product(v) => {
            f.write_str(if matches!(&*e.0, Node::Sum(_)) { "(+" } else { "(*" })?;
            for x in v {
                f.write_str(" ")?;
                write_expr(x, f)?;
            }
            f.write_str(")")
        }
        Node::Quotient { num, den, domain } => {
            f.write_str("(/ ")?;
            write_expr(num, f)?;
            f.write_str(" ")?;
            write_expr(den, f)?;
            write_domain(domain, f)?;
            f.write_str(")")
        }
        Node::Compose { outer, inner } => {
            f.write_str("(compose ")?;
            write_expr(outer, f)?;
            f.write_str(" ")?;
            write_expr(inner, f)?;
            f.write_str(")")
        }
        Node::Affine { inner, scale, shift } => {
            f.write_str("(affine ")?;
            write_num(*scale, f)?;
            f.write_str(" ")?;
            write_num(*shift, f)?;
            f.write_str(" ")?;
            write_expr(inner, f)?;
            f.write_str(")")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_bindings() {
        let mut b = BTreeMap::new();
        b.insert("b1".to_string(), 2.0);
        b.insert("b2".to_string(), 1.0);
        let f = parse_with("(sqrt (+ 1 (* b1 t) (* b2 t t)))", &b).unwrap();
        // sqrt(1 + 2t + t^2) = 1 + t
        assert!((f.eval(3.0).unwrap() - 4.0).abs() < 1e-15);
    }

    #[test]
    fn unbound_symbol_is_an_error() {
        let err = parse("(+ 1 k)").unwrap_err();
        assert!(matches!(err, Error::Parse { offset: 5, .. }), "{err:?}");
    }

    #[test]
    fn print_parse_round_trip() {
        let src = "(+ (poly 1 -0.5 2.5e-7) (/ (exp (* -1 t)) t :domain 0 inf) (pow (sqrt t) -1.5) (affine 2 0.1 (compose (exp t) (* t t))))";
        let f = parse(src).unwrap();
        let printed = f.to_string();
        assert_eq!(printed, src);
        assert_eq!(parse(&printed).unwrap(), f);
    }

    #[test]
    fn subtraction_forms() {
        let f = parse("(- t 1 2)").unwrap();
        assert_eq!(f.eval(5.0).unwrap(), 2.0);
        let g = parse("(- t)").unwrap();
        assert_eq!(g.eval(5.0).unwrap(), -5.0);
    }

    #[test]
    fn malformed_inputs() {
        for src in [
            "", "(", "(+ 1 2", "(foo 1)", "(/ 1)", "1 2", ")", "(pow t)", "(poly)",
        ] {
            assert!(parse(src).is_err(), "accepted {src:?}");
        }
    }

    #[test]
    fn domain_annotation_enforced() {
        let f = parse("(/ 1 t :domain 0 inf)").unwrap();
        assert!(f.eval(-1.0).is_err());
        assert_eq!(f.eval(2.0).unwrap(), 0.5);
    }
}
