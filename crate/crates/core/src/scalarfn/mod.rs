//! Scalar functions of one real variable with exact derivatives.
//!
//! A [`ScalarFn`] is an immutable expression tree. Evaluation walks the tree
//! once with truncated Taylor arithmetic ([`Jet`]), so the value and the
//! first three derivatives come out of the same pass and are exact up to
//! rounding. Nodes that can be singular (quotient, square root, real power)
//! carry an explicit validity interval and refuse to evaluate outside it or
//! at a singular point instead of returning NaN.
//!
//! The same type serves for time functions `g1(t)`, `g2(t)`, `phi(t)` and for
//! shape functions `F(u)`; the variable is always printed as `t`.

mod jet;
mod quad;
mod text;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use jet::{Jet, MAX_ORDER};
pub use quad::{integrate_fn, QuadratureConfig};
pub use text::{parse, parse_with};

/// Open interval `(lo, hi)` on which a node is declared valid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const REAL_LINE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(Error::invalid(format!("empty validity interval ({lo}, {hi})")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn positive() -> Self {
        Interval {
            lo: 0.0,
            hi: f64::INFINITY,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        x > self.lo && x < self.hi
    }

    pub fn is_real_line(&self) -> bool {
        *self == Self::REAL_LINE
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Const(f64),
    Var,
    /// `c0 + c1 t + c2 t^2 + ...`
    Poly(Vec<f64>),
    Pow {
        base: ScalarFn,
        exponent: f64,
        domain: Interval,
    },
    Exp(ScalarFn),
    Sqrt {
        arg: ScalarFn,
        domain: Interval,
    },
    Sum(Vec<ScalarFn>),
    Product(Vec<ScalarFn>),
    Quotient {
        num: ScalarFn,
        den: ScalarFn,
        domain: Interval,
    },
    /// `outer(inner(t))`
    Compose {
        outer: ScalarFn,
        inner: ScalarFn,
    },
    /// `inner(scale * t + shift)`
    Affine {
        inner: ScalarFn,
        scale: f64,
        shift: f64,
    },
}

/// Immutable scalar function of one variable. Cloning is cheap.
#[derive(Clone, PartialEq)]
pub struct ScalarFn(Arc<Node>);

impl fmt::Debug for ScalarFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ScalarFn({self})")
    }
}

impl ScalarFn {
    fn from_node(node: Node) -> Self {
        ScalarFn(Arc::new(node))
    }

    pub fn constant(c: f64) -> Self {
        Self::from_node(Node::Const(c))
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    /// The identity function `t`.
    pub fn var() -> Self {
        Self::from_node(Node::Var)
    }

    /// Polynomial with coefficients in increasing degree.
    pub fn poly(coeffs: impl Into<Vec<f64>>) -> Self {
        let mut c: Vec<f64> = coeffs.into();
        if c.is_empty() {
            c.push(0.0);
        }
        Self::from_node(Node::Poly(c))
    }

    /// `t^p`
    pub fn power_of_var(p: f64) -> Self {
        Self::var().powf(p)
    }

    pub fn powf(&self, exponent: f64) -> Self {
        self.powf_on(exponent, Interval::REAL_LINE)
    }

    pub fn powf_on(&self, exponent: f64, domain: Interval) -> Self {
        Self::from_node(Node::Pow {
            base: self.clone(),
            exponent,
            domain,
        })
    }

    pub fn exp(&self) -> Self {
        Self::from_node(Node::Exp(self.clone()))
    }

    pub fn sqrt(&self) -> Self {
        self.sqrt_on(Interval::REAL_LINE)
    }

    pub fn sqrt_on(&self, domain: Interval) -> Self {
        Self::from_node(Node::Sqrt {
            arg: self.clone(),
            domain,
        })
    }

    pub fn sum(terms: impl IntoIterator<Item = ScalarFn>) -> Self {
        let terms: Vec<_> = terms.into_iter().collect();
        if terms.is_empty() {
            return Self::zero();
        }
        Self::from_node(Node::Sum(terms))
    }

    pub fn product(factors: impl IntoIterator<Item = ScalarFn>) -> Self {
        let factors: Vec<_> = factors.into_iter().collect();
        if factors.is_empty() {
            return Self::constant(1.0);
        }
        Self::from_node(Node::Product(factors))
    }

    pub fn quotient(num: &ScalarFn, den: &ScalarFn) -> Self {
        Self::quotient_on(num, den, Interval::REAL_LINE)
    }

    pub fn quotient_on(num: &ScalarFn, den: &ScalarFn, domain: Interval) -> Self {
        Self::from_node(Node::Quotient {
            num: num.clone(),
            den: den.clone(),
            domain,
        })
    }

    /// `self(inner(t))`
    pub fn compose(&self, inner: &ScalarFn) -> Self {
        Self::from_node(Node::Compose {
            outer: self.clone(),
            inner: inner.clone(),
        })
    }

    /// `self(scale * t + shift)`
    pub fn affine(&self, scale: f64, shift: f64) -> Self {
        Self::from_node(Node::Affine {
            inner: self.clone(),
            scale,
            shift,
        })
    }

    /// True when the tree is structurally the zero function.
    pub fn is_zero(&self) -> bool {
        match &*self.0 {
            Node::Const(c) => *c == 0.0,
            Node::Poly(c) => c.iter().all(|x| *x == 0.0),
            Node::Sum(terms) => terms.iter().all(ScalarFn::is_zero),
            Node::Product(factors) => factors.iter().any(ScalarFn::is_zero),
            Node::Quotient { num, .. } => num.is_zero(),
            Node::Affine { inner, .. } => inner.is_zero(),
            _ => false,
        }
    }

    /// True when the tree does not depend on its variable.
    pub fn is_constant(&self) -> bool {
        match &*self.0 {
            Node::Const(_) => true,
            Node::Var => false,
            Node::Poly(c) => c.iter().skip(1).all(|x| *x == 0.0),
            Node::Pow { base, .. } => base.is_constant(),
            Node::Exp(a) => a.is_constant(),
            Node::Sqrt { arg, .. } => arg.is_constant(),
            Node::Sum(v) | Node::Product(v) => v.iter().all(ScalarFn::is_constant),
            Node::Quotient { num, den, .. } => num.is_constant() && den.is_constant(),
            Node::Compose { outer, inner } => outer.is_constant() || inner.is_constant(),
            Node::Affine { inner, scale, .. } => inner.is_constant() || *scale == 0.0,
        }
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        Ok(self.jet(t, 0)?.value())
    }

    /// Exact derivative of order 1, 2 or 3.
    pub fn deriv(&self, order: usize, t: f64) -> Result<f64> {
        if !(1..=MAX_ORDER).contains(&order) {
            return Err(Error::invalid(format!(
                "derivative order must be in 1..={MAX_ORDER}, got {order}"
            )));
        }
        Ok(self.jet(t, order)?.deriv(order))
    }

    /// Value and derivatives up to `order` in one pass.
    pub fn jet(&self, t: f64, order: usize) -> Result<Jet> {
        if order > MAX_ORDER {
            return Err(Error::invalid(format!(
                "derivative order must be at most {MAX_ORDER}, got {order}"
            )));
        }
        if !t.is_finite() {
            return Err(Error::domain(format!("non-finite argument {t}")));
        }
        self.jet_at(t, order)
    }

    /// Evaluates a lifted argument: `self(u(x))` for a jet `u` in some other
    /// variable `x`.
    pub fn compose_jet(&self, u: &Jet) -> Result<Jet> {
        let outer = self.jet(u.value(), u.order())?;
        finite(u.compose(outer.coeffs()), "composition")
    }

    fn jet_at(&self, x: f64, n: usize) -> Result<Jet> {
        match &*self.0 {
            Node::Const(c) => Ok(Jet::constant(*c, n)),
            Node::Var => Ok(Jet::variable(x, n)),
            Node::Poly(c) => Ok(poly_jet(c, x, n)),
            Node::Pow {
                base,
                exponent,
                domain,
            } => {
                check_domain(domain, x, "pow")?;
                let b = base.jet_at(x, n)?;
                let u = b.value();
                let integral = exponent.fract() == 0.0;
                if !integral && u <= 0.0 {
                    return Err(Error::domain(format!(
                        "real power {exponent} of non-positive base {u} at t = {x}"
                    )));
                }
                if integral && u == 0.0 && *exponent < n as f64 {
                    return Err(Error::domain(format!(
                        "power {exponent} singular at zero base (t = {x})"
                    )));
                }
                finite(b.powf(*exponent), "pow")
            }
            Node::Exp(a) => finite(a.jet_at(x, n)?.exp(), "exp"),
            Node::Sqrt { arg, domain } => {
                check_domain(domain, x, "sqrt")?;
                let a = arg.jet_at(x, n)?;
                let u = a.value();
                if u < 0.0 || (u == 0.0 && n > 0) {
                    return Err(Error::domain(format!("sqrt of radicand {u} at t = {x}")));
                }
                if u == 0.0 {
                    return Ok(Jet::constant(0.0, n));
                }
                finite(a.sqrt(), "sqrt")
            }
            Node::Sum(terms) => {
                let mut acc = Jet::constant(0.0, n);
                for term in terms {
                    acc = acc + term.jet_at(x, n)?;
                }
                Ok(acc)
            }
            Node::Product(factors) => {
                let mut acc = Jet::constant(1.0, n);
                for factor in factors {
                    acc = acc * factor.jet_at(x, n)?;
                }
                finite(acc, "product")
            }
            Node::Quotient { num, den, domain } => {
                check_domain(domain, x, "quotient")?;
                let d = den.jet_at(x, n)?;
                if d.value() == 0.0 {
                    return Err(Error::domain(format!("zero denominator at t = {x}")));
                }
                let nu = num.jet_at(x, n)?;
                finite(nu / d, "quotient")
            }
            Node::Compose { outer, inner } => {
                let u = inner.jet_at(x, n)?;
                let h = outer.jet_at(u.value(), n)?;
                finite(u.compose(h.coeffs()), "composition")
            }
            Node::Affine { inner, scale, shift } => {
                let h = inner.jet_at(scale * x + shift, n)?;
                let mut v = h.coeffs();
                let mut s = 1.0;
                for c in v.iter_mut() {
                    *c *= s;
                    s *= scale;
                }
                finite(Jet::new(v, n), "affine")
            }
        }
    }

    /// Definite integral over `[a, b]` by adaptive Gauss–Kronrod quadrature.
    pub fn integrate(&self, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64> {
        integrate_fn(|t| self.eval(t), a, b, cfg)
    }
}

fn check_domain(domain: &Interval, x: f64, what: &str) -> Result<()> {
    if domain.contains(x) {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "{what} evaluated at t = {x} outside its validity interval ({}, {})",
            domain.lo, domain.hi
        )))
    }
}

fn finite(j: Jet, what: &str) -> Result<Jet> {
    if j.is_finite() {
        Ok(j)
    } else {
        Err(Error::domain(format!("{what} produced a non-finite value")))
    }
}

fn poly_jet(coeffs: &[f64], x: f64, n: usize) -> Jet {
    let mut v = [0.0; MAX_ORDER + 1];
    let mut c = coeffs.to_vec();
    for slot in v.iter_mut().take(n + 1) {
        *slot = c.iter().rev().fold(0.0, |acc, ck| acc * x + ck);
        // differentiate coefficients in place
        c = c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, ck)| k as f64 * ck)
            .collect();
        if c.is_empty() {
            c.push(0.0);
        }
    }
    Jet::new(v, n)
}

impl fmt::Display for ScalarFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        text::write_expr(self, f)
    }
}

impl Serialize for ScalarFn {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ScalarFn {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(serde::de::Error::custom)
    }
}

impl From<f64> for ScalarFn {
    fn from(c: f64) -> Self {
        ScalarFn::constant(c)
    }
}

fn flatten_into(out: &mut Vec<ScalarFn>, f: &ScalarFn, product: bool) {
    match (&*f.0, product) {
        (Node::Sum(terms), false) => out.extend(terms.iter().cloned()),
        (Node::Product(factors), true) => out.extend(factors.iter().cloned()),
        _ => out.push(f.clone()),
    }
}

impl Add for &ScalarFn {
    type Output = ScalarFn;
    fn add(self, rhs: &ScalarFn) -> ScalarFn {
        let mut v = Vec::new();
        flatten_into(&mut v, self, false);
        flatten_into(&mut v, rhs, false);
        ScalarFn::from_node(Node::Sum(v))
    }
}

impl Mul for &ScalarFn {
    type Output = ScalarFn;
    fn mul(self, rhs: &ScalarFn) -> ScalarFn {
        let mut v = Vec::new();
        flatten_into(&mut v, self, true);
        flatten_into(&mut v, rhs, true);
        ScalarFn::from_node(Node::Product(v))
    }
}

impl Neg for &ScalarFn {
    type Output = ScalarFn;
    fn neg(self) -> ScalarFn {
        &ScalarFn::constant(-1.0) * self
    }
}

impl Sub for &ScalarFn {
    type Output = ScalarFn;
    fn sub(self, rhs: &ScalarFn) -> ScalarFn {
        self + &(-rhs)
    }
}

impl Div for &ScalarFn {
    type Output = ScalarFn;
    fn div(self, rhs: &ScalarFn) -> ScalarFn {
        ScalarFn::quotient(self, rhs)
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for ScalarFn {
            type Output = ScalarFn;
            fn $m(self, rhs: ScalarFn) -> ScalarFn { (&self).$m(&rhs) }
        }
        impl $tr<f64> for ScalarFn {
            type Output = ScalarFn;
            fn $m(self, rhs: f64) -> ScalarFn { (&self).$m(&ScalarFn::constant(rhs)) }
        }
        impl $tr<f64> for &ScalarFn {
            type Output = ScalarFn;
            fn $m(self, rhs: f64) -> ScalarFn { self.$m(&ScalarFn::constant(rhs)) }
        }
        impl $tr<ScalarFn> for f64 {
            type Output = ScalarFn;
            fn $m(self, rhs: ScalarFn) -> ScalarFn { (&ScalarFn::constant(self)).$m(&rhs) }
        }
        impl $tr<&ScalarFn> for f64 {
            type Output = ScalarFn;
            fn $m(self, rhs: &ScalarFn) -> ScalarFn { (&ScalarFn::constant(self)).$m(rhs) }
        }
    )*};
}

forward_owned!(Add::add, Sub::sub, Mul::mul, Div::div);

impl Neg for ScalarFn {
    type Output = ScalarFn;
    fn neg(self) -> ScalarFn {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> ScalarFn {
        ScalarFn::var()
    }

    #[test]
    fn polynomial_eval() {
        let f = &t() * &t();
        assert_eq!(f.eval(3.0).unwrap(), 9.0);
    }

    #[test]
    fn sqrt_radicand_identity() {
        let f = (1.0 + &t() * &t()).sqrt();
        assert_eq!(f.eval(0.0).unwrap(), 1.0);
    }

    #[test]
    fn excluded_point_is_domain_error() {
        let f = ScalarFn::quotient_on(&(-t()).exp(), &t(), Interval::positive());
        assert!(matches!(f.eval(0.0), Err(Error::Domain(_))));
        assert!(matches!(f.eval(-1.0), Err(Error::Domain(_))));
        assert!(f.eval(1.0).is_ok());
    }

    #[test]
    fn zero_denominator_without_declared_interval() {
        let f = 1.0 / t();
        assert!(matches!(f.eval(0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn cubic_third_derivative() {
        let f = ScalarFn::power_of_var(3.0);
        for x in [-2.0, 0.0, 0.7, 5.0] {
            assert_eq!(f.deriv(3, x).unwrap(), 6.0);
        }
        let p = ScalarFn::poly(vec![0.0, 0.0, 0.0, 1.0]);
        assert_eq!(p.deriv(3, 1.3).unwrap(), 6.0);
    }

    #[test]
    fn exp_chain_rule() {
        let f = (-t()).exp();
        assert_eq!(f.deriv(1, 0.0).unwrap(), -1.0);
    }

    #[test]
    fn sqrt_second_derivative_against_finite_differences() {
        let f = (1.0 + &t() * &t()).sqrt();
        let h = 1e-5;
        let fd = (f.eval(h).unwrap() - 2.0 * f.eval(0.0).unwrap() + f.eval(-h).unwrap()) / (h * h);
        let exact = f.deriv(2, 0.0).unwrap();
        assert_eq!(exact, 1.0);
        assert!((fd - exact).abs() < 1e-5, "fd = {fd}");
    }

    #[test]
    fn polynomial_derivative_coefficients_exact() {
        // 1 + 2t + 3t^2 + 4t^3: p' = 2 + 6t + 12t^2, p'' = 6 + 24t, p''' = 24
        let p = ScalarFn::poly(vec![1.0, 2.0, 3.0, 4.0]);
        let x = 0.5;
        assert_eq!(p.eval(x).unwrap(), 1.0 + 1.0 + 0.75 + 0.5);
        assert_eq!(p.deriv(1, x).unwrap(), 2.0 + 3.0 + 3.0);
        assert_eq!(p.deriv(2, x).unwrap(), 6.0 + 12.0);
        assert_eq!(p.deriv(3, x).unwrap(), 24.0);
    }

    #[test]
    fn bad_derivative_order_rejected() {
        assert!(t().deriv(0, 1.0).is_err());
        assert!(t().deriv(4, 1.0).is_err());
    }

    #[test]
    fn affine_and_compose_chain() {
        // exp(2t + 1): derivative 2 exp(2t+1)
        let f = t().exp().affine(2.0, 1.0);
        let x = 0.3;
        let e = (2.0f64 * x + 1.0).exp();
        assert!((f.deriv(1, x).unwrap() - 2.0 * e).abs() < 1e-14 * e);
        assert!((f.deriv(3, x).unwrap() - 8.0 * e).abs() < 1e-13 * e);
        let g = t().exp().compose(&(2.0 * t() + 1.0));
        assert!((g.deriv(2, x).unwrap() - 4.0 * e).abs() < 1e-13 * e);
    }

    #[test]
    fn negative_real_power_of_negative_base_fails() {
        let f = t().powf(-1.5);
        assert!(f.eval(-1.0).is_err());
        assert!(f.eval(0.0).is_err());
        assert!((f.eval(4.0).unwrap() - 0.125).abs() < 1e-16);
    }

    #[test]
    fn evaluation_is_bit_identical() {
        let f = (1.0 + 0.3 * t() + 0.1 * (t() * t())).sqrt() * (-t()).exp() / (2.0 + t());
        for x in [0.1, 1.7, 9.3] {
            let a = f.jet(x, 3).unwrap();
            let b = f.jet(x, 3).unwrap();
            assert_eq!(a.coeffs().map(f64::to_bits), b.coeffs().map(f64::to_bits));
        }
    }

    #[test]
    fn structural_predicates() {
        assert!(ScalarFn::zero().is_zero());
        assert!((0.0 * t()).is_zero());
        assert!(!t().is_zero());
        assert!(ScalarFn::constant(2.0).is_constant());
        assert!(!(t() + 1.0).is_constant());
    }
}
