//! Truncated Taylor arithmetic up to third order.
//!
//! A [`Jet`] carries `f, f', f'', f'''` of some quantity with respect to one
//! real variable, together with the highest order that is actually known.
//! Combining jets propagates exact derivative rules (Leibniz, Faà di Bruno),
//! so any algebraic expression of jets yields exact derivatives up to the
//! smallest order among its inputs.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Highest derivative order tracked.
pub const MAX_ORDER: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    v: [f64; MAX_ORDER + 1],
    order: usize,
}

impl Jet {
    pub fn new(v: [f64; MAX_ORDER + 1], order: usize) -> Self {
        assert!(order <= MAX_ORDER, "jet order {order} exceeds {MAX_ORDER}");
        let mut v = v;
        for x in v.iter_mut().skip(order + 1) {
            *x = 0.0;
        }
        Jet { v, order }
    }

    pub fn constant(c: f64, order: usize) -> Self {
        Jet::new([c, 0.0, 0.0, 0.0], order)
    }

    /// The independent variable itself, evaluated at `t`.
    pub fn variable(t: f64, order: usize) -> Self {
        Jet::new([t, 1.0, 0.0, 0.0], order)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> f64 {
        self.v[0]
    }

    /// The `k`-th derivative. Panics if `k` exceeds the known order.
    pub fn deriv(&self, k: usize) -> f64 {
        assert!(
            k <= self.order,
            "derivative of order {k} requested from a jet of order {}",
            self.order
        );
        self.v[k]
    }

    pub fn coeffs(&self) -> [f64; MAX_ORDER + 1] {
        self.v
    }

    /// Jet of the time derivative: shifts coefficients down, losing one order.
    pub fn d(&self) -> Jet {
        assert!(self.order >= 1, "cannot differentiate an order-0 jet");
        Jet::new([self.v[1], self.v[2], self.v[3], 0.0], self.order - 1)
    }

    /// Drops orders above `order`.
    pub fn truncate(&self, order: usize) -> Jet {
        Jet::new(self.v, order.min(self.order))
    }

    pub fn is_finite(&self) -> bool {
        self.v[..=self.order].iter().all(|x| x.is_finite())
    }

    /// Chain rule: `outer` holds `h(u0), h'(u0), h''(u0), h'''(u0)` for a
    /// function `h` evaluated at `u0 = self.value()`.
    pub fn compose(&self, outer: [f64; MAX_ORDER + 1]) -> Jet {
        let [_, g1, g2, g3] = self.v;
        let [h0, h1, h2, h3] = outer;
        let v = [
            h0,
            h1 * g1,
            h2 * g1 * g1 + h1 * g2,
            h3 * g1 * g1 * g1 + 3.0 * h2 * g1 * g2 + h1 * g3,
        ];
        Jet::new(v, self.order)
    }

    pub fn recip(&self) -> Jet {
        let u = self.v[0];
        let inv = 1.0 / u;
        let inv2 = inv * inv;
        self.compose([inv, -inv2, 2.0 * inv2 * inv, -6.0 * inv2 * inv2])
    }

    pub fn exp(&self) -> Jet {
        let e = self.v[0].exp();
        self.compose([e, e, e, e])
    }

    pub fn sqrt(&self) -> Jet {
        let s = self.v[0].sqrt();
        let u = self.v[0];
        self.compose([s, 0.5 / s, -0.25 / (s * u), 0.375 / (s * u * u)])
    }

    /// `self^p` for a real exponent; integer exponents are evaluated with `powi`.
    pub fn powf(&self, p: f64) -> Jet {
        let u = self.v[0];
        let pw = |e: f64| -> f64 {
            if e == 0.0 {
                1.0
            } else if e.fract() == 0.0 && e.abs() < 64.0 {
                u.powi(e as i32)
            } else {
                u.powf(e)
            }
        };
        self.compose([
            pw(p),
            p * pw(p - 1.0),
            p * (p - 1.0) * pw(p - 2.0),
            p * (p - 1.0) * (p - 2.0) * pw(p - 3.0),
        ])
    }

    pub fn square(&self) -> Jet {
        *self * *self
    }

    pub fn scale(&self, c: f64) -> Jet {
        let mut v = self.v;
        for x in v.iter_mut() {
            *x *= c;
        }
        Jet::new(v, self.order)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        let order = self.order.min(rhs.order);
        let mut v = [0.0; MAX_ORDER + 1];
        for (k, x) in v.iter_mut().enumerate() {
            *x = self.v[k] + rhs.v[k];
        }
        Jet::new(v, order)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        self + (-rhs)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let order = self.order.min(rhs.order);
        let (f, g) = (self.v, rhs.v);
        let v = [
            f[0] * g[0],
            f[1] * g[0] + f[0] * g[1],
            f[2] * g[0] + 2.0 * f[1] * g[1] + f[0] * g[2],
            f[3] * g[0] + 3.0 * f[2] * g[1] + 3.0 * f[1] * g[2] + f[0] * g[3],
        ];
        Jet::new(v, order)
    }
}

impl Div for Jet {
    type Output = Jet;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Jet) -> Jet {
        self * rhs.recip()
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(self, rhs: f64) -> Jet {
        let mut v = self.v;
        v[0] += rhs;
        Jet::new(v, self.order)
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(self, rhs: f64) -> Jet {
        self + (-rhs)
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

impl Mul<Jet> for f64 {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        rhs.scale(self)
    }
}

impl Div<f64> for Jet {
    type Output = Jet;
    fn div(self, rhs: f64) -> Jet {
        self.scale(1.0 / rhs)
    }
}
