//! One-dimensional time-dependent oscillator with an arbitrary similarity
//! term, and the auxiliary (Ermakov–Pinney) equations its invariant needs.
//!
//! `U(t, q) = 1/2 Omega^2 q^2 - F1 q + rho^{-2} G((q - alpha) / rho)` admits
//! `I = 1/2 [rho (q' - alpha') - rho' (q - alpha)]^2 + k/2 ((q - alpha)/rho)^2
//! + G((q - alpha)/rho)` whenever `rho'' + Omega^2 rho = k / rho^3` and
//! `alpha'' + Omega^2 alpha = F1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalarfn::ScalarFn;

/// Which first bracket to use in the invariant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LewisLeachBracket {
    /// `rho (q' - alpha') - rho' (q - alpha)`
    Velocity,
    /// `rho (rho' - alpha') - rho' (q - alpha)`, the bracket with `rho'` in
    /// place of the velocity. Kept to show that it is not conserved.
    RhoDot,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LewisLeach {
    pub rho: ScalarFn,
    pub alpha: ScalarFn,
    pub omega: ScalarFn,
    #[serde(rename = "F1")]
    pub f1: ScalarFn,
    /// Similarity term `G`.
    #[serde(rename = "G")]
    pub g_tilde: ScalarFn,
    pub k: f64,
}

impl LewisLeach {
    fn scaled(&self, t: f64, q: f64) -> Result<(f64, f64)> {
        let rho = self.rho.eval(t)?;
        if rho <= 0.0 {
            return Err(Error::domain(format!(
                "rho must be positive, got {rho} at t = {t}"
            )));
        }
        Ok((rho, (q - self.alpha.eval(t)?) / rho))
    }

    pub fn potential(&self, t: f64, q: f64) -> Result<f64> {
        let (rho, x) = self.scaled(t, q)?;
        let om = self.omega.eval(t)?;
        Ok(0.5 * om * om * q * q - self.f1.eval(t)? * q + self.g_tilde.eval(x)? / (rho * rho))
    }

    /// `q'' = -dU/dq`.
    pub fn acceleration(&self, t: f64, q: f64) -> Result<f64> {
        let (rho, x) = self.scaled(t, q)?;
        let om = self.omega.eval(t)?;
        Ok(-om * om * q + self.f1.eval(t)? - self.g_tilde.deriv(1, x)? / (rho * rho * rho))
    }

    pub fn invariant(&self, t: f64, q: f64, qdot: f64, bracket: LewisLeachBracket) -> Result<f64> {
        let rho = self.rho.jet(t, 1)?;
        let alpha = self.alpha.jet(t, 1)?;
        let (_, x) = self.scaled(t, q)?;
        let lead = match bracket {
            LewisLeachBracket::Velocity => qdot - alpha.deriv(1),
            LewisLeachBracket::RhoDot => rho.deriv(1) - alpha.deriv(1),
        };
        let bracket = rho.value() * lead - rho.deriv(1) * (q - alpha.value());
        Ok(0.5 * bracket * bracket + 0.5 * self.k * x * x + self.g_tilde.eval(x)?)
    }

    pub fn ermakov_residuals(&self, t: f64) -> Result<(f64, f64)> {
        ermakov_residuals(&self.rho, &self.alpha, &self.omega, &self.f1, self.k, t)
    }
}

/// `(rho'' + Omega^2 rho - k/rho^3, alpha'' + Omega^2 alpha - F1)` at `t`.
pub fn ermakov_residuals(
    rho: &ScalarFn,
    alpha: &ScalarFn,
    omega: &ScalarFn,
    f1: &ScalarFn,
    k: f64,
    t: f64,
) -> Result<(f64, f64)> {
    let r = rho.jet(t, 2)?;
    if r.value() == 0.0 {
        return Err(Error::domain(format!("rho vanishes at t = {t}")));
    }
    let a = alpha.jet(t, 2)?;
    let om2 = omega.eval(t)?.powi(2);
    let rv = r.value();
    Ok((
        r.deriv(2) + om2 * rv - k / (rv * rv * rv),
        a.deriv(2) + om2 * a.value() - f1.eval(t)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalarfn::parse;

    fn f(s: &str) -> ScalarFn {
        parse(s).unwrap()
    }

    #[test]
    fn constant_solution_has_zero_residuals() {
        let (a, b) = ermakov_residuals(&f("1"), &f("0"), &f("1"), &f("0"), 1.0, 0.7).unwrap();
        assert_eq!((a, b), (0.0, 0.0));
    }

    #[test]
    fn sqrt_one_plus_t_squared_solves_free_pinney() {
        for t in [0.0, 0.5, 2.0, 7.5] {
            let (a, _) =
                ermakov_residuals(&f("(sqrt (poly 1 0 1))"), &f("0"), &f("0"), &f("0"), 1.0, t).unwrap();
            assert!(a.abs() < 1e-15, "t = {t}: {a}");
        }
    }

    #[test]
    fn violated_condition_is_reported() {
        let (a, _) = ermakov_residuals(&f("1"), &f("0"), &f("0"), &f("0"), 1.0, 0.0).unwrap();
        assert_eq!(a, -1.0);
    }

    #[test]
    fn zero_rho_is_domain_error() {
        assert!(ermakov_residuals(&f("t"), &f("0"), &f("0"), &f("0"), 1.0, 0.0).is_err());
    }

    #[test]
    fn invariant_examples() {
        let mut ll = LewisLeach {
            rho: f("1"),
            alpha: f("0"),
            omega: f("0"),
            f1: f("0"),
            g_tilde: f("0"),
            k: 0.0,
        };
        assert_eq!(
            ll.invariant(0.0, 1.0, 3.0, LewisLeachBracket::Velocity).unwrap(),
            4.5
        );
        ll.k = 1.0;
        assert_eq!(
            ll.invariant(0.0, 2.0, 0.0, LewisLeachBracket::Velocity).unwrap(),
            2.0
        );
    }
}
