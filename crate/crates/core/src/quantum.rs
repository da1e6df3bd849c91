//! Stationary mode of the Schrödinger equation for the orbit potential
//! `-(phi''/2phi) r^2 - k/(phi r) - L3^2/(2r^2)`.
//!
//! In the scaled radius `R = r/phi` the radial amplitude
//! `A(R) = e^{-R/2} R^{(a+1)/2} L^{(a)}_b(R)` solves
//! `A'' + (2 lambda/hbar^2 + 2k/(hbar^2 R) - (m^2 - 1/4 - L3^2/hbar^2)/R^2) A = 0`
//! with `lambda = -hbar^2/8`, `k = hbar^2 (2b + a + 1)/4` and
//! `m^2 = a^2/4 + L3^2/hbar^2`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalarfn::{integrate_fn, Jet, QuadratureConfig, ScalarFn};

/// Generalized Laguerre polynomial `L^{(a)}_b(x)` by the three-term
/// recurrence `(n+1) L_{n+1} = (2n + 1 + a - x) L_n - (n + a) L_{n-1}`.
pub fn laguerre(a: f64, b: u32, x: f64) -> f64 {
    if b == 0 {
        return 1.0;
    }
    let (mut prev, mut cur) = (1.0, 1.0 + a - x);
    for n in 1..b {
        let n = n as f64;
        let next = ((2.0 * n + 1.0 + a - x) * cur - (n + a) * prev) / (n + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `L^{(a)}_b` with its first two derivatives, from
/// `d/dx L^{(a)}_b = -L^{(a+1)}_{b-1}`.
fn laguerre_jet(a: f64, b: u32, x: f64) -> Jet {
    let d1 = if b >= 1 { -laguerre(a + 1.0, b - 1, x) } else { 0.0 };
    let d2 = if b >= 2 { laguerre(a + 2.0, b - 2, x) } else { 0.0 };
    Jet::new([laguerre(a, b, x), d1, d2, 0.0], 2)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WavefunctionParams {
    pub a: f64,
    pub b: u32,
    pub hbar: f64,
    #[serde(rename = "L3")]
    pub l3: f64,
    pub phi: ScalarFn,
    /// Lower limit of `T(t) = int phi^{-2}`.
    #[serde(default)]
    pub t0: f64,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
}

impl WavefunctionParams {
    pub fn new(a: f64, b: u32, hbar: f64, l3: f64, phi: ScalarFn) -> Self {
        WavefunctionParams {
            a,
            b,
            hbar,
            l3,
            phi,
            t0: 0.0,
            quadrature: QuadratureConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.hbar > 0.0 && self.hbar.is_finite()) {
            return Err(Error::invalid(format!(
                "hbar must be positive, got {}",
                self.hbar
            )));
        }
        if !(self.a > -1.0 && self.a.is_finite()) {
            return Err(Error::invalid(format!("a must exceed -1, got {}", self.a)));
        }
        if !self.l3.is_finite() {
            return Err(Error::invalid("L3 must be finite"));
        }
        Ok(())
    }

    /// `lambda = -hbar^2/8`.
    pub fn lambda(&self) -> f64 {
        -self.hbar * self.hbar / 8.0
    }

    /// The potential constant `k = hbar^2 (2b + a + 1)/4` the mode requires.
    pub fn k(&self) -> f64 {
        self.hbar * self.hbar * (2.0 * self.b as f64 + self.a + 1.0) / 4.0
    }

    pub fn m_squared(&self) -> f64 {
        self.a * self.a / 4.0 + (self.l3 / self.hbar).powi(2)
    }

    /// Positive root of `m^2`.
    pub fn m(&self) -> f64 {
        self.m_squared().sqrt()
    }

    /// Whether `m` is an integer, so that the wavefunction is single valued
    /// in `theta`.
    pub fn single_valued(&self) -> bool {
        let m = self.m();
        (m - m.round()).abs() <= 1e-12 * m.max(1.0)
    }

    /// `T(t) = int_{t0}^{t} phi^{-2}`.
    pub fn scaled_time(&self, t: f64) -> Result<f64> {
        integrate_fn(
            |tau| {
                let p = self.phi.eval(tau)?;
                Ok(1.0 / (p * p))
            },
            self.t0,
            t,
            &self.quadrature,
        )
    }
}

fn amplitude_jet(p: &WavefunctionParams, big_r: f64) -> Result<Jet> {
    if !(big_r > 0.0 && big_r.is_finite()) {
        return Err(Error::domain(format!(
            "scaled radius must be positive, got {big_r}"
        )));
    }
    let x = Jet::variable(big_r, 2);
    let envelope = (x * -0.5).exp() * x.powf((p.a + 1.0) / 2.0);
    Ok(envelope * laguerre_jet(p.a, p.b, big_r))
}

/// `A(R) = e^{-R/2} R^{(a+1)/2} L^{(a)}_b(R)`.
pub fn amplitude_a(p: &WavefunctionParams, big_r: f64) -> Result<f64> {
    Ok(amplitude_jet(p, big_r)?.value())
}

/// Residual of the amplitude equation with the constant `k` supplied.
pub fn amplitude_residual_with_k(p: &WavefunctionParams, k: f64, big_r: f64) -> Result<f64> {
    p.validate()?;
    let a = amplitude_jet(p, big_r)?;
    let h2 = p.hbar * p.hbar;
    let centrifugal = p.m_squared() - 0.25 - (p.l3 / p.hbar).powi(2);
    let bracket = 2.0 * p.lambda() / h2 + 2.0 * k / (h2 * big_r) - centrifugal / (big_r * big_r);
    Ok(a.deriv(2) + bracket * a.value())
}

/// Residual of the amplitude equation with `k` from the mode numbers.
pub fn amplitude_residual(p: &WavefunctionParams, big_r: f64) -> Result<f64> {
    amplitude_residual_with_k(p, p.k(), big_r)
}

/// The wavefunction at `(r, theta, t)`.
pub fn psi(p: &WavefunctionParams, r: f64, theta: f64, t: f64) -> Result<Complex64> {
    p.validate()?;
    crate::potentials::check_radius(r)?;
    let j = p.phi.jet(t, 1)?;
    let (ph, phd) = (j.value(), j.deriv(1));
    if ph <= 0.0 {
        return Err(Error::domain(format!(
            "phi must be positive, got {ph} at t = {t}"
        )));
    }
    let modulus = ph.abs().powf(-0.5) * ph.sqrt() * r.powf(-0.5) * amplitude_a(p, r / ph)?;
    let phase = phd / (2.0 * p.hbar * ph) * r * r + p.hbar * p.scaled_time(t)? / 8.0 + p.m() * theta;
    Ok(Complex64::from_polar(modulus, phase))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalarfn::parse;

    fn params(a: f64, b: u32, hbar: f64) -> WavefunctionParams {
        WavefunctionParams::new(a, b, hbar, 0.0, parse("1").unwrap())
    }

    #[test]
    fn laguerre_examples() {
        assert_eq!(laguerre(0.7, 0, 3.0), 1.0);
        assert_eq!(laguerre(0.0, 1, 1.0), 0.0);
        assert_eq!(laguerre(0.0, 2, 2.0), -1.0);
    }

    fn binom(n: f64, k: u32) -> f64 {
        (0..k).fold(1.0, |acc, i| acc * (n - i as f64) / (i + 1) as f64)
    }

    #[test]
    fn laguerre_matches_explicit_sum() {
        for a in [0.0, 0.5, 1.0, 2.0, 3.7] {
            for b in 0..=6u32 {
                for x in [0.1f64, 1.0, 2.5, 7.0] {
                    let mut sum = 0.0;
                    let mut fact = 1.0;
                    for i in 0..=b {
                        if i > 0 {
                            fact *= i as f64;
                        }
                        sum += (-1f64).powi(i as i32) * binom(b as f64 + a, b - i) * x.powi(i as i32) / fact;
                    }
                    let rec = laguerre(a, b, x);
                    assert!(
                        (rec - sum).abs() <= 1e-12 * sum.abs().max(1.0),
                        "a {a} b {b} x {x}: {rec} vs {sum}"
                    );
                }
            }
        }
    }

    #[test]
    fn amplitude_examples() {
        assert!((amplitude_a(&params(0.0, 0, 1.0), 1.0).unwrap() - (-0.5f64).exp()).abs() < 1e-15);
        assert!((amplitude_a(&params(1.0, 0, 1.0), 4.0).unwrap() - 4.0 * (-2f64).exp()).abs() < 1e-15);
        assert!(amplitude_a(&params(0.5, 3, 1.0), 1e-12).unwrap().abs() < 1e-8);
        assert!(amplitude_a(&params(0.0, 0, 1.0), 0.0).is_err());
    }

    #[test]
    fn residual_examples() {
        for r in [0.1, 0.5, 1.0, 3.0, 10.0] {
            assert!(amplitude_residual(&params(0.0, 0, 1.0), r).unwrap().abs() <= 1e-10);
        }
        assert!(amplitude_residual(&params(2.0, 3, 1.0), 1.0).unwrap().abs() <= 1e-10);
        let p = params(0.0, 0, 1.0);
        let wrong = amplitude_residual_with_k(&p, 1.1 * p.k(), 1.0).unwrap();
        assert!(wrong.abs() >= 1e-2, "{wrong}");
    }

    #[test]
    fn second_derivative_matches_finite_differences() {
        let p = params(1.5, 4, 1.0);
        let h = 1e-4;
        for r in [0.3, 1.0, 4.0] {
            let fd = (amplitude_a(&p, r + h).unwrap() - 2.0 * amplitude_a(&p, r).unwrap()
                + amplitude_a(&p, r - h).unwrap())
                / (h * h);
            let exact = amplitude_jet(&p, r).unwrap().deriv(2);
            assert!(
                (fd - exact).abs() < 1e-5 * exact.abs().max(1.0),
                "{fd} vs {exact}"
            );
        }
    }

    #[test]
    fn wavefunction_modulus_and_phases() {
        let p = params(0.0, 0, 1.0);
        for (theta, t) in [(0.0, 0.0), (1.3, 2.0), (-4.0, 7.5)] {
            let v = psi(&p, 1.0, theta, t).unwrap();
            assert!((v.norm() - (-0.5f64).exp()).abs() <= 1e-12);
        }
        // at t = t0 the time phase vanishes, so with theta = 0 psi is real
        let v = psi(&p, 1.0, 0.0, 0.0).unwrap();
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn angular_periodicity_needs_integer_m() {
        let mut p = params(0.0, 1, 1.0);
        p.l3 = 2.0;
        assert!(p.single_valued());
        let a = psi(&p, 1.5, 0.3, 1.0).unwrap();
        let b = psi(&p, 1.5, 0.3 + std::f64::consts::TAU, 1.0).unwrap();
        assert!((a - b).norm() < 1e-12);
        p.l3 = 0.5;
        assert!(!p.single_valued());
        let a = psi(&p, 1.5, 0.3, 1.0).unwrap();
        let b = psi(&p, 1.5, 0.3 + std::f64::consts::TAU, 1.0).unwrap();
        let ratio = b / a;
        let expect = Complex64::from_polar(1.0, std::f64::consts::TAU * p.m());
        assert!((ratio - expect).norm() < 1e-12, "{ratio} vs {expect}");
    }
}
