//! The two integrable families of time-dependent central potentials.
//!
//! Every potential is handled in reduced radial form. With angular momentum
//! `L3` the radial motion is driven by the effective potential
//! `U(t, r) = V(t, r) + L3^2 / (2 r^2)`; both families are built so that the
//! `-L3^2/(2 r^2)` term of `V` cancels the centrifugal term exactly and `U`
//! carries no `L3` dependence.
//!
//! * [`FamilyA`] admits the linear integral `I = g2 r' - g2' r + g`:
//!   `V = -(g2''/2g2) r^2 + (g'/g2) r - L3^2/(2r^2)`.
//! * [`FamilyB`] admits the quadratic integral
//!   `I = g1 r'^2 + (g2 - g1' r) r' + F(s) + (g1' r - g2)^2 / (4 g1)` with
//!   `s = g1^{-1/2} r + 1/2 int_{t0}^{t} g1^{-3/2} g2`.

mod lewis_leach;
pub(crate) mod presets;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalarfn::{integrate_fn, Jet, QuadratureConfig, ScalarFn};

pub use lewis_leach::{ermakov_residuals, LewisLeach, LewisLeachBracket};
pub use presets::{
    catalog, preset, CatalogEntry, MassLaw, ParamValue, Params, Preset, PresetKind, PresetSystem,
};

/// A function of `(t, r)` and the partial derivatives the checks need.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Partials {
    pub value: f64,
    pub d_r: f64,
    pub d_rr: f64,
    pub d_tr: f64,
}

/// Anything that can drive reduced radial motion.
pub trait CentralPotential: Send + Sync {
    /// Angular momentum `L3` the potential is built for.
    fn angular_momentum(&self) -> f64;

    /// Effective potential `U` and its partials.
    fn u_partials(&self, t: f64, r: f64) -> Result<Partials>;

    /// Physical potential `V = U - L3^2/(2 r^2)` and its partials.
    fn v_partials(&self, t: f64, r: f64) -> Result<Partials> {
        let u = self.u_partials(t, r)?;
        let l2 = self.angular_momentum().powi(2);
        let r2 = r * r;
        Ok(Partials {
            value: u.value - l2 / (2.0 * r2),
            d_r: u.d_r + l2 / (r2 * r),
            d_rr: u.d_rr - 3.0 * l2 / (r2 * r2),
            d_tr: u.d_tr,
        })
    }

    fn effective_potential(&self, t: f64, r: f64) -> Result<f64> {
        Ok(self.u_partials(t, r)?.value)
    }

    fn potential(&self, t: f64, r: f64) -> Result<f64> {
        Ok(self.v_partials(t, r)?.value)
    }

    fn dv_dr(&self, t: f64, r: f64) -> Result<f64> {
        Ok(self.v_partials(t, r)?.d_r)
    }

    fn d2v_dr2(&self, t: f64, r: f64) -> Result<f64> {
        Ok(self.v_partials(t, r)?.d_rr)
    }

    fn d2v_dtdr(&self, t: f64, r: f64) -> Result<f64> {
        Ok(self.v_partials(t, r)?.d_tr)
    }
}

pub(crate) fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("radius must be positive, got {r}")))
    }
}

/// Family admitting a linear first integral.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyA {
    pub g2: ScalarFn,
    pub g: ScalarFn,
    #[serde(rename = "L3")]
    pub l3: f64,
}

/// Time coefficients of `U = a(t) r^2 + b(t) r` (plus the shape term for
/// family B), as jets of order 1.
struct TimeCoeffs {
    a: Jet,
    b: Jet,
}

impl FamilyA {
    pub fn new(g2: ScalarFn, g: ScalarFn, l3: f64) -> Self {
        FamilyA { g2, g, l3 }
    }

    fn g2_jet(&self, t: f64) -> Result<Jet> {
        let g2 = self.g2.jet(t, 3)?;
        if g2.value() == 0.0 {
            return Err(Error::domain(format!("g2 vanishes at t = {t}")));
        }
        Ok(g2)
    }

    fn coeffs(&self, t: f64) -> Result<TimeCoeffs> {
        let g2 = self.g2_jet(t)?;
        let g = self.g.jet(t, 2)?;
        Ok(TimeCoeffs {
            a: -(g2.d().d() / (2.0 * g2.truncate(1))),
            b: g.d() / g2.truncate(1),
        })
    }

    /// The linear first integral `g2 r' - g2' r + g`.
    pub fn first_integral(&self, t: f64, r: f64, rdot: f64) -> Result<f64> {
        let g2 = self.g2.jet(t, 1)?;
        Ok(g2.value() * rdot - g2.deriv(1) * r + self.g.eval(t)?)
    }

    /// `K = -g2' r + g` together with `K_r` and `K_t`.
    pub fn k_partials(&self, t: f64, r: f64) -> Result<KPartials> {
        let g2 = self.g2.jet(t, 2)?;
        let g = self.g.jet(t, 1)?;
        Ok(KPartials {
            value: -g2.deriv(1) * r + g.value(),
            d_r: -g2.deriv(1),
            d_t: -g2.deriv(2) * r + g.deriv(1),
        })
    }
}

impl CentralPotential for FamilyA {
    fn angular_momentum(&self) -> f64 {
        self.l3
    }

    fn u_partials(&self, t: f64, r: f64) -> Result<Partials> {
        check_radius(r)?;
        let TimeCoeffs { a, b } = self.coeffs(t)?;
        Ok(Partials {
            value: a.value() * r * r + b.value() * r,
            d_r: 2.0 * a.value() * r + b.value(),
            d_rr: 2.0 * a.value(),
            d_tr: 2.0 * a.deriv(1) * r + b.deriv(1),
        })
    }
}

/// Scalar `K(t, r)` of the direct method with its first partials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KPartials {
    pub value: f64,
    pub d_r: f64,
    pub d_t: f64,
}

/// Family admitting a quadratic first integral.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyB {
    pub g1: ScalarFn,
    pub g2: ScalarFn,
    /// Shape function `F` of one argument.
    #[serde(rename = "F")]
    pub shape: ScalarFn,
    #[serde(rename = "L3")]
    pub l3: f64,
    /// Lower limit of the integral in the shape argument.
    #[serde(default)]
    pub t0: f64,
    #[serde(default, skip_serializing_if = "is_default_quad")]
    pub quadrature: QuadratureConfig,
}

fn is_default_quad(q: &QuadratureConfig) -> bool {
    *q == QuadratureConfig::default()
}

/// Everything about family B at one instant that does not depend on `r`.
struct BInstant {
    g1: Jet,
    g2: Jet,
    coeffs: TimeCoeffs,
    /// `g1^{-1/2}`
    w: Jet,
    /// `g1^{-1/2} / (2 g1)`
    c: Jet,
    shift: f64,
    shift_rate: f64,
}

/// The shape argument `s` and its partials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeArgument {
    pub s: f64,
    pub ds_dr: f64,
    pub ds_dt: f64,
}

impl FamilyB {
    pub fn new(g1: ScalarFn, g2: ScalarFn, shape: ScalarFn, l3: f64) -> Self {
        FamilyB {
            g1,
            g2,
            shape,
            l3,
            t0: 0.0,
            quadrature: QuadratureConfig::default(),
        }
    }

    pub fn with_t0(mut self, t0: f64) -> Self {
        self.t0 = t0;
        self
    }

    pub fn with_shape(&self, shape: ScalarFn) -> Self {
        FamilyB {
            shape,
            ..self.clone()
        }
    }

    pub fn with_quadrature(mut self, cfg: QuadratureConfig) -> Self {
        self.quadrature = cfg;
        self
    }

    fn g1_positive(&self, t: f64, order: usize) -> Result<Jet> {
        let g1 = self.g1.jet(t, order)?;
        if g1.value() > 0.0 {
            Ok(g1)
        } else {
            Err(Error::domain(format!(
                "g1 must be positive, got {} at t = {t}",
                g1.value()
            )))
        }
    }

    /// `1/2 int_{t0}^{t} g1^{-3/2} g2`, zero when `g2` vanishes identically.
    pub fn argument_shift(&self, t: f64) -> Result<f64> {
        if self.g2.is_zero() {
            return Ok(0.0);
        }
        let integrand = |tau: f64| -> Result<f64> {
            let g1 = self.g1_positive(tau, 0)?.value();
            Ok(self.g2.eval(tau)? / (g1 * g1.sqrt()))
        };
        Ok(0.5 * integrate_fn(integrand, self.t0, t, &self.quadrature)?)
    }

    fn instant(&self, t: f64) -> Result<BInstant> {
        let g1 = self.g1_positive(t, 3)?;
        let g2 = self.g2.jet(t, 2)?;
        let g1d = g1.d();
        let g1_1 = g1.truncate(1);
        let ratio = g1d.truncate(1) / g1_1;
        let a = ratio.square() / 8.0 - g1d.d() / (4.0 * g1_1);
        let b = (g2.d() - g2.truncate(1) * ratio / 2.0) / (2.0 * g1_1);
        let w = g1.truncate(2).powf(-0.5);
        let c = w.truncate(1) / (2.0 * g1_1);
        let shift = self.argument_shift(t)?;
        let shift_rate = 0.5 * g2.value() * w.value().powi(3);
        Ok(BInstant {
            g1,
            g2,
            coeffs: TimeCoeffs { a, b },
            w,
            c,
            shift,
            shift_rate,
        })
    }

    fn argument_at(inst: &BInstant, r: f64) -> ShapeArgument {
        ShapeArgument {
            s: inst.w.value() * r + inst.shift,
            ds_dr: inst.w.value(),
            ds_dt: inst.w.deriv(1) * r + inst.shift_rate,
        }
    }

    /// Shape argument `s(t, r)` with its partials.
    pub fn argument(&self, t: f64, r: f64) -> Result<ShapeArgument> {
        check_radius(r)?;
        Ok(Self::argument_at(&self.instant(t)?, r))
    }

    /// The quadratic first integral.
    pub fn first_integral(&self, t: f64, r: f64, rdot: f64) -> Result<f64> {
        check_radius(r)?;
        let g1 = self.g1_positive(t, 1)?;
        let g2 = self.g2.eval(t)?;
        let s = r / g1.value().sqrt() + self.argument_shift(t)?;
        let q = g1.deriv(1) * r - g2;
        Ok(g1.value() * rdot * rdot - q * rdot + self.shape.eval(s)? + q * q / (4.0 * g1.value()))
    }

    /// `K = F(s) + (g1' r - g2)^2 / (4 g1)` with `K_r`, `K_t`, computed from
    /// the definition of `K` rather than from the potential.
    pub fn k_partials(&self, t: f64, r: f64) -> Result<KPartials> {
        check_radius(r)?;
        let inst = self.instant(t)?;
        let arg = Self::argument_at(&inst, r);
        let f = self.shape.jet(arg.s, 1)?;
        let q = inst.g1.d().truncate(1) * r - inst.g2.truncate(1);
        let quad = q.square() / (4.0 * inst.g1.truncate(1));
        Ok(KPartials {
            value: f.value() + quad.value(),
            d_r: f.deriv(1) * arg.ds_dr + q.value() * inst.g1.deriv(1) / (2.0 * inst.g1.value()),
            d_t: f.deriv(1) * arg.ds_dt + quad.deriv(1),
        })
    }
}

impl CentralPotential for FamilyB {
    fn angular_momentum(&self) -> f64 {
        self.l3
    }

    fn u_partials(&self, t: f64, r: f64) -> Result<Partials> {
        check_radius(r)?;
        let inst = self.instant(t)?;
        let arg = Self::argument_at(&inst, r);
        let f = self.shape.jet(arg.s, 2)?;
        let TimeCoeffs { a, b } = &inst.coeffs;
        let (c, w) = (&inst.c, inst.w.value());
        Ok(Partials {
            value: a.value() * r * r + b.value() * r + f.value() / (2.0 * inst.g1.value()),
            d_r: 2.0 * a.value() * r + b.value() + f.deriv(1) * c.value(),
            d_rr: 2.0 * a.value() + f.deriv(2) * w * c.value(),
            d_tr: 2.0 * a.deriv(1) * r
                + b.deriv(1)
                + c.deriv(1) * f.deriv(1)
                + c.value() * f.deriv(2) * arg.ds_dt,
        })
    }
}

/// Either branch of the classification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    A(FamilyA),
    B(FamilyB),
}

impl Family {
    /// The family's own first integral at a radial state.
    pub fn first_integral(&self, t: f64, r: f64, rdot: f64) -> Result<f64> {
        match self {
            Family::A(f) => f.first_integral(t, r, rdot),
            Family::B(f) => f.first_integral(t, r, rdot),
        }
    }

    pub fn k_partials(&self, t: f64, r: f64) -> Result<KPartials> {
        match self {
            Family::A(f) => f.k_partials(t, r),
            Family::B(f) => f.k_partials(t, r),
        }
    }

    /// Killing coefficient `g1` (zero for family A) as a jet of order 3.
    pub fn g1_jet(&self, t: f64) -> Result<Jet> {
        match self {
            Family::A(_) => Ok(Jet::constant(0.0, 3)),
            Family::B(f) => f.g1.jet(t, 3),
        }
    }

    pub fn g2_jet(&self, t: f64) -> Result<Jet> {
        match self {
            Family::A(f) => f.g2.jet(t, 2),
            Family::B(f) => f.g2.jet(t, 2),
        }
    }
}

impl CentralPotential for Family {
    fn angular_momentum(&self) -> f64 {
        match self {
            Family::A(f) => f.l3,
            Family::B(f) => f.l3,
        }
    }

    fn u_partials(&self, t: f64, r: f64) -> Result<Partials> {
        match self {
            Family::A(f) => f.u_partials(t, r),
            Family::B(f) => f.u_partials(t, r),
        }
    }
}

impl<P: CentralPotential + ?Sized> CentralPotential for &P {
    fn angular_momentum(&self) -> f64 {
        (**self).angular_momentum()
    }
    fn u_partials(&self, t: f64, r: f64) -> Result<Partials> {
        (**self).u_partials(t, r)
    }
}

/// A potential with `coeff * r^power` added, used as a negative control.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Perturbed<P> {
    pub base: P,
    pub coeff: f64,
    pub power: f64,
}

impl<P: CentralPotential> Perturbed<P> {
    pub fn new(base: P, coeff: f64, power: f64) -> Self {
        Perturbed { base, coeff, power }
    }
}

impl<P: CentralPotential> CentralPotential for Perturbed<P> {
    fn angular_momentum(&self) -> f64 {
        self.base.angular_momentum()
    }

    fn u_partials(&self, t: f64, r: f64) -> Result<Partials> {
        let mut u = self.base.u_partials(t, r)?;
        let (c, p) = (self.coeff, self.power);
        u.value += c * r.powf(p);
        u.d_r += c * p * r.powf(p - 1.0);
        u.d_rr += c * p * (p - 1.0) * r.powf(p - 2.0);
        Ok(u)
    }
}
