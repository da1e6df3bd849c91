//! First integrals as functions on the extended phase space.
//!
//! Planar integrals come in two forms: polar, taking `(t, r, r', theta')`, and
//! reduced, where `theta'` has been replaced by `L3 / r^2`. The reduced forms
//! of the oscillator and generalized Kepler integrals coincide with the
//! quadratic integral of the corresponding family B instance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potentials::{
    CentralPotential, Family, FamilyA, FamilyB, LewisLeach, LewisLeachBracket, Preset, PresetKind,
};
use crate::scalarfn::ScalarFn;

/// `I = g2 r' - g2' r + g`.
pub fn lfi_a(fam: &FamilyA, t: f64, r: f64, rdot: f64) -> Result<f64> {
    fam.first_integral(t, r, rdot)
}

/// `I = g1 r'^2 + (g2 - g1' r) r' + F(s) + (g1' r - g2)^2 / (4 g1)`.
pub fn qfi_b(fam: &FamilyB, t: f64, r: f64, rdot: f64) -> Result<f64> {
    fam.first_integral(t, r, rdot)
}

fn quadratic(b: [f64; 3], t: f64) -> Result<f64> {
    let p = b[0] + b[1] * t + b[2] * t * t;
    if p > 0.0 {
        Ok(p)
    } else {
        Err(Error::domain(format!("b0 + b1 t + b2 t^2 = {p} at t = {t}")))
    }
}

/// Generalized Kepler integral in polar form.
#[allow(clippy::too_many_arguments)]
pub fn kepler_integral(
    nu: f64,
    k: f64,
    b: [f64; 3],
    t: f64,
    r: f64,
    rdot: f64,
    thetadot: f64,
) -> Result<f64> {
    crate::potentials::check_radius(r)?;
    let p = quadratic(b, t)?;
    let omega = k * p.powf((nu - 2.0) / 2.0);
    Ok(
        p * (0.5 * (rdot * rdot + r * r * thetadot * thetadot) - omega / r.powf(nu))
            - 0.5 * (b[1] + 2.0 * b[2] * t) * r * rdot
            + 0.5 * b[2] * r * r,
    )
}

/// Oscillator integral `1/2 (phi r' - phi' r)^2 + 1/2 r^2 phi^2 theta'^2 + K r^2/(2 phi^2)`.
pub fn scaled_oscillator(phi: &ScalarFn, k: f64, t: f64, r: f64, rdot: f64, thetadot: f64) -> Result<f64> {
    let j = phi.jet(t, 1)?;
    let (p, pd) = (j.value(), j.deriv(1));
    if p == 0.0 {
        return Err(Error::domain(format!("phi vanishes at t = {t}")));
    }
    let lead = p * rdot - pd * r;
    Ok(0.5 * lead * lead + 0.5 * r * r * p * p * thetadot * thetadot + k * r * r / (2.0 * p * p))
}

/// Lewis–Leach invariant with the velocity bracket.
pub fn lewis_leach(sys: &LewisLeach, t: f64, q: f64, qdot: f64) -> Result<f64> {
    sys.invariant(t, q, qdot, LewisLeachBracket::Velocity)
}

/// `L3 = r^2 theta'`.
pub fn angular_momentum(r: f64, thetadot: f64) -> f64 {
    r * r * thetadot
}

/// `1/2 r'^2 + U(t, r)`, conserved only when `U` does not depend on time.
pub fn reduced_energy(pot: &dyn CentralPotential, t: f64, r: f64, rdot: f64) -> Result<f64> {
    Ok(0.5 * rdot * rdot + pot.effective_potential(t, r)?)
}

/// A first integral bound to its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum FirstIntegral {
    LfiA(FamilyA),
    QfiB(FamilyB),
    Kepler {
        nu: f64,
        k: f64,
        b: [f64; 3],
        l3: f64,
    },
    ScaledOscillator {
        phi: ScalarFn,
        k: f64,
        l3: f64,
    },
    LewisLeach(LewisLeach, LewisLeachBracket),
    /// `L3 = r^2 theta'` read off a planar state.
    AngularMomentum,
    ReducedEnergy(Family),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Arity {
    /// `(t, r, r')` with `L3` bound.
    Radial,
    /// `(t, q, q')`.
    Line,
    /// `(r, theta')`.
    Angular,
}

impl FirstIntegral {
    /// The integral the family was built to conserve.
    pub fn of_family(fam: &Family) -> FirstIntegral {
        match fam {
            Family::A(a) => FirstIntegral::LfiA(a.clone()),
            Family::B(b) => FirstIntegral::QfiB(b.clone()),
        }
    }

    /// The integral a preset is known for, in its native form.
    pub fn of_preset(p: &Preset) -> FirstIntegral {
        match (&p.kind, p.family(), p.lewis_leach()) {
            (PresetKind::GeneralizedKepler { nu, k, b, l3 }, _, _) => FirstIntegral::Kepler {
                nu: *nu,
                k: *k,
                b: *b,
                l3: *l3,
            },
            (PresetKind::Binary { g, b, l3 }, _, _) => FirstIntegral::Kepler {
                nu: 1.0,
                k: *g,
                b: *b,
                l3: *l3,
            },
            (PresetKind::ScaledOscillator { phi, k, l3 }, _, _) => FirstIntegral::ScaledOscillator {
                phi: phi.clone(),
                k: *k,
                l3: *l3,
            },
            (_, _, Some(ll)) => FirstIntegral::LewisLeach(ll.clone(), LewisLeachBracket::Velocity),
            (_, Some(fam), _) => FirstIntegral::of_family(fam),
            _ => unreachable!("preset is neither planar nor one-dimensional"),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FirstIntegral::LfiA(_) => "lfi_a",
            FirstIntegral::QfiB(_) => "qfi_b",
            FirstIntegral::Kepler { .. } => "kepler_integral",
            FirstIntegral::ScaledOscillator { .. } => "scaled_oscillator",
            FirstIntegral::LewisLeach(_, LewisLeachBracket::Velocity) => "lewis_leach",
            FirstIntegral::LewisLeach(_, LewisLeachBracket::RhoDot) => "lewis_leach_rho_dot",
            FirstIntegral::AngularMomentum => "angular_momentum",
            FirstIntegral::ReducedEnergy(_) => "reduced_energy",
        }
    }

    pub fn arity(&self) -> Arity {
        match self {
            FirstIntegral::LewisLeach(..) => Arity::Line,
            FirstIntegral::AngularMomentum => Arity::Angular,
            _ => Arity::Radial,
        }
    }

    /// Evaluates on a planar state. `thetadot` is only read by the polar
    /// forms and by the angular momentum.
    pub fn eval_planar(&self, t: f64, r: f64, rdot: f64, thetadot: f64) -> Result<f64> {
        match self {
            FirstIntegral::LfiA(f) => lfi_a(f, t, r, rdot),
            FirstIntegral::QfiB(f) => qfi_b(f, t, r, rdot),
            FirstIntegral::Kepler { nu, k, b, .. } => kepler_integral(*nu, *k, *b, t, r, rdot, thetadot),
            FirstIntegral::ScaledOscillator { phi, k, .. } => {
                scaled_oscillator(phi, *k, t, r, rdot, thetadot)
            }
            FirstIntegral::AngularMomentum => Ok(angular_momentum(r, thetadot)),
            FirstIntegral::ReducedEnergy(f) => reduced_energy(f, t, r, rdot),
            FirstIntegral::LewisLeach(..) => Err(Error::invalid(
                "the Lewis–Leach invariant takes a one-dimensional state",
            )),
        }
    }

    /// Evaluates in reduced form, with `theta' = L3 / r^2` for the polar forms.
    pub fn eval_reduced(&self, t: f64, r: f64, rdot: f64) -> Result<f64> {
        match self {
            FirstIntegral::Kepler { l3, .. } | FirstIntegral::ScaledOscillator { l3, .. } => {
                self.eval_planar(t, r, rdot, l3 / (r * r))
            }
            FirstIntegral::AngularMomentum => Err(Error::invalid(
                "the angular momentum needs theta', not a reduced state",
            )),
            _ => self.eval_planar(t, r, rdot, 0.0),
        }
    }

    /// Evaluates on a one-dimensional state.
    pub fn eval_line(&self, t: f64, q: f64, qdot: f64) -> Result<f64> {
        match self {
            FirstIntegral::LewisLeach(sys, bracket) => sys.invariant(t, q, qdot, *bracket),
            _ => Err(Error::invalid(format!("{} takes a planar state", self.name()))),
        }
    }
}

/// `max_i |I_i - I_0| / max(1, |I_0|)`.
pub fn relative_drift(values: &[f64]) -> f64 {
    let Some(&first) = values.first() else {
        return 0.0;
    };
    let scale = first.abs().max(1.0);
    values
        .iter()
        .map(|v| (v - first).abs() / scale)
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::{preset, ParamValue, Params};
    use crate::scalarfn::parse;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f(s: &str) -> ScalarFn {
        parse(s).unwrap()
    }

    #[test]
    fn lfi_examples() {
        let free = FamilyA::new(f("1"), f("0"), 0.0);
        assert_eq!(lfi_a(&free, 3.0, 2.0, 1.5).unwrap(), 1.5);
        let lin = FamilyA::new(f("t"), f("0"), 0.0);
        assert_eq!(lfi_a(&lin, 2.0, 3.0, 1.0).unwrap(), -1.0);
        let gauge = FamilyA::new(f("1"), f("t"), 0.0);
        assert_eq!(lfi_a(&gauge, 5.0, 0.0, 0.0).unwrap(), 5.0);
    }

    #[test]
    fn qfi_examples() {
        let fam = FamilyB::new(f("(poly 1 0 1)"), f("0"), f("(* u u)"), 0.0);
        assert!((qfi_b(&fam, 0.0, 1.0, 0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((qfi_b(&fam, 1.0, 2.0, 3.0).unwrap() - 10.0).abs() < 1e-13);
        let free = FamilyB::new(f("0.5"), f("0"), f("0"), 0.0);
        assert_eq!(qfi_b(&free, 4.0, 2.0, 3.0).unwrap(), 4.5);
    }

    #[test]
    fn kepler_integral_examples() {
        let h = kepler_integral(1.0, 1.0, [1.0, 0.0, 0.0], 0.0, 1.0, 0.0, 1.0).unwrap();
        assert_eq!(h, -0.5);
        let z = kepler_integral(2.0, 0.0, [0.0, 0.0, 1.0], 1.0, 1.0, 1.0, 0.0).unwrap();
        assert_eq!(z, 0.0);
        let energy = kepler_integral(3.0, 2.0, [1.0, 0.0, 0.0], 7.0, 2.0, 0.5, 0.3).unwrap();
        assert!((energy - (0.5 * (0.25 + 4.0 * 0.09) - 2.0 / 8.0)).abs() < 1e-15);
    }

    #[test]
    fn case_i_examples() {
        let one = f("1");
        assert_eq!(
            scaled_oscillator(&one, 0.0, 0.0, 2.0, 1.0, 0.5).unwrap(),
            0.5 + 0.5
        );
        assert_eq!(scaled_oscillator(&one, 1.0, 0.0, 1.0, 0.0, 0.0).unwrap(), 0.5);
    }

    #[test]
    fn lewis_leach_and_angular_examples() {
        let ll = LewisLeach {
            rho: f("1"),
            alpha: f("0"),
            omega: f("0"),
            f1: f("0"),
            g_tilde: f("0"),
            k: 0.0,
        };
        assert_eq!(lewis_leach(&ll, 0.0, 5.0, 2.0).unwrap(), 2.0);
        assert_eq!(angular_momentum(1.0, 1.0), 1.0);
        assert_eq!(angular_momentum(2.0, 0.25), 1.0);
        assert_eq!(angular_momentum(3.0, -1.0), -9.0);
    }

    fn states(seed: u64) -> impl Iterator<Item = (f64, f64, f64)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..100).map(move |_| {
            (
                rng.gen_range(0.0..5.0),
                rng.gen_range(0.3..4.0),
                rng.gen_range(-2.0..2.0),
            )
        })
    }

    #[test]
    fn polar_forms_equal_family_integrals() {
        let mut ps = Params::new();
        ps.insert("phi".into(), ParamValue::Expr("(sqrt (poly 1 0.5 0.3))".into()));
        ps.insert("K".into(), ParamValue::Number(1.7));
        ps.insert("L3".into(), ParamValue::Number(0.8));
        let osc = preset("scaled-oscillator", &ps).unwrap();
        let native = FirstIntegral::of_preset(&osc);
        let family = FirstIntegral::of_family(osc.family().unwrap());
        for (t, r, rd) in states(1) {
            let a = native.eval_reduced(t, r, rd).unwrap();
            let b = family.eval_reduced(t, r, rd).unwrap();
            assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0), "{a} vs {b}");
        }

        for (nu, b) in [
            (1.0, [1.0, 1.0, 1.0]),
            (2.0, [1.0, 0.0, 1.0]),
            (3.0, [2.0, 1.0, 0.0]),
        ] {
            let ps: Params = [
                ("nu", nu),
                ("k", 1.3),
                ("b0", b[0]),
                ("b1", b[1]),
                ("b2", b[2]),
                ("L3", 0.7),
            ]
            .into_iter()
            .map(|(k, v)| (k.to_string(), ParamValue::Number(v)))
            .collect();
            let kep = preset("generalized-kepler", &ps).unwrap();
            let native = FirstIntegral::of_preset(&kep);
            let family = FirstIntegral::of_family(kep.family().unwrap());
            for (t, r, rd) in states(2) {
                let a = native.eval_reduced(t, r, rd).unwrap();
                let b = family.eval_reduced(t, r, rd).unwrap();
                assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0), "nu {nu}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn drift_of_constant_series_is_zero() {
        assert_eq!(relative_drift(&[3.0; 10]), 0.0);
        assert_eq!(relative_drift(&[]), 0.0);
        assert_eq!(relative_drift(&[0.0, 0.5]), 0.5);
        assert_eq!(relative_drift(&[4.0, 5.0]), 0.25);
    }

    #[test]
    fn arity_mismatch_is_an_error() {
        assert!(FirstIntegral::AngularMomentum.eval_line(0.0, 1.0, 1.0).is_err());
        assert!(FirstIntegral::AngularMomentum
            .eval_reduced(0.0, 1.0, 1.0)
            .is_err());
    }
}
