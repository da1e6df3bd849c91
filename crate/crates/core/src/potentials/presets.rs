//! Named instances of the two families.
//!
//! Each preset reads its parameters from a [`Params`] map (numbers or
//! function expressions), fills in defaults, validates them on the declared
//! time interval `[t_min, t_max]` and instantiates the underlying family. The
//! resolved parameter map is kept so that a preset serializes back into a
//! self-contained config.

use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use super::{CentralPotential, Family, FamilyA, FamilyB, LewisLeach};
use crate::error::{Error, Result};
use crate::scalarfn::{parse_with, ScalarFn};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Number(f64),
    Expr(String),
}

pub type Params = BTreeMap<String, ParamValue>;

#[derive(Debug, Clone, PartialEq)]
pub enum PresetKind {
    /// `V = -(g2''/2g2) r^2`, linear integral, `L3 = 0`.
    OscillatorLfi {
        g2: ScalarFn,
    },
    /// Quadratic-integral oscillator with constant `c0`.
    OscillatorQfi {
        g1: ScalarFn,
        c0: f64,
        l3: f64,
    },
    /// Oscillator with `g1 = phi^2/2`, `c0 = K/2`.
    ScaledOscillator {
        phi: ScalarFn,
        k: f64,
        l3: f64,
    },
    /// `V = -k P(t)^{(nu-2)/2} / r^nu`, `P = b0 + b1 t + b2 t^2`.
    GeneralizedKepler {
        nu: f64,
        k: f64,
        b: [f64; 3],
        l3: f64,
    },
    /// `V = -(phi''/2phi) r^2 - k/(phi r) - L3^2/(2r^2)`.
    ScaledKepler {
        phi: ScalarFn,
        k: f64,
        l3: f64,
    },
    /// Two bodies with total mass `m(t) = 1/sqrt(P(t))`: `V = -G m(t) / r`.
    Binary {
        g: f64,
        b: [f64; 3],
        l3: f64,
    },
    /// `V = k e^{-r/sqrt(P)} / (sqrt(P) r)`.
    Yukawa {
        k: f64,
        b: [f64; 3],
        l3: f64,
    },
    /// `V = k1 P^{(m-2)/2} / r^m - k2 P^{(n-2)/2} / r^n`.
    Interatomic {
        k1: f64,
        k2: f64,
        m: f64,
        n: f64,
        b: [f64; 3],
        l3: f64,
    },
    /// `V = -(phi''/2phi) r^2 + phi^{-2} Fbar(r/phi)`; the `L3` term of the
    /// shape cancels the centrifugal term of the family.
    Similarity {
        phi: ScalarFn,
        fbar: ScalarFn,
        l3: f64,
    },
    LewisLeach,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PresetSystem {
    Central(Family),
    LewisLeach1d(LewisLeach),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: String,
    pub kind: PresetKind,
    pub system: PresetSystem,
    /// Parameters after defaults were filled in.
    pub params: Params,
    pub interval: (f64, f64),
}

/// Total-mass law of the two-body problem with variable mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law")]
pub enum MassLaw {
    /// `1/(a0 + a1 t)`
    I { a0: f64, a1: f64 },
    /// `1/sqrt(b0 + b1 t)`
    II { b0: f64, b1: f64 },
    /// `1/sqrt(b0 + b1 t + b2 t^2)`
    III { b0: f64, b1: f64, b2: f64 },
}

impl MassLaw {
    pub fn mass(&self, t: f64) -> f64 {
        match *self {
            MassLaw::I { a0, a1 } => 1.0 / (a0 + a1 * t),
            MassLaw::II { b0, b1 } => 1.0 / (b0 + b1 * t).sqrt(),
            MassLaw::III { b0, b1, b2 } => 1.0 / (b0 + b1 * t + b2 * t * t).sqrt(),
        }
    }

    /// Classifies `1/sqrt(b0 + b1 t + b2 t^2)`: vanishing discriminant gives
    /// the first law, `b2 = 0` the second, anything else the third.
    pub fn classify(b: [f64; 3]) -> MassLaw {
        let [b0, b1, b2] = b;
        let disc = b1 * b1 - 4.0 * b0 * b2;
        let scale = (b1 * b1).max((4.0 * b0 * b2).abs());
        if b0 > 0.0 && disc.abs() <= 4.0 * f64::EPSILON * scale {
            let a0 = b0.sqrt();
            MassLaw::I {
                a0,
                a1: b1 / (2.0 * a0),
            }
        } else if b2 == 0.0 {
            MassLaw::II { b0, b1 }
        } else {
            MassLaw::III { b0, b1, b2 }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    /// `LFI`, `QFI` or `1d QFI`.
    pub integral: &'static str,
    pub potential: &'static str,
    pub parameters: Vec<(&'static str, String)>,
}

struct Spec {
    name: &'static str,
    integral: &'static str,
    potential: &'static str,
    defaults: &'static [(&'static str, Default)],
}

#[derive(Clone, Copy)]
enum Default {
    N(f64),
    E(&'static str),
}

const INTERVAL: [(&str, Default); 2] = [("t_min", Default::N(0.0)), ("t_max", Default::N(10.0))];

const SPECS: &[Spec] = &[
    Spec {
        name: "oscillator-lfi",
        integral: "LFI",
        potential: "V = -(g2''/(2 g2)) r^2, L3 = 0",
        defaults: &[("g2", Default::E("(poly 1 0 0.1)"))],
    },
    Spec {
        name: "oscillator-qfi",
        integral: "QFI",
        potential: "V = -[g1''/(4g1) - (g1'/g1)^2/8 - c0/(4g1^2)] r^2",
        defaults: &[
            ("g1", Default::E("(poly 1 0.2 0.05)")),
            ("c0", Default::N(1.0)),
            ("L3", Default::N(0.5)),
        ],
    },
    Spec {
        name: "scaled-oscillator",
        integral: "QFI",
        potential: "V = oscillator-qfi with g1 = phi^2/2, c0 = K/2",
        defaults: &[
            ("phi", Default::E("(sqrt (poly 1 0 0.1))")),
            ("K", Default::N(1.0)),
            ("L3", Default::N(0.5)),
        ],
    },
    Spec {
        name: "generalized-kepler",
        integral: "QFI",
        potential: "V = -k (b0 + b1 t + b2 t^2)^((nu-2)/2) / r^nu",
        defaults: &[
            ("nu", Default::N(1.0)),
            ("k", Default::N(1.0)),
            ("b0", Default::N(1.0)),
            ("b1", Default::N(0.0)),
            ("b2", Default::N(0.0)),
            ("L3", Default::N(1.0)),
        ],
    },
    Spec {
        name: "scaled-kepler",
        integral: "QFI",
        potential: "V = -(phi''/(2 phi)) r^2 - k/(phi r) - L3^2/(2 r^2)",
        defaults: &[
            ("phi", Default::E("1")),
            ("k", Default::N(1.0)),
            ("L3", Default::N(1.0)),
        ],
    },
    Spec {
        name: "binary",
        integral: "QFI",
        potential: "V = -G m(t)/r, m(t) = 1/sqrt(b0 + b1 t + b2 t^2)",
        defaults: &[
            ("G", Default::N(1.0)),
            ("b0", Default::N(1.0)),
            ("b1", Default::N(0.0)),
            ("b2", Default::N(0.0)),
            ("L3", Default::N(1.0)),
        ],
    },
    Spec {
        name: "yukawa",
        integral: "QFI",
        potential: "V = k exp(-r/sqrt(P)) / (sqrt(P) r), P = b0 + b1 t + b2 t^2",
        defaults: &[
            ("k", Default::N(1.0)),
            ("b0", Default::N(1.0)),
            ("b1", Default::N(0.0)),
            ("b2", Default::N(0.0)),
            ("L3", Default::N(0.0)),
        ],
    },
    Spec {
        name: "interatomic",
        integral: "QFI",
        potential: "V = k1 P^((m-2)/2)/r^m - k2 P^((n-2)/2)/r^n, P = b0 + b1 t + b2 t^2",
        defaults: &[
            ("k1", Default::N(1.0)),
            ("k2", Default::N(1.0)),
            ("m", Default::N(12.0)),
            ("n", Default::N(6.0)),
            ("b0", Default::N(1.0)),
            ("b1", Default::N(0.0)),
            ("b2", Default::N(0.0)),
            ("L3", Default::N(0.0)),
        ],
    },
    Spec {
        name: "similarity",
        integral: "QFI",
        potential: "V = -(phi''/(2 phi)) r^2 + phi^-2 Fbar(r/phi)",
        defaults: &[
            ("phi", Default::E("1")),
            ("Fbar", Default::E("0")),
            ("L3", Default::N(0.0)),
        ],
    },
    Spec {
        name: "lewis-leach",
        integral: "1d QFI",
        potential: "U = Omega^2 q^2/2 - F1 q + rho^-2 G((q - alpha)/rho)",
        defaults: &[
            ("rho", Default::E("(sqrt (poly 1 0 1))")),
            ("alpha", Default::E("0")),
            ("Omega", Default::E("0")),
            ("F1", Default::E("0")),
            ("G", Default::E("0")),
            ("k", Default::N(1.0)),
        ],
    },
];

fn default_string(d: &Default) -> String {
    match d {
        Default::N(x) => format!("{x}"),
        Default::E(s) => (*s).to_string(),
    }
}

/// The preset catalog with default parameters.
pub fn catalog() -> Vec<CatalogEntry> {
    SPECS
        .iter()
        .map(|s| CatalogEntry {
            name: s.name,
            integral: s.integral,
            potential: s.potential,
            parameters: s
                .defaults
                .iter()
                .chain(INTERVAL.iter())
                .map(|(k, d)| (*k, default_string(d)))
                .collect(),
        })
        .collect()
}

struct Reader {
    resolved: Params,
    numbers: BTreeMap<String, f64>,
}

impl Reader {
    fn new(spec: &Spec, given: &Params) -> Result<Self> {
        let allowed: Vec<&str> = spec
            .defaults
            .iter()
            .chain(INTERVAL.iter())
            .map(|(k, _)| *k)
            .collect();
        if let Some(bad) = given.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(Error::invalid(format!(
                "preset `{}` has no parameter `{bad}` (expected one of {})",
                spec.name,
                allowed.join(", ")
            )));
        }
        let mut resolved = Params::new();
        for (key, d) in spec.defaults.iter().chain(INTERVAL.iter()) {
            let v = given.get(*key).cloned().unwrap_or(match d {
                Default::N(x) => ParamValue::Number(*x),
                Default::E(s) => ParamValue::Expr((*s).to_string()),
            });
            resolved.insert((*key).to_string(), v);
        }
        let numbers = resolved
            .iter()
            .filter_map(|(k, v)| match v {
                ParamValue::Number(x) => Some((k.clone(), *x)),
                ParamValue::Expr(_) => None,
            })
            .collect();
        Ok(Reader { resolved, numbers })
    }

    fn num(&self, key: &str) -> Result<f64> {
        match self.resolved.get(key) {
            Some(ParamValue::Number(x)) if x.is_finite() => Ok(*x),
            Some(ParamValue::Number(x)) => Err(Error::invalid(format!("`{key}` = {x} is not finite"))),
            Some(ParamValue::Expr(s)) => s
                .trim()
                .parse::<f64>()
                .map_err(|_| Error::invalid(format!("`{key}` must be a number, got `{s}`"))),
            None => Err(Error::invalid(format!("missing parameter `{key}`"))),
        }
    }

    fn func(&self, key: &str) -> Result<ScalarFn> {
        match self.resolved.get(key) {
            Some(ParamValue::Expr(s)) => {
                parse_with(s, &self.numbers).map_err(|e| Error::invalid(format!("`{key}`: {e}")))
            }
            Some(ParamValue::Number(x)) => Ok(ScalarFn::constant(*x)),
            None => Err(Error::invalid(format!("missing parameter `{key}`"))),
        }
    }

    fn quadratic(&self) -> Result<[f64; 3]> {
        Ok([self.num("b0")?, self.num("b1")?, self.num("b2")?])
    }
}

const CHECK_POINTS: usize = 257;

fn sample_check(f: &ScalarFn, (lo, hi): (f64, f64), what: &str, ok: impl Fn(f64) -> bool) -> Result<()> {
    for i in 0..CHECK_POINTS {
        let t = lo + (hi - lo) * i as f64 / (CHECK_POINTS - 1) as f64;
        let v = f
            .eval(t)
            .map_err(|e| Error::invalid(format!("{what} at t = {t}: {e}")))?;
        if !ok(v) {
            return Err(Error::invalid(format!("{what} violated at t = {t} (value {v})")));
        }
    }
    Ok(())
}

fn quadratic_positive(b: [f64; 3], (lo, hi): (f64, f64)) -> Result<()> {
    let p = |t: f64| b[0] + b[1] * t + b[2] * t * t;
    let mut pts = vec![lo, hi];
    if b[2] != 0.0 {
        let vertex = -b[1] / (2.0 * b[2]);
        if vertex > lo && vertex < hi {
            pts.push(vertex);
        }
    }
    match pts.into_iter().find(|t| p(*t) <= 0.0) {
        Some(t) => Err(Error::invalid(format!(
            "b0 + b1 t + b2 t^2 must be positive on [{lo}, {hi}]; it is {} at t = {t}",
            p(t)
        ))),
        None => Ok(()),
    }
}

fn var() -> ScalarFn {
    ScalarFn::var()
}

/// `L3^2 / s^2` as a shape term.
fn centrifugal_shape(l3: f64) -> ScalarFn {
    (l3 * l3) * var().powf(-2.0)
}

fn half_square(phi: &ScalarFn) -> ScalarFn {
    0.5 * (phi * phi)
}

fn quadratic_poly(b: [f64; 3]) -> ScalarFn {
    ScalarFn::poly(b.to_vec())
}

/// Builds a preset by name.
pub fn preset(name: &str, params: &Params) -> Result<Preset> {
    let spec = SPECS
        .iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::UnknownPreset(name.to_string()))?;
    let rd = Reader::new(spec, params)?;
    let interval = (rd.num("t_min")?, rd.num("t_max")?);
    if interval.0.is_nan() || interval.1.is_nan() || interval.0 >= interval.1 {
        return Err(Error::invalid("t_min must be less than t_max"));
    }

    let (kind, system) = match name {
        "oscillator-lfi" => {
            let g2 = rd.func("g2")?;
            sample_check(&g2, interval, "g2 != 0", |v| v != 0.0)?;
            let fam = FamilyA::new(g2.clone(), ScalarFn::zero(), 0.0);
            (PresetKind::OscillatorLfi { g2 }, Family::A(fam))
        }
        "oscillator-qfi" => {
            let g1 = rd.func("g1")?;
            let (c0, l3) = (rd.num("c0")?, rd.num("L3")?);
            sample_check(&g1, interval, "g1 > 0", |v| v > 0.0)?;
            let fam = oscillator_family(&g1, c0, l3);
            (PresetKind::OscillatorQfi { g1, c0, l3 }, Family::B(fam))
        }
        "scaled-oscillator" => {
            let phi = rd.func("phi")?;
            let (k, l3) = (rd.num("K")?, rd.num("L3")?);
            sample_check(&phi, interval, "phi != 0", |v| v != 0.0)?;
            let fam = oscillator_family(&half_square(&phi), k / 2.0, l3);
            (PresetKind::ScaledOscillator { phi, k, l3 }, Family::B(fam))
        }
        "generalized-kepler" => {
            let (nu, k, l3) = (rd.num("nu")?, rd.num("k")?, rd.num("L3")?);
            let b = rd.quadratic()?;
            if nu == 0.0 {
                return Err(Error::invalid("nu must be non-zero"));
            }
            quadratic_positive(b, interval)?;
            let fam = kepler_family(nu, k, b, l3);
            (PresetKind::GeneralizedKepler { nu, k, b, l3 }, Family::B(fam))
        }
        "scaled-kepler" => {
            let phi = rd.func("phi")?;
            let (k, l3) = (rd.num("k")?, rd.num("L3")?);
            sample_check(&phi, interval, "phi > 0", |v| v > 0.0)?;
            let shape = (-k * SQRT_2) * var().powf(-1.0);
            let fam = FamilyB::new(half_square(&phi), ScalarFn::zero(), shape, l3);
            (PresetKind::ScaledKepler { phi, k, l3 }, Family::B(fam))
        }
        "binary" => {
            let (g, l3) = (rd.num("G")?, rd.num("L3")?);
            let b = rd.quadratic()?;
            quadratic_positive(b, interval)?;
            let fam = kepler_family(1.0, g, b, l3);
            (PresetKind::Binary { g, b, l3 }, Family::B(fam))
        }
        "yukawa" => {
            let (k, l3) = (rd.num("k")?, rd.num("L3")?);
            let b = rd.quadratic()?;
            quadratic_positive(b, interval)?;
            // Fbar(s) = 2k exp(-s)/s
            let fbar = (2.0 * k) * (-var()).exp() * var().powf(-1.0);
            let fam = screened_family(b, fbar, l3);
            (PresetKind::Yukawa { k, b, l3 }, Family::B(fam))
        }
        "interatomic" => {
            let (k1, k2, l3) = (rd.num("k1")?, rd.num("k2")?, rd.num("L3")?);
            let (m, n) = (rd.num("m")?, rd.num("n")?);
            if !(m > 0.0 && n > 0.0) {
                return Err(Error::invalid("interatomic exponents m, n must be positive"));
            }
            let b = rd.quadratic()?;
            quadratic_positive(b, interval)?;
            let fbar = (2.0 * k1) * var().powf(-m) - (2.0 * k2) * var().powf(-n);
            let fam = screened_family(b, fbar, l3);
            (PresetKind::Interatomic { k1, k2, m, n, b, l3 }, Family::B(fam))
        }
        "similarity" => {
            let phi = rd.func("phi")?;
            let fbar = rd.func("Fbar")?;
            let l3 = rd.num("L3")?;
            sample_check(&phi, interval, "phi > 0", |v| v > 0.0)?;
            let fam = similarity_family(&phi, &fbar, l3);
            (PresetKind::Similarity { phi, fbar, l3 }, Family::B(fam))
        }
        "lewis-leach" => {
            let ll = LewisLeach {
                rho: rd.func("rho")?,
                alpha: rd.func("alpha")?,
                omega: rd.func("Omega")?,
                f1: rd.func("F1")?,
                g_tilde: rd.func("G")?,
                k: rd.num("k")?,
            };
            sample_check(&ll.rho, interval, "rho > 0", |v| v > 0.0)?;
            return Ok(Preset {
                name: name.to_string(),
                kind: PresetKind::LewisLeach,
                system: PresetSystem::LewisLeach1d(ll),
                params: rd.resolved,
                interval,
            });
        }
        _ => unreachable!("catalog and constructor disagree on `{name}`"),
    };
    Ok(Preset {
        name: name.to_string(),
        kind,
        system: PresetSystem::Central(system),
        params: rd.resolved,
        interval,
    })
}

/// Oscillator with `g2 = 0`, `F(s) = c0 s^2/2 + L3^2/s^2`.
fn oscillator_family(g1: &ScalarFn, c0: f64, l3: f64) -> FamilyB {
    let shape = (0.5 * c0) * (var() * var()) + centrifugal_shape(l3);
    FamilyB::new(g1.clone(), ScalarFn::zero(), shape, l3)
}

/// `g1 = P/2`, `F(s) = k1 s^2/2 - k 2^{nu/2} s^{-nu} + L3^2/s^2`,
/// `k1 = b0 b2/2 - b1^2/8`.
fn kepler_family(nu: f64, k: f64, b: [f64; 3], l3: f64) -> FamilyB {
    let [b0, b1, b2] = b;
    let k1 = b0 * b2 / 2.0 - b1 * b1 / 8.0;
    let shape =
        (0.5 * k1) * (var() * var()) - (k * 2f64.powf(nu / 2.0)) * var().powf(-nu) + centrifugal_shape(l3);
    FamilyB::new(
        quadratic_poly([b0 / 2.0, b1 / 2.0, b2 / 2.0]),
        ScalarFn::zero(),
        shape,
        l3,
    )
}

/// `g1 = P`, `F(s) = -c1 s^2/4 + L3^2/s^2 + Fbar(s)`, `c1 = b1^2 - 4 b2 b0`.
fn screened_family(b: [f64; 3], fbar: ScalarFn, l3: f64) -> FamilyB {
    let [b0, b1, b2] = b;
    let c1 = b1 * b1 - 4.0 * b2 * b0;
    let shape = (-c1 / 4.0) * (var() * var()) + centrifugal_shape(l3) + fbar;
    FamilyB::new(quadratic_poly(b), ScalarFn::zero(), shape, l3)
}

/// `g1 = phi^2/2`, `g2 = 0`, `F(s) = Fbar(s/sqrt 2) + L3^2/s^2`; the
/// argument `s = sqrt(2) r/phi` makes `Fbar` see `r/phi`.
pub(crate) fn similarity_family(phi: &ScalarFn, fbar: &ScalarFn, l3: f64) -> FamilyB {
    let shape = fbar.affine(1.0 / SQRT_2, 0.0) + centrifugal_shape(l3);
    FamilyB::new(half_square(phi), ScalarFn::zero(), shape, l3)
}

impl Preset {
    pub fn family(&self) -> Option<&Family> {
        match &self.system {
            PresetSystem::Central(f) => Some(f),
            PresetSystem::LewisLeach1d(_) => None,
        }
    }

    pub fn lewis_leach(&self) -> Option<&LewisLeach> {
        match &self.system {
            PresetSystem::LewisLeach1d(ll) => Some(ll),
            PresetSystem::Central(_) => None,
        }
    }

    /// Quadratic `b0 + b1 t + b2 t^2` for presets built on one.
    pub fn quadratic(&self) -> Option<[f64; 3]> {
        match &self.kind {
            PresetKind::GeneralizedKepler { b, .. }
            | PresetKind::Binary { b, .. }
            | PresetKind::Yukawa { b, .. }
            | PresetKind::Interatomic { b, .. } => Some(*b),
            _ => None,
        }
    }

    /// `omega(t)` of `V = -omega(t)/r^nu` for the Kepler-type presets.
    pub fn frequency(&self, t: f64) -> Option<f64> {
        let p = |b: [f64; 3]| b[0] + b[1] * t + b[2] * t * t;
        match &self.kind {
            PresetKind::GeneralizedKepler { nu, k, b, .. } => Some(k * p(*b).powf((nu - 2.0) / 2.0)),
            PresetKind::Binary { g, b, .. } => Some(g / p(*b).sqrt()),
            _ => None,
        }
    }

    pub fn mass_law(&self) -> Option<MassLaw> {
        match &self.kind {
            PresetKind::Binary { b, .. } => Some(MassLaw::classify(*b)),
            _ => None,
        }
    }

    /// The potential written directly in its named form, independent of the
    /// family construction. `None` for presets without one.
    pub fn direct_potential(&self, t: f64, r: f64) -> Result<Option<f64>> {
        super::check_radius(r)?;
        let p = |b: &[f64; 3]| b[0] + b[1] * t + b[2] * t * t;
        let v = match &self.kind {
            PresetKind::OscillatorLfi { g2 } => {
                let j = g2.jet(t, 2)?;
                -j.deriv(2) / (2.0 * j.value()) * r * r
            }
            PresetKind::OscillatorQfi { g1, c0, .. } => oscillator_direct(g1, *c0, t, r)?,
            PresetKind::ScaledOscillator { phi, k, .. } => {
                let g1 = half_square(phi);
                oscillator_direct(&g1, k / 2.0, t, r)?
            }
            PresetKind::GeneralizedKepler { nu, .. } => {
                -self.frequency(t).expect("kepler frequency") / r.powf(*nu)
            }
            PresetKind::Binary { .. } => -self.frequency(t).expect("binary frequency") / r,
            PresetKind::ScaledKepler { phi, k, l3 } => {
                let j = phi.jet(t, 2)?;
                -j.deriv(2) / (2.0 * j.value()) * r * r - k / (j.value() * r) - l3 * l3 / (2.0 * r * r)
            }
            PresetKind::Yukawa { k, b, .. } => {
                let sp = p(b).sqrt();
                k / sp * (-r / sp).exp() / r
            }
            PresetKind::Interatomic { k1, k2, m, n, b, .. } => {
                let pv = p(b);
                k1 * pv.powf((m - 2.0) / 2.0) / r.powf(*m) - k2 * pv.powf((n - 2.0) / 2.0) / r.powf(*n)
            }
            PresetKind::Similarity { phi, fbar, .. } => similarity_direct(phi, fbar, t, r)?,
            PresetKind::LewisLeach => return Ok(None),
        };
        Ok(Some(v))
    }

    /// Direct form through the family construction, for comparisons.
    pub fn family_potential(&self, t: f64, r: f64) -> Result<Option<f64>> {
        self.family().map(|f| f.potential(t, r)).transpose()
    }

    /// `{"preset": name, "params": {...}}` with every default filled in.
    pub fn to_config_value(&self) -> serde_json::Value {
        serde_json::json!({ "preset": self.name, "params": self.params })
    }
}

fn oscillator_direct(g1: &ScalarFn, c0: f64, t: f64, r: f64) -> Result<f64> {
    let j = g1.jet(t, 2)?;
    let (g, gd, gdd) = (j.value(), j.deriv(1), j.deriv(2));
    Ok(-(gdd / (4.0 * g) - (gd / g).powi(2) / 8.0 - c0 / (4.0 * g * g)) * r * r)
}

/// `-(phi''/2phi) r^2 + phi^{-2} Fbar(r/phi)`.
pub(crate) fn similarity_direct(phi: &ScalarFn, fbar: &ScalarFn, t: f64, r: f64) -> Result<f64> {
    let j = phi.jet(t, 2)?;
    let ph = j.value();
    Ok(-j.deriv(2) / (2.0 * ph) * r * r + fbar.eval(r / ph)? / (ph * ph))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(pairs: &[(&str, f64)]) -> Params {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), ParamValue::Number(*v)))
            .collect()
    }

    #[test]
    fn catalog_has_every_preset() {
        let c = catalog();
        assert!(c.len() >= 8);
        for e in &c {
            preset(e.name, &Params::new()).unwrap_or_else(|err| panic!("{}: {err}", e.name));
        }
    }

    #[test]
    fn unknown_preset_and_parameter() {
        assert!(matches!(
            preset("nope", &Params::new()),
            Err(Error::UnknownPreset(_))
        ));
        let err = preset("yukawa", &params(&[("kk", 1.0)])).unwrap_err();
        assert!(
            matches!(err, Error::InvalidParameters(ref m) if m.contains("kk")),
            "{err}"
        );
    }

    #[test]
    fn constant_frequency_when_nu_is_two() {
        let p = preset(
            "generalized-kepler",
            &params(&[("nu", 2.0), ("k", 3.0), ("b1", 1.0)]),
        )
        .unwrap();
        assert_eq!(p.frequency(0.0), Some(3.0));
        assert_eq!(p.frequency(5.0), Some(3.0));
    }

    #[test]
    fn zero_discriminant_binary_is_first_mass_law() {
        let p = preset("binary", &params(&[("b0", 1.0), ("b1", 2.0), ("b2", 1.0)])).unwrap();
        let law = p.mass_law().unwrap();
        assert_eq!(law, MassLaw::I { a0: 1.0, a1: 1.0 });
        for t in [0.0, 0.5, 3.0] {
            assert!((law.mass(t) - 1.0 / (1.0 + t)).abs() < 1e-15);
        }
    }

    #[test]
    fn static_yukawa() {
        let p = preset("yukawa", &params(&[("k", 1.0)])).unwrap();
        for r in [0.5f64, 1.0, 3.0] {
            let expect = (-r).exp() / r;
            let direct = p.direct_potential(2.0, r).unwrap().unwrap();
            let fam = p.family_potential(2.0, r).unwrap().unwrap();
            assert!((direct - expect).abs() < 1e-15);
            assert!((fam - expect).abs() < 1e-14, "{fam} vs {expect}");
        }
    }

    #[test]
    fn nonpositive_quadratic_rejected() {
        let err = preset("binary", &params(&[("b0", 1.0), ("b1", -1.0)])).unwrap_err();
        assert!(matches!(err, Error::InvalidParameters(_)));
        let err = preset("interatomic", &params(&[("m", -1.0)])).unwrap_err();
        assert!(matches!(err, Error::InvalidParameters(_)));
    }

    #[test]
    fn expression_parameters_see_numeric_bindings() {
        let mut ps = Params::new();
        ps.insert("phi".into(), ParamValue::Expr("(sqrt (poly 1 0 a))".into()));
        // `a` is not a parameter of case-iii, so the symbol is unbound.
        assert!(preset("similarity", &ps).is_err());
        ps.insert("phi".into(), ParamValue::Expr("(sqrt (+ 1 (* L3 t t)))".into()));
        ps.insert("L3".into(), ParamValue::Number(2.0));
        let p = preset("similarity", &ps).unwrap();
        if let PresetKind::Similarity { phi, .. } = &p.kind {
            assert!((phi.eval(1.0).unwrap() - 3f64.sqrt()).abs() < 1e-15);
        } else {
            panic!("wrong kind");
        }
    }
}
