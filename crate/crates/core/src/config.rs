//! JSON run configuration.
//!
//! One file fully determines a run: the system (a named preset or an inline
//! family written in the expression syntax), the initial state, integrator
//! settings, the sampling plan and any suite-specific inputs.
//!
//! ```json
//! {
//!   "system": { "preset": "generalized-kepler", "params": { "nu": 1, "b1": 0.5 } },
//!   "initial": { "t": 0, "r": 1, "rdot": 0 },
//!   "t_end": 10,
//!   "integrator": { "rtol": 1e-10, "atol": 1e-10 }
//! }
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dynamics::{IntegratorConfig, PolarState};
use crate::error::{Error, Result};
use crate::potentials::{preset, Family, FamilyA, FamilyB, LewisLeach, Params, Preset, PresetSystem};
use crate::quantum::WavefunctionParams;
use crate::scalarfn::{parse_with, ScalarFn};
use crate::verify::{ConstantPlacement, Grid, SamplingPlan, INTEGRATED_TOL};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyASpec {
    pub g2: String,
    #[serde(default = "zero_expr")]
    pub g: String,
    #[serde(rename = "L3", default)]
    pub l3: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyBSpec {
    pub g1: String,
    #[serde(default = "zero_expr")]
    pub g2: String,
    #[serde(rename = "F")]
    pub shape: String,
    #[serde(rename = "L3", default)]
    pub l3: f64,
    #[serde(default)]
    pub t0: f64,
}

fn zero_expr() -> String {
    "0".into()
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Params::is_empty")]
    pub params: Params,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family_a: Option<FamilyASpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family_b: Option<FamilyBSpec>,
}

/// `coeff * r^power` added to the effective potential only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbationSpec {
    pub coeff: f64,
    pub power: f64,
}

/// Integral and symmetry evaluated with `F(scale u)` while the potential
/// keeps `F(u)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MismatchSpec {
    pub shape_scale: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSpec {
    #[serde(default)]
    pub t: f64,
    pub r: Option<f64>,
    pub rdot: Option<f64>,
    pub theta: Option<f64>,
    pub q: Option<f64>,
    pub qdot: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimilaritySpec {
    pub phi: String,
    #[serde(rename = "Fbar")]
    pub fbar: String,
    #[serde(rename = "L3", default)]
    pub l3: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    pub from: f64,
    pub to: f64,
    pub n: usize,
}

impl AxisSpec {
    pub fn values(&self) -> Vec<f64> {
        match self.n {
            0 => Vec::new(),
            1 => vec![self.from],
            n => (0..n)
                .map(|i| self.from + (self.to - self.from) * i as f64 / (n - 1) as f64)
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WavefunctionSpec {
    #[serde(default)]
    pub a: f64,
    #[serde(default)]
    pub b: u32,
    #[serde(default = "one")]
    pub hbar: f64,
    #[serde(rename = "L3", default)]
    pub l3: f64,
    #[serde(default = "one_expr")]
    pub phi: String,
    #[serde(default)]
    pub t0: f64,
    #[serde(default = "default_r_axis")]
    pub r: AxisSpec,
    #[serde(default = "default_theta_axis")]
    pub theta: AxisSpec,
    #[serde(default = "default_t_axis")]
    pub t: AxisSpec,
}

impl Default for WavefunctionSpec {
    fn default() -> Self {
        WavefunctionSpec {
            a: 0.0,
            b: 0,
            hbar: 1.0,
            l3: 0.0,
            phi: one_expr(),
            t0: 0.0,
            r: default_r_axis(),
            theta: default_theta_axis(),
            t: default_t_axis(),
        }
    }
}

fn one() -> f64 {
    1.0
}

fn one_expr() -> String {
    "1".into()
}

fn default_r_axis() -> AxisSpec {
    AxisSpec {
        from: 0.1,
        to: 10.0,
        n: 100,
    }
}

fn default_theta_axis() -> AxisSpec {
    AxisSpec {
        from: 0.0,
        to: 0.0,
        n: 1,
    }
}

fn default_t_axis() -> AxisSpec {
    AxisSpec {
        from: 0.0,
        to: 0.0,
        n: 1,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<SystemSpec>,
    /// Numeric symbols available to inline expressions.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub bindings: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturbation: Option<PerturbationSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mismatch: Option<MismatchSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<InitialSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_end: Option<f64>,
    #[serde(default)]
    pub integrator: IntegratorConfig,
    #[serde(default)]
    pub sampling: SamplingPlan,
    #[serde(default)]
    pub grid: Grid,
    #[serde(default = "default_drift_tolerance")]
    pub drift_tolerance: f64,
    #[serde(default)]
    pub placement: ConstantPlacement,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub similarity: Vec<SimilaritySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wavefunction: Option<WavefunctionSpec>,
}

fn default_drift_tolerance() -> f64 {
    INTEGRATED_TOL
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            system: None,
            bindings: BTreeMap::new(),
            perturbation: None,
            mismatch: None,
            initial: None,
            t_end: None,
            integrator: IntegratorConfig::default(),
            sampling: SamplingPlan::default(),
            grid: Grid::default(),
            drift_tolerance: default_drift_tolerance(),
            placement: ConstantPlacement::default(),
            similarity: Vec::new(),
            wavefunction: None,
        }
    }
}

/// The system a config describes, fully instantiated.
#[derive(Debug, Clone, PartialEq)]
pub enum System {
    Planar { family: Family, preset: Option<Preset> },
    Line { sys: LewisLeach, preset: Preset },
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        self.integrator.validate().map_err(config_err("integrator"))?;
        self.sampling.validate().map_err(config_err("sampling"))?;
        if self.drift_tolerance.is_nan() || self.drift_tolerance <= 0.0 {
            return Err(Error::Config("drift_tolerance must be positive".into()));
        }
        if let Some(t_end) = self.t_end {
            if !t_end.is_finite() {
                return Err(Error::Config("t_end must be finite".into()));
            }
        }
        Ok(())
    }

    fn func(&self, key: &str, src: &str) -> Result<ScalarFn> {
        parse_with(src, &self.bindings).map_err(|e| Error::Config(format!("`{key}`: {e}")))
    }

    /// Instantiates the system, if the config has one.
    pub fn system(&self) -> Result<System> {
        let spec = self
            .system
            .as_ref()
            .ok_or_else(|| Error::Config("missing key `system`".into()))?;
        let given = [
            spec.preset.is_some(),
            spec.family_a.is_some(),
            spec.family_b.is_some(),
        ];
        if given.iter().filter(|g| **g).count() != 1 {
            return Err(Error::Config(
                "`system` needs exactly one of `preset`, `family_a`, `family_b`".into(),
            ));
        }
        if spec.preset.is_none() && !spec.params.is_empty() {
            return Err(Error::Config("`system.params` only applies to presets".into()));
        }
        if let Some(name) = &spec.preset {
            let p = preset(name, &spec.params).map_err(config_err("system"))?;
            return Ok(match &p.system {
                PresetSystem::Central(f) => System::Planar {
                    family: f.clone(),
                    preset: Some(p.clone()),
                },
                PresetSystem::LewisLeach1d(ll) => System::Line {
                    sys: ll.clone(),
                    preset: p.clone(),
                },
            });
        }
        if let Some(a) = &spec.family_a {
            let fam = FamilyA::new(
                self.func("family_a.g2", &a.g2)?,
                self.func("family_a.g", &a.g)?,
                a.l3,
            );
            return Ok(System::Planar {
                family: Family::A(fam),
                preset: None,
            });
        }
        let b = spec.family_b.as_ref().expect("one of the three is present");
        let fam = FamilyB::new(
            self.func("family_b.g1", &b.g1)?,
            self.func("family_b.g2", &b.g2)?,
            self.func("family_b.F", &b.shape)?,
            b.l3,
        )
        .with_t0(b.t0);
        Ok(System::Planar {
            family: Family::B(fam),
            preset: None,
        })
    }

    /// Initial planar state; defaults to `r = 1`, `r' = 0`, `theta = 0`.
    pub fn polar_initial(&self) -> Result<PolarState> {
        let init = self.initial.unwrap_or_default();
        if init.q.is_some() || init.qdot.is_some() {
            return Err(Error::Config(
                "`initial.q`/`initial.qdot` belong to one-dimensional systems".into(),
            ));
        }
        let s = PolarState {
            t: init.t,
            r: init.r.unwrap_or(1.0),
            rdot: init.rdot.unwrap_or(0.0),
            theta: init.theta.unwrap_or(0.0),
        };
        if !(s.r > 0.0 && s.r.is_finite()) {
            return Err(Error::Config(format!(
                "`initial.r` must be positive, got {}",
                s.r
            )));
        }
        if ![s.t, s.rdot, s.theta].iter().all(|v| v.is_finite()) {
            return Err(Error::Config("`initial` values must be finite".into()));
        }
        Ok(s)
    }

    /// Initial one-dimensional state `(t, q, q')`.
    pub fn line_initial(&self) -> Result<(f64, f64, f64)> {
        let init = self.initial.unwrap_or_default();
        if init.r.is_some() || init.rdot.is_some() || init.theta.is_some() {
            return Err(Error::Config(
                "`initial.r`/`rdot`/`theta` belong to planar systems".into(),
            ));
        }
        let s = (init.t, init.q.unwrap_or(1.0), init.qdot.unwrap_or(0.0));
        if ![s.0, s.1, s.2].iter().all(|v| v.is_finite()) {
            return Err(Error::Config("`initial` values must be finite".into()));
        }
        Ok(s)
    }

    pub fn t_end(&self) -> Result<f64> {
        self.t_end
            .ok_or_else(|| Error::Config("missing key `t_end`".into()))
    }

    pub fn similarity_functions(&self) -> Result<Vec<(ScalarFn, ScalarFn, f64)>> {
        self.similarity
            .iter()
            .enumerate()
            .map(|(i, c)| {
                Ok((
                    self.func(&format!("similarity[{i}].phi"), &c.phi)?,
                    self.func(&format!("similarity[{i}].Fbar"), &c.fbar)?,
                    c.l3,
                ))
            })
            .collect()
    }

    pub fn wavefunction_params(&self, spec: &WavefunctionSpec) -> Result<WavefunctionParams> {
        let mut p = WavefunctionParams::new(
            spec.a,
            spec.b,
            spec.hbar,
            spec.l3,
            self.func("wavefunction.phi", &spec.phi)?,
        );
        p.t0 = spec.t0;
        p.validate().map_err(config_err("wavefunction"))?;
        Ok(p)
    }
}

fn config_err(key: &'static str) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::Config(m) => Error::Config(m),
        other => Error::Config(format!("`{key}`: {other}")),
    }
}
