//! Numerical verification of the analytic claims.
//!
//! Every check reduces to a maximum residual compared against a tolerance.
//! Results are collected in a [`VerificationReport`], which serializes to a
//! flat JSON map `{check: {max_residual, tolerance, pass}}`.

mod closed_form;
mod residuals;

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use closed_form::{
    closed_form_r, closed_form_r_check, closed_form_theta, ermakov_check, orbit_integral,
    orbit_relation_check, similarity_recovery, ConstantPlacement, Grid, OrbitCheck,
};
pub use residuals::{
    noether_check, noether_check_against, noether_residuals, pde_at, pde_residuals, pde_residuals_against,
    NoetherResiduals, PdeResiduals,
};

/// Default tolerance of checks that only involve analytic derivatives.
pub const ANALYTIC_TOL: f64 = 1e-9;
/// Default tolerance of checks that go through the integrator.
pub const INTEGRATED_TOL: f64 = 1e-7;
/// Residual a deliberately broken system must at least reach.
pub const CONTROL_TOL: f64 = 1e-4;

/// Seeded uniform samples of `(t, r, r')`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplingPlan {
    pub t: [f64; 2],
    pub r: [f64; 2],
    pub rdot: [f64; 2],
    pub count: usize,
    pub seed: u64,
}

impl Default for SamplingPlan {
    fn default() -> Self {
        SamplingPlan {
            t: [0.0, 10.0],
            r: [0.5, 3.0],
            rdot: [-2.0, 2.0],
            count: 1000,
            seed: 0,
        }
    }
}

impl SamplingPlan {
    pub fn validate(&self) -> Result<()> {
        for (name, [lo, hi]) in [("t", self.t), ("r", self.r), ("rdot", self.rdot)] {
            if !(lo <= hi && lo.is_finite() && hi.is_finite()) {
                return Err(Error::invalid(format!(
                    "sampling range {name} = [{lo}, {hi}] is not an interval"
                )));
            }
        }
        if self.r[0] <= 0.0 {
            return Err(Error::invalid("sampling range r must lie in r > 0"));
        }
        if self.count == 0 {
            return Err(Error::invalid("sampling count must be at least 1"));
        }
        Ok(())
    }

    /// The `(t, r, r')` points, identical for identical plans.
    pub fn points(&self) -> Result<Vec<[f64; 3]>> {
        self.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut draw = |[lo, hi]: [f64; 2]| if lo == hi { lo } else { rng.gen_range(lo..hi) };
        Ok((0..self.count)
            .map(|_| [draw(self.t), draw(self.r), draw(self.rdot)])
            .collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expect {
    /// The residual must stay below the tolerance.
    #[default]
    AtMost,
    /// A negative control: the residual must reach the tolerance.
    AtLeast,
}

impl Expect {
    fn is_at_most(&self) -> bool {
        *self == Expect::AtMost
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Expect::is_at_most")]
    pub expect: Expect,
}

impl Check {
    pub fn at_most(max_residual: f64, tolerance: f64) -> Check {
        Check {
            max_residual,
            tolerance,
            pass: max_residual <= tolerance,
            expect: Expect::AtMost,
        }
    }

    pub fn at_least(max_residual: f64, tolerance: f64) -> Check {
        Check {
            max_residual,
            tolerance,
            pass: max_residual >= tolerance,
            expect: Expect::AtLeast,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerificationReport {
    pub checks: BTreeMap<String, Check>,
    pub plan: Option<SamplingPlan>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_plan(plan: SamplingPlan) -> Self {
        VerificationReport {
            checks: BTreeMap::new(),
            plan: Some(plan),
        }
    }

    pub fn insert(&mut self, name: impl Into<String>, check: Check) {
        self.checks.insert(name.into(), check);
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.get(name)
    }

    pub fn passed(&self) -> bool {
        self.checks.values().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = (&String, &Check)> {
        self.checks.iter().filter(|(_, c)| !c.pass)
    }

    /// Adds the other report's checks; its plan is kept if this one has none.
    pub fn merge(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
        if self.plan.is_none() {
            self.plan = other.plan;
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (name, check) in &self.checks {
            map.insert(
                name.clone(),
                serde_json::to_value(check).expect("check serializes"),
            );
        }
        if let Some(plan) = &self.plan {
            map.insert(
                "plan".into(),
                serde_json::to_value(plan).expect("plan serializes"),
            );
        }
        serde_json::Value::Object(map)
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("report serializes");
        s.push('\n');
        s
    }
}
