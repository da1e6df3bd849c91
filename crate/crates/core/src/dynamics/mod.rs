//! Equations of motion and sampled trajectories.
//!
//! Planar motion in a central potential is integrated in polar form as the
//! system `(r, r', theta)` with `r'' = -dU/dr` and `theta' = L3 / r^2`. An
//! independent Cartesian integration validates the reduction, and the
//! one-dimensional Lewis–Leach system has its own line integrator.

mod dopri;

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrals::{relative_drift, Arity, FirstIntegral};
use crate::potentials::{CentralPotential, LewisLeach};

use dopri::{solve, Flow};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialState {
    pub t: f64,
    pub r: f64,
    pub rdot: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolarState {
    pub t: f64,
    pub r: f64,
    pub rdot: f64,
    #[serde(default)]
    pub theta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IntegratorConfig {
    pub rtol: f64,
    pub atol: f64,
    pub h_init: f64,
    pub h_max: f64,
    pub max_steps: usize,
    /// Spacing of the output samples.
    pub stride: f64,
    /// Integration stops once `r` drops below this.
    pub r_min: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            rtol: 1e-10,
            atol: 1e-10,
            h_init: 1e-3,
            h_max: 1.0,
            max_steps: 1_000_000,
            stride: 0.01,
            r_min: 1e-9,
        }
    }
}

impl IntegratorConfig {
    pub fn with_tolerance(tol: f64) -> Self {
        IntegratorConfig {
            rtol: tol,
            atol: tol,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("rtol", self.rtol),
            ("atol", self.atol),
            ("h_init", self.h_init),
            ("h_max", self.h_max),
            ("stride", self.stride),
            ("r_min", self.r_min),
        ];
        if let Some((name, v)) = positive.iter().find(|(_, v)| !(*v > 0.0 && v.is_finite())) {
            return Err(Error::invalid(format!(
                "integrator {name} must be positive, got {v}"
            )));
        }
        if self.rtol < 1e-14 {
            return Err(Error::invalid(format!(
                "integrator rtol must be at least 1e-14, got {}",
                self.rtol
            )));
        }
        if self.max_steps == 0 {
            return Err(Error::invalid("integrator max_steps must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Termination {
    Completed,
    /// `r` fell below `r_min` at time `t`.
    RadiusCollapse {
        t: f64,
        r: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub r: f64,
    pub rdot: f64,
    pub theta: f64,
    /// Size of the step that produced the sample (zero for the first one).
    pub h_accepted: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub l3: f64,
    pub termination: Termination,
    pub steps_accepted: usize,
    pub steps_rejected: usize,
}

impl Trajectory {
    pub fn first(&self) -> &Sample {
        &self.samples[0]
    }

    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trajectory has its initial sample")
    }

    pub fn thetadot(&self, s: &Sample) -> f64 {
        self.l3 / (s.r * s.r)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "t,r,rdot,theta,h_accepted")?;
        for s in &self.samples {
            writeln!(w, "{},{},{},{},{}", s.t, s.r, s.rdot, s.theta, s.h_accepted)?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is ascii")
    }
}

/// `r'' = L3^2/r^3 - dV/dr = -dU/dr`.
pub fn radial_rhs<P: CentralPotential + ?Sized>(pot: &P, s: &RadialState) -> Result<f64> {
    Ok(-pot.u_partials(s.t, s.r)?.d_r)
}

/// Integrates `(r, r', theta)` from `s0` to `t_end`.
pub fn integrate<P: CentralPotential + ?Sized>(
    pot: &P,
    s0: PolarState,
    t_end: f64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    crate::potentials::check_radius(s0.r)?;
    let l3 = pot.angular_momentum();
    let mut samples = Vec::new();
    let mut termination = Termination::Completed;
    let rhs = |t: f64, y: &[f64; 3]| -> Result<[f64; 3]> {
        let acc = radial_rhs(
            pot,
            &RadialState {
                t,
                r: y[0],
                rdot: y[1],
            },
        )?;
        Ok([y[1], acc, l3 / (y[0] * y[0])])
    };
    let mut last_r = s0.r;
    let outcome = solve(
        rhs,
        s0.t,
        [s0.r, s0.rdot, s0.theta],
        t_end,
        cfg,
        |t, y| {
            last_r = y[0];
            if y[0] < cfg.r_min {
                termination = Termination::RadiusCollapse { t, r: y[0] };
                Flow::Stop
            } else {
                Flow::Continue
            }
        },
        |t, y, h| {
            samples.push(Sample {
                t,
                r: y[0],
                rdot: y[1],
                theta: y[2],
                h_accepted: h,
            })
        },
    );
    let stats = collapse_or(outcome, s0.r, last_r, &mut termination)?;
    Ok(Trajectory {
        samples,
        l3,
        termination,
        steps_accepted: stats.accepted,
        steps_rejected: stats.rejected,
    })
}

/// Below this fraction of the initial radius a step-size underflow means the
/// orbit is falling into the centre faster than steps can resolve.
const COLLAPSE_FRACTION: f64 = 1e-6;

fn collapse_or(
    outcome: Result<dopri::Stats>,
    r0: f64,
    last_r: f64,
    termination: &mut Termination,
) -> Result<dopri::Stats> {
    match outcome {
        Err(Error::StepSizeUnderflow { t, .. }) if last_r < COLLAPSE_FRACTION * r0.max(1.0) => {
            *termination = Termination::RadiusCollapse { t, r: last_r };
            Ok(dopri::Stats::default())
        }
        other => other,
    }
}

/// Result of integrating the same motion in Cartesian coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossCheck {
    /// The Cartesian run converted to polar samples.
    pub trajectory: Trajectory,
    /// Largest distance between the two runs' positions at shared samples.
    pub max_deviation: f64,
    /// Relative drift of `x y' - y x'` along the Cartesian run.
    pub l3_drift: f64,
}

/// Integrates `x'' = -V_r x/r`, `y'' = -V_r y/r` and compares with [`integrate`].
pub fn cartesian_crosscheck<P: CentralPotential + ?Sized>(
    pot: &P,
    s0: PolarState,
    t_end: f64,
    cfg: &IntegratorConfig,
) -> Result<CrossCheck> {
    let polar = integrate(pot, s0, t_end, cfg)?;
    let l3 = pot.angular_momentum();
    let (c, s) = (s0.theta.cos(), s0.theta.sin());
    let thetadot = l3 / (s0.r * s0.r);
    let y0 = [
        s0.r * c,
        s0.r * s,
        s0.rdot * c - s0.r * thetadot * s,
        s0.rdot * s + s0.r * thetadot * c,
    ];
    let rhs = |t: f64, y: &[f64; 4]| -> Result<[f64; 4]> {
        let r = y[0].hypot(y[1]);
        let vr = pot.v_partials(t, r)?.d_r;
        Ok([y[2], y[3], -vr * y[0] / r, -vr * y[1] / r])
    };
    let mut cart: Vec<(f64, [f64; 4], f64)> = Vec::new();
    let mut termination = Termination::Completed;
    let mut last_r = s0.r;
    let outcome = solve(
        rhs,
        s0.t,
        y0,
        t_end,
        cfg,
        |t, y| {
            let r = y[0].hypot(y[1]);
            last_r = r;
            if r < cfg.r_min {
                termination = Termination::RadiusCollapse { t, r };
                Flow::Stop
            } else {
                Flow::Continue
            }
        },
        |t, y, h| cart.push((t, *y, h)),
    );
    let stats = collapse_or(outcome, s0.r, last_r, &mut termination)?;

    let mut samples = Vec::with_capacity(cart.len());
    let mut theta = s0.theta;
    let mut prev_angle = s0.theta;
    let mut momenta = Vec::with_capacity(cart.len());
    for (i, (t, y, h)) in cart.iter().enumerate() {
        let r = y[0].hypot(y[1]);
        let angle = y[1].atan2(y[0]);
        if i > 0 {
            let mut d = angle - prev_angle;
            d -= (d / std::f64::consts::TAU).round() * std::f64::consts::TAU;
            theta += d;
        }
        prev_angle = angle;
        momenta.push(y[0] * y[3] - y[1] * y[2]);
        samples.push(Sample {
            t: *t,
            r,
            rdot: (y[0] * y[2] + y[1] * y[3]) / r,
            theta,
            h_accepted: *h,
        });
    }
    let max_deviation = polar
        .samples
        .iter()
        .zip(&cart)
        .map(|(p, (_, y, _))| {
            let (px, py) = (p.r * p.theta.cos(), p.r * p.theta.sin());
            (px - y[0]).hypot(py - y[1])
        })
        .fold(0.0, f64::max);
    Ok(CrossCheck {
        trajectory: Trajectory {
            samples,
            l3,
            termination,
            steps_accepted: stats.accepted,
            steps_rejected: stats.rejected,
        },
        max_deviation,
        l3_drift: relative_drift(&momenta),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineSample {
    pub t: f64,
    pub q: f64,
    pub qdot: f64,
    pub h_accepted: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineTrajectory {
    pub samples: Vec<LineSample>,
    pub steps_accepted: usize,
    pub steps_rejected: usize,
}

impl LineTrajectory {
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "t,q,qdot,h_accepted")?;
        for s in &self.samples {
            writeln!(w, "{},{},{},{}", s.t, s.q, s.qdot, s.h_accepted)?;
        }
        Ok(())
    }
}

/// Integrates `q'' = -dU/dq` of the Lewis–Leach system.
pub fn integrate_line(
    sys: &LewisLeach,
    t0: f64,
    q0: f64,
    qdot0: f64,
    t_end: f64,
    cfg: &IntegratorConfig,
) -> Result<LineTrajectory> {
    let mut samples = Vec::new();
    let stats = solve(
        |t, y: &[f64; 2]| Ok([y[1], sys.acceleration(t, y[0])?]),
        t0,
        [q0, qdot0],
        t_end,
        cfg,
        |_, _| Flow::Continue,
        |t, y, h| {
            samples.push(LineSample {
                t,
                q: y[0],
                qdot: y[1],
                h_accepted: h,
            })
        },
    )?;
    Ok(LineTrajectory {
        samples,
        steps_accepted: stats.accepted,
        steps_rejected: stats.rejected,
    })
}

/// `max_t |I(t) - I(0)| / max(1, |I(0)|)` along a planar trajectory.
pub fn drift_report(traj: &Trajectory, fi: &FirstIntegral) -> Result<f64> {
    if fi.arity() == Arity::Line {
        return Err(Error::invalid(format!(
            "{} needs a one-dimensional trajectory",
            fi.name()
        )));
    }
    let values = traj
        .samples
        .iter()
        .map(|s| fi.eval_planar(s.t, s.r, s.rdot, traj.thetadot(s)))
        .collect::<Result<Vec<_>>>()?;
    Ok(relative_drift(&values))
}

/// Drift of a one-dimensional integral along a line trajectory.
pub fn line_drift(traj: &LineTrajectory, fi: &FirstIntegral) -> Result<f64> {
    let values = traj
        .samples
        .iter()
        .map(|s| fi.eval_line(s.t, s.q, s.qdot))
        .collect::<Result<Vec<_>>>()?;
    Ok(relative_drift(&values))
}
