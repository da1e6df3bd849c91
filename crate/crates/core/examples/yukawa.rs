//! Screened potentials: Yukawa and a Lennard-Jones style pair.

use tdcentral::dynamics::{drift_report, integrate, IntegratorConfig, PolarState};
use tdcentral::integrals::FirstIntegral;
use tdcentral::potentials::{preset, ParamValue, Params};

fn params(pairs: &[(&str, f64)]) -> Params {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), ParamValue::Number(*v)))
        .collect()
}

fn main() -> tdcentral::Result<()> {
    let quad = [("b0", 1.0), ("b1", 0.5), ("b2", 0.25), ("L3", 1.0)];
    let yukawa = preset("yukawa", &params(&[&quad[..], &[("k", 1.0)]].concat()))?;
    let pair = preset(
        "interatomic",
        &params(&[&quad[..], &[("k1", 1.0), ("k2", 1.0), ("m", 12.0), ("n", 6.0)]].concat()),
    )?;
    for (p, r0) in [(yukawa, 1.0), (pair, 1.2)] {
        let s0 = PolarState {
            t: 0.0,
            r: r0,
            rdot: 0.1,
            theta: 0.0,
        };
        let traj = integrate(p.family().unwrap(), s0, 10.0, &IntegratorConfig::default())?;
        let drift = drift_report(&traj, &FirstIntegral::of_preset(&p))?;
        println!("{}: drift {drift:.3e}, r(10) = {:.10}", p.name, traj.last().r);
    }
    Ok(())
}
