//! Generalized Kepler drift and the variable-mass two-body laws.

use tdcentral::dynamics::{cartesian_crosscheck, drift_report, integrate, IntegratorConfig, PolarState};
use tdcentral::integrals::FirstIntegral;
use tdcentral::potentials::{preset, ParamValue, Params};

fn params(pairs: &[(&str, f64)]) -> Params {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), ParamValue::Number(*v)))
        .collect()
}

fn main() -> tdcentral::Result<()> {
    let cfg = IntegratorConfig::default();
    let s0 = PolarState {
        t: 0.0,
        r: 1.0,
        rdot: 0.1,
        theta: 0.0,
    };
    // the r^-3 case starts outside its centrifugal barrier
    for (nu, b, l3, r0) in [
        (1.0, [1.0, 1.0, 1.0], 1.0, 1.0),
        (2.0, [1.0, 0.0, 1.0], 2.0, 1.0),
        (3.0, [2.0, 1.0, 0.0], 2.0, 2.0),
    ] {
        let p = preset(
            "generalized-kepler",
            &params(&[("nu", nu), ("b0", b[0]), ("b1", b[1]), ("b2", b[2]), ("L3", l3)]),
        )?;
        let traj = integrate(p.family().unwrap(), PolarState { r: r0, ..s0 }, 10.0, &cfg)?;
        let drift = drift_report(&traj, &FirstIntegral::of_preset(&p))?;
        println!("nu = {nu} b = {b:?}: integral drift {drift:.3e}");
    }
    for b in [[1.0, 2.0, 1.0], [1.0, 0.5, 0.0], [1.0, 0.5, 0.25]] {
        let p = preset("binary", &params(&[("b0", b[0]), ("b1", b[1]), ("b2", b[2])]))?;
        let law = p.mass_law().unwrap();
        let cross = cartesian_crosscheck(p.family().unwrap(), s0, 10.0, &cfg)?;
        println!(
            "b = {b:?}: {law:?}, m(5) = {:.12}, Cartesian L3 drift {:.3e}",
            law.mass(5.0),
            cross.l3_drift
        );
    }
    Ok(())
}
