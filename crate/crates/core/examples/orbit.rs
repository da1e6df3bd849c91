//! The orbit relation of the scaled Kepler potential, branch by branch.

use tdcentral::dynamics::{integrate, IntegratorConfig, PolarState};
use tdcentral::potentials::{preset, ParamValue, Params};
use tdcentral::verify::orbit_relation_check;

fn main() -> tdcentral::Result<()> {
    let mut params = Params::new();
    params.insert("phi".into(), ParamValue::Expr("(sqrt (poly 1 0 1))".into()));
    let p = preset("scaled-kepler", &params)?;
    let s0 = PolarState {
        t: 0.0,
        r: 1.0,
        rdot: 1.0,
        theta: 0.2,
    };
    let traj = integrate(p.family().unwrap(), s0, 10.0, &IntegratorConfig::default())?;
    let phi = tdcentral::scalarfn::parse("(sqrt (poly 1 0 1))")?;
    let check = orbit_relation_check(&phi, 1.0, 1.0, &traj)?;
    println!(
        "max deviation {:.3e} over {} branch(es), circular: {}",
        check.max_deviation, check.branches, check.circular
    );
    Ok(())
}
