//! Integrates a quadratic-integral family and tracks the drift of its integral.

use tdcentral::dynamics::{drift_report, integrate, IntegratorConfig, PolarState};
use tdcentral::integrals::FirstIntegral;
use tdcentral::potentials::{Family, FamilyB};
use tdcentral::scalarfn::parse;

fn main() -> tdcentral::Result<()> {
    let fam = Family::B(FamilyB::new(
        parse("(poly 1 0.3 0.2)")?,
        parse("(* 0.5 (exp (* -0.2 t)))")?,
        parse("(+ (* 0.3 u u) (/ 1 (* u u)))")?,
        0.7,
    ));
    let s0 = PolarState {
        t: 0.0,
        r: 1.0,
        rdot: 0.3,
        theta: 0.0,
    };
    let traj = integrate(&fam, s0, 10.0, &IntegratorConfig::default())?;
    let drift = drift_report(&traj, &FirstIntegral::of_family(&fam))?;
    let last = traj.last();
    println!("r(10) = {:.10}, theta(10) = {:.10}", last.r, last.theta);
    println!("{} samples, relative drift {drift:.3e}", traj.samples.len());
    Ok(())
}
