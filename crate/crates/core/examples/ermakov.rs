//! Auxiliary equations and the invariant of a one-dimensional oscillator.

use tdcentral::dynamics::{integrate_line, line_drift, IntegratorConfig};
use tdcentral::integrals::FirstIntegral;
use tdcentral::potentials::{LewisLeach, LewisLeachBracket};
use tdcentral::scalarfn::parse;
use tdcentral::verify::ermakov_check;

fn main() -> tdcentral::Result<()> {
    let sys = LewisLeach {
        rho: parse("(sqrt (poly 1 0 1))")?,
        alpha: parse("(poly 0 0 0.1)")?,
        omega: parse("0")?,
        f1: parse("0.2")?,
        g_tilde: parse("(* 0.25 u u u u)")?,
        k: 1.0,
    };
    let (rho, alpha) = ermakov_check(&sys, [0.0, 10.0], 1000)?;
    println!("auxiliary residuals: rho {rho:.3e}, alpha {alpha:.3e}");
    let traj = integrate_line(&sys, 0.0, 1.0, 0.0, 10.0, &IntegratorConfig::default())?;
    for bracket in [LewisLeachBracket::Velocity, LewisLeachBracket::RhoDot] {
        let drift = line_drift(&traj, &FirstIntegral::LewisLeach(sys.clone(), bracket))?;
        println!("{bracket:?} bracket: drift {drift:.3e}");
    }
    Ok(())
}
