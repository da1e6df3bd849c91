//! Closed-form radius of the linear-integral family and the angle quadrature.

use tdcentral::dynamics::{integrate, IntegratorConfig, PolarState};
use tdcentral::potentials::FamilyA;
use tdcentral::scalarfn::{parse, QuadratureConfig};
use tdcentral::verify::{closed_form_r_check, closed_form_theta, ConstantPlacement};

fn main() -> tdcentral::Result<()> {
    let fam = FamilyA::new(parse("(poly 1 0 0.1)")?, parse("(* 0.3 t)")?, 0.8);
    let s0 = PolarState {
        t: 0.0,
        r: 1.0,
        rdot: 0.5,
        theta: 0.0,
    };
    let traj = integrate(&fam, s0, 5.0, &IntegratorConfig::default())?;
    let quad = QuadratureConfig::default();
    for placement in [ConstantPlacement::Inside, ConstantPlacement::Outside] {
        let dev = closed_form_r_check(&fam, &traj, placement, &quad)?;
        println!("{placement:?}: max |r_closed - r| = {dev:.3e}");
    }
    println!(
        "theta quadrature deviation {:.3e}",
        closed_form_theta(&traj, fam.l3, 0.0)
    );
    Ok(())
}
