//! Generalized Killing residuals of the gauged symmetry.

use tdcentral::potentials::{Family, FamilyB};
use tdcentral::scalarfn::parse;
use tdcentral::verify::{noether_check, noether_residuals, SamplingPlan};

fn main() -> tdcentral::Result<()> {
    let b = FamilyB::new(
        parse("(poly 1 0 0.1)")?,
        parse("0")?,
        parse("(+ (* 0.5 u u) (/ 1 (* u u)))")?,
        1.0,
    );
    let plan = SamplingPlan::default();
    let rep = noether_check(&Family::B(b.clone()), &plan)?;
    print!("{}", rep.to_json_string());
    let off = Family::B(b.with_shape(b.shape.affine(1.01, 0.0)));
    let res = noether_residuals(&off, &Family::B(b), &plan)?;
    println!(
        "rescaled shape: killing {:.3e} velocity {:.3e}",
        res.killing, res.velocity
    );
    Ok(())
}
