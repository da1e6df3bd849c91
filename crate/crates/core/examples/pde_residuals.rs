//! Integrability PDE residuals for a family and for a perturbed copy.

use tdcentral::potentials::{Family, FamilyA, Perturbed};
use tdcentral::scalarfn::parse;
use tdcentral::verify::{pde_residuals, pde_residuals_against, SamplingPlan};

fn main() -> tdcentral::Result<()> {
    let fam = Family::A(FamilyA::new(
        parse("(poly 1 0.5 0.1)")?,
        parse("(sqrt (poly 1 0 1))")?,
        1.0,
    ));
    let plan = SamplingPlan::default();
    print!("{}", pde_residuals(&fam, &plan)?.to_json_string());
    let bad = Perturbed::new(fam.clone(), 0.001, 3.0);
    let res = pde_residuals_against(&fam, &bad, &plan)?;
    println!("perturbed: R1 {:.3e} R2 {:.3e} R3 {:.3e}", res.r1, res.r2, res.r3);
    Ok(())
}
