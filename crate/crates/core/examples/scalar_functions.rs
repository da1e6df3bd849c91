//! Expression trees: parsing, exact derivatives and quadrature.

use tdcentral::scalarfn::{parse, QuadratureConfig};

fn main() -> tdcentral::Result<()> {
    let f = parse("(* (sqrt (poly 1 0 1)) (exp (* -0.5 t)))")?;
    println!("f = {f}");
    for t in [0.0, 1.0, 2.0] {
        println!(
            "t = {t}: f = {:.12} f' = {:.12} f'' = {:.12} f''' = {:.12}",
            f.eval(t)?,
            f.deriv(1, t)?,
            f.deriv(2, t)?,
            f.deriv(3, t)?
        );
    }
    let area = f.integrate(0.0, 2.0, &QuadratureConfig::default())?;
    println!("int_0^2 f = {area:.15}");
    Ok(())
}
