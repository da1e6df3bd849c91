//! Stationary mode of the scaled Kepler potential.

use tdcentral::quantum::{amplitude_residual, psi, WavefunctionParams};
use tdcentral::scalarfn::parse;

fn main() -> tdcentral::Result<()> {
    let p = WavefunctionParams::new(0.0, 0, 1.0, 0.0, parse("1")?);
    println!(
        "|psi(1, 0, 0)| = {:.15} (e^-1/2 = {:.15})",
        psi(&p, 1.0, 0.0, 0.0)?.norm(),
        (-0.5f64).exp()
    );
    for (a, b, hbar) in [(0.0, 0, 1.0), (1.0, 3, 0.5), (2.0, 5, 2.0)] {
        let p = WavefunctionParams::new(a, b, hbar, 1.0, parse("(sqrt (poly 1 0 0.1))")?);
        let worst = (1..=50)
            .map(|i| amplitude_residual(&p, 0.2 * i as f64).map(f64::abs))
            .collect::<tdcentral::Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        println!(
            "a = {a} b = {b} hbar = {hbar}: k = {:.4}, m = {:.4}, single valued {}, residual {worst:.3e}",
            p.k(),
            p.m(),
            p.single_valued()
        );
    }
    Ok(())
}
