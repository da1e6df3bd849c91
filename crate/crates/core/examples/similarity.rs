//! Recovers the similarity potentials from the quadratic-integral family.

use tdcentral::scalarfn::parse;
use tdcentral::verify::{similarity_recovery, Grid};

fn main() -> tdcentral::Result<()> {
    let grid = Grid::default();
    for (phi, fbar, l3) in [
        ("1", "0", 0.0),
        ("(sqrt (poly 1 0 1))", "(* u u)", 1.0),
        ("(poly 1 0 1)", "(/ 1 u)", 2.0),
    ] {
        let dev = similarity_recovery(&parse(phi)?, &parse(fbar)?, l3, &grid)?;
        println!("phi = {phi:<22} Fbar = {fbar:<10} L3 = {l3}: max difference {dev:.3e}");
    }
    Ok(())
}
