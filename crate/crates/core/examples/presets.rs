//! The preset catalog and the direct form of each potential.

use tdcentral::potentials::{catalog, preset, Params};

fn main() -> tdcentral::Result<()> {
    for entry in catalog() {
        let p = preset(entry.name, &Params::new())?;
        match p.direct_potential(1.0, 1.5)? {
            Some(v) => println!("{:<20} [{}] V(1, 1.5) = {v:.12}", entry.name, entry.integral),
            None => println!("{:<20} [{}] one-dimensional", entry.name, entry.integral),
        }
    }
    Ok(())
}
