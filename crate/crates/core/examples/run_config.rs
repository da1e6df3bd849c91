//! Loads a run configuration and verifies it, as the binary does.

use tdcentral::cli::main_with;

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/kepler_circular.json");
    let code = main_with(["tdcentral", "verify", "--config", path, "--suite", "all"]);
    println!("exit code {code}");
}
