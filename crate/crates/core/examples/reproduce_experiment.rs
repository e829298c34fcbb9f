//! Ten independent two-tree experiments at t = 32.

use quantum_forest::cli::{cmd_reproduce, ReproduceOptions};

fn main() -> quantum_forest::Result<()> {
    let report = cmd_reproduce(&ReproduceOptions::default())?;
    print!("{}", report.to_text());
    Ok(())
}
