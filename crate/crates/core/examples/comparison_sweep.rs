//! Minimum average ent of four-qubit comparison families across lambda1.

use mme::verify::{sweep, Family};

fn main() -> mme::Result<()> {
    println!("{:<12} {:>7} {:>10}", "family", "lambda1", "min ent");
    for family in Family::ALL {
        for row in sweep(family, 6, 20, 20)? {
            println!(
                "{:<12} {:>7.2} {:>10.6}",
                family.name(),
                row.lambda1,
                row.upsilon_min
            );
        }
    }
    Ok(())
}
