//! Optimal tuple sizes L* and the pure-state floor M* for a few systems.

use mme::entcore::{lstar, mpsrp_purity_exact};
use mme::modes::ModeStructure;

fn main() -> mme::Result<()> {
    for dims in ["2x3", "2x5", "2x2x3", "3x3x3", "2x2x2x2", "2x3x6"] {
        let s: ModeStructure = dims.parse()?;
        let set = lstar(&s)?;
        println!("{s:>8}: L* = {:?}, M* = {:.6}", set.values, set.min_mean);
    }

    // mode purity of an equal-weight tuple, exactly
    for l in 2..=5 {
        println!("n_m = 3, L = {l}: P = {}", mpsrp_purity_exact(3, l)?);
    }
    Ok(())
}
