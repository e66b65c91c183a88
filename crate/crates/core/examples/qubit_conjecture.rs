//! MME ranks of N qubits against r~ = 2^(N-2).

use mme::mme::{max_mme_rank, SearchOptions};
use mme::modes::ModeStructure;

fn main() -> mme::Result<()> {
    let max: usize = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(8);
    for n in 2..=max {
        let s = ModeStructure::qubits(n)?;
        let r = max_mme_rank(&s, &SearchOptions::default())?;
        let mark = if r.r_mme == r.r_tilde { "=" } else { "<" };
        println!(
            "N = {n}: R_MME = {:>3} {mark} r~ = {:>3}  ({:?})",
            r.r_mme, r.r_tilde, r.status
        );
    }
    Ok(())
}
