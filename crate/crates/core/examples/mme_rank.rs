//! Maximal MME rank of one system, exhaustively and with greedy restarts.

use mme::mme::{max_mme_rank, SearchOptions};
use mme::modes::ModeStructure;

fn main() -> mme::Result<()> {
    let dims = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "2x2x2x2x2".into());
    let s: ModeStructure = dims.parse()?;

    let exact = max_mme_rank(&s, &SearchOptions::default())?;
    println!(
        "{s}: R_MME = {} (r~ = {}, {:?}, {} nodes)",
        exact.r_mme, exact.r_tilde, exact.status, exact.nodes
    );
    let witness: Vec<String> = exact.witness.iter().map(|t| t.to_string()).collect();
    println!("witness: {}", witness.join(","));

    let greedy = max_mme_rank(&s, &SearchOptions::greedy(64, 7))?;
    println!("greedy lower bound: {} ({:?})", greedy.r_mme, greedy.status);
    Ok(())
}
