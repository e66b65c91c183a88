//! Build a rank-2 MME state of four qubits and inspect its density matrix.

use mme::mme::construct;
use mme::modes::ModeStructure;
use mme::tgx::MeTgxTuple;

fn main() -> mme::Result<()> {
    let s: ModeStructure = "2x2x2x2".parse()?;
    let tuples = vec![
        MeTgxTuple::certify(&s, &[1, 16])?,
        MeTgxTuple::certify(&s, &[4, 13])?,
    ];
    let (state, rho) = construct(&s, tuples, vec![0.7, 0.3], None)?;
    println!(
        "rank {}, trace {:.3}, purity {:.3}",
        state.rank(),
        rho.trace().re,
        rho.purity()
    );

    for (i, j) in [(1, 1), (1, 16), (4, 13), (16, 16)] {
        println!("rho[{i},{j}] = {:.3}", rho.entry(i, j));
    }
    println!(
        "single-qubit reduction of mode 1:\n{}",
        rho.partial_trace(&[1])?.matrix()
    );

    // {1,16} and {2,15} share a mode-4 line, so no MME state holds both
    let bad = vec![
        MeTgxTuple::certify(&s, &[1, 16])?,
        MeTgxTuple::certify(&s, &[2, 15])?,
    ];
    match construct(&s, bad, vec![0.5, 0.5], None) {
        Ok(_) => println!("unexpectedly accepted"),
        Err(e) => println!("refused: {e}"),
    }
    Ok(())
}
