//! Scalar levels, vector indices and bipartitions of a 2x3x4 system.

use mme::modes::ModeStructure;

fn main() -> mme::Result<()> {
    let s: ModeStructure = "2x3x4".parse()?;
    println!("{s}: n = {}, N = {}", s.dim(), s.mode_count());

    for level in [1, 2, 5, 13, 24] {
        let v = s.scalar_to_vector(level)?;
        assert_eq!(s.vector_to_scalar(&v)?, level);
        println!("level {level:>2} = {v}");
    }

    for m in 1..=s.mode_count() {
        let b = s.bipartition(m)?;
        println!(
            "mode {m}: rest {:?}, dims {} | {}, larger side {:?}",
            b.rest, b.small_dim, b.big_dim, b.big_modes
        );
    }

    // level 17 seen only through modes 1 and 3
    let sub = s.substructure(&[1, 3])?;
    let p = s.project_level(17, &[1, 3])?;
    println!("level 17 on modes [1, 3] of {s} is level {p} of {sub}");
    Ok(())
}
