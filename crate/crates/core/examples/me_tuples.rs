//! Enumerate ME TGX tuples, certify one, and build its state with phases.

use mme::entcore::ent_pure;
use mme::modes::ModeStructure;
use mme::tgx::{build_tgx_state, enumerate_me_tuples, is_me_tuple, MeTgxTuple};

fn main() -> mme::Result<()> {
    let s: ModeStructure = "2x2x2x2".parse()?;
    let list = enumerate_me_tuples(&s, 2)?;
    println!("{} ME tuples of size 2 in {s}", list.tuples.len());
    for t in list.tuples.iter().take(4) {
        println!("  {t}");
    }

    // {1,2} leaves modes 1..3 untouched, so it cannot be ME
    println!("{{1,2}} is ME: {}", is_me_tuple(&s, &[1, 2])?);

    let t = MeTgxTuple::certify(&s, &[4, 13])?;
    let psi = build_tgx_state(&t, None, Some(&[0.0, std::f64::consts::FRAC_PI_3]))?;
    println!(
        "ent of {t} with a relative phase: {:.12}",
        ent_pure(&psi)?.value()
    );

    let off = enumerate_me_tuples(&s, 3)?;
    println!(
        "L = 3 is outside L*: {} ({} tuples)",
        off.outside_lstar,
        off.tuples.len()
    );

    let s3: ModeStructure = "3x3x3".parse()?;
    println!(
        "{} ME tuples of size 3 in {s3}",
        enumerate_me_tuples(&s3, 3)?.tuples.len()
    );
    Ok(())
}
