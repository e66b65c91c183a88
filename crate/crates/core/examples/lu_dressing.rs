//! Local unitaries preserve ent and the MME property of a mixed state.

use mme::entcore::ent_pure;
use mme::mme::construct;
use mme::modes::ModeStructure;
use mme::tgx::{apply_lu, LocalUnitarySet, MeTgxTuple};
use mme::verify::{min_avg_ent, SpectralData, Strategy};

fn main() -> mme::Result<()> {
    let s: ModeStructure = "3x3x3".parse()?;
    let t = MeTgxTuple::certify(&s, &[1, 14, 27])?;
    let lus = LocalUnitarySet::haar(&s, 11);
    let psi = t.state();
    let dressed = apply_lu(&psi, &lus)?;
    println!(
        "ent before {:.12}, after {:.12}",
        ent_pure(&psi)?.value(),
        ent_pure(&dressed)?.value()
    );

    let tuples = vec![
        t,
        MeTgxTuple::certify(&s, &[6, 16, 20])?,
        MeTgxTuple::certify(&s, &[8, 12, 22])?,
    ];
    let (state, rho) = construct(&s, tuples, vec![0.5, 0.3, 0.2], Some(lus))?;
    let est = min_avg_ent(
        &SpectralData::from_mme(&state),
        Strategy::default_random(3, 5),
    )?;
    println!(
        "dressed rank-3 state: trace {:.3}, min avg ent {:.12}",
        rho.trace().re,
        est.min_avg
    );
    Ok(())
}
