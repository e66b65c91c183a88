//! Sample decompositions of MME states and report the minimum average ent.

use mme::mme::construct;
use mme::modes::ModeStructure;
use mme::tgx::MeTgxTuple;
use mme::verify::{min_avg_ent, reduction_purity_report, u2, SpectralData, Strategy};

fn main() -> mme::Result<()> {
    let s: ModeStructure = "2x2x2x2".parse()?;
    let tuples = vec![
        MeTgxTuple::certify(&s, &[1, 16])?,
        MeTgxTuple::certify(&s, &[4, 13])?,
    ];
    let (state, _) = construct(&s, tuples, vec![0.6, 0.4], None)?;
    let data = SpectralData::from_mme(&state);

    let grid = min_avg_ent(&data, Strategy::default_grid())?;
    println!("grid: {} samples, min {:.12}", grid.samples, grid.min_avg);

    let random = min_avg_ent(&data, Strategy::default_random(data.rank(), 3))?;
    println!(
        "random: {} samples, min {:.12}",
        random.samples, random.min_avg
    );

    let sample = data.decompose(&u2(0.4, 1.1))?;
    let report = reduction_purity_report(&sample, 2)?;
    println!("every reduction at the MPSRP value: {}", report.clean);

    let s3: ModeStructure = "2x2x3x3".parse()?;
    let tuples = vec![
        MeTgxTuple::certify(&s3, &[1, 5, 9, 28, 32, 36])?,
        MeTgxTuple::certify(&s3, &[11, 15, 16, 20, 24, 25])?,
    ];
    let (state, _) = construct(&s3, tuples, vec![0.5, 0.5], None)?;
    let est = min_avg_ent(&SpectralData::from_mme(&state), Strategy::default_grid())?;
    println!("{s3}: grid min {:.12}", est.min_avg);
    Ok(())
}
