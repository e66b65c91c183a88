//! Print the three rank tables as aligned text.

use mme::mme::SearchOptions;
use mme::tables::{table_rows, Table};

fn main() -> mme::Result<()> {
    for k in [1, 3, 5] {
        let table = Table::from_number(k)?;
        let rows = table_rows(table, table.default_max(), &SearchOptions::default())?;
        println!("table {k} ({} rows)", rows.len());
        println!(
            "{:>4}  {:<14} {:>6} {:>4} {:>6}  status",
            "n", "dims", "minL*", "r~", "R_MME"
        );
        for r in rows {
            println!(
                "{:>4}  {:<14} {:>6} {:>4} {:>6}  {:?}",
                r.n, r.dims, r.min_lstar, r.r_tilde, r.r_mme, r.status
            );
        }
        println!();
    }
    Ok(())
}
