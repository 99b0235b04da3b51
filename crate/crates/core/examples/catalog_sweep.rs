//! Random instances of every construction over all towers up to 64
//! elements, printed as CSV.

use lintrans::catalog::{default_towers, run_catalog, write_catalog_csv, CatalogConfig};
use lintrans::Theorem;

fn main() -> lintrans::Result<()> {
    let cfg = CatalogConfig {
        towers: default_towers(64),
        theorems: Theorem::ALL.to_vec(),
        per_field: 2,
        seed: 1,
        cap: 64,
    };
    let rows = run_catalog(&cfg)?;
    write_catalog_csv(&rows, std::io::stdout())?;
    eprintln!("{} rows, {} disagree", rows.len(), rows.iter().filter(|r| !r.agree).count());
    Ok(())
}
