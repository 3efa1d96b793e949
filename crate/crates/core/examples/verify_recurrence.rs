//! Verify recurrences on a window of n and report where they break.

use partfrac::oracle::build_table;
use partfrac::recurrence::{derive_recurrence, verify};
use partfrac::reference;
use partfrac::symbolic::ValidRange;
use partfrac::variant::TailVariant;

fn main() -> partfrac::error::Result<()> {
    let table = build_table(60)?;
    let window = ValidRange::new(1, 60);

    let derived = derive_recurrence(24, TailVariant::Full, TailVariant::Full)?;
    for rec in std::iter::once(derived).chain(reference::ALL.iter().map(|k| k.recurrence())) {
        let report = verify(&rec, window, &table)?;
        println!("{rec}");
        println!(
            "    claim holds: {}, first failure: {:?}",
            report.claim_holds(),
            report.first_failure.as_ref().map(|m| m.n)
        );
    }
    Ok(())
}
