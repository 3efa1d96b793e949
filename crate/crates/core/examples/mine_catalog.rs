//! Mine recurrences over a range of caps and write the catalog as JSONL.

use partfrac::oracle::build_table;
use partfrac::recurrence::mine;
use partfrac::variant::TailVariant;

fn main() -> partfrac::error::Result<()> {
    let caps: Vec<usize> = (12..=24).collect();
    let pairs: Vec<_> = TailVariant::all_pairs().collect();
    let table = build_table(80)?;
    let catalog = mine(&caps, &pairs, 80, &table);

    println!(
        "{} jobs -> {} distinct recurrences, {} anomalies",
        catalog.jobs,
        catalog.entries.len(),
        catalog.anomalies.len()
    );
    for entry in catalog.entries.iter().take(5) {
        println!(
            "{}  ({} derivations)",
            entry.key,
            entry.recurrence.provenance().len()
        );
    }

    let path = std::env::temp_dir().join("partfrac-catalog.jsonl");
    std::fs::write(&path, catalog.to_jsonl())?;
    println!("catalog written to {}", path.display());
    Ok(())
}
