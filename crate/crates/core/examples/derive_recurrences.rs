//! Derive a recurrence for every pair of tail variants at one cap and
//! compare it with the pentagonal recurrence.

use partfrac::recurrence::{classify_pentagonal, derive_recurrence};
use partfrac::variant::TailVariant;

fn main() -> partfrac::error::Result<()> {
    let cap = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(12);
    for (pn, pn1) in TailVariant::all_pairs() {
        let rec = derive_recurrence(cap, pn, pn1)?;
        println!(
            "p(n): {pn:<4} p(n-1): {pn1:<4} {}",
            classify_pentagonal(&rec)
        );
        println!("    {rec}");
    }
    Ok(())
}
