//! Partition numbers from the two independent oracles, plus a few
//! restricted counts checked against brute-force enumeration.

use partfrac::oracle::{
    build_table, build_table_pentagonal, enumerate_count, restricted_count, RestrictedQuery,
};

fn main() -> partfrac::error::Result<()> {
    let dp = build_table(60)?;
    let pent = build_table_pentagonal(60)?;
    for n in (0..=60).step_by(10) {
        println!("p({n:>2}) = {:>10}   pentagonal: {}", dp[n], pent[n]);
    }
    assert_eq!(dp.values(), pent.values());

    println!();
    for (m, k) in [(10, 3), (12, 5), (20, 4)] {
        let counted = restricted_count(RestrictedQuery::new(m, k))?;
        let enumerated = enumerate_count(m, k)?;
        println!("partitions of {m} with parts <= {k}: {counted} (enumerated {enumerated})");
    }
    Ok(())
}
