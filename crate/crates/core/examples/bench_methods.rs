//! Compare timing and peak allocation of the three evaluation methods.

use partfrac::bench::{bench, TrackingAllocator};
use partfrac::config::Limits;

#[global_allocator]
static ALLOC: TrackingAllocator = TrackingAllocator;

fn main() -> partfrac::error::Result<()> {
    let table = bench(&[100, 500, 1000], true, &Limits::default())?;
    print!("{}", table.render());
    assert!(table.disagreements.is_empty());
    Ok(())
}
