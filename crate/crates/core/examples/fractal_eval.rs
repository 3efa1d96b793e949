//! Evaluate p(n) with the generator alone and look at a few parcels.

use partfrac::generator::GeneratorRule;
use partfrac::numeric::{fractal_p, parcel_value, ParcelEvaluator};
use partfrac::oracle::build_table;

fn main() -> partfrac::error::Result<()> {
    for n in [10, 11, 12, 100, 500] {
        println!("p({n}) = {}", fractal_p(n)?);
    }

    let table = build_table(20)?;
    println!();
    for (tab, head) in [(6, 10), (5, 9), (5, 11), (8, 10)] {
        println!(
            "parcel at {tab} under {head}: {}",
            parcel_value(tab, head, &table)?
        );
    }

    // The evaluator can be grown incrementally.
    let mut ev = ParcelEvaluator::new(GeneratorRule::STANDARD);
    ev.grow_to(30);
    println!(
        "\nfirst values: {:?}",
        (0..12).map(|m| ev.value(m).to_string()).collect::<Vec<_>>()
    );
    Ok(())
}
