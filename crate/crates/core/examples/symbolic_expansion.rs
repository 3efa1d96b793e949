//! Expand p(n) symbolically for n up to a cap and check the result
//! against exact values.

use partfrac::oracle::build_table;
use partfrac::symbolic::{empirical_lower_bound, expand_symbolic, render_expansion, shift_form};
use partfrac::variant::TailVariant;

fn main() -> partfrac::error::Result<()> {
    let table = build_table(40)?;
    for variant in TailVariant::ALL {
        let form = expand_symbolic(12, variant)?;
        println!("tail {variant}:");
        println!("  {}", render_expansion(12, variant)?);
        println!("  {form}");
        println!(
            "  holds from n = {:?}",
            empirical_lower_bound(&form, &table)?
        );
    }

    let form = expand_symbolic(11, TailVariant::TwoSub)?;
    println!(
        "\np(n-1) for n <= 12:\n  {}",
        shift_form(&form, 1).render("p(n-1)")
    );
    Ok(())
}
