//! Print the step-by-step expansion of p(10) and its JSON form.

use partfrac::trace::{build_trace, render_trace};
use partfrac::variant::TailVariant;

fn main() -> partfrac::error::Result<()> {
    let doc = build_trace(10, TailVariant::Full)?;
    print!("{}", render_trace(&doc));

    let doc = build_trace(10, TailVariant::OneSub)?;
    println!("\nwith p(n-1) collapsed to 1:");
    print!("{}", render_trace(&doc));

    println!(
        "\n{}",
        serde_json::to_string_pretty(&doc.to_json()).unwrap()
    );
    Ok(())
}
