//! Run the built-in checks with the standard generator and with a
//! deliberately broken one.

use partfrac::generator::GeneratorRule;
use partfrac::selftest::run_selftest;

fn main() {
    print!("{}", run_selftest(GeneratorRule::STANDARD).render());
    println!("\nwith child count off by one:");
    print!("{}", run_selftest(GeneratorRule::mutated(1)).render());
}
