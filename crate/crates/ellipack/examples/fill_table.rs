// The ball-packing constants v(k): the fraction of a ball's volume that k
// equal disjoint balls can fill. Exact for every k, and equal to 1 from
// k = 9 on.

use ellipack::engine::{fill_table, packing_constant};
use ellipack::rational::format_rational;

fn main() {
    println!("k   v(k)");
    for (k, v) in fill_table() {
        println!("{k:<3} {}", format_rational(&v));
    }
    // full packings from nine balls on
    for k in [9, 12, 100] {
        println!("{k:<3} {}", format_rational(&packing_constant(k)));
    }
}
