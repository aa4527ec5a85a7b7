// Capacity sequences see a lot — but not everything. The obstruction
// report lines up volume, capacities, and the cone test on one problem.

use ellipack::cone::ConeOptions;
use ellipack::ehcap::{eh_dominates, eh_sequence, obstruction_report};
use ellipack::rational::rat;

fn main() {
    // N(m,n): all multiples of m and of n, merged in order
    println!("N(1,4) = {:?}", eh_sequence(1, 4, 11).unwrap());
    println!("N(2,2) = {:?}", eh_sequence(2, 2, 11).unwrap());
    println!("N(1,1) = {:?}", eh_sequence(1, 1, 5).unwrap());

    // E(1,4) -> E(2,2) passes every capacity test
    let dom = eh_dominates(1, 4, 2, 2, 100).unwrap();
    println!("N(1,4) <= N(2,2) termwise to depth 100: {dom}");

    // E(1,5) against a ball chosen so that volume and capacities both
    // pass, while the cone test certifies the embedding impossible;
    // the scale is irrational, so it enters as its square 20/121
    let opts = ConeOptions::default();
    let r = obstruction_report((1, 5), (1, 1), rat(20, 121), None, &opts).unwrap();
    print!("{r}");

    // just below the ball capacity everything passes
    let r = obstruction_report((1, 4), (1, 1), rat(2500, 10201), None, &opts).unwrap();
    print!("{r}");
}
