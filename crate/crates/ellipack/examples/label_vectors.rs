// The label vectors V(m,n) of the complement classes, walked down the
// mediant recursion, with their quadratic and pairing identities.

use ellipack::rational::{int, Fraction01};
use ellipack::weights::inner_vector;

fn main() {
    for (m, n) in [(1, 1), (2, 3), (3, 5), (5, 8), (7, 12), (10, 17)] {
        let v = inner_vector(m, n).unwrap();
        println!("V({m:>2},{n:>2}) = {}", v.as_hclass());
    }

    // V^2 = mn and V . (-K) = m + n + 1 for every coprime pair
    for (m, n) in [(3, 5), (7, 12), (10, 17), (13, 21)] {
        let v = inner_vector(m, n).unwrap().as_hclass();
        assert_eq!(v.self_int(), int((m * n) as i64));
        assert_eq!(v.anticanonical_degree(), int((m + n + 1) as i64));
        println!(
            "V({m},{n}): V^2 = {} = {m}*{n}, V.(-K) = {} = {m}+{n}+1",
            ellipack::rational::format_rational(&v.self_int()),
            ellipack::rational::format_rational(&v.anticanonical_degree()),
        );
    }

    // Farey-adjacent pairs satisfy 2 V.V' = 1 + m n' + m' n (embed both in
    // a common lattice first)
    let (a, b) = ((3u64, 5u64), (7u64, 12u64));
    let adjacent = ellipack::rational::is_adjacent(
        Fraction01::new(a.0, a.1).unwrap(),
        Fraction01::new(b.0, b.1).unwrap(),
    );
    let k = inner_vector(b.0, b.1).unwrap().count();
    let va = inner_vector(a.0, a.1).unwrap().as_hclass_in(k);
    let vb = inner_vector(b.0, b.1).unwrap().as_hclass_in(k);
    let twice = int(2) * va.pair(&vb).unwrap();
    println!(
        "3/5 and 7/12 adjacent: {adjacent}; 2 V.V' = {} = 1 + 3*12 + 7*5",
        ellipack::rational::format_rational(&twice)
    );
}
