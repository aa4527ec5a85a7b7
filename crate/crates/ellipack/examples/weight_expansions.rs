// Weight expansions: the ball weights of m/n (subtractive Euclid), their
// continued-fraction multiplicities, and the inner/outer duality.

use ellipack::weights::{inner_vector, outer_weights};

fn main() {
    for (m, n) in [(1, 1), (1, 4), (3, 5), (7, 12), (10, 17)] {
        let w = outer_weights(m, n).unwrap();
        println!(
            "{m}/{n}: weights {:?}  cf multiplicities {:?}  count {}",
            w.labels(),
            w.multiplicities(),
            w.count()
        );
    }

    // the weights evaluate back to the fraction: sum of squares = m*n
    let w = outer_weights(7, 12).unwrap();
    let sq: u64 = w.labels().iter().map(|k| k * k).sum();
    println!("7/12 check: sum of squared weights = {sq} = 7*12");

    // duality: the inner labels of (m,n) are the outer weights of (n-m)/n
    for (m, n) in [(3, 5), (7, 12), (10, 17)] {
        let inner = inner_vector(m, n).unwrap();
        let dual = outer_weights(n - m, n).unwrap();
        let mut sorted = dual.labels().to_vec();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        println!(
            "inner labels of ({m},{n}) = {:?}, outer weights of {}/{} sorted = {sorted:?}",
            inner.sorted_labels(),
            n - m,
            n
        );
    }
}
