// Testing classes against the packing cone: every answer is certified,
// either by membership or by an explicit violated class or volume bound.

use ellipack::cone::{in_cone, ConeOptions};
use ellipack::engine::ball_capacity;
use ellipack::hclass::HClass;
use ellipack::rational::rat;

fn main() {
    let opts = ConeOptions::default();

    // seven balls of size just under 3/8 pack into the open unit ball;
    // at exactly 3/8 the binding class appears in the certificate
    let below = HClass::new(rat(1, 1), vec![rat(37, 100); 7]);
    let at_sup = HClass::new(rat(1, 1), vec![rat(3, 8); 7]);
    println!("(1; 37/100 x 7): {}", in_cone(&below, &opts).unwrap());
    println!("(1; 3/8 x 7):    {}", in_cone(&at_sup, &opts).unwrap());

    // the certificate names the violated constraint
    let tight = HClass::new(rat(1, 1), vec![rat(1, 2); 3]);
    println!("(1; 1/2 x 3): {}", in_cone(&tight, &opts).unwrap());

    // ball capacities of ellipsoids: smallest c with E(m,n) in the open B(c)
    for (m, n) in [(1, 1), (1, 4), (1, 5), (2, 3)] {
        let cap = ball_capacity(m, n, &opts).unwrap();
        println!("ball capacity of E({m},{n}) = {cap}");
    }

    // at rank >= 9 the verdict is qualified by the searched degree unless
    // exact reduction is trusted
    let nine = HClass::new(rat(1, 1), vec![rat(3, 10); 9]);
    println!("(1; 3/10 x 9): {}", in_cone(&nine, &opts).unwrap());
    let exact = ConeOptions {
        exact_reduction: true,
        ..ConeOptions::default()
    };
    println!("(1; 3/10 x 9), exact reduction: {}", in_cone(&nine, &exact).unwrap());
}
