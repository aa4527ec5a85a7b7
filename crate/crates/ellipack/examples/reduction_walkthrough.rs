// From ellipsoid to packing: the reduction behind every verdict, shown
// step by step for lambda E(1,4) -> open E(2,3).

use ellipack::cone::{in_cone, ConeOptions};
use ellipack::engine::{reduce_to_packing, EllipsoidPair};
use ellipack::rational::{format_rational, int, rat};
use ellipack::weights::{inner_vector, outer_weights};

fn main() {
    // target side: the complement of E(2,3) in a ball is a cluster of
    // three unit balls; source side: E(1,4) expands to four unit balls
    let inner = inner_vector(2, 3).unwrap();
    let outer = outer_weights(1, 4).unwrap();
    println!("target complement class: {}", inner.as_hclass());
    println!("source ball weights: {:?}", outer.labels());

    // glue both into one packing class (n'; k.., lambda k^..)
    let lambda = rat(119, 100);
    let pair = EllipsoidPair::new((int(1), int(4)), (int(2), int(3)), lambda.clone()).unwrap();
    let p = reduce_to_packing(&pair).unwrap();
    let ws: Vec<String> = p.weights.iter().map(format_rational).collect();
    println!("packing class at lambda = {}: {}", format_rational(&lambda), p.ambient);
    println!("normalized weights: {}", ws.join(" "));
    println!("{} target slots + {} source slots", p.inner_count, p.k - p.inner_count);

    // the embedding exists iff that class lies in the cone
    let opts = ConeOptions::default();
    println!("in cone: {}", in_cone(&p.ambient, &opts).unwrap());
}
