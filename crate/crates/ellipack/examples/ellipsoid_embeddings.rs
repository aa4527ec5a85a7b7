// When does lambda E(1,4) fit inside the open E(2,3)? Exactly for
// lambda < 6/5 — the supremum is computed exactly, the verdicts on either
// side come with certificates.

use ellipack::cone::ConeOptions;
use ellipack::engine::{decide, lambda_sup, EllipsoidPair};
use ellipack::rational::{int, rat};

fn main() {
    let opts = ConeOptions::default();

    for (src, tgt) in [((1, 4), (2, 3)), ((1, 5), (2, 3)), ((1, 1), (2, 3))] {
        let sup = lambda_sup(src, tgt, &opts).unwrap();
        println!("sup {{ lambda : lambda E{src:?} -> open E{tgt:?} }} = {sup}");
    }

    // straddle the supremum 6/5
    for lambda in [rat(1, 1), rat(119, 100), rat(6, 5), rat(121, 100)] {
        let pair = EllipsoidPair::new(
            (int(1), int(4)),
            (int(2), int(3)),
            lambda.clone(),
        )
        .unwrap();
        let verdict = decide(&pair, &opts).unwrap();
        println!("lambda = {:>7}: {verdict}", ellipack::rational::format_rational(&lambda));
    }

    // non-integral axes normalize first: E(3/2, 1) is (1/2) E(2, 3)
    let pair = EllipsoidPair::new((rat(3, 2), int(1)), (int(2), int(3)), int(1)).unwrap();
    println!(
        "E(3/2,1) -> open E(2,3) normalizes to lambda = {} on E{:?}: {}",
        ellipack::rational::format_rational(pair.lambda()),
        pair.source(),
        decide(&pair, &opts).unwrap()
    );
}
