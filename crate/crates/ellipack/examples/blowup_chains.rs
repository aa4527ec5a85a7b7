// Blow-up chains: the staircase of edges cut into the moment triangle of
// (m,n), its cut labels, and an exactly admissible perturbation.

use ellipack::rational::{format_rational, rat};
use ellipack::toric::{blowup_chain, dump_chain, perturbed_chain, sample_admissible_delta};

fn main() {
    // the unperturbed chain for (7,12): one edge per blow-up plus the slant
    let chain = blowup_chain(7, 12).unwrap();
    println!("chain for (7,12), {} blow-ups:", chain.blow_ups());
    print!("{}", dump_chain(&chain));
    println!("cut labels: {:?}", chain.labels());

    // the class evaluations of the symplectic class equal the signed
    // affine edge lengths, computed by two different routes
    let evals: Vec<String> = chain.class_evaluations().iter().map(|r| format_rational(r)).collect();
    println!("affine lengths by class evaluation: {}", evals.join(" "));

    // sample an exact admissible perturbation and verify the conditions
    let delta = sample_admissible_delta(3, 5, &rat(1, 64), &[]).unwrap();
    let (pchain, adm) = perturbed_chain(3, 5, &delta).unwrap();
    let ds: Vec<String> = delta.iter().map(|r| format_rational(r)).collect();
    println!("sampled delta: {}", ds.join(" "));
    println!(
        "admissible: {} (shifts {}, lengths {}, containment {})",
        adm.admissible(),
        adm.positive_initial_shifts,
        adm.positive_edge_lengths,
        adm.contained
    );
    println!("perturbed symplectic class: {}", pchain.symplectic_class());
}
