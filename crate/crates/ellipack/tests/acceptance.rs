//! Acceptance suite: thirteen criteria, one test and one line each.

use std::collections::{HashMap, HashSet, VecDeque};
use std::time::Instant;

use num::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ellipack::cone::{
    enumerate_canonical, exceptional_classes, in_cone, reduce, Certificate, ConeOptions, Reduction,
    Verdict,
};
use ellipack::ehcap::{eh_dominates, eh_sequence, obstruction_report, ConeCheck};
use ellipack::engine::{
    ball_capacity, decide, fill_table, lambda_sup, EllipsoidPair, ExactValue, LambdaSup,
};
use ellipack::hclass::HClass;
use ellipack::rational::{int, rat, Rational};
use ellipack::toric::{
    blowup_chain, decompose_complement, decompose_ellipsoid, pack_unit_triangles,
    perturbed_chain, sample_admissible_delta, triangles_interior_disjoint, LatticeTriangle,
};
use ellipack::weights::{inner_vector, outer_weights};

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn coprime_pairs(max_n: u64) -> Vec<(u64, u64)> {
    let mut v = Vec::new();
    for n in 2..=max_n {
        for m in 1..n {
            if gcd(m, n) == 1 {
                v.push((m, n));
            }
        }
    }
    v
}

#[test]
fn criterion_01_packing_constant_table() {
    let start = Instant::now();
    let table = fill_table();
    let elapsed = start.elapsed();
    let expected = [
        (1, rat(1, 1)),
        (2, rat(1, 2)),
        (3, rat(3, 4)),
        (4, rat(1, 1)),
        (5, rat(4, 5)),
        (6, rat(24, 25)),
        (7, rat(63, 64)),
        (8, rat(288, 289)),
    ];
    for ((k, v), (ek, ev)) in table.iter().zip(&expected) {
        assert_eq!((k, v), (ek, ev), "v({k})");
    }
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!("criterion 01: PASS - v(1..8) exact in {elapsed:?}");
}

#[test]
fn criterion_02_supremum_fixtures() {
    let opts = ConeOptions::default();
    let cases = [
        ((1, 4), rat(6, 5), (3, vec![2, 1, 1, 1, 1, 1, 1])),
        ((1, 5), rat(12, 11), (6, vec![3, 2, 2, 2, 2, 2, 2, 2])),
    ];
    for (src, value, (bd, bm)) in cases {
        let sup = lambda_sup(src, (2, 3), &opts).unwrap();
        let LambdaSup::Exact { value: v, binding } = sup else {
            panic!("expected an exact supremum for {src:?}");
        };
        assert_eq!(v, ExactValue::Rational(value.clone()), "{src:?}");
        let b = binding.expect("a class binds, not the volume").sorted_desc();
        assert_eq!(b.d(), &int(bd), "{src:?} binding degree");
        let want: Vec<Rational> = bm.iter().map(|&x| int(x)).collect();
        assert_eq!(b.multiplicities(), &want[..], "{src:?} binding shape");
    }
    println!("criterion 02: PASS - suprema 6/5 and 12/11 with binding class shapes");
}

#[test]
fn criterion_03_label_vectors() {
    let expected: [(u64, u64, &[u64]); 5] = [
        (2, 3, &[1, 1, 1]),
        (3, 5, &[2, 2, 1, 1]),
        (5, 8, &[3, 3, 2, 1, 1]),
        (7, 12, &[5, 5, 2, 2, 1, 1]),
        (10, 17, &[7, 7, 3, 3, 1, 1, 1]),
    ];
    for (m, n, labels) in expected {
        let v = inner_vector(m, n).unwrap();
        assert_eq!(v.degree(), n, "({m},{n}) degree");
        assert_eq!(v.labels(), labels, "({m},{n}) labels");
    }
    println!("criterion 03: PASS - five frozen label vectors exact");
}

#[test]
fn criterion_04_outer_weights() {
    for k in 1..=12 {
        let w = outer_weights(1, k).unwrap();
        assert_eq!(w.labels(), vec![1; k as usize], "(1,{k})");
    }
    let w = outer_weights(3, 5).unwrap();
    assert_eq!(w.labels(), &[3, 2, 1, 1]);
    assert_eq!(w.multiplicities(), &[1, 1, 2]);
    let cf = ellipack::rational::continued_fraction(&rat(5, 3)).unwrap();
    assert_eq!(w.multiplicities(), &cf[..]);
    println!("criterion 04: PASS - unit expansions and (3,5) = cf(5/3)");
}

#[test]
fn criterion_05_quadratic_identities() {
    let pairs = coprime_pairs(100);
    for &(m, n) in &pairs {
        let outer = outer_weights(m, n).unwrap();
        let sq_out: u64 = outer.labels().iter().map(|k| k * k).sum();
        assert_eq!(sq_out, m * n, "outer ({m},{n})");
        let inner = inner_vector(m, n).unwrap();
        let sq_in: u64 = inner.labels().iter().map(|k| k * k).sum();
        assert_eq!(sq_in, n * n - m * n, "inner ({m},{n})");
        assert_eq!(
            inner.as_hclass().self_int(),
            int((m * n) as i64),
            "V^2 ({m},{n})"
        );
    }
    println!(
        "criterion 05: PASS - weight identities on {} coprime pairs up to 100",
        pairs.len()
    );
}

#[test]
fn criterion_06_pairing_identity() {
    // walk the mediant tree, collecting adjacent fraction pairs
    let mut queue = VecDeque::from([((0u64, 1u64), (1u64, 1u64))]);
    let mut checked = 0;
    while checked < 200 {
        let ((m, n), (m2, n2)) = queue.pop_front().unwrap();
        let med = (m + m2, n + n2);
        queue.push_back(((m, n), med));
        queue.push_back((med, (m2, n2)));
        if m == 0 {
            continue;
        }
        let va = inner_vector(m, n).unwrap();
        let vb = inner_vector(m2, n2).unwrap();
        let k = va.count().max(vb.count());
        let prod = va.as_hclass_in(k).pair(&vb.as_hclass_in(k)).unwrap();
        assert_eq!(
            int(2) * prod,
            int((1 + m * n2 + m2 * n) as i64),
            "({m},{n}) vs ({m2},{n2})"
        );
        checked += 1;
    }
    println!("criterion 06: PASS - 2 V.V' = 1 + mn' + m'n on 200 adjacent pairs");
}

#[test]
fn criterion_07_duality() {
    let pairs = coprime_pairs(100);
    for &(m, n) in &pairs {
        // recursion on one side, subtractive algorithm on the other
        let inner = inner_vector(m, n).unwrap().sorted_labels();
        let mut outer = outer_weights(n - m, n).unwrap().labels().to_vec();
        outer.sort_unstable_by(|a, b| b.cmp(a));
        assert_eq!(inner, outer, "({m},{n})");
    }
    println!(
        "criterion 07: PASS - inner/outer duality on {} coprime pairs up to 100",
        pairs.len()
    );
}

#[test]
fn criterion_08_capacity_sequences() {
    assert_eq!(
        eh_sequence(1, 4, 11).unwrap(),
        vec![1, 2, 3, 4, 4, 5, 6, 7, 8, 8, 9]
    );
    assert!(eh_dominates(1, 4, 2, 2, 100).unwrap());
    println!("criterion 08: PASS - N(1,4) prefix and domination by N(2,2) to depth 100");
}

#[test]
fn criterion_09_obstruction_report() {
    let opts = ConeOptions::default();
    let r = obstruction_report((1, 5), (1, 1), rat(20, 121), None, &opts).unwrap();
    assert!(r.volume_ok, "volume passes");
    assert!(r.eh_ok, "capacities pass");
    assert!(
        matches!(r.cone, ConeCheck::AtOrAboveSup { .. }),
        "cone test fails: {:?}",
        r.cone
    );
    assert!(r.discrepancy, "discrepancy flag set");
    let cap = ball_capacity(1, 5, &opts).unwrap();
    assert_eq!(cap.exact(), Some(&ExactValue::Rational(rat(5, 2))));
    println!("criterion 09: PASS - discrepancy flagged; ball capacity of E(1,5) = 5/2");
}

#[test]
fn criterion_10_full_filling_boundary() {
    let opts = ConeOptions::default();
    for d in 1u64..=3 {
        let src = (int(1), int((d * d) as i64));
        let tgt = (int(d as i64), int(d as i64));
        let almost = EllipsoidPair::new(src.clone(), tgt.clone(), rat(99, 100)).unwrap();
        assert!(
            decide(&almost, &opts).unwrap().is_feasible(),
            "d = {d} at 99/100"
        );
        let full = EllipsoidPair::new(src, tgt, int(1)).unwrap();
        let verdict = decide(&full, &opts).unwrap();
        let Verdict::No(Certificate::Volume { self_int }) = verdict else {
            panic!("d = {d} at 1: expected a volume certificate, got {verdict}");
        };
        assert!(self_int.is_zero(), "d = {d} fills exactly");
    }
    println!("criterion 10: PASS - d^2 balls fill B(d): yes at 99/100, volume-zero no at 1");
}

#[test]
fn criterion_11_exceptional_set_agreement() {
    // brute force: all integer classes with E^2 = -1, E.(-K) = 1, d <= 5
    for k in 1..=6usize {
        let mut brute: HashSet<(i64, Vec<i64>)> = HashSet::new();
        for d in 0i64..=5 {
            let mut tuples = vec![Vec::<i64>::new()];
            for _ in 0..k {
                let mut next = Vec::new();
                for t in &tuples {
                    for m in -1..=d {
                        let mut t2 = t.clone();
                        t2.push(m);
                        next.push(t2);
                    }
                }
                tuples = next;
            }
            for t in tuples {
                let sq: i64 = t.iter().map(|m| m * m).sum();
                let lin: i64 = t.iter().sum();
                if d * d - sq == -1 && 3 * d - lin == 1 {
                    brute.insert((d, t));
                }
            }
        }
        let listed: HashSet<(i64, Vec<i64>)> = exceptional_classes(k, 0, None)
            .unwrap()
            .iter()
            .map(|e| {
                let d = e.d().to_integer().to_i64().unwrap();
                let m: Vec<i64> = e
                    .multiplicities()
                    .iter()
                    .map(|x| x.to_integer().to_i64().unwrap())
                    .collect();
                (d, m)
            })
            .collect();
        assert_eq!(listed, brute, "k = {k}");
    }

    // three independent verdicts on 500 random rational classes
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut canon: HashMap<usize, Vec<(i64, Vec<i64>)>> = HashMap::new();
    let opts = ConeOptions::default();
    for trial in 0..500 {
        let k = rng.gen_range(1..=8usize);
        let d = rat(rng.gen_range(1..=6), rng.gen_range(1..=3));
        let ms: Vec<Rational> = (0..k)
            .map(|_| rat(rng.gen_range(0..=6), rng.gen_range(1..=3)))
            .collect();
        let a = HClass::new(d.clone(), ms.clone());

        let direct = in_cone(&a, &opts).unwrap().is_feasible();

        // degree-bounded enumeration with an independent orbit-minimum scan
        let forms = canon
            .entry(k)
            .or_insert_with(|| enumerate_canonical(k, 6))
            .clone();
        let mut sorted = ms.clone();
        sorted.sort_by(|x, y| y.cmp(x));
        let scanned = a.self_int().is_positive()
            && forms.iter().all(|(fd, fm)| {
                let dot: Rational = sorted
                    .iter()
                    .zip(fm)
                    .map(|(x, y)| x * int(*y))
                    .fold(Rational::zero(), |acc, v| acc + v);
                (&d * int(*fd) - dot).is_positive()
            });

        // Cremona descent
        let reduced = a.self_int().is_positive()
            && matches!(reduce(&a).unwrap(), Reduction::Reduced { .. });

        assert_eq!(direct, scanned, "trial {trial}: {a}");
        assert_eq!(direct, reduced, "trial {trial}: {a}");
    }
    println!("criterion 11: PASS - brute-force agreement k <= 6; 500 three-way verdicts");
}

#[test]
fn criterion_12_tilings_and_packings() {
    fn check_tiling(tiles: &[LatticeTriangle], area2: i64, what: &str) {
        let total = tiles
            .iter()
            .map(LatticeTriangle::area)
            .fold(Rational::zero(), |acc, a| acc + a);
        assert_eq!(total, rat(area2, 2), "{what} area");
        for i in 0..tiles.len() {
            for j in i + 1..tiles.len() {
                assert!(
                    triangles_interior_disjoint(&tiles[i], &tiles[j]),
                    "{what} tiles {i},{j} overlap"
                );
            }
        }
    }
    let pairs = coprime_pairs(40);
    for &(m, n) in &pairs {
        let (mi, ni) = (m as i64, n as i64);
        check_tiling(
            &decompose_ellipsoid(m, n).unwrap(),
            mi * ni,
            &format!("ellipsoid ({m},{n})"),
        );
        check_tiling(
            &decompose_complement(m, n).unwrap(),
            ni * ni - mi * ni,
            &format!("complement ({m},{n})"),
        );
    }
    for k in 1..=50u64 {
        let maps = pack_unit_triangles(k);
        assert_eq!(maps.len(), k as usize);
        let tris: Vec<LatticeTriangle> = maps
            .iter()
            .map(|m| {
                assert!(m.is_unimodular(), "k = {k}");
                m.unit_triangle_image()
            })
            .collect();
        for t in &tris {
            for (x, y) in t.vertices.iter().map(|p| (&p.0, &p.1)) {
                // inside the triangle with legs k and 1: x,y >= 0, x + ky <= k
                assert!(
                    !x.is_negative() && !y.is_negative() && x + int(k as i64) * y <= int(k as i64),
                    "k = {k}: vertex outside"
                );
            }
        }
        for i in 0..tris.len() {
            for j in i + 1..tris.len() {
                assert!(
                    triangles_interior_disjoint(&tris[i], &tris[j]),
                    "k = {k}: triangles {i},{j} overlap"
                );
            }
        }
    }
    println!(
        "criterion 12: PASS - exact tilings on {} pairs up to 40; packings to k = 50",
        pairs.len()
    );
}

#[test]
fn criterion_13_scaled_admissibility() {
    let pairs = coprime_pairs(12);
    let mut samples = 0;
    'outer: for round in 0..4u64 {
        for &(m, n) in &pairs {
            if samples == 50 {
                break 'outer;
            }
            let scale = rat(1, 16_i64 << round);
            let jitter = [round + 1, 7 - round, 3 * round + 2];
            let delta = sample_admissible_delta(m, n, &scale, &jitter).unwrap();
            let (_, adm) = perturbed_chain(m, n, &delta).unwrap();
            assert!(adm.admissible(), "({m},{n}) round {round}");
            for t in [rat(1, 2), rat(1, 3), rat(9, 10)] {
                let scaled: Vec<Rational> = delta.iter().map(|d| d * &t).collect();
                let (_, adm_t) = perturbed_chain(m, n, &scaled).unwrap();
                assert!(
                    adm_t.admissible(),
                    "({m},{n}) round {round} stays admissible at t = {t}"
                );
            }
            samples += 1;
        }
    }
    assert_eq!(samples, 50);
    // the unperturbed chain is the t -> 0 limit
    let chain = blowup_chain(3, 5).unwrap();
    assert_eq!(chain.blow_ups(), 4);
    println!("criterion 13: PASS - 50 sampled perturbations stay admissible under 3 scalings");
}
