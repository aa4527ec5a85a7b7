// The exceptional classes on k blown-up points: finitely many for k <= 8,
// infinitely many beyond, searched by degree and tamed by Cremona moves.

use ellipack::cone::exceptional_classes;
use ellipack::hclass::HClass;
use num::Zero;

fn main() {
    // the finite range: 1, 3, 6, 10, 16, 27, 56, 240 classes
    for k in 1..=8 {
        let classes = exceptional_classes(k, 0, None).unwrap();
        println!("k = {k}: {} exceptional classes", classes.len());
    }

    // k = 6 in full: every class has E^2 = -1 and E.(-K) = 1
    println!();
    let six = exceptional_classes(6, 0, None).unwrap();
    for e in six.iter().filter(|e| !e.d().is_zero()) {
        assert!(e.is_exceptional());
        println!("  {e}");
    }

    // beyond rank 8 a degree bound takes over
    println!();
    let nine = exceptional_classes(9, 4, None).unwrap();
    println!("k = 9, degree <= 4: {} classes", nine.len());

    // a Cremona move on the first three coordinates drops high degrees
    let a = HClass::from_i64(4, &[2, 2, 2, 1, 1, 1, 1, 1, 0]);
    let moved = a.cremona(0, 1, 2).unwrap();
    assert!(a.is_exceptional() && moved.is_exceptional());
    println!("{a}  --cremona-->  {moved}");
}
