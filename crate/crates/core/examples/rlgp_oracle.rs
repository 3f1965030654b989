use std::time::Instant;

use richlines::caps::Caps;
use richlines::grid::GroundSet;
use richlines::oracle::rlgp_exact;
use richlines::scalar::rational;
use richlines::Field;

fn main() {
    let caps = Caps::default();
    for ys in [vec![0, 1, 2, 3, 4, 5], vec![0, 1, 2, 4, 8, 9, 11]] {
        let y = GroundSet::from_ints(Field::Rational, ys.iter().copied()).unwrap();
        let n = ys.len() as i64;
        for num in (2..=n).rev() {
            let t = Instant::now();
            let r = match rlgp_exact(&y, &rational(num, n), &caps) {
                Ok(r) => r,
                Err(e) => {
                    println!("Y={ys:?} alpha={num}/{n}: {e}");
                    break;
                }
            };
            println!(
                "Y={ys:?} alpha={num}/{n}: RLGP={} ({} candidates, {} nodes, {:.2?})",
                r.value,
                r.candidate_count,
                r.nodes,
                t.elapsed()
            );
        }
    }
}
