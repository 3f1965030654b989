//! Plans the prime-power slope family, then picks intercepts greedily.

use num_bigint::BigInt;
use richlines::affine::general_position_check;
use richlines::caps::Caps;
use richlines::construct::{klawe_select_lines, klawe_slopes, prime_params};
use richlines::Field;

fn main() -> richlines::Result<()> {
    let caps = Caps::default();
    for x in [5, 10, 20] {
        let (params, estimates) = prime_params(x, &caps)?;
        let r = params.report();
        println!(
            "x={x}: Q={:?} k={} q={} phi(q)={} s={} delta={} length condition {}",
            r.primes, r.k, r.q, r.phi_q, r.s, r.delta, r.condition_25
        );
        println!("  estimates within 1 +- 4/ln x: {}", estimates.within_envelope());
    }

    let slopes: Vec<BigInt> = klawe_slopes(&[2, 3], 16, caps.slopes)?
        .into_iter()
        .map(BigInt::from)
        .collect();
    let lines = klawe_select_lines(&slopes, &BigInt::from(28), Field::Rational)?;
    for l in &lines {
        println!("  {l}");
    }
    println!("general position: {}", general_position_check(&lines)?.is_empty());

    let fp = Field::prime(1009)?;
    let lines = klawe_select_lines(&slopes, &BigInt::from(28), fp)?;
    println!("over F_1009: {} lines, general position {}", lines.len(), general_position_check(&lines)?.is_empty());
    Ok(())
}
