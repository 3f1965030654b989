//! Symmetry sets of an arithmetic progression and of a random subset of F_p.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use richlines::caps::Caps;
use richlines::grid::GroundSet;
use richlines::oracle::sym_fp_oracle;
use richlines::scalar::rational;
use richlines::symset::{progression_translation_count, sym_bound_report, sym_group_check, sym_set};
use richlines::Field;

fn main() -> richlines::Result<()> {
    let caps = Caps::default();
    let ap = GroundSet::progression(Field::Rational, 0, 12)?;
    for (num, den) in [(1, 1), (3, 4), (1, 2), (1, 4)] {
        let alpha = rational(num, den);
        let sym = sym_set(&ap, &alpha, &caps)?;
        let translations = sym.maps().iter().filter(|g| g.is_translation()).count();
        let b = sym_bound_report(&ap, &alpha, &caps)?;
        println!(
            "AP12, alpha={num}/{den}: |sym| = {}, translations {} (expected {}), |sym|/|Y|^4 = {}",
            sym.len(),
            translations,
            progression_translation_count(12, &alpha),
            richlines::scalar::render_rational(&b.ratio_trivial)
        );
    }
    let stab = sym_group_check(&ap, &caps)?;
    println!("stabilizer of AP12: {} maps, closed {}", stab.members.len(), stab.closed);

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let f = Field::prime(31)?;
    let y = GroundSet::from_ints(f, (0..9).map(|_| rng.gen_range(0..31)))?;
    let alpha = rational(1, 3);
    let fast = sym_set(&y, &alpha, &caps)?;
    let full = sym_fp_oracle(&y, &alpha, &caps)?;
    println!("random Y in F_31 (|Y| = {}): |sym_1/3| = {}, full scan agrees: {}", y.len(), fast.len(), fast == full);
    Ok(())
}
