//! Tripling, the three-branch dichotomy and the commutator decomposition on
//! structured and random sets of affine maps.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use richlines::cli::random_maps;
use richlines::growth::{ruzsa_check, triple_product};
use richlines::product_thm::{dichotomy_check, lemma6_decomposition, nine_fold_check};
use richlines::scalar::render_rational;
use richlines::{AffineMap, Field};

fn main() -> richlines::Result<()> {
    let q = |a: i64, b: i64| AffineMap::from_ints(a, b, Field::Rational).unwrap();
    let cap = 1 << 32;
    let families: [(&str, Vec<AffineMap>); 3] = [
        ("translations", (0..8).map(|i| q(1, i)).collect()),
        ("dilations", (0..8).map(|i| q(1 << i, 0)).collect()),
        ("grid", (0..3).flat_map(|i| (0..3).map(move |j| q(1 << i, j))).collect()),
    ];
    for (name, a) in &families {
        let t = triple_product(a, cap)?;
        let d = dichotomy_check(a, None, cap)?;
        println!(
            "{name}: |A| = {}, |A^3| = {}, K = {}, branch {:?}",
            a.len(),
            t.set.len(),
            render_rational(&t.tripling),
            d.branch
        );
    }

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let a = random_maps(&mut rng, 101, 10)?;
    let d = lemma6_decomposition(&a, cap)?;
    println!("random A in Aff(1,F_101): |S| = {}, |T| = {}, |A/U| = {}", d.s.len(), d.t.len(), d.quotient_size);
    let nine = nine_fold_check(&a, cap)?;
    println!("|A^3 A^-1 A^2 A^-3| = {} <= {}", nine.lhs, render_rational(&nine.rhs));
    let d = dichotomy_check(&a, Some(101), cap)?;
    println!("dichotomy over F_101: {:?}", d.branch);

    let b = random_maps(&mut rng, 101, 6)?;
    let c = random_maps(&mut rng, 101, 8)?;
    let r = ruzsa_check(&a, &b, &c, cap)?;
    println!("Ruzsa: {} <= {}", r.lhs, render_rational(&r.rhs));
    Ok(())
}
