//! Runs the closure pipeline on a planted coset and on a full symmetry set.

use richlines::caps::Caps;
use richlines::grid::GroundSet;
use richlines::report::to_json;
use richlines::scalar::rational;
use richlines::symset::sym_set;
use richlines::{AffineMap, Field};

fn main() -> richlines::Result<()> {
    let caps = Caps::default();
    let y = GroundSet::progression(Field::Rational, 0, 40)?;
    let planted: Vec<AffineMap> = (0..20).map(|b| AffineMap::from_ints(1, b, Field::Rational).unwrap()).collect();
    let r = richlines::growth::bsg_pipeline(&planted, &y, &rational(1, 2), 1, &caps)?;
    println!("planted translations: coset {}, overlap {}/{}", r.coset, r.overlap, planted.len());

    let ap = GroundSet::progression(Field::Rational, 0, 12)?;
    let a = sym_set(&ap, &rational(1, 2), &caps)?.maps();
    let r = richlines::growth::bsg_pipeline(&a, &ap, &rational(1, 2), 2, &caps)?;
    print!("{}", to_json(&r)?);
    Ok(())
}
