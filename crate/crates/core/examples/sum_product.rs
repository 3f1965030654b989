//! Sum-product experiments: |A + BC| and rich lines from c(x - b).

use richlines::caps::Caps;
use richlines::product_thm::{asym_experiment, expander_check};
use richlines::scalar::{rational, render_rational};
use richlines::{Field, Scalar};

fn set(v: impl IntoIterator<Item = i64>, f: Field) -> Vec<Scalar> {
    v.into_iter().map(|x| Scalar::from_i64(x, f)).collect()
}

fn main() -> richlines::Result<()> {
    let q = Field::Rational;
    let ap = set(1..=10, q);
    let gp = set((0..10).map(|i| 1 << i), q);
    for (name, a) in [("progression", &ap), ("geometric", &gp)] {
        let e = expander_check(a, a, a, 1 << 30)?;
        println!("{name}: |A + AA| = {}, ratio to sqrt(|A|^3) in [{}, {}]", e.lhs, e.ratio.lo, e.ratio.hi);
    }
    let fp = Field::prime(101)?;
    let r = expander_check(&set(1..20, fp), &set(1..20, fp), &set(1..20, fp), 1 << 30)?;
    println!("F_101: |A + BC| = {}, meets min(sqrt, p): {}", r.lhs, r.meets_bound);

    let report = asym_experiment(&ap, &set(0..3, q), &set(1..4, q), 1, &rational(3, 2), true, &Caps::default())?;
    println!(
        "asym: |A+B| = {}, |AC| = {}, {} lines each with >= {} points, growth {}",
        report.sum, report.product, report.family, report.min_richness, report.growth
    );
    println!("small-side margin {}", render_rational(&report.small_side_margin));
    if let Some(p) = &report.pipeline {
        println!("pipeline coset {}, overlap {}", p.coset, p.overlap);
    }
    Ok(())
}
