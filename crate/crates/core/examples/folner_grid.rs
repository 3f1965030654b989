//! Builds the integer grid for a few `N`, checks every line against its
//! closed-form deficiency, and prints the line-count rate.

use richlines::caps::Caps;
use richlines::construct::folner::{rate_row, verify_folner};
use richlines::construct::{folner_grid, FolnerParams};
use richlines::scalar::rational;

fn main() -> richlines::Result<()> {
    let eps = rational(4, 5);
    for n in 3..=6 {
        let params = FolnerParams::new(n, eps.clone())?;
        let grid = folner_grid(&params, Caps::default().grid)?;
        let v = verify_folner(&grid)?;
        println!("N={n}: |Y| = {}, {} lines", v.ground_size, v.lines.len());
        for line in &v.lines {
            println!(
                "  y = {}x + {}: richness {}, deficiency {} (bound {})",
                line.a, line.b, line.richness, line.deficiency, line.bound
            );
        }
        let rate = rate_row(&params, &rational(1, 2))?.ratio.to_report(4);
        println!("  |L| / ((1-a) log|Y| / log log|Y|) in [{}, {}]", rate.lo, rate.hi);
    }
    Ok(())
}
